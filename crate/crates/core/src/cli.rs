//! The `coeff` command line.
//!
//! Exit codes: 0 on success, 1 when `compare --expect-iso` finds a degree
//! where the comparison fails (or a fuzz/exactness check fails), 2 on usage
//! or input errors.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::coeffective::{analyze, class_status, Analysis, ClassStatus};
use crate::complexes::cohomology;
use crate::exterior::{format_form, parse_form, DEFAULT_GENERATOR_CAP};
use crate::fuzz::{fuzz, FuzzReport};
use crate::model::{format_model, parse_model, product_model, BuiltModel, ModelFile};
use crate::registry::{builtin_example, Golden, KEYS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "coeff", version, about = "Coeffective and reduced cohomology of finite symplectic models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Jacobi identity, weights and symplectic form of a model.
    Validate(ModelArgs),
    /// Betti numbers of the model's complex.
    Cohomology(ModelArgs),
    /// Cohomology of the coeffective subcomplex.
    Coeffective(ModelArgs),
    /// Dimensions of the kernel of [ω]∧ on cohomology.
    Tilde(ModelArgs),
    /// Compare coeffective cohomology with the kernel of [ω]∧ in degrees p >= n.
    Compare {
        #[command(flatten)]
        args: ModelArgs,
        /// Exit with status 1 unless every degree p >= n is isomorphic.
        #[arg(long)]
        expect_iso: bool,
    },
    /// Injectivity and surjectivity of ω∧ on forms.
    Lefschetz(ModelArgs),
    /// Exactness of the long exact sequence of 0 -> coeffective -> C -> ω∧C -> 0.
    Les(ModelArgs),
    /// Coeffectivity, closedness and class vanishing of one form.
    ClassStatus {
        #[command(flatten)]
        args: ModelArgs,
        /// Homogeneous form, e.g. "x1^x2^y2^y3".
        #[arg(long)]
        form: String,
    },
    /// Product of two models.
    Product {
        a: String,
        b: String,
        #[arg(long, default_value = "x")]
        prefix_a: String,
        #[arg(long, default_value = "y")]
        prefix_b: String,
        /// Output file; the model is printed when omitted.
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Print a built-in model file, or list the keys.
    Example { key: Option<String> },
    /// Random nilpotent models checked against the structural invariants.
    Fuzz {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_GENERATOR_CAP)]
        max_gen: usize,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Model file path, or `example:<key>`.
    model: String,
    /// Work on the subcomplex of torus-invariant forms.
    #[arg(long)]
    invariant: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Restrict the table to one degree.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_GENERATOR_CAP)]
    max_gen: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

struct Failure {
    code: i32,
    message: String,
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type Outcome = Result<(i32, String), Failure>;

/// Run one command line (including the program name) and return the exit
/// code with everything that would be printed.
pub fn run_command<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(out) => out,
        Err(f) => (f.code, format!("error: {}\n", f.message)),
    }
}

/// Load a model from `example:<key>`, a path, the path with `.json`
/// appended, or (as a last resort) a registry key equal to the file stem.
pub fn resolve_model(arg: &str) -> Result<(ModelFile, Option<Golden>), String> {
    if let Some(key) = arg.strip_prefix("example:") {
        let e = builtin_example(key).map_err(|e| e.to_string())?;
        return Ok((e.model, e.expected));
    }
    for candidate in [arg.to_string(), format!("{arg}.json")] {
        let path = Path::new(&candidate);
        if path.is_file() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {candidate}: {e}"))?;
            let model = parse_model(&text).map_err(|e| format!("{candidate}: {e}"))?;
            return Ok((model, None));
        }
    }
    let stem = Path::new(arg)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(arg);
    match builtin_example(stem) {
        Ok(e) => Ok((e.model, e.expected)),
        Err(_) => Err(format!("no model file `{arg}` and no built-in example `{stem}`")),
    }
}

fn load(args: &ModelArgs) -> Result<BuiltModel, Failure> {
    let (model, _) = resolve_model(&args.model).map_err(input_error)?;
    Ok(model.build(args.invariant, args.max_gen)?)
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Validate(args) => validate(&args),
        Command::Cohomology(args) => cohomology_cmd(&args),
        Command::Coeffective(args) => comparison_cmd(&args, Column::Coeffective),
        Command::Tilde(args) => comparison_cmd(&args, Column::Tilde),
        Command::Compare { args, expect_iso } => compare_cmd(&args, expect_iso),
        Command::Lefschetz(args) => lefschetz_cmd(&args),
        Command::Les(args) => les_cmd(&args),
        Command::ClassStatus { args, form } => class_status_cmd(&args, &form),
        Command::Product {
            a,
            b,
            prefix_a,
            prefix_b,
            output,
        } => product_cmd(&a, &b, &prefix_a, &prefix_b, output.as_deref()),
        Command::Example { key } => example_cmd(key.as_deref()),
        Command::Fuzz {
            dim,
            count,
            seed,
            format,
            max_gen,
        } => fuzz_cmd(dim, count, seed, format, max_gen),
    }
}

fn json_out(v: Value) -> (i32, String) {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    (EXIT_OK, s)
}

fn header(b: &BuiltModel) -> String {
    let scope = if b.invariant { " (invariant)" } else { "" };
    format!("model: {}{scope}\n", b.model.name)
}

fn degrees(args: &ModelArgs, top: usize) -> Result<Vec<usize>, Failure> {
    match args.degree {
        Some(p) if p > top => Err(input_error(format!("degree {p} exceeds top degree {top}"))),
        Some(p) => Ok(vec![p]),
        None => Ok((0..=top).collect()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(args: &ModelArgs) -> Outcome {
    let (model, _) = resolve_model(&args.model).map_err(input_error)?;
    let report = model.validation()?;
    let mut out = format!("model: {}\ngenerators: {}\n", model.name, model.generators.len());
    let mut ok = report.is_valid();
    if report.jacobi_failures.is_empty() {
        out.push_str("jacobi: ok\n");
    }
    for f in &report.jacobi_failures {
        let (i, j, k) = f.triple;
        let _ = writeln!(
            out,
            "jacobi: fails on ({}, {}, {})",
            model.generators[i], model.generators[j], model.generators[k]
        );
    }
    for &g in &report.d_squared_failures {
        let _ = writeln!(out, "d^2: nonzero on {}", model.generators[g]);
    }
    if ok {
        match model.build(args.invariant, args.max_gen) {
            Ok(built) => {
                if let Some(w) = &model.weights {
                    let (r, s) = w.shape();
                    let _ = writeln!(out, "weights: compatible, Z^{r} x (Z/2)^{s}");
                }
                let _ = writeln!(out, "dims: {:?}", built.complex.complex().dims());
                match (&model.symplectic, built.symplectic()) {
                    (None, _) => out.push_str("symplectic: none\n"),
                    (Some(_), Ok(w)) => {
                        let _ = writeln!(out, "symplectic: valid, n = {}", w.n());
                    }
                    (Some(_), Err(e)) => {
                        ok = false;
                        let _ = writeln!(out, "symplectic: invalid ({e})");
                    }
                }
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(out, "error: {e}");
            }
        }
    }
    out.push_str(if ok { "valid: yes\n" } else { "valid: no\n" });
    Ok((if ok { EXIT_OK } else { EXIT_INPUT }, out))
}

fn cohomology_cmd(args: &ModelArgs) -> Outcome {
    let b = load(args)?;
    let cx = b.complex.complex();
    let betti = cohomology(cx).betti();
    let dims = cx.dims();
    if args.format == Format::Json {
        return Ok(json_out(json!({
            "model": b.model.name,
            "invariant": b.invariant,
            "dims": dims,
            "betti": betti,
            "zero_differential": cx.has_zero_differential(),
        })));
    }
    let mut out = header(&b);
    out.push_str(" p   dim  betti\n");
    for p in degrees(args, cx.top_degree())? {
        let _ = writeln!(out, "{p:>2} {:>5} {:>6}", dims[p], betti[p]);
    }
    let _ = writeln!(out, "betti: {}", join(&betti));
    Ok((EXIT_OK, out))
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn analysis(args: &ModelArgs) -> Result<(BuiltModel, Analysis), Failure> {
    let b = load(args)?;
    let w = b.symplectic()?;
    let a = analyze(&b.complex, &w)?;
    Ok((b, a))
}

#[derive(Clone, Copy)]
enum Column {
    Coeffective,
    Tilde,
}

fn comparison_cmd(args: &ModelArgs, column: Column) -> Outcome {
    let (b, a) = analysis(args)?;
    let (key, values) = match column {
        Column::Coeffective => ("coeffective", &a.coeffective),
        Column::Tilde => ("tilde", &a.tilde),
    };
    if args.format == Format::Json {
        return Ok(json_out(json!({
            "model": b.model.name,
            "n": a.n,
            key: values,
        })));
    }
    let mut out = header(&b);
    let _ = writeln!(out, "n = {}", a.n);
    let _ = writeln!(out, " p  {key}");
    for p in degrees(args, a.top_degree())? {
        let note = if p < a.n { "  (p < n)" } else { "" };
        let _ = writeln!(out, "{p:>2}  {:>w$}{note}", values[p], w = key.len());
    }
    Ok((EXIT_OK, out))
}

fn degree_list(ps: &[usize]) -> String {
    if ps.is_empty() {
        "none".into()
    } else {
        format!(
            "p={}",
            ps.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        )
    }
}

/// The JSON report shared by `compare` and the test suites.
pub fn comparison_json(name: &str, a: &Analysis) -> Value {
    let mut verdict = Map::new();
    for (p, v) in a.verdicts.iter().enumerate() {
        verdict.insert(p.to_string(), json!(v.code()));
    }
    json!({
        "model": name,
        "n": a.n,
        "betti": a.betti,
        "coeffective": a.coeffective,
        "tilde": a.tilde,
        "coker": a.coker,
        "verdict": verdict,
        "lefschetz": {
            "injective": a.profile.injective,
            "surjective": a.profile.surjective,
        },
    })
}

fn compare_cmd(args: &ModelArgs, expect_iso: bool) -> Outcome {
    let (b, a) = analysis(args)?;
    let failing = a.non_isomorphic_degrees();
    let code = if expect_iso && !failing.is_empty() {
        EXIT_VERDICT
    } else {
        EXIT_OK
    };
    if args.format == Format::Json {
        return Ok((code, json_out(comparison_json(&b.model.name, &a)).1));
    }
    let mut out = header(&b);
    let _ = writeln!(out, "n = {}", a.n);
    out.push_str(" p  betti  coE  tilde  coker  verdict\n");
    for p in degrees(args, a.top_degree())? {
        let _ = writeln!(
            out,
            "{p:>2} {:>6} {:>4} {:>6} {:>6}  {}",
            a.betti[p],
            a.coeffective[p],
            a.tilde[p],
            a.coker[p],
            a.verdicts[p].code()
        );
    }
    let within = |ps: Vec<usize>| -> Vec<usize> {
        ps.into_iter()
            .filter(|p| args.degree.is_none_or(|d| d == *p))
            .collect()
    };
    let failing = within(failing);
    if !failing.is_empty() {
        let _ = writeln!(out, "not isomorphic: {}", degree_list(&failing));
    }
    let _ = writeln!(out, "isomorphic: {}", degree_list(&within(a.isomorphic_degrees())));
    Ok((code, out))
}

fn lefschetz_cmd(args: &ModelArgs) -> Outcome {
    let b = load(args)?;
    let w = b.symplectic()?;
    let prof = crate::coeffective::lefschetz_profile(&b.complex, &w)?;
    if args.format == Format::Json {
        return Ok(json_out(json!({
            "model": b.model.name,
            "n": prof.n,
            "ranks": prof.ranks,
            "injective": prof.injective,
            "surjective": prof.surjective,
        })));
    }
    let mut out = header(&b);
    let _ = writeln!(out, "n = {}", prof.n);
    out.push_str(" p  rank  injective  surjective\n");
    for p in degrees(args, prof.ranks.len() - 1)? {
        let _ = writeln!(
            out,
            "{p:>2} {:>5}  {:>9}  {:>10}",
            prof.ranks[p],
            yes_no(prof.injective[p]),
            yes_no(prof.surjective[p])
        );
    }
    let _ = writeln!(
        out,
        "injective for p <= n-1: {}; surjective for p >= n-1: {}",
        yes_no(prof.injective_below_middle()),
        yes_no(prof.surjective_from_middle())
    );
    Ok((EXIT_OK, out))
}

fn les_cmd(args: &ModelArgs) -> Outcome {
    let (b, a) = analysis(args)?;
    let nodes: Vec<_> = a
        .les_nodes()
        .into_iter()
        .filter(|n| args.degree.is_none_or(|d| d == n.degree))
        .collect();
    let exact = nodes.iter().all(|n| n.is_exact());
    let code = if exact { EXIT_OK } else { EXIT_VERDICT };
    if args.format == Format::Json {
        let rows: Vec<Value> = nodes
            .iter()
            .map(|n| {
                json!({
                    "p": n.degree,
                    "term": format!("{:?}", n.term).to_lowercase(),
                    "dim": n.dim,
                    "incoming_rank": n.incoming_rank,
                    "outgoing_rank": n.outgoing_rank,
                    "exact": n.is_exact(),
                })
            })
            .collect();
        let out = json!({"model": b.model.name, "n": a.n, "nodes": rows, "exact": exact});
        return Ok((code, json_out(out).1));
    }
    let mut out = header(&b);
    let _ = writeln!(out, "n = {}", a.n);
    out.push_str(" p  term         dim  in-rank  out-rank  exact\n");
    for n in &nodes {
        let term = match n.term {
            crate::complexes::LesTerm::Kernel => "H(coE)",
            crate::complexes::LesTerm::Total => "H(C)",
            crate::complexes::LesTerm::Quotient => "H(ω∧C)",
        };
        let _ = writeln!(
            out,
            "{:>2}  {term:<10} {:>4} {:>8} {:>9}  {}",
            n.degree,
            n.dim,
            n.incoming_rank,
            n.outgoing_rank,
            yes_no(n.is_exact())
        );
    }
    let _ = writeln!(out, "exact: {}", yes_no(exact));
    Ok((code, out))
}

fn status_word(x: Option<bool>) -> &'static str {
    match x {
        Some(b) => yes_no(b),
        None => "n/a",
    }
}

pub fn format_class_status(s: &ClassStatus) -> String {
    format!(
        "coeffective: {}; closed: {}; coE-class zero: {}; deRham-class zero: {}",
        yes_no(s.is_coeffective),
        yes_no(s.is_closed),
        status_word(s.coe_class_zero),
        status_word(s.de_rham_class_zero)
    )
}

fn class_status_cmd(args: &ModelArgs, text: &str) -> Outcome {
    let b = load(args)?;
    let w = b.symplectic()?;
    let form = parse_form(text, &b.model.generators)?;
    let s = class_status(&b.complex, &w, &form)?;
    if args.format == Format::Json {
        return Ok(json_out(json!({
            "model": b.model.name,
            "form": format_form(&form, &b.model.generators),
            "coeffective": s.is_coeffective,
            "closed": s.is_closed,
            "coe_class_zero": s.coe_class_zero,
            "de_rham_class_zero": s.de_rham_class_zero,
        })));
    }
    Ok((EXIT_OK, format!("{}\n", format_class_status(&s))))
}

fn product_cmd(a: &str, b: &str, prefix_a: &str, prefix_b: &str, output: Option<&str>) -> Outcome {
    let (ma, _) = resolve_model(a).map_err(input_error)?;
    let (mb, _) = resolve_model(b).map_err(input_error)?;
    let p = product_model(&ma, &mb, prefix_a, prefix_b)?;
    let text = format_model(&p);
    match output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| input_error(format!("cannot write {path}: {e}")))?;
            Ok((EXIT_OK, format!("wrote {} ({} generators)\n", path, p.generators.len())))
        }
        None => Ok((EXIT_OK, text)),
    }
}

fn example_cmd(key: Option<&str>) -> Outcome {
    match key {
        None => Ok((EXIT_OK, format!("{}\n", KEYS.join("\n")))),
        Some(k) => Ok((EXIT_OK, format_model(&builtin_example(k)?.model))),
    }
}

fn fuzz_json(r: &FuzzReport) -> Value {
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| json!({"iteration": f.iteration, "seed": f.seed, "reason": f.reason}))
        .collect();
    json!({
        "dim": r.dim,
        "count": r.count,
        "seed": r.seed,
        "tested": r.tested,
        "skipped": r.skipped,
        "with_weights": r.with_weights,
        "failures": failures,
    })
}

fn fuzz_cmd(dim: usize, count: usize, seed: u64, format: Format, max_gen: usize) -> Outcome {
    if dim % 2 == 1 {
        return Err(input_error(format!("fuzz dimension must be even, got {dim}")));
    }
    if dim > max_gen {
        return Err(input_error(format!(
            "fuzz dimension {dim} exceeds the generator cap {max_gen}"
        )));
    }
    let r = fuzz(dim, count, seed);
    let code = if r.passed() { EXIT_OK } else { EXIT_VERDICT };
    if format == Format::Json {
        return Ok((code, json_out(fuzz_json(&r)).1));
    }
    let mut out = format!(
        "dim: {}\ncount: {}\nseed: {}\ntested: {}\nskipped: {}\nwith weights: {}\nfailures: {}\n",
        r.dim,
        r.count,
        r.seed,
        r.tested,
        r.skipped,
        r.with_weights,
        r.failures.len()
    );
    for f in &r.failures {
        let _ = writeln!(out, "  iteration {} (seed {}): {}", f.iteration, f.seed, f.reason);
    }
    Ok((code, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        run_command(std::iter::once("coeff").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(run(&["compare"]).0, EXIT_INPUT);
        assert_eq!(run(&["compare", "example:h3", "--bogus"]).0, EXIT_INPUT);
        assert_eq!(run(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn invariant_needs_weights() {
        let (code, out) = run(&["cohomology", "example:h3", "--invariant"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("no weights"), "{out}");
    }

    #[test]
    fn compare_table_ends_with_isomorphic_degrees() {
        let (code, out) = run(&["compare", "example:ex52_product", "--invariant"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().last(), Some("isomorphic: p=3,4,5,6"));
    }

    #[test]
    fn expect_iso_exit_code() {
        assert_eq!(run(&["compare", "example:nilprod", "--expect-iso"]).0, EXIT_VERDICT);
        assert_eq!(run(&["compare", "example:torus_4", "--expect-iso"]).0, EXIT_OK);
        assert_eq!(run(&["compare", "example:nilprod"]).0, EXIT_OK);
    }

    #[test]
    fn degree_filter() {
        let (code, out) = run(&["cohomology", "example:torus_4", "--degree", "2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains(" 2     6      6"), "{out}");
        assert_eq!(run(&["cohomology", "example:torus_4", "--degree", "9"]).0, EXIT_INPUT);
    }

    #[test]
    fn max_gen_cap() {
        let (code, out) = run(&["cohomology", "example:torus_6", "--max-gen", "4"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("cap of 4"), "{out}");
    }

    #[test]
    fn fuzz_rejects_odd_dimension() {
        assert_eq!(run(&["fuzz", "--dim", "3"]).0, EXIT_INPUT);
    }
}
