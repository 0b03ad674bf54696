use std::path::PathBuf;

use coeffective::cli::{run_command, EXIT_INPUT, EXIT_OK, EXIT_VERDICT};
use coeffective::model::{format_model, parse_model};
use coeffective::registry::{builtin_example, standard_keys};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    run_command(std::iter::once("coeff").chain(args.iter().copied()))
}

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("coeff-cli-{}-{name}", std::process::id()))
}

#[test]
fn cohomology_of_invariant_h3z2() {
    let (code, out) = run(&["cohomology", "h3z2", "--invariant"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("betti: 1,1,1,1"), "{out}");
}

#[test]
fn compare_verdicts_and_expect_iso() {
    let (code, out) = run(&["compare", "ex52_product", "--invariant", "--expect-iso"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.trim_end().ends_with("isomorphic: p=3,4,5,6"), "{out}");

    let (code, out) = run(&["compare", "nilprod"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("not isomorphic: p=3"), "{out}");

    let (code, _) = run(&["compare", "nilprod", "--expect-iso"]);
    assert_eq!(code, EXIT_VERDICT);
}

#[test]
fn json_numbers_equal_table_numbers() {
    let (_, table) = run(&["compare", "ex51_solv", "--invariant"]);
    let (code, json) = run(&["compare", "ex51_solv", "--invariant", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&json).unwrap();
    let column = |key: &str| -> Vec<u64> {
        v[key].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
    };
    let rows: Vec<Vec<String>> = table
        .lines()
        .filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()))
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 7);
    for (p, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), p);
        assert_eq!(row[1].parse::<u64>().unwrap(), column("betti")[p]);
        assert_eq!(row[2].parse::<u64>().unwrap(), column("coeffective")[p]);
        assert_eq!(row[3].parse::<u64>().unwrap(), column("tilde")[p]);
        assert_eq!(row[4].parse::<u64>().unwrap(), column("coker")[p]);
        assert_eq!(row[5], v["verdict"][p.to_string()].as_str().unwrap());
    }
}

#[test]
fn les_and_lefschetz() {
    let (code, out) = run(&["les", "nilprod"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("exact: yes"), "{out}");
    let (code, out) = run(&["lefschetz", "torus_4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("injective for p <= n-1: yes; surjective for p >= n-1: yes"), "{out}");
}

#[test]
fn class_status_line() {
    let (code, out) = run(&["class-status", "nilprod", "--form", "x1^x2^y2^y3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out.trim(),
        "coeffective: yes; closed: yes; coE-class zero: yes; deRham-class zero: yes"
    );
    let (code, _) = run(&["class-status", "nilprod", "--form", "x1^q"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn product_writes_a_loadable_file() {
    let path = temp_path("product.json");
    let (code, out) = run(&["product", "h3z2", "h3z2", "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    let model = parse_model(&text).unwrap();
    assert_eq!(model.generators, ["x1", "x2", "x3", "y1", "y2", "y3"]);
    let (code, out) = run(&["cohomology", path.to_str().unwrap(), "--invariant"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("betti: 1,2,3,4,3,2,1"), "{out}");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn example_listing_and_dump() {
    let (code, out) = run(&["example"]);
    assert_eq!(code, EXIT_OK);
    for key in ["h3", "h3z2", "ex52_product", "nilprod", "ex51_solv"] {
        assert!(out.lines().any(|l| l == key), "{key} missing");
    }
    let (code, out) = run(&["example", "h3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(parse_model(&out).unwrap(), builtin_example("h3").unwrap().model);
    let (code, _) = run(&["example", "h4"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn checked_in_models_match_registry() {
    for key in standard_keys() {
        let path = models_dir().join(format!("{key}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        let model = builtin_example(&key).unwrap().model;
        assert_eq!(text, format_model(&model), "{}", path.display());
    }
}

#[test]
fn model_resolution() {
    let file = models_dir().join("h3z2.json");
    let stem = models_dir().join("h3z2");
    for arg in [
        file.to_str().unwrap(),
        stem.to_str().unwrap(),
        "example:h3z2",
        "h3z2",
        "elsewhere/h3z2.json",
    ] {
        let (code, out) = run(&["cohomology", arg, "--invariant"]);
        assert_eq!(code, EXIT_OK, "{arg}: {out}");
        assert!(out.contains("betti: 1,1,1,1"), "{arg}: {out}");
    }
    let (code, out) = run(&["cohomology", "nosuch"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.starts_with("error:"), "{out}");
}

#[test]
fn malformed_model_files_are_input_errors() {
    let path = temp_path("bad.json");
    for text in [
        "{",
        r#"{"name": "x", "generators": ["a"], "differential": {"b": "a"}}"#,
        r#"{"name": "x", "generators": ["a", "a"], "differential": {}}"#,
    ] {
        std::fs::write(&path, text).unwrap();
        let (code, _) = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_INPUT, "{text}");
    }
    std::fs::remove_file(path).unwrap();
}

#[test]
fn generator_cap() {
    let (code, out) = run(&["cohomology", "abelian_4", "--max-gen", "3"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains('3'), "{out}");
}

#[test]
fn fuzz_command() {
    let (code, out) = run(&["fuzz", "--dim", "4", "--count", "5", "--seed", "1", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let (_, again) = run(&["fuzz", "--dim", "4", "--count", "5", "--seed", "1", "--format", "json"]);
    assert_eq!(out, again);
    let (code, _) = run(&["fuzz", "--dim", "5"]);
    assert_eq!(code, EXIT_INPUT);
}
