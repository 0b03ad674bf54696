//! Coeffective cohomology against the reduced cohomology `H̃`.
//!
//! For a complex of forms `C` and a closed nondegenerate 2-form `ω` in it,
//! the sequence `0 -> C_coE -> C -> ω∧C -> 0` is short exact, where
//! `C_coE = ker(ω∧)` and `(ω∧C)^p = ω∧C^p`. Its long exact sequence gives
//! `dim H^p(C_coE) = dim H̃^p + coker_p` for `p >= n`, once `ω∧` is onto from
//! degree `n - 1` upward. The comparison verdict at `p` is read off the
//! connecting map: the natural map `H^p(C_coE) -> H̃^p` is an isomorphism
//! exactly when the connecting map into `H^p(C_coE)` vanishes.

use num::Zero;
use thiserror::Error;

use crate::complexes::{
    cohomology, induced_cohomology_map, subcomplex_inclusion, ChainMap, CohomologySummary,
    ComplexError, GradedComplex, LesNode, LongExactSequence, ShortExactSequence,
};
use crate::exterior::{blade_positions, blades_of_degree, Multivector};
use crate::lie_ce::{FormComplex, LieError};
use crate::linalg::{is_zero_vector, LinalgError, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("ambient dimension {0} is odd")]
    OddDimension(usize),
    #[error("symplectic form must be a homogeneous 2-form")]
    NotTwoForm,
    #[error("form of degree {degree} does not lie in the complex")]
    NotInComplex { degree: usize },
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("symplectic form is not closed")]
    NotClosed,
    #[error("symplectic form is degenerate: ω^{n} = 0")]
    Degenerate { n: usize },
    #[error("ω∧ does not map the complex into itself in degree {degree}")]
    LefschetzNotPreserved { degree: usize },
    #[error("ω∧ is not surjective from degree {degree} (needed for every degree >= n-1)")]
    SurjectivityFails { degree: usize },
    #[error("d does not preserve coeffective forms in degree {degree}")]
    KernelNotClosed { degree: usize },
    #[error("long exact sequence identity fails at p={degree}: coE {coeffective} != tilde {tilde} + coker {coker}")]
    IdentityViolation {
        degree: usize,
        coeffective: usize,
        tilde: usize,
        coker: usize,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A closed 2-form with `ω^n != 0` on a `2n`-generator ambient algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticForm {
    omega: Multivector,
    n: usize,
}

impl SymplecticForm {
    pub fn omega(&self) -> &Multivector {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

pub fn validate_symplectic(
    c: &FormComplex,
    omega: &Multivector,
) -> Result<SymplecticForm, CoeffError> {
    let m = c.ambient();
    if m % 2 == 1 {
        return Err(CoeffError::OddDimension(m));
    }
    if omega.ambient() != m || !(omega.is_zero() || omega.homogeneous_degree() == Some(2)) {
        return Err(CoeffError::NotTwoForm);
    }
    let coords = c
        .coordinates_of(2, omega)?
        .ok_or(CoeffError::NotInComplex { degree: 2 })?;
    if !is_zero_vector(&c.complex().differential(2).mul_vec(&coords)?) {
        return Err(CoeffError::NotClosed);
    }
    let n = m / 2;
    if omega.wedge_power(n).is_zero() {
        return Err(CoeffError::Degenerate { n });
    }
    Ok(SymplecticForm {
        omega: omega.clone(),
        n,
    })
}

/// Blade-level matrix of `ω∧` from degree `p` to degree `p + 2`.
fn ambient_lefschetz(omega: &Multivector, p: usize) -> RatMatrix {
    let m = omega.ambient();
    let source = blades_of_degree(m, p);
    let target = blade_positions(m, p + 2);
    let mut mat = RatMatrix::zeros(target.len(), source.len());
    for (col, &b) in source.iter().enumerate() {
        for (wb, wc) in omega.terms() {
            if let Some((neg, tb)) = wb.wedge(b) {
                let v = if neg { -wc.clone() } else { wc.clone() };
                mat.add_to(target[&tb], col, &v);
            }
        }
    }
    mat
}

/// `ω∧` as a degree +2 chain map of `C` to itself.
pub fn lefschetz_map(c: &FormComplex, w: &SymplecticForm) -> Result<ChainMap, CoeffError> {
    let cx = c.complex();
    let maps = (0..=cx.top_degree())
        .map(|p| {
            let image = ambient_lefschetz(&w.omega, p).mul(&c.embedding(p))?;
            let cols = c
                .embedding(p + 2)
                .solve_many(&image.columns())?
                .into_iter()
                .map(|x| x.ok_or(CoeffError::LefschetzNotPreserved { degree: p }))
                .collect::<Result<Vec<_>, CoeffError>>()?;
            Ok(RatMatrix::from_columns(cx.dim(p + 2), &cols))
        })
        .collect::<Result<Vec<_>, CoeffError>>()?;
    Ok(ChainMap::new(cx.clone(), cx.clone(), 2, maps)?)
}

/// Injectivity and surjectivity of `ω∧: C^p -> C^{p+2}` in each degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzProfile {
    pub n: usize,
    pub ranks: Vec<usize>,
    pub injective: Vec<bool>,
    pub surjective: Vec<bool>,
}

impl LefschetzProfile {
    /// Injective for `p <= n - 1` and surjective for `p >= n - 1`.
    pub fn is_standard(&self) -> bool {
        self.injective_below_middle() && self.surjective_from_middle()
    }

    pub fn injective_below_middle(&self) -> bool {
        self.injective.iter().take(self.n).all(|&b| b)
    }

    pub fn surjective_from_middle(&self) -> bool {
        self.first_non_surjective().is_none()
    }

    /// First degree `p >= n - 1` at which `ω∧` fails to be onto.
    pub fn first_non_surjective(&self) -> Option<usize> {
        let start = self.n.saturating_sub(1);
        (start..self.surjective.len()).find(|&p| !self.surjective[p])
    }
}

pub fn lefschetz_profile(c: &FormComplex, w: &SymplecticForm) -> Result<LefschetzProfile, CoeffError> {
    let l = lefschetz_map(c, w)?;
    Ok(profile_of(c.complex(), &l, w.n))
}

fn profile_of(cx: &GradedComplex, l: &ChainMap, n: usize) -> LefschetzProfile {
    let ranks: Vec<usize> = (0..=cx.top_degree()).map(|p| l.component(p).rank()).collect();
    let injective = ranks.iter().enumerate().map(|(p, &r)| r == cx.dim(p)).collect();
    let surjective = ranks.iter().enumerate().map(|(p, &r)| r == cx.dim(p + 2)).collect();
    LefschetzProfile {
        n,
        ranks,
        injective,
        surjective,
    }
}

/// `C_coE = ker(ω∧)` with its inclusion into `C`.
pub fn coeffective_complex(
    c: &FormComplex,
    w: &SymplecticForm,
) -> Result<(FormComplex, ChainMap), CoeffError> {
    let l = lefschetz_map(c, w)?;
    coeffective_from_map(c, &l)
}

fn coeffective_from_map(c: &FormComplex, l: &ChainMap) -> Result<(FormComplex, ChainMap), CoeffError> {
    let kernels: Vec<_> = (0..=c.complex().top_degree())
        .map(|p| l.component(p).kernel())
        .collect();
    let sub = c.restrict(&kernels).map_err(|e| match e {
        LieError::Complex(ComplexError::NotStable { degree, .. }) => {
            CoeffError::KernelNotClosed { degree }
        }
        other => other.into(),
    })?;
    let inclusion = sub.inclusion_into(c)?;
    Ok((sub, inclusion))
}

pub fn coeffective_cohomology(c: &FormComplex, w: &SymplecticForm) -> Result<Vec<usize>, CoeffError> {
    let (k, _) = coeffective_complex(c, w)?;
    Ok(cohomology(k.complex()).betti())
}

/// `dim H̃^p = dim ker((ω∧)*: H^p -> H^{p+2})` per degree.
pub fn tilde_cohomology(c: &FormComplex, w: &SymplecticForm) -> Result<Vec<usize>, CoeffError> {
    let l = lefschetz_map(c, w)?;
    let h = cohomology(c.complex());
    Ok(tilde_from(&l, &h)?)
}

fn tilde_from(l: &ChainMap, h: &CohomologySummary) -> Result<Vec<usize>, ComplexError> {
    let induced = induced_cohomology_map(l, h, h)?;
    Ok(induced
        .iter()
        .enumerate()
        .map(|(p, m)| h.betti_at(p) - m.rank())
        .collect())
}

/// `ω∧C` graded by source degree, with the projection `C -> ω∧C`.
///
/// The basis of `(ω∧C)^p` is the image basis of `ω∧` on `C^p`, as vectors of `C^{p+2}`.
pub fn omega_image_complex(
    c: &FormComplex,
    l: &ChainMap,
) -> Result<(GradedComplex, ChainMap), CoeffError> {
    let cx = c.complex();
    let top = cx.top_degree();
    // C shifted down by two: degree p holds C^{p+2}
    let labels = (0..=top).map(|p| cx.labels(p + 2).to_vec()).collect();
    let d = (0..=top).map(|p| cx.differential(p + 2)).collect();
    let shifted = GradedComplex::new(labels, d)?;
    let images: Vec<_> = (0..=top)
        .map(|p| l.component(p).rank_kernel_image().image)
        .collect();
    let (q, q_in_shifted) = subcomplex_inclusion(&shifted, &images)?;
    let proj = (0..=top)
        .map(|p| {
            let cols = q_in_shifted
                .component(p)
                .solve_many(&l.component(p).columns())?
                .into_iter()
                .map(|x| {
                    x.ok_or(ComplexError::NotExact {
                        degree: p,
                        reason: "ω∧ image outside its own span".into(),
                    })
                })
                .collect::<Result<Vec<_>, ComplexError>>()?;
            Ok(RatMatrix::from_columns(q.dim(p), &cols))
        })
        .collect::<Result<Vec<_>, ComplexError>>()?;
    let projection = ChainMap::new(cx.clone(), q.clone(), 0, proj)?;
    Ok((q, projection))
}

/// `0 -> C_coE -> C -> ω∧C -> 0`.
pub fn coeffective_sequence(
    c: &FormComplex,
    w: &SymplecticForm,
) -> Result<(FormComplex, ShortExactSequence), CoeffError> {
    let l = lefschetz_map(c, w)?;
    sequence_from_map(c, &l)
}

fn sequence_from_map(
    c: &FormComplex,
    l: &ChainMap,
) -> Result<(FormComplex, ShortExactSequence), CoeffError> {
    let (k, inc) = coeffective_from_map(c, l)?;
    let (_, proj) = omega_image_complex(c, l)?;
    Ok((k, ShortExactSequence::new(inc, proj)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Isomorphic,
    NotIsomorphic,
    /// `p < n`: outside the range where the comparison is claimed.
    OutOfRange,
}

impl Verdict {
    pub fn code(self) -> &'static str {
        match self {
            Verdict::Isomorphic => "iso",
            Verdict::NotIsomorphic => "non-iso",
            Verdict::OutOfRange => "out-of-range",
        }
    }
}

/// Everything computed for one complex and symplectic form.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub n: usize,
    pub betti: Vec<usize>,
    /// Dimensions of the coeffective forms themselves, per degree.
    pub coeffective_forms: Vec<usize>,
    pub coeffective: Vec<usize>,
    pub tilde: Vec<usize>,
    /// Rank of the connecting map into `H^p(C_coE)`; equals the cokernel of
    /// `(ω∧)*: H^{p-1} -> H^{p+1}` for `p >= n`.
    pub coker: Vec<usize>,
    pub verdicts: Vec<Verdict>,
    pub profile: LefschetzProfile,
    pub les: LongExactSequence,
}

impl Analysis {
    pub fn top_degree(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn rows(&self) -> impl Iterator<Item = ComparisonRow> + '_ {
        (self.n..=self.top_degree()).map(|p| ComparisonRow {
            degree: p,
            dim_coe: self.coeffective[p],
            dim_tilde: self.tilde[p],
            coker_dim: self.coker[p],
            verdict: self.verdicts[p],
        })
    }

    pub fn isomorphic_degrees(&self) -> Vec<usize> {
        self.degrees_with(Verdict::Isomorphic)
    }

    pub fn non_isomorphic_degrees(&self) -> Vec<usize> {
        self.degrees_with(Verdict::NotIsomorphic)
    }

    fn degrees_with(&self, v: Verdict) -> Vec<usize> {
        (0..self.verdicts.len())
            .filter(|&p| self.verdicts[p] == v)
            .collect()
    }

    /// Long exact sequence nodes in degrees `p >= n`.
    pub fn les_nodes(&self) -> Vec<LesNode> {
        self.les
            .nodes()
            .into_iter()
            .filter(|node| node.degree >= self.n)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonRow {
    pub degree: usize,
    pub dim_coe: usize,
    pub dim_tilde: usize,
    pub coker_dim: usize,
    pub verdict: Verdict,
}

/// Full computation; requires `ω∧` onto from degree `n - 1` upward.
pub fn analyze(c: &FormComplex, w: &SymplecticForm) -> Result<Analysis, CoeffError> {
    let l = lefschetz_map(c, w)?;
    let profile = profile_of(c.complex(), &l, w.n);
    if let Some(degree) = profile.first_non_surjective() {
        return Err(CoeffError::SurjectivityFails { degree });
    }
    let (k, ses) = sequence_from_map(c, &l)?;
    let les = ses.long_exact_sequence()?;
    let betti = les.hc.betti();
    let coeffective = les.hk.betti();
    let tilde = tilde_from(&l, &les.hc)?;
    let top = c.complex().top_degree();
    let coker: Vec<usize> = (0..=top)
        .map(|p| if p == 0 { 0 } else { les.delta[p - 1].rank() })
        .collect();
    let mut verdicts = Vec::with_capacity(top + 1);
    for p in 0..=top {
        if p < w.n {
            verdicts.push(Verdict::OutOfRange);
            continue;
        }
        if coeffective[p] != tilde[p] + coker[p] {
            return Err(CoeffError::IdentityViolation {
                degree: p,
                coeffective: coeffective[p],
                tilde: tilde[p],
                coker: coker[p],
            });
        }
        verdicts.push(if coker[p] == 0 {
            Verdict::Isomorphic
        } else {
            Verdict::NotIsomorphic
        });
    }
    Ok(Analysis {
        n: w.n,
        betti,
        coeffective_forms: k.complex().dims(),
        coeffective,
        tilde,
        coker,
        verdicts,
        profile,
        les,
    })
}

pub fn compare(c: &FormComplex, w: &SymplecticForm) -> Result<Vec<ComparisonRow>, CoeffError> {
    Ok(analyze(c, w)?.rows().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub nodes: Vec<LesNode>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(LesNode::is_exact)
    }
}

/// Exactness of the long exact sequence at every node of degree `>= n`.
pub fn les_verify(c: &FormComplex, w: &SymplecticForm) -> Result<ExactnessReport, CoeffError> {
    Ok(ExactnessReport {
        nodes: analyze(c, w)?.les_nodes(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassStatus {
    pub is_coeffective: bool,
    pub is_closed: bool,
    /// Whether the form is `d` of a coeffective form; `None` unless it is a
    /// closed coeffective form.
    pub coe_class_zero: Option<bool>,
    /// `None` unless the form is closed.
    pub de_rham_class_zero: Option<bool>,
}

pub fn class_status(
    c: &FormComplex,
    w: &SymplecticForm,
    form: &Multivector,
) -> Result<ClassStatus, CoeffError> {
    let p = if form.is_zero() {
        0
    } else {
        form.homogeneous_degree().ok_or(CoeffError::NotHomogeneous)?
    };
    let coords = c
        .coordinates_of(p, form)?
        .ok_or(CoeffError::NotInComplex { degree: p })?;
    let cx = c.complex();
    let l = lefschetz_map(c, w)?;
    let is_coeffective = is_zero_vector(&l.component(p).mul_vec(&coords)?);
    let is_closed = is_zero_vector(&cx.differential(p).mul_vec(&coords)?);
    let de_rham_class_zero = if is_closed {
        Some(cx.incoming(p).solve(&coords)?.is_some())
    } else {
        None
    };
    let coe_class_zero = if is_closed && is_coeffective {
        let (_, inc) = coeffective_from_map(c, &l)?;
        if p == 0 {
            Some(coords.iter().all(Zero::is_zero))
        } else {
            let d_coe = cx.differential(p - 1).mul(&inc.component(p - 1))?;
            Some(d_coe.solve(&coords)?.is_some())
        }
    } else {
        None
    };
    Ok(ClassStatus {
        is_coeffective,
        is_closed,
        coe_class_zero,
        de_rham_class_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::parse_form;
    use crate::lie_ce::LiePresentation;
    use crate::linalg::rat;
    use crate::torus::{invariant_complex, Character, WeightAssignment};
    use std::collections::BTreeMap;

    const NIL_NAMES: [&str; 6] = ["x1", "x2", "x3", "y1", "y2", "y3"];
    const NIL_OMEGA: &str = "x1^y1 + x2^x3 + y2^y3";

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn nilprod() -> FormComplex {
        let mut c = BTreeMap::new();
        c.insert((0, 1, 2), rat(1));
        c.insert((3, 4, 5), rat(1));
        FormComplex::full(&LiePresentation::new(names(&NIL_NAMES), c).unwrap()).unwrap()
    }

    fn ex52() -> FormComplex {
        let bits = [[0, 0], [1, 0], [1, 0], [0, 0], [0, 1], [0, 1]];
        let chars = bits
            .iter()
            .map(|b| Character::new(vec![], vec![b[0] == 1, b[1] == 1]))
            .collect();
        let w = WeightAssignment::new(0, 2, chars).unwrap();
        invariant_complex(&nilprod(), &w).unwrap().0
    }

    fn ex51() -> FormComplex {
        let ns = names(&["e1", "e2", "e3", "e4", "e5", "e6"]);
        let full = FormComplex::full(&LiePresentation::abelian(ns).unwrap()).unwrap();
        let chars = [0, 0, 1, 1, -1, -1]
            .iter()
            .map(|&x| Character::new(vec![x], vec![]))
            .collect();
        let w = WeightAssignment::new(1, 0, chars).unwrap();
        invariant_complex(&full, &w).unwrap().0
    }

    fn torus(n: usize) -> (FormComplex, SymplecticForm) {
        let mut ns: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        ns.extend((1..=n).map(|i| format!("y{i}")));
        let c = FormComplex::full(&LiePresentation::abelian(ns.clone()).unwrap()).unwrap();
        let text = (1..=n)
            .map(|i| format!("x{i}^y{i}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let w = validate_symplectic(&c, &parse_form(&text, &ns).unwrap()).unwrap();
        (c, w)
    }

    fn omega(c: &FormComplex, text: &str) -> SymplecticForm {
        validate_symplectic(c, &parse_form(text, c.names()).unwrap()).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn symplectic_checks() {
        let c = nilprod();
        let w = omega(&c, NIL_OMEGA);
        assert_eq!(w.n(), 3);
        let top = parse_form("x1^x2^x3^y1^y2^y3", c.names()).unwrap();
        let cube = w.omega().wedge_power(3);
        // x1y1 x2x3 y2y3 reorders evenly to the top blade, times 3!
        assert_eq!(cube, top.scale(&rat(6)));

        let parse = |s: &str| parse_form(s, c.names()).unwrap();
        assert_eq!(
            validate_symplectic(&c, &parse("x1^y1 + x2^y2 + x3^y3")),
            Err(CoeffError::NotClosed)
        );
        assert_eq!(
            validate_symplectic(&c, &parse("x1^y1 + x2^x3")),
            Err(CoeffError::Degenerate { n: 3 })
        );
        assert_eq!(validate_symplectic(&c, &parse("x1")), Err(CoeffError::NotTwoForm));

        let odd = FormComplex::full(&LiePresentation::abelian(names(&["a", "b", "c"])).unwrap())
            .unwrap();
        let ab = parse_form("a^b", odd.names()).unwrap();
        assert_eq!(validate_symplectic(&odd, &ab), Err(CoeffError::OddDimension(3)));

        // x1^y2 is not invariant under the sign action
        let inv = ex52();
        let bad = parse_form("x1^y1 + x2^x3 + y2^y3 + x1^y2", inv.names()).unwrap();
        assert_eq!(
            validate_symplectic(&inv, &bad),
            Err(CoeffError::NotInComplex { degree: 2 })
        );
    }

    #[test]
    fn lefschetz_profile_on_full_algebra() {
        let c = nilprod();
        let prof = lefschetz_profile(&c, &omega(&c, NIL_OMEGA)).unwrap();
        assert!(prof.is_standard());
        assert_eq!(prof.injective, [true, true, true, false, false, false, false]);
        assert_eq!(prof.surjective, [false, false, true, true, true, true, true]);
        // ω∧: C^p -> C^{p+2} has rank min(C(6,p), C(6,p+2))
        assert_eq!(prof.ranks, [1, 6, 15, 6, 1, 0, 0]);
    }

    #[test]
    fn lefschetz_fails_when_omega_escapes() {
        // span of 1 and x1 in degrees 0, 1 only; ω∧ leaves nothing in degree 2
        let c = nilprod();
        let w = omega(&c, NIL_OMEGA);
        let sub = c
            .restrict(&[vec![vec![rat(1)]], vec![], vec![], vec![], vec![], vec![], vec![]])
            .unwrap();
        assert_eq!(
            lefschetz_map(&sub, &w).unwrap_err(),
            CoeffError::LefschetzNotPreserved { degree: 0 }
        );
    }

    #[test]
    fn coeffective_dims_on_full_algebra() {
        let c = nilprod();
        let (k, inc) = coeffective_complex(&c, &omega(&c, NIL_OMEGA)).unwrap();
        let dims: Vec<usize> = (0..=6).map(|p| binomial(6, p) - binomial(6, p + 2).min(binomial(6, p))).collect();
        assert_eq!(k.complex().dims(), dims);
        assert_eq!(inc.target(), c.complex());
    }

    #[test]
    fn nilprod_fails_in_middle_degree() {
        let c = nilprod();
        let a = analyze(&c, &omega(&c, NIL_OMEGA)).unwrap();
        assert_eq!(a.betti, [1, 4, 8, 10, 8, 4, 1]);
        assert_eq!(a.coeffective, [0, 0, 0, 9, 7, 4, 1]);
        assert_eq!(a.tilde, [0, 0, 1, 6, 7, 4, 1]);
        assert_eq!(a.coker[3..], [3, 0, 0, 0]);
        assert_eq!(a.non_isomorphic_degrees(), [3]);
        assert_eq!(a.isomorphic_degrees(), [4, 5, 6]);
        assert!(a.verdicts[..3].iter().all(|&v| v == Verdict::OutOfRange));
        assert!(a.les.is_exact());
        for row in a.rows() {
            assert_eq!(row.dim_coe, row.dim_tilde + row.coker_dim);
        }
    }

    #[test]
    fn coker_matches_lefschetz_on_cohomology() {
        // above the middle degree the rank of the connecting map equals the
        // cokernel of (ω∧)*: H^{p-1} -> H^{p+1}
        for (c, w) in [
            (nilprod(), None),
            (ex52(), None),
            (ex51(), Some("e1^e2 + e3^e5 + e4^e6")),
            (torus(3).0, Some("x1^y1 + x2^y2 + x3^y3")),
        ] {
            let w = omega(&c, w.unwrap_or(NIL_OMEGA));
            let a = analyze(&c, &w).unwrap();
            let l = lefschetz_map(&c, &w).unwrap();
            let h = cohomology(c.complex());
            let induced = induced_cohomology_map(&l, &h, &h).unwrap();
            for p in w.n() + 1..=c.complex().top_degree() {
                let naive = h.betti_at(p + 1) - induced[p - 1].rank();
                assert_eq!(a.coker[p], naive, "degree {p}");
            }
        }
    }

    #[test]
    fn middle_degree_coker_differs_from_lefschetz_cokernel() {
        // d(ω∧C^{n-2}) is smaller than dC^n, so H^{n-1}(ω∧C) is bigger than H^{n+1}
        let c = nilprod();
        let w = omega(&c, NIL_OMEGA);
        let a = analyze(&c, &w).unwrap();
        let l = lefschetz_map(&c, &w).unwrap();
        let h = cohomology(c.complex());
        let induced = induced_cohomology_map(&l, &h, &h).unwrap();
        assert_eq!(h.betti_at(4) - induced[2].rank(), 1);
        assert_eq!(a.coker[3], 3);
        // H^2 of the coeffective complex is zero, so q* is injective on H^2
        assert_eq!(a.les.hq.betti_at(2), h.betti_at(2) + a.coker[3]);
    }

    #[test]
    fn ex52_is_isomorphic() {
        let c = ex52();
        let a = analyze(&c, &omega(&c, NIL_OMEGA)).unwrap();
        assert_eq!(a.betti, [1, 2, 3, 4, 3, 2, 1]);
        assert_eq!(a.coeffective[3..], [2, 2, 2, 1]);
        assert_eq!(a.tilde[3..], [2, 2, 2, 1]);
        assert_eq!(a.isomorphic_degrees(), [3, 4, 5, 6]);
    }

    #[test]
    fn ex51_is_isomorphic() {
        let c = ex51();
        let a = analyze(&c, &omega(&c, "e1^e2 + e3^e5 + e4^e6")).unwrap();
        assert_eq!(a.coeffective[3..], [6, 4, 2, 1]);
        assert_eq!(a.tilde[3..], [6, 4, 2, 1]);
        assert_eq!(a.isomorphic_degrees(), [3, 4, 5, 6]);
    }

    #[test]
    fn torus_matches_binomials() {
        for n in 2..=3 {
            let (c, w) = torus(n);
            let rows = compare(&c, &w).unwrap();
            assert_eq!(rows.len(), n + 1);
            for row in rows {
                let p = row.degree;
                assert_eq!(row.verdict, Verdict::Isomorphic);
                assert_eq!(row.dim_coe, binomial(2 * n, p) - binomial(2 * n, p + 2));
            }
        }
    }

    #[test]
    fn les_needs_surjectivity() {
        // restricting to even-degree forms of the torus keeps ω∧ but loses ontoness in degree 1
        let (c, w) = torus(2);
        let spaces: Vec<_> = (0..=4)
            .map(|p| {
                if p == 1 {
                    vec![]
                } else {
                    (0..c.complex().dim(p)).map(|i| crate::linalg::unit_vector(c.complex().dim(p), i)).collect()
                }
            })
            .collect();
        let sub = c.restrict(&spaces).unwrap();
        assert_eq!(
            les_verify(&sub, &w).unwrap_err(),
            CoeffError::SurjectivityFails { degree: 1 }
        );
    }

    #[test]
    fn class_status_examples() {
        let c = nilprod();
        let w = omega(&c, NIL_OMEGA);
        let form = |s: &str| parse_form(s, c.names()).unwrap();

        // x1^x2^y2^y3 = -d(x3^y2^y3 + x1^x3^y1), a coeffective primitive
        let s = class_status(&c, &w, &form("x1^x2^y2^y3")).unwrap();
        assert_eq!(
            s,
            ClassStatus {
                is_coeffective: true,
                is_closed: true,
                coe_class_zero: Some(true),
                de_rham_class_zero: Some(true),
            }
        );
        let beta = form("x3^y2^y3 + x1^x3^y1");
        assert!(w.omega().wedge(&beta).unwrap().is_zero());
        let pres = LiePresentation::from_differentials(
            names(&NIL_NAMES),
            &[
                Multivector::zero(6),
                Multivector::zero(6),
                form("-x1^x2"),
                Multivector::zero(6),
                Multivector::zero(6),
                form("-y1^y2"),
            ],
        )
        .unwrap();
        assert_eq!(pres.d(&beta), form("-x1^x2^y2^y3"));

        // the coeffective complex vanishes in degree 2, so no closed coeffective 3-form is coE-exact
        let (k, _) = coeffective_complex(&c, &w).unwrap();
        let hk = cohomology(k.complex());
        for rep in &hk.degree(3).unwrap().representatives {
            let s = class_status(&c, &w, &k.to_form(3, rep).unwrap()).unwrap();
            assert_eq!(s.coe_class_zero, Some(false));
        }

        let s = class_status(&c, &w, &form("x3^y2^y3")).unwrap();
        assert!(!s.is_coeffective);

        let s = class_status(&c, &w, &Multivector::zero(6)).unwrap();
        assert_eq!(s.coe_class_zero, Some(true));
        assert_eq!(s.de_rham_class_zero, Some(true));

        assert_eq!(
            class_status(&c, &w, &form("x1 + x1^x2")).unwrap_err(),
            CoeffError::NotHomogeneous
        );
        let inv = ex52();
        let w = omega(&inv, NIL_OMEGA);
        let f = parse_form("x2", inv.names()).unwrap();
        assert_eq!(
            class_status(&inv, &w, &f).unwrap_err(),
            CoeffError::NotInComplex { degree: 1 }
        );
    }
}
