//! Seeded random nilpotent symplectic models checked against the Lefschetz,
//! vanishing and long exact sequence invariants.

use std::collections::BTreeMap;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coeffective::{analyze, validate_symplectic};
use crate::exterior::{blades_of_degree, Multivector};
use crate::lie_ce::{ce_differential_matrix, validate_presentation, FormComplex, LiePresentation};
use crate::linalg::{ratio, RatMatrix, Rational, Vector};
use crate::torus::{blade_character, invariant_complex, Character, WeightAssignment};

/// Random closed 2-forms tried per model before it is skipped.
pub const OMEGA_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzFailure {
    pub iteration: usize,
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub tested: usize,
    /// Models rejected by the Jacobi check or without a nondegenerate closed 2-form.
    pub skipped: usize,
    /// Of the tested models, how many carried a nontrivial weight assignment.
    pub with_weights: usize,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

enum Outcome {
    Skipped,
    Tested { weighted: bool, failures: Vec<String> },
}

pub fn fuzz(dim: usize, count: usize, seed: u64) -> FuzzReport {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..count).map(|_| master.random()).collect();
    let outcomes: Vec<Outcome> = seeds.par_iter().map(|&s| run_one(dim, s)).collect();
    let mut report = FuzzReport {
        dim,
        count,
        seed,
        tested: 0,
        skipped: 0,
        with_weights: 0,
        failures: Vec::new(),
    };
    for (iteration, (outcome, &s)) in outcomes.into_iter().zip(&seeds).enumerate() {
        match outcome {
            Outcome::Skipped => report.skipped += 1,
            Outcome::Tested { weighted, failures } => {
                report.tested += 1;
                report.with_weights += weighted as usize;
                report.failures.extend(failures.into_iter().map(|reason| FuzzFailure {
                    iteration,
                    seed: s,
                    reason,
                }));
            }
        }
    }
    report
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let n = rng.random_range(-3..=3);
        if n != 0 {
            break n;
        }
    };
    ratio(num, rng.random_range(1..=2))
}

/// Sign characters shared by consecutive pairs of generators, so that
/// `e_{2i-1} ^ e_{2i}` is always invariant.
fn random_weights(rng: &mut ChaCha8Rng, m: usize) -> WeightAssignment {
    let s = rng.random_range(1..=2);
    let mut chars = Vec::with_capacity(m);
    while chars.len() < m {
        let c = Character::new(vec![], (0..s).map(|_| rng.random_bool(0.5)).collect());
        chars.push(c.clone());
        if chars.len() < m {
            chars.push(c);
        }
    }
    WeightAssignment::new(0, s, chars).expect("uniform shape")
}

/// Nilpotent presentation built generator by generator: `d e_k` is a random
/// closed 2-form in `e_1..e_{k-1}` of the same character as `e_k`, so the
/// structure constants `c^k_ij` vanish unless `i < j < k`.
fn random_presentation(
    rng: &mut ChaCha8Rng,
    m: usize,
    weights: Option<&WeightAssignment>,
) -> LiePresentation {
    let names: Vec<String> = (1..=m).map(|i| format!("e{i}")).collect();
    let mut constants = BTreeMap::new();
    for k in 0..m {
        let partial = LiePresentation::new(names[..k].to_vec(), constants.clone())
            .expect("indices in range");
        let blades = blades_of_degree(k, 2);
        let same_weight: Vec<usize> = (0..blades.len())
            .filter(|&i| {
                weights.is_none_or(|w| &blade_character(blades[i], w) == w.character(k))
            })
            .collect();
        let d2 = ce_differential_matrix(&partial, 2);
        let mut restricted = RatMatrix::zeros(d2.rows(), same_weight.len());
        for (col, &i) in same_weight.iter().enumerate() {
            for (row, x) in d2.column(i).into_iter().enumerate() {
                restricted.set(row, col, x);
            }
        }
        for z in restricted.kernel() {
            if !rng.random_bool(0.4) {
                continue;
            }
            let coeff = small_rational(rng);
            for (col, x) in z.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (i, j) = match blades[same_weight[col]].indices()[..] {
                    [i, j] => (i, j),
                    _ => unreachable!("degree-2 blade"),
                };
                // d e_k = -sum c^k_ij e_i ^ e_j
                let entry = constants
                    .entry((i, j, k))
                    .or_insert_with(|| Rational::from_integer(0.into()));
                *entry -= &coeff * x;
            }
        }
        constants.retain(|_, c: &mut Rational| !c.is_zero());
    }
    LiePresentation::new(names, constants).expect("indices in range")
}

fn random_closed_form(
    rng: &mut ChaCha8Rng,
    c: &FormComplex,
    cocycles: &[Vector],
) -> Multivector {
    let dim = c.complex().dim(2);
    let mut coords = vec![Rational::from_integer(0.into()); dim];
    for z in cocycles {
        let coeff = Rational::from_integer(rng.random_range(-2..=2).into());
        for (x, zi) in coords.iter_mut().zip(z) {
            *x += &coeff * zi;
        }
    }
    c.to_form(2, &coords).expect("coordinates have the right length")
}

fn run_one(dim: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = rng.random_bool(0.5).then(|| random_weights(&mut rng, dim));
    let pres = random_presentation(&mut rng, dim, weights.as_ref());
    if !validate_presentation(&pres).is_valid() {
        return Outcome::Skipped;
    }
    let Ok(full) = FormComplex::full(&pres) else {
        return Outcome::Skipped;
    };
    let inv = match &weights {
        Some(w) => match invariant_complex(&full, w) {
            Ok((inv, _)) => Some(inv),
            Err(e) => {
                return Outcome::Tested {
                    weighted: true,
                    failures: vec![format!("invariant complex: {e}")],
                }
            }
        },
        None => None,
    };
    let mut search_omega = |c: &FormComplex| {
        let cocycles = c.complex().differential(2).kernel();
        (0..OMEGA_ATTEMPTS).find_map(|_| {
            let candidate = random_closed_form(&mut rng, c, &cocycles);
            validate_symplectic(c, &candidate).ok()
        })
    };
    // prefer an invariant form; without one the invariant checks do not apply
    let (omega, inv) = match inv.as_ref().and_then(&mut search_omega) {
        Some(w) => (w, inv),
        None => match search_omega(&full) {
            Some(w) => (w, None),
            None => return Outcome::Skipped,
        },
    };
    let mut failures = Vec::new();
    check_complex("full", &full, omega.omega(), true, &mut failures);
    if let Some(inv) = &inv {
        check_complex("invariant", inv, omega.omega(), false, &mut failures);
    }
    Outcome::Tested {
        weighted: inv.is_some(),
        failures,
    }
}

fn check_complex(
    label: &str,
    c: &FormComplex,
    omega: &Multivector,
    full: bool,
    failures: &mut Vec<String>,
) {
    let mut fail = |msg: String| failures.push(format!("{label}: {msg}"));
    let w = match validate_symplectic(c, omega) {
        Ok(w) => w,
        Err(e) => return fail(format!("symplectic form rejected: {e}")),
    };
    let a = match analyze(c, &w) {
        Ok(a) => a,
        Err(e) => return fail(format!("comparison: {e}")),
    };
    if full && !a.profile.injective_below_middle() {
        fail("ω∧ not injective below the middle degree".into());
    }
    if let Some(p) = (0..w.n()).find(|&p| a.coeffective_forms[p] > 0) {
        fail(format!("coeffective forms in degree {p} < n"));
    }
    if let Some(node) = a.les_nodes().iter().find(|node| !node.is_exact()) {
        fail(format!("sequence not exact at {:?} in degree {}", node.term, node.degree));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_clean() {
        let a = fuzz(4, 12, 7);
        let b = fuzz(4, 12, 7);
        assert_eq!(a, b);
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a.tested + a.skipped, 12);
        assert!(a.tested > 0);
    }

    #[test]
    fn dimension_two_is_abelian() {
        let r = fuzz(2, 5, 0);
        assert!(r.passed());
        assert_eq!(r.tested, 5);
        assert_eq!(r.skipped, 0);
    }

    #[test]
    fn presentations_are_nilpotent_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_presentation(&mut rng, 6, None);
        assert!(p.constants().keys().all(|&(i, j, k)| i < j && j < k));
    }
}
