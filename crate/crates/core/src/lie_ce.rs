//! Lie algebras given by structure constants, and their Chevalley–Eilenberg
//! complexes realized on the full exterior algebra of the dual.
//!
//! Sign convention: `dα(X, Y) = -α([X, Y])`, so a bracket `[e_i, e_j] = Σ c^k_ij e_k`
//! gives `d x_k = -Σ_{i<j} c^k_ij x_i ^ x_j`.

use std::collections::BTreeMap;

use num::Zero;
use thiserror::Error;

use crate::complexes::{subcomplex_inclusion, ComplexError, GradedComplex};
use crate::exterior::{
    blade_positions, blades_of_degree, Blade, FormError, Multivector, MAX_GENERATORS,
};
use crate::linalg::{is_zero_vector, zero_vector, LinalgError, RatMatrix, Rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("structure constant index out of range: ({i}, {j}, {k}) for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("structure constants must be keyed with i < j, got ({i}, {j})")]
    NotOrdered { i: usize, j: usize },
    #[error("differential of `{generator}` is not a 2-form")]
    NotQuadratic { generator: String },
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("{count} generators exceeds the limit of {limit}")]
    TooManyGenerators { count: usize, limit: usize },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Lie algebra `g` with basis `e_1..e_m`; generator `k` of the dual is named `names[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePresentation {
    names: Vec<String>,
    /// `(i, j, k) -> c^k_ij` for `i < j`, nonzero entries only.
    constants: BTreeMap<(usize, usize, usize), Rational>,
}

impl LiePresentation {
    pub fn new(
        names: Vec<String>,
        constants: BTreeMap<(usize, usize, usize), Rational>,
    ) -> Result<Self, LieError> {
        let m = names.len();
        if m > MAX_GENERATORS {
            return Err(LieError::TooManyGenerators {
                count: m,
                limit: MAX_GENERATORS,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(LieError::DuplicateName(n.clone()));
            }
        }
        for &(i, j, k) in constants.keys() {
            if i >= m || j >= m || k >= m {
                return Err(LieError::IndexOutOfRange { i, j, k, dim: m });
            }
            if i >= j {
                return Err(LieError::NotOrdered { i, j });
            }
        }
        let constants = constants.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LiePresentation { names, constants })
    }

    pub fn abelian(names: Vec<String>) -> Result<Self, LieError> {
        Self::new(names, BTreeMap::new())
    }

    /// Read structure constants off the differentials of the dual generators.
    pub fn from_differentials(
        names: Vec<String>,
        differentials: &[Multivector],
    ) -> Result<Self, LieError> {
        assert_eq!(names.len(), differentials.len());
        let mut constants = BTreeMap::new();
        for (k, dx) in differentials.iter().enumerate() {
            if dx.ambient() != names.len() {
                return Err(FormError::AmbientMismatch {
                    left: names.len(),
                    right: dx.ambient(),
                }
                .into());
            }
            for (blade, c) in dx.terms() {
                let &[i, j] = blade.indices().as_slice() else {
                    return Err(LieError::NotQuadratic {
                        generator: names[k].clone(),
                    });
                };
                constants.insert((i, j, k), -c.clone());
            }
        }
        Self::new(names, constants)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn constants(&self) -> &BTreeMap<(usize, usize, usize), Rational> {
        &self.constants
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut out = zero_vector(self.dim());
        if i == j {
            return out;
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        for (&(_, _, k), c) in self.constants.range((a, b, 0)..=(a, b, usize::MAX)) {
            out[k] = if sign > 0 { c.clone() } else { -c.clone() };
        }
        out
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim());
        for (&(i, j, k), c) in &self.constants {
            let coeff = &u[i] * &v[j] - &u[j] * &v[i];
            if !coeff.is_zero() {
                out[k] += coeff * c;
            }
        }
        out
    }

    /// `d x_k` for every generator.
    pub fn differentials(&self) -> Vec<Multivector> {
        let m = self.dim();
        let mut out = vec![Multivector::zero(m); m];
        for (&(i, j, k), c) in &self.constants {
            out[k].add_term(Blade::from_indices(&[i, j]), -c.clone());
        }
        out
    }

    /// The Chevalley–Eilenberg differential, extended as an anti-derivation.
    pub fn d(&self, form: &Multivector) -> Multivector {
        let dx = self.differentials();
        let mut out = Multivector::zero(self.dim());
        for (blade, coeff) in form.terms() {
            apply_d_blade(&dx, blade, coeff, &mut out);
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        validate_presentation(self)
    }
}

fn apply_d_blade(dx: &[Multivector], blade: Blade, coeff: &Rational, out: &mut Multivector) {
    let indices = blade.indices();
    for (r, &g) in indices.iter().enumerate() {
        let rest = Blade::from_bits(blade.bits() & !(1 << g));
        let prefix = Blade::from_bits(rest.bits() & ((1u64 << g) - 1));
        let suffix = Blade::from_bits(rest.bits() & !((1u64 << g) - 1));
        for (pair, c) in dx[g].terms() {
            let Some((n1, b1)) = prefix.wedge(pair) else {
                continue;
            };
            let Some((n2, b2)) = b1.wedge(suffix) else {
                continue;
            };
            let negative = (r % 2 == 1) ^ n1 ^ n2;
            let v = coeff * c;
            out.add_term(b2, if negative { -v } else { v });
        }
    }
}

/// Blade-basis matrix of `d` from degree `p` to degree `p + 1`.
pub fn ce_differential_matrix(pres: &LiePresentation, p: usize) -> RatMatrix {
    let m = pres.dim();
    let dx = pres.differentials();
    let source = blades_of_degree(m, p);
    let target = blade_positions(m, p + 1);
    let mut mat = RatMatrix::zeros(target.len(), source.len());
    let one = Rational::from_integer(1.into());
    for (col, &b) in source.iter().enumerate() {
        let mut image = Multivector::zero(m);
        apply_d_blade(&dx, b, &one, &mut image);
        for (tb, c) in image.terms() {
            mat.set(target[&tb], col, c.clone());
        }
    }
    mat
}

pub fn blade_label<S: AsRef<str>>(blade: Blade, names: &[S]) -> String {
    if blade.degree() == 0 {
        return "1".to_string();
    }
    let parts: Vec<&str> = blade.indices().iter().map(|&i| names[i].as_ref()).collect();
    parts.join("^")
}

/// The Chevalley–Eilenberg complex on all of `⋀ g*`, in the canonical blade basis.
pub fn ce_complex(pres: &LiePresentation) -> Result<GradedComplex, LieError> {
    let m = pres.dim();
    let labels = (0..=m)
        .map(|p| {
            blades_of_degree(m, p)
                .into_iter()
                .map(|b| blade_label(b, pres.names()))
                .collect()
        })
        .collect();
    let d = (0..=m).map(|p| ce_differential_matrix(pres, p)).collect();
    Ok(GradedComplex::new(labels, d)?)
}

/// One failing Jacobi triple `i < j < k` with its nonzero residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiFailure {
    pub triple: (usize, usize, usize),
    pub residual: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub jacobi_failures: Vec<JacobiFailure>,
    /// Generators `x` with `d(d x) != 0`.
    pub d_squared_failures: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.jacobi_failures.is_empty() && self.d_squared_failures.is_empty()
    }
}

pub fn validate_presentation(pres: &LiePresentation) -> ValidationReport {
    let m = pres.dim();
    let mut jacobi_failures = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let mut residual = pres.bracket(&pres.bracket_basis(i, j), &unit(m, k));
                let a = pres.bracket(&pres.bracket_basis(j, k), &unit(m, i));
                let b = pres.bracket(&pres.bracket_basis(k, i), &unit(m, j));
                for t in 0..m {
                    residual[t] += &a[t] + &b[t];
                }
                if !is_zero_vector(&residual) {
                    jacobi_failures.push(JacobiFailure {
                        triple: (i, j, k),
                        residual,
                    });
                }
            }
        }
    }
    let d_squared_failures = pres
        .differentials()
        .iter()
        .enumerate()
        .filter(|(_, dx)| !pres.d(dx).is_zero())
        .map(|(g, _)| g)
        .collect();
    ValidationReport {
        jacobi_failures,
        d_squared_failures,
    }
}

fn unit(m: usize, i: usize) -> Vector {
    crate::linalg::unit_vector(m, i)
}

/// A subcomplex of `⋀` over named generators, remembered through its blade coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormComplex {
    names: Vec<String>,
    complex: GradedComplex,
    /// Per degree: blade coordinates (rows) of each basis vector (columns).
    embedding: Vec<RatMatrix>,
}

impl FormComplex {
    /// The full Chevalley–Eilenberg complex of `pres`.
    pub fn full(pres: &LiePresentation) -> Result<Self, LieError> {
        let complex = ce_complex(pres)?;
        let embedding = complex
            .dims()
            .into_iter()
            .map(RatMatrix::identity)
            .collect();
        Ok(FormComplex {
            names: pres.names().to_vec(),
            complex,
            embedding,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ambient(&self) -> usize {
        self.names.len()
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    /// Blade coordinates of the degree-`p` basis, one column per basis vector.
    pub fn embedding(&self, p: usize) -> RatMatrix {
        match self.embedding.get(p) {
            Some(e) => e.clone(),
            None => RatMatrix::zeros(blades_of_degree(self.ambient(), p).len(), 0),
        }
    }

    pub fn to_form(&self, p: usize, coords: &[Rational]) -> Result<Multivector, LieError> {
        let blade_coords = self.embedding(p).mul_vec(coords)?;
        Ok(Multivector::from_coordinates(self.ambient(), p, &blade_coords))
    }

    /// Coordinates of a homogeneous degree-`p` form, or `None` if it lies outside the complex.
    pub fn coordinates_of(&self, p: usize, form: &Multivector) -> Result<Option<Vector>, LieError> {
        if form.ambient() != self.ambient() {
            return Err(FormError::AmbientMismatch {
                left: self.ambient(),
                right: form.ambient(),
            }
            .into());
        }
        if !form.homogeneous_part(p).eq(form) {
            return Ok(None);
        }
        Ok(self.embedding(p).solve(&form.coordinates(p))?)
    }

    /// Restrict to the span of per-degree vectors given in this complex's coordinates.
    pub fn restrict(&self, subspaces: &[Vec<Vector>]) -> Result<FormComplex, LieError> {
        let (sub, inclusion) = subcomplex_inclusion(&self.complex, subspaces)?;
        let embedding = (0..=sub.top_degree())
            .map(|p| self.embedding(p).mul(&inclusion.component(p)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FormComplex {
            names: self.names.clone(),
            complex: sub,
            embedding,
        })
    }

    /// Inclusion of `self` into `parent` as a chain map, if `self` sits inside it.
    pub fn inclusion_into(
        &self,
        parent: &FormComplex,
    ) -> Result<crate::complexes::ChainMap, LieError> {
        let maps = (0..=self.complex.top_degree())
            .map(|p| {
                let cols = parent
                    .embedding(p)
                    .solve_many(&self.embedding(p).columns())?
                    .into_iter()
                    .enumerate()
                    .map(|(index, x)| {
                        x.ok_or(LieError::Complex(ComplexError::NotStable {
                            degree: p,
                            index,
                        }))
                    })
                    .collect::<Result<Vec<_>, LieError>>()?;
                Ok(RatMatrix::from_columns(parent.complex.dim(p), &cols))
            })
            .collect::<Result<Vec<_>, LieError>>()?;
        Ok(crate::complexes::ChainMap::new(
            self.complex.clone(),
            parent.complex.clone(),
            0,
            maps,
        )?)
    }
}
