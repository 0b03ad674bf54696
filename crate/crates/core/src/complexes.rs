//! Finite cochain complexes over the rationals.
//!
//! Degrees run from 0 to `top_degree`; every degree outside that range is the
//! zero space. The differential in degree `p` is a matrix from degree `p`
//! coordinates to degree `p + 1` coordinates.

use num::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{
    format_rational, independent_subset, is_zero_vector, LinalgError, RatMatrix, Rational, Vector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("degree {degree}: {what} has shape {found:?}, expected {expected:?}")]
    Shape {
        degree: usize,
        what: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("d^2 != 0 starting in degree {degree}")]
    NotACochainComplex { degree: usize },
    #[error("map does not commute with the differentials in source degree {degree}")]
    NotAChainMap { degree: usize },
    #[error("subspace not closed under d: degree {degree}, basis vector {index}")]
    NotStable { degree: usize, index: usize },
    #[error("vector in degree {degree} is not a cocycle")]
    NotACocycle { degree: usize },
    #[error("connecting homomorphism: cannot lift in degree {degree}")]
    LiftFailed { degree: usize },
    #[error("sequence not exact in degree {degree}: {reason}")]
    NotExact { degree: usize, reason: String },
    #[error("incompatible complexes: {0}")]
    Incompatible(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Cochain complex with labelled bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    labels: Vec<Vec<String>>,
    d: Vec<RatMatrix>,
}

impl GradedComplex {
    /// Build from per-degree labels and differentials, checking shapes and `d^2 = 0`.
    pub fn new(labels: Vec<Vec<String>>, d: Vec<RatMatrix>) -> Result<Self, ComplexError> {
        assert!(!labels.is_empty(), "a complex needs at least degree 0");
        if d.len() != labels.len() {
            return Err(ComplexError::Shape {
                degree: d.len().min(labels.len()),
                what: "differential list",
                expected: (labels.len(), 0),
                found: (d.len(), 0),
            });
        }
        let c = GradedComplex { labels, d };
        for p in 0..=c.top_degree() {
            let expected = (c.dim(p + 1), c.dim(p));
            let found = (c.d[p].rows(), c.d[p].cols());
            if expected != found {
                return Err(ComplexError::Shape {
                    degree: p,
                    what: "differential",
                    expected,
                    found,
                });
            }
        }
        for p in 0..c.top_degree() {
            if !c.d[p + 1].mul(&c.d[p])?.is_zero() {
                return Err(ComplexError::NotACochainComplex { degree: p });
            }
        }
        Ok(c)
    }

    /// The one-point complex: the rationals in degree 0.
    pub fn point() -> Self {
        GradedComplex {
            labels: vec![vec!["1".to_string()]],
            d: vec![RatMatrix::zeros(0, 1)],
        }
    }

    /// Zero differential on spaces of the given dimensions.
    pub fn with_zero_differential(labels: Vec<Vec<String>>) -> Self {
        let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
        let d = (0..dims.len())
            .map(|p| RatMatrix::zeros(dims.get(p + 1).copied().unwrap_or(0), dims[p]))
            .collect();
        GradedComplex { labels, d }
    }

    pub fn top_degree(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn dim(&self, p: usize) -> usize {
        self.labels.get(p).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, p: usize) -> &[String] {
        self.labels.get(p).map_or(&[], Vec::as_slice)
    }

    /// `d: C^p -> C^{p+1}`; a correctly shaped zero matrix outside the range.
    pub fn differential(&self, p: usize) -> RatMatrix {
        match self.d.get(p) {
            Some(m) => m.clone(),
            None => RatMatrix::zeros(self.dim(p + 1), self.dim(p)),
        }
    }

    pub(crate) fn differential_ref(&self, p: usize) -> Option<&RatMatrix> {
        self.d.get(p)
    }

    /// Matrix of `d` into degree `p`, i.e. out of degree `p - 1`.
    pub fn incoming(&self, p: usize) -> RatMatrix {
        if p == 0 {
            RatMatrix::zeros(self.dim(0), 0)
        } else {
            self.differential(p - 1)
        }
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.iter().all(RatMatrix::is_zero)
    }
}

/// Degree-shifting linear map `f_p: S^p -> T^{p + shift}` commuting with `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: GradedComplex,
    target: GradedComplex,
    shift: usize,
    maps: Vec<RatMatrix>,
}

impl ChainMap {
    pub fn new(
        source: GradedComplex,
        target: GradedComplex,
        shift: usize,
        maps: Vec<RatMatrix>,
    ) -> Result<Self, ComplexError> {
        if maps.len() != source.top_degree() + 1 {
            return Err(ComplexError::Shape {
                degree: 0,
                what: "chain map degree list",
                expected: (source.top_degree() + 1, 0),
                found: (maps.len(), 0),
            });
        }
        for (p, f) in maps.iter().enumerate() {
            let expected = (target.dim(p + shift), source.dim(p));
            if (f.rows(), f.cols()) != expected {
                return Err(ComplexError::Shape {
                    degree: p,
                    what: "chain map component",
                    expected,
                    found: (f.rows(), f.cols()),
                });
            }
        }
        let map = ChainMap {
            source,
            target,
            shift,
            maps,
        };
        for p in 0..=map.source.top_degree() {
            let left = map.target.differential(p + shift).mul(&map.maps[p])?;
            let right = map.component(p + 1).mul(&map.source.differential(p))?;
            if left != right {
                return Err(ComplexError::NotAChainMap { degree: p });
            }
        }
        Ok(map)
    }

    pub fn identity(c: &GradedComplex) -> Self {
        let maps = (0..=c.top_degree())
            .map(|p| RatMatrix::identity(c.dim(p)))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            shift: 0,
            maps,
        }
    }

    pub fn zero(source: &GradedComplex, target: &GradedComplex, shift: usize) -> Self {
        let maps = (0..=source.top_degree())
            .map(|p| RatMatrix::zeros(target.dim(p + shift), source.dim(p)))
            .collect();
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            maps,
        }
    }

    pub fn source(&self) -> &GradedComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedComplex {
        &self.target
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// `f_p`; zero outside the source range.
    pub fn component(&self, p: usize) -> RatMatrix {
        match self.maps.get(p) {
            Some(m) => m.clone(),
            None => RatMatrix::zeros(self.target.dim(p + self.shift), self.source.dim(p)),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap, ComplexError> {
        if self.target != other.source {
            return Err(ComplexError::Incompatible("target of the first map is not the source of the second"));
        }
        let maps = (0..=self.source.top_degree())
            .map(|p| other.component(p + self.shift).mul(&self.maps[p]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChainMap {
            source: self.source.clone(),
            target: other.target.clone(),
            shift: self.shift + other.shift,
            maps,
        })
    }
}

/// Cohomology data in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCohomology {
    pub betti: usize,
    pub cocycles: Vec<Vector>,
    pub coboundaries: Vec<Vector>,
    /// Cocycles completing `coboundaries` to a basis of the cocycle space.
    pub representatives: Vec<Vector>,
    dim: usize,
    /// Columns: coboundaries followed by representatives.
    adapted: RatMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologySummary {
    degrees: Vec<DegreeCohomology>,
}

impl CohomologySummary {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn betti_at(&self, p: usize) -> usize {
        self.degrees.get(p).map_or(0, |d| d.betti)
    }

    pub fn degree(&self, p: usize) -> Option<&DegreeCohomology> {
        self.degrees.get(p)
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    /// Coordinates of the class of cocycle `z` in the representative basis.
    pub fn class_of(&self, p: usize, z: &[Rational]) -> Result<Vector, ComplexError> {
        Ok(self
            .classes_of(p, std::slice::from_ref(&z.to_vec()))?
            .pop()
            .expect("one input"))
    }

    /// [`class_of`](Self::class_of) for several cocycles at once.
    pub fn classes_of(&self, p: usize, zs: &[Vector]) -> Result<Vec<Vector>, ComplexError> {
        let Some(deg) = self.degrees.get(p) else {
            return if zs.iter().all(Vec::is_empty) {
                Ok(vec![Vec::new(); zs.len()])
            } else {
                Err(ComplexError::NotACocycle { degree: p })
            };
        };
        if let Some(z) = zs.iter().find(|z| z.len() != deg.dim) {
            return Err(LinalgError::DimensionMismatch {
                expected: deg.dim,
                found: z.len(),
            }
            .into());
        }
        deg.adapted
            .solve_many(zs)?
            .into_iter()
            .map(|x| {
                let x = x.ok_or(ComplexError::NotACocycle { degree: p })?;
                Ok(x[deg.coboundaries.len()..].to_vec())
            })
            .collect()
    }

    /// Whether the cocycle `z` is a coboundary.
    pub fn is_exact(&self, p: usize, z: &[Rational]) -> Result<bool, ComplexError> {
        Ok(is_zero_vector(&self.class_of(p, z)?))
    }
}

pub fn cohomology(c: &GradedComplex) -> CohomologySummary {
    let degrees = (0..=c.top_degree())
        .into_par_iter()
        .map(|p| {
            let dim = c.dim(p);
            let cocycles = c.differential(p).kernel();
            let coboundaries = c.incoming(p).rank_kernel_image().image;
            let mut cols = coboundaries.clone();
            cols.extend(cocycles.iter().cloned());
            let pivots = RatMatrix::from_columns(dim, &cols).rank_kernel_image().pivots;
            let representatives: Vec<Vector> = pivots
                .iter()
                .filter(|&&i| i >= coboundaries.len())
                .map(|&i| cols[i].clone())
                .collect();
            let mut adapted = coboundaries.clone();
            adapted.extend(representatives.iter().cloned());
            DegreeCohomology {
                betti: representatives.len(),
                adapted: RatMatrix::from_columns(dim, &adapted),
                cocycles,
                coboundaries,
                representatives,
                dim,
            }
        })
        .collect();
    CohomologySummary { degrees }
}

/// Tensor product with the Koszul sign `d(u ⊗ v) = du ⊗ v + (-1)^{|u|} u ⊗ dv`.
///
/// Basis of total degree `n`: pairs ordered by left degree, left index, right index.
pub fn tensor(a: &GradedComplex, b: &GradedComplex) -> GradedComplex {
    let top = a.top_degree() + b.top_degree();
    // offsets[n][i]: start of the block (a^i ⊗ b^{n-i}) inside degree n
    let mut offsets = vec![vec![0usize; top + 2]; top + 1];
    let mut labels = Vec::with_capacity(top + 1);
    for (n, row) in offsets.iter_mut().enumerate() {
        let mut acc = 0;
        let mut names = Vec::new();
        for (i, slot) in row.iter_mut().enumerate().take(n + 1) {
            *slot = acc;
            if n - i > b.top_degree() {
                continue;
            }
            for la in a.labels(i) {
                for lb in b.labels(n - i) {
                    names.push(format!("{la}⊗{lb}"));
                }
            }
            acc += a.dim(i) * b.dim(n - i);
        }
        row[n + 1] = acc;
        labels.push(names);
    }
    let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
    let mut d: Vec<RatMatrix> = (0..=top)
        .map(|n| RatMatrix::zeros(dims.get(n + 1).copied().unwrap_or(0), dims[n]))
        .collect();
    for n in 0..top {
        for i in 0..=n {
            let j = n - i;
            let (da, db) = (a.dim(i), b.dim(j));
            if da == 0 || db == 0 {
                continue;
            }
            let src = offsets[n][i];
            if let Some(dai) = a.differential_ref(i) {
                let dst = offsets[n + 1][i + 1];
                for (r, c, x) in dai.entries() {
                    for k in 0..db {
                        d[n].add_to(dst + r * db + k, src + c * db + k, x);
                    }
                }
            }
            if let Some(dbj) = b.differential_ref(j) {
                let dst = offsets[n + 1][i];
                let sign = if i % 2 == 1 { -Rational::one() } else { Rational::one() };
                for (r, c, x) in dbj.entries() {
                    let val = &sign * x;
                    for k in 0..da {
                        d[n].add_to(dst + k * b.dim(j + 1) + r, src + k * db + c, &val);
                    }
                }
            }
        }
    }
    GradedComplex { labels, d }
}

fn describe_vector(v: &[Rational], labels: &[String]) -> String {
    let nonzero: Vec<(usize, &Rational)> =
        v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    if let [(i, x)] = nonzero.as_slice() {
        if x.is_one() {
            return labels[*i].clone();
        }
    }
    let mut out = String::new();
    for (k, (i, x)) in nonzero.iter().enumerate() {
        let sign = if x.is_negative() { "-" } else { "+" };
        if k > 0 || x.is_negative() {
            out.push_str(sign);
        }
        let mag = x.abs();
        if !mag.is_one() {
            out.push_str(&format_rational(&mag));
            out.push('·');
        }
        out.push_str(&labels[*i]);
    }
    out
}

/// Restrict `c` to the span of the given per-degree vectors.
///
/// Each spanning list is reduced to a basis (first vectors that raise the
/// rank). Degrees beyond `subspaces.len()` are taken to be zero.
pub fn subcomplex_inclusion(
    c: &GradedComplex,
    subspaces: &[Vec<Vector>],
) -> Result<(GradedComplex, ChainMap), ComplexError> {
    let top = c.top_degree();
    let bases: Vec<Vec<Vector>> = (0..=top)
        .map(|p| match subspaces.get(p) {
            Some(vs) => independent_subset(vs, c.dim(p)),
            None => Vec::new(),
        })
        .collect();
    let mut d = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let next = bases.get(p + 1).cloned().unwrap_or_default();
        let next_matrix = RatMatrix::from_columns(c.dim(p + 1), &next);
        let dp = c.differential(p);
        let images = bases[p]
            .iter()
            .map(|v| dp.mul_vec(v))
            .collect::<Result<Vec<_>, _>>()?;
        let cols = next_matrix
            .solve_many(&images)?
            .into_iter()
            .enumerate()
            .map(|(index, x)| x.ok_or(ComplexError::NotStable { degree: p, index }))
            .collect::<Result<Vec<_>, _>>()?;
        d.push(RatMatrix::from_columns(next.len(), &cols));
    }
    let labels: Vec<Vec<String>> = bases
        .iter()
        .enumerate()
        .map(|(p, basis)| {
            basis
                .iter()
                .map(|v| describe_vector(v, c.labels(p)))
                .collect()
        })
        .collect();
    let sub = GradedComplex::new(labels, d)?;
    let maps = bases
        .iter()
        .enumerate()
        .map(|(p, basis)| RatMatrix::from_columns(c.dim(p), basis))
        .collect();
    let inclusion = ChainMap::new(sub.clone(), c.clone(), 0, maps)?;
    Ok((sub, inclusion))
}

/// Matrix of `f` on cohomology, in the representative bases of `hs` and `ht`.
pub fn induced_cohomology_map(
    f: &ChainMap,
    hs: &CohomologySummary,
    ht: &CohomologySummary,
) -> Result<Vec<RatMatrix>, ComplexError> {
    (0..=f.source.top_degree())
        .map(|p| {
            let q = p + f.shift;
            let reps = hs
                .degree(p)
                .map(|d| d.representatives.as_slice())
                .unwrap_or(&[]);
            let fp = f.component(p);
            let images = reps
                .iter()
                .map(|r| fp.mul_vec(r))
                .collect::<Result<Vec<_>, _>>()?;
            let cols = ht.classes_of(q, &images)?;
            Ok(RatMatrix::from_columns(ht.betti_at(q), &cols))
        })
        .collect()
}

/// Degreewise short exact sequence `0 -> K -> C -> Q -> 0` of degree-0 chain maps.
#[derive(Debug, Clone)]
pub struct ShortExactSequence {
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

impl ShortExactSequence {
    pub fn new(inclusion: ChainMap, projection: ChainMap) -> Result<Self, ComplexError> {
        if inclusion.shift != 0 || projection.shift != 0 {
            return Err(ComplexError::NotExact {
                degree: 0,
                reason: "maps must preserve degree".into(),
            });
        }
        if inclusion.target != projection.source {
            return Err(ComplexError::NotExact {
                degree: 0,
                reason: "middle complexes differ".into(),
            });
        }
        let total = &inclusion.target;
        for p in 0..=total.top_degree() {
            let i = inclusion.component(p);
            let q = projection.component(p);
            let (dk, dc, dq) = (
                inclusion.source.dim(p),
                total.dim(p),
                projection.target.dim(p),
            );
            if i.rank() != dk {
                return Err(ComplexError::NotExact {
                    degree: p,
                    reason: "inclusion not injective".into(),
                });
            }
            if q.rank() != dq {
                return Err(ComplexError::NotExact {
                    degree: p,
                    reason: "projection not surjective".into(),
                });
            }
            if dk + dq != dc || !q.mul(&i)?.is_zero() {
                return Err(ComplexError::NotExact {
                    degree: p,
                    reason: "image of inclusion differs from kernel of projection".into(),
                });
            }
        }
        Ok(ShortExactSequence {
            inclusion,
            projection,
        })
    }

    pub fn kernel(&self) -> &GradedComplex {
        &self.inclusion.source
    }

    pub fn total(&self) -> &GradedComplex {
        &self.inclusion.target
    }

    pub fn quotient(&self) -> &GradedComplex {
        &self.projection.target
    }

    /// Class in `H^{p+1}(K)` obtained from a chosen lift `c ∈ C^p` of a cocycle of `Q^p`.
    pub fn connecting_class(
        &self,
        hk: &CohomologySummary,
        p: usize,
        lift: &[Rational],
    ) -> Result<Vector, ComplexError> {
        let dc = self.total().differential(p).mul_vec(lift)?;
        let k = self
            .inclusion
            .component(p + 1)
            .solve(&dc)?
            .ok_or(ComplexError::LiftFailed { degree: p + 1 })?;
        hk.class_of(p + 1, &k)
    }

    /// The connecting map `H^p(Q) -> H^{p+1}(K)` by the zig-zag construction.
    pub fn connecting_homomorphism(
        &self,
        hk: &CohomologySummary,
        hq: &CohomologySummary,
        p: usize,
    ) -> Result<RatMatrix, ComplexError> {
        let reps = hq
            .degree(p)
            .map(|d| d.representatives.as_slice())
            .unwrap_or(&[]);
        let lifts = self
            .projection
            .component(p)
            .solve_many(reps)?
            .into_iter()
            .map(|x| x.ok_or(ComplexError::LiftFailed { degree: p }))
            .collect::<Result<Vec<_>, _>>()?;
        let dp = self.total().differential(p);
        let images = lifts
            .iter()
            .map(|c| dp.mul_vec(c))
            .collect::<Result<Vec<_>, _>>()?;
        let ks = self
            .inclusion
            .component(p + 1)
            .solve_many(&images)?
            .into_iter()
            .map(|x| x.ok_or(ComplexError::LiftFailed { degree: p + 1 }))
            .collect::<Result<Vec<_>, _>>()?;
        let cols = hk.classes_of(p + 1, &ks)?;
        Ok(RatMatrix::from_columns(hk.betti_at(p + 1), &cols))
    }

    pub fn long_exact_sequence(&self) -> Result<LongExactSequence, ComplexError> {
        let hk = cohomology(self.kernel());
        let hc = cohomology(self.total());
        let hq = cohomology(self.quotient());
        let i_star = induced_cohomology_map(&self.inclusion, &hk, &hc)?;
        let q_star = induced_cohomology_map(&self.projection, &hc, &hq)?;
        let top = self.total().top_degree();
        let delta = (0..=top)
            .map(|p| self.connecting_homomorphism(&hk, &hq, p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LongExactSequence {
            hk,
            hc,
            hq,
            i_star,
            q_star,
            delta,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LesTerm {
    Kernel,
    Total,
    Quotient,
}

/// Exactness bookkeeping at one group of the long exact sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesNode {
    pub degree: usize,
    pub term: LesTerm,
    pub dim: usize,
    pub incoming_rank: usize,
    pub outgoing_rank: usize,
}

impl LesNode {
    pub fn outgoing_nullity(&self) -> usize {
        self.dim - self.outgoing_rank
    }

    pub fn is_exact(&self) -> bool {
        self.incoming_rank == self.outgoing_nullity()
    }
}

/// `... -> H^p(K) -> H^p(C) -> H^p(Q) -> H^{p+1}(K) -> ...`
#[derive(Debug, Clone)]
pub struct LongExactSequence {
    pub hk: CohomologySummary,
    pub hc: CohomologySummary,
    pub hq: CohomologySummary,
    pub i_star: Vec<RatMatrix>,
    pub q_star: Vec<RatMatrix>,
    /// `delta[p]: H^p(Q) -> H^{p+1}(K)`
    pub delta: Vec<RatMatrix>,
}

impl LongExactSequence {
    pub fn nodes(&self) -> Vec<LesNode> {
        let rank = |ms: &[RatMatrix], p: usize| ms.get(p).map_or(0, RatMatrix::rank);
        let mut out = Vec::new();
        for p in 0..self.i_star.len() {
            let incoming_k = if p == 0 { 0 } else { rank(&self.delta, p - 1) };
            out.push(LesNode {
                degree: p,
                term: LesTerm::Kernel,
                dim: self.hk.betti_at(p),
                incoming_rank: incoming_k,
                outgoing_rank: rank(&self.i_star, p),
            });
            out.push(LesNode {
                degree: p,
                term: LesTerm::Total,
                dim: self.hc.betti_at(p),
                incoming_rank: rank(&self.i_star, p),
                outgoing_rank: rank(&self.q_star, p),
            });
            out.push(LesNode {
                degree: p,
                term: LesTerm::Quotient,
                dim: self.hq.betti_at(p),
                incoming_rank: rank(&self.q_star, p),
                outgoing_rank: rank(&self.delta, p),
            });
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.nodes().iter().all(LesNode::is_exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, unit_vector};

    fn labels(dims: &[usize]) -> Vec<Vec<String>> {
        dims.iter()
            .enumerate()
            .map(|(p, &n)| (0..n).map(|i| format!("c{p}_{i}")).collect())
            .collect()
    }

    /// h3 CE complex written out by hand in the blade basis
    /// degree 1: x1 x2 x3; degree 2: x1x2 x1x3 x2x3; dx3 = -x1x2.
    /// d(x1x3) = -x1 dx3 = x1x1x2 = 0, d(x2x3) = -x2 dx3 = 0.
    fn h3_by_hand() -> GradedComplex {
        let d0 = RatMatrix::zeros(3, 1);
        let d1 = RatMatrix::from_i64_rows(&[&[0, 0, -1], &[0, 0, 0], &[0, 0, 0]]);
        let d2 = RatMatrix::zeros(1, 3);
        let d3 = RatMatrix::zeros(0, 1);
        GradedComplex::new(labels(&[1, 3, 3, 1]), vec![d0, d1, d2, d3]).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_nonzero_square() {
        let bad = GradedComplex::new(labels(&[1, 1]), vec![RatMatrix::zeros(2, 1), RatMatrix::zeros(0, 1)]);
        assert!(matches!(bad, Err(ComplexError::Shape { degree: 0, .. })));
        let d0 = RatMatrix::from_i64_rows(&[&[1]]);
        let d1 = RatMatrix::from_i64_rows(&[&[1]]);
        let bad = GradedComplex::new(labels(&[1, 1, 1]), vec![d0, d1, RatMatrix::zeros(0, 1)]);
        assert_eq!(bad, Err(ComplexError::NotACochainComplex { degree: 0 }));
    }

    #[test]
    fn h3_betti() {
        assert_eq!(cohomology(&h3_by_hand()).betti(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn zero_differential_betti_is_dimension() {
        let c = GradedComplex::with_zero_differential(labels(&[1, 4, 6, 4, 1]));
        assert_eq!(cohomology(&c).betti(), vec![1, 4, 6, 4, 1]);
        let c = GradedComplex::with_zero_differential(labels(&[1, 1, 1, 1]));
        assert_eq!(cohomology(&c).betti(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn h3_quotient_dim_matches_betti() {
        let c = h3_by_hand();
        let z2 = c.differential(2).kernel();
        let b2 = c.differential(1).rank_kernel_image().image;
        assert_eq!(crate::linalg::quotient_dim(&z2, &b2, 3), Ok(2));
    }

    #[test]
    fn tensor_examples() {
        let h3 = h3_by_hand();
        let t = tensor(&h3, &h3);
        assert_eq!(cohomology(&t).betti(), vec![1, 4, 8, 10, 8, 4, 1]);

        let unit = tensor(&h3, &GradedComplex::point());
        assert_eq!(unit.dims(), h3.dims());
        assert_eq!(cohomology(&unit).betti(), cohomology(&h3).betti());
        for p in 0..=3 {
            assert_eq!(unit.differential(p), h3.differential(p));
        }

        let inv = GradedComplex::with_zero_differential(labels(&[1, 1, 1, 1]));
        let t = tensor(&inv, &inv);
        assert_eq!(t.dims(), vec![1, 2, 3, 4, 3, 2, 1]);
        assert!(t.has_zero_differential());
    }

    #[test]
    fn subcomplex_examples() {
        let c = h3_by_hand();
        let full: Vec<Vec<Vector>> = (0..=3)
            .map(|p| (0..c.dim(p)).map(|i| unit_vector(c.dim(p), i)).collect())
            .collect();
        let (sub, inc) = subcomplex_inclusion(&c, &full).unwrap();
        assert_eq!(sub, c);
        assert_eq!(inc, ChainMap::identity(&c));

        // {1; x1; x2x3; x1x2x3}
        let spans = vec![
            vec![unit_vector(1, 0)],
            vec![unit_vector(3, 0)],
            vec![unit_vector(3, 2)],
            vec![unit_vector(1, 0)],
        ];
        let (sub, _) = subcomplex_inclusion(&c, &spans).unwrap();
        assert_eq!(sub.dims(), vec![1, 1, 1, 1]);
        assert!(sub.has_zero_differential());

        let spans = vec![vec![], vec![unit_vector(3, 2)]];
        assert_eq!(
            subcomplex_inclusion(&c, &spans).unwrap_err(),
            ComplexError::NotStable { degree: 1, index: 0 }
        );
    }

    #[test]
    fn subcomplex_deduplicates_spanning_sets() {
        let c = GradedComplex::with_zero_differential(labels(&[1, 2]));
        let spans = vec![
            vec![unit_vector(1, 0), unit_vector(1, 0)],
            vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]],
        ];
        let (sub, _) = subcomplex_inclusion(&c, &spans).unwrap();
        assert_eq!(sub.dims(), vec![1, 1]);
        assert_eq!(sub.labels(1), ["c1_0+c1_1"]);
    }

    #[test]
    fn induced_maps_of_identity_and_zero() {
        let c = h3_by_hand();
        let h = cohomology(&c);
        let id = induced_cohomology_map(&ChainMap::identity(&c), &h, &h).unwrap();
        for (p, m) in id.iter().enumerate() {
            assert_eq!(*m, RatMatrix::identity(h.betti_at(p)));
        }
        let zero = induced_cohomology_map(&ChainMap::zero(&c, &c, 0), &h, &h).unwrap();
        assert!(zero.iter().all(RatMatrix::is_zero));
    }

    #[test]
    fn chain_map_validation() {
        let c = h3_by_hand();
        // Projection onto x3 in degree 1 does not commute with d.
        let mut maps: Vec<RatMatrix> = (0..=3).map(|p| RatMatrix::zeros(c.dim(p), c.dim(p))).collect();
        maps[1].set(2, 2, rat(1));
        assert!(matches!(
            ChainMap::new(c.clone(), c.clone(), 0, maps),
            Err(ComplexError::NotAChainMap { .. })
        ));
    }

    #[test]
    fn zero_kernel_gives_zero_connecting_map() {
        let c = h3_by_hand();
        let k = GradedComplex::with_zero_differential(vec![vec![]; 4]);
        let inc = ChainMap::zero(&k, &c, 0);
        let ses = ShortExactSequence::new(inc, ChainMap::identity(&c)).unwrap();
        let les = ses.long_exact_sequence().unwrap();
        assert!(les.delta.iter().all(RatMatrix::is_zero));
        assert!(les.is_exact());
    }

    #[test]
    fn split_sequence_with_zero_differential() {
        let a = GradedComplex::with_zero_differential(labels(&[1, 1]));
        let b = GradedComplex::with_zero_differential(labels(&[1, 2]));
        let c = GradedComplex::with_zero_differential(labels(&[2, 3]));
        let inc = ChainMap::new(
            a.clone(),
            c.clone(),
            0,
            vec![
                RatMatrix::from_i64_rows(&[&[1], &[0]]),
                RatMatrix::from_i64_rows(&[&[1], &[0], &[0]]),
            ],
        )
        .unwrap();
        let proj = ChainMap::new(
            c,
            b,
            0,
            vec![
                RatMatrix::from_i64_rows(&[&[0, 1]]),
                RatMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1]]),
            ],
        )
        .unwrap();
        let ses = ShortExactSequence::new(inc, proj).unwrap();
        let les = ses.long_exact_sequence().unwrap();
        assert!(les.delta.iter().all(RatMatrix::is_zero));
        assert!(les.is_exact());
    }

    #[test]
    fn nonexact_sequence_rejected() {
        let c = h3_by_hand();
        let err = ShortExactSequence::new(ChainMap::identity(&c), ChainMap::identity(&c)).unwrap_err();
        assert!(matches!(err, ComplexError::NotExact { .. }));
    }
}
