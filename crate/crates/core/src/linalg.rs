//! Exact linear algebra over the rationals.
//!
//! Matrices are stored sparsely as sorted coordinate maps. All elimination is
//! exact Gauss-Jordan reduction with the pivot taken as the first nonzero entry
//! in column order, so bases produced here are reproducible bit for bit.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Exact scalar. Always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Dense column vector.
pub type Vector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {index} of the smaller family is not in the span of the larger one")]
    NotContained { index: usize },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vector(len: usize) -> Vector {
    vec![Rational::zero(); len]
}

pub fn unit_vector(len: usize, at: usize) -> Vector {
    let mut v = zero_vector(len);
    v[at] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

type SparseRow = BTreeMap<usize, Rational>;

/// Sparse rational matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

/// Output of [`RatMatrix::rank_kernel_image`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Vec<Vector>,
    pub image: Vec<Vector>,
    /// Pivot columns of the reduced row echelon form, ascending.
    pub pivots: Vec<usize>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has wrong length");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: &Rational) {
        let v = self.get(row, col) + value;
        self.set(row, col, v);
    }

    /// Nonzero entries in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn column(&self, col: usize) -> Vector {
        let mut v = zero_vector(self.rows);
        for (&(r, c), x) in &self.entries {
            if c == col {
                v[r] = x.clone();
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<Vector> {
        let mut cols = vec![zero_vector(self.rows); self.cols];
        for (&(r, c), x) in &self.entries {
            cols[c][r] = x.clone();
        }
        cols
    }

    pub fn transpose(&self) -> Self {
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = zero_vector(self.rows);
        for (&(r, c), x) in &self.entries {
            if !v[c].is_zero() {
                out[r] += x * &v[c];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut by_row: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            for &(c, b) in &by_row[k] {
                out.add_to(r, c, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        if s.is_zero() {
            return out;
        }
        for (&k, v) in &self.entries {
            out.entries.insert(k, v * s);
        }
        out
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_to(r, c, &-v);
        }
        Ok(out)
    }

    fn sparse_rows(&self) -> Vec<SparseRow> {
        let mut rows = vec![SparseRow::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows
    }

    pub fn rank(&self) -> usize {
        Echelon::reduce(self.sparse_rows(), self.cols).pivots.len()
    }

    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let ech = Echelon::reduce(self.sparse_rows(), self.cols);
        let kernel = ech.kernel(self.cols);
        let image = ech.pivots.iter().map(|&c| self.column(c)).collect();
        RankKernelImage {
            rank: ech.pivots.len(),
            kernel,
            image,
            pivots: ech.pivots,
        }
    }

    pub fn kernel(&self) -> Vec<Vector> {
        Echelon::reduce(self.sparse_rows(), self.cols).kernel(self.cols)
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is outside the column space.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vector>, LinalgError> {
        Ok(self
            .solve_many(std::slice::from_ref(&b.to_vec()))?
            .pop()
            .flatten())
    }

    /// [`solve`](Self::solve) for several right-hand sides with one elimination.
    pub fn solve_many(&self, bs: &[Vector]) -> Result<Vec<Option<Vector>>, LinalgError> {
        let mut rows = self.sparse_rows();
        for (j, b) in bs.iter().enumerate() {
            if b.len() != self.rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.rows,
                    found: b.len(),
                });
            }
            for (r, v) in b.iter().enumerate() {
                if !v.is_zero() {
                    rows[r].insert(self.cols + j, v.clone());
                }
            }
        }
        let (ech, rest) = Echelon::reduce_keeping(rows, self.cols);
        let mut out = Vec::with_capacity(bs.len());
        for j in 0..bs.len() {
            let col = self.cols + j;
            if rest.iter().any(|row| row.contains_key(&col)) {
                out.push(None);
                continue;
            }
            let mut x = zero_vector(self.cols);
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                if let Some(v) = row.get(&col) {
                    x[pc] = v.clone();
                }
            }
            out.push(Some(x));
        }
        Ok(out)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form.
struct Echelon {
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn reduce(rows: Vec<SparseRow>, cols: usize) -> Echelon {
        Echelon::reduce_keeping(rows, cols).0
    }

    /// Pivot only within the first `cols` columns; entries beyond are carried
    /// along. Also returns the rows left without a pivot.
    fn reduce_keeping(mut rows: Vec<SparseRow>, cols: usize) -> (Echelon, Vec<SparseRow>) {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&r| rows[r].contains_key(&col)) else {
                continue;
            };
            rows.swap(rank, found);
            let inv = rows[rank][&col].recip();
            for v in rows[rank].values_mut() {
                *v *= &inv;
            }
            let pivot_row = std::mem::take(&mut rows[rank]);
            for (i, row) in rows.iter_mut().enumerate() {
                if i == rank {
                    continue;
                }
                if let Some(f) = row.get(&col).cloned() {
                    axpy(row, &f, &pivot_row);
                }
            }
            rows[rank] = pivot_row;
            pivots.push(col);
            rank += 1;
        }
        let rest = rows.split_off(rank);
        (Echelon { rows, pivots }, rest)
    }

    fn kernel(&self, cols: usize) -> Vec<Vector> {
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = unit_vector(cols, free);
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    if let Some(x) = row.get(&free) {
                        v[pc] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

/// `target -= f * src`, dropping cancelled entries.
fn axpy(target: &mut SparseRow, f: &Rational, src: &SparseRow) {
    for (&c, v) in src {
        let prod = f * v;
        match target.get_mut(&c) {
            Some(t) => {
                *t -= prod;
                if t.is_zero() {
                    target.remove(&c);
                }
            }
            None => {
                target.insert(c, -prod);
            }
        }
    }
}

/// Dimension of the span of `vectors`, each of length `len`.
pub fn span_rank(vectors: &[Vector], len: usize) -> usize {
    RatMatrix::from_columns(len, vectors).rank()
}

/// A basis of the span of `vectors`: the first vectors (in order) that increase the rank.
pub fn independent_subset(vectors: &[Vector], len: usize) -> Vec<Vector> {
    let m = RatMatrix::from_columns(len, vectors);
    m.rank_kernel_image().image
}

/// Coordinates of `v` with respect to the columns `basis`, if `v` lies in their span.
pub fn coordinates(basis: &[Vector], v: &[Rational]) -> Result<Option<Vector>, LinalgError> {
    RatMatrix::from_columns(v.len(), basis).solve(v)
}

/// `dim span(big) - dim span(small)`, requiring `span(small)` to lie inside `span(big)`.
pub fn quotient_dim(big: &[Vector], small: &[Vector], len: usize) -> Result<usize, LinalgError> {
    if let Some(v) = big.iter().chain(small).find(|v| v.len() != len) {
        return Err(LinalgError::DimensionMismatch {
            expected: len,
            found: v.len(),
        });
    }
    let big_rank = span_rank(big, len);
    let mut all = big.to_vec();
    for (i, v) in small.iter().enumerate() {
        all.push(v.clone());
        if span_rank(&all, len) != big_rank {
            return Err(LinalgError::NotContained { index: i });
        }
    }
    Ok(big_rank - span_rank(small, len))
}

/// Render a rational as `n` or `n/d`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecr(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    /// Leibniz expansion; independent of the elimination code.
    fn leibniz_det(m: &[Vec<Rational>]) -> Rational {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        let mut total = Rational::zero();
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut term = Rational::one();
            for (i, &pi) in p.iter().enumerate() {
                term *= &m[i][pi];
            }
            if inversions % 2 == 1 {
                term = -term;
            }
            total += term;
        }
        total
    }

    #[test]
    fn proportional_rows() {
        let m = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let rki = m.rank_kernel_image();
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel, vec![vecr(&[-2, 1])]);
        assert_eq!(rki.image, vec![vecr(&[1, 2])]);
    }

    #[test]
    fn identity_has_full_rank() {
        let rki = RatMatrix::identity(3).rank_kernel_image();
        assert_eq!(rki.rank, 3);
        assert!(rki.kernel.is_empty());
    }

    #[test]
    fn hilbert_like_matrix_is_invertible() {
        // entries 1/(i+j+1), i, j = 1..5
        let rows: Vec<Vec<Rational>> = (1..=5)
            .map(|i| (1..=5).map(|j| ratio(1, i + j + 1)).collect())
            .collect();
        let det = leibniz_det(&rows);
        assert!(!det.is_zero());
        assert_eq!(RatMatrix::from_rows(&rows).rank(), 5);
    }

    #[test]
    fn solve_cases() {
        let x = RatMatrix::identity(2)
            .solve(&[rat(3), ratio(1, 2)])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![rat(3), ratio(1, 2)]);

        let m = RatMatrix::from_i64_rows(&[&[1, 1]]);
        let x = m.solve(&[rat(7)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], rat(7));

        let m = RatMatrix::from_i64_rows(&[&[1], &[2]]);
        assert_eq!(m.solve(&[rat(1), rat(3)]).unwrap(), None);
        assert!(matches!(
            m.solve(&[rat(1)]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotient_dims() {
        let e1 = vecr(&[1, 0]);
        let e2 = vecr(&[0, 1]);
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], std::slice::from_ref(&e1), 2), Ok(1));
        let s = vecr(&[1, 1]);
        assert_eq!(quotient_dim(&[e1.clone(), s, e2.clone()], &[], 2), Ok(2));
        assert_eq!(
            quotient_dim(&[e1], &[e2], 2),
            Err(LinalgError::NotContained { index: 0 })
        );
    }

    #[test]
    fn matrix_product_and_transpose() {
        let a = RatMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, -1]]);
        let b = RatMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[2, 3]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, RatMatrix::from_i64_rows(&[&[1, 2], &[-2, -2]]));
        assert_eq!(ab.transpose(), b.transpose().mul(&a.transpose()).unwrap());
        assert!(a.mul(&a).is_err());
    }

    fn arb_matrix() -> impl proptest::strategy::Strategy<Value = RatMatrix> {
        use proptest::prelude::*;
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-2i64..=2, 1i64..=2), r * c).prop_map(move |xs| {
                let rows: Vec<Vec<Rational>> = xs
                    .chunks(c)
                    .map(|row| row.iter().map(|&(n, d)| ratio(n, d)).collect())
                    .collect();
                RatMatrix::from_rows(&rows)
            })
        })
    }

    proptest::proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in arb_matrix()) {
            proptest::prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_annihilates(m in arb_matrix()) {
            let rki = m.rank_kernel_image();
            proptest::prop_assert_eq!(rki.rank + rki.kernel.len(), m.cols());
            for v in &rki.kernel {
                proptest::prop_assert!(is_zero_vector(&m.mul_vec(v).unwrap()));
            }
            proptest::prop_assert_eq!(span_rank(&rki.image, m.rows()), rki.rank);
        }

        #[test]
        fn solve_recovers_image_points(m in arb_matrix(), seed in proptest::prelude::any::<u32>()) {
            let x: Vector = (0..m.cols()).map(|i| rat(((seed >> (i * 3)) & 7) as i64 - 3)).collect();
            let b = m.mul_vec(&x).unwrap();
            let y = m.solve(&b).unwrap().expect("b is in the image");
            proptest::prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
            proptest::prop_assert_eq!(m.rank_kernel_image(), m.rank_kernel_image());
        }
    }
}
