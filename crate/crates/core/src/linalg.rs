//! Dense exact linear algebra over a generic scalar ring.
//!
//! Elimination is fraction-free (Bareiss-style Gauss-Jordan): every
//! intermediate entry is a minor of the input, so integer inputs stay
//! integral and no rational arithmetic is needed for rank, determinant,
//! nullspace or unimodular inversion.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::Poly;
use crate::scalar::{IntegerRing, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(BigInt),
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("companion matrix needs a monic polynomial of degree at least 1")]
    NotMonic,
}

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Ragged);
        }
        let nrows = rows.len();
        Ok(Matrix {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::Ragged);
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| {
            columns[j][i].clone()
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_iter().map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Option<U>) -> Option<Matrix<U>> {
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Option<Vec<U>>>()?,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        self.mul_into(other, &mut out)?;
        Ok(out)
    }

    /// Writes `self * other` into `out`, which must already have the right shape.
    pub fn mul_into(&self, other: &Self, out: &mut Self) -> Result<()> {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(out.shape(), (self.rows, other.cols));
        for i in 0..self.rows {
            let lhs = self.row(i);
            for j in 0..other.cols {
                let mut acc = T::zero();
                for (k, a) in lhs.iter().enumerate() {
                    let b = &other.data[k * other.cols + j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let term = a.checked_mul(b).ok_or(LinalgError::Overflow("mat_mul"))?;
                    acc = acc
                        .checked_add(&term)
                        .ok_or(LinalgError::Overflow("mat_mul"))?;
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        Ok(())
    }

    pub fn try_mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if self.cols != x.len() {
            return Err(LinalgError::DimensionMismatch {
                op: "mat_vec",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        self.row_iter()
            .map(|row| dot(row, x).ok_or(LinalgError::Overflow("mat_vec")))
            .collect()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "mat_add", |a, b| a.checked_add(b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "mat_sub", |a, b| a.checked_sub(b))
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(&T, &T) -> Option<T>,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b).ok_or(LinalgError::Overflow(op)))
            .collect::<Result<_>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn try_scale(&self, s: &T) -> Result<Self> {
        self.try_map(|x| x.checked_mul(s))
            .ok_or(LinalgError::Overflow("scale"))
    }

    /// The bilinear form `x^T self y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> Result<T> {
        let sy = self.try_mul_vec(y)?;
        if x.len() != sy.len() {
            return Err(LinalgError::DimensionMismatch {
                op: "bilinear",
                left: (1, x.len()),
                right: self.shape(),
            });
        }
        dot(x, &sy).ok_or(LinalgError::Overflow("bilinear"))
    }

    /// Sub-block with the given row and column ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(r0 + i, c0 + j)].clone()
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal and the
/// negated ascending coefficients in the last column, so that its
/// characteristic polynomial is `p`.
pub fn companion_matrix<T: Ring>(p: &Poly<T>) -> Result<Matrix<T>> {
    let n = match p.degree() {
        Some(n) if n >= 1 && p.is_monic() => n,
        _ => return Err(LinalgError::NotMonic),
    };
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        if i > 0 {
            m[(i, i - 1)] = T::one();
        }
        m[(i, n - 1)] = -p.coeff(i);
    }
    Ok(m)
}

/// Inner product with overflow checking.
pub fn dot<T: Ring>(x: &[T], y: &[T]) -> Option<T> {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).try_fold(T::zero(), |acc, (a, b)| {
        if a.is_zero() || b.is_zero() {
            Some(acc)
        } else {
            acc.checked_add(&a.checked_mul(b)?)
        }
    })
}

/// Standard basis vector `e_i` (0-based) of length `n`.
pub fn unit_vector<T: Ring>(n: usize, i: usize) -> Vec<T> {
    (0..n)
        .map(|j| if i == j { T::one() } else { T::zero() })
        .collect()
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on shape mismatch or overflow, like primitive integer arithmetic.
impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_mul(rhs).expect("matrix multiplication failed")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.data.chunks(self.cols.max(1)))
            .finish()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Fraction-free reduced row echelon form.
///
/// Every pivot entry equals `denominator`, the other entries of pivot columns
/// are zero. For square nonsingular input `denominator` is `±det`, with the
/// sign given by the parity of `swaps`.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pub matrix: Matrix<T>,
    pub pivots: Vec<usize>,
    pub denominator: T,
    pub swaps: usize,
}

impl<T: IntegerRing> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Integer nullspace basis, one vector per free column, each primitive
    /// with first nonzero entry positive.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let n = self.matrix.cols();
        let free = (0..n).filter(|c| !self.pivots.contains(c));
        free.map(|f| {
            let mut x = vec![T::zero(); n];
            x[f] = self.denominator.clone();
            for (r, &p) in self.pivots.iter().enumerate() {
                x[p] = -self.matrix[(r, f)].clone();
            }
            primitive_part(&x)
        })
        .collect()
    }
}

impl<T: IntegerRing> Matrix<T> {
    pub fn fraction_free_rref(&self) -> Result<Echelon<T>> {
        let overflow = || LinalgError::Overflow("elimination");
        let mut m = self.clone();
        let mut prev = T::one();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
                swaps += 1;
            }
            let pivot = m[(r, c)].clone();
            for i in (0..m.rows).filter(|&i| i != r) {
                let factor = m[(i, c)].clone();
                for j in (0..m.cols).filter(|&j| j != c) {
                    let a = pivot.checked_mul(&m[(i, j)]).ok_or_else(overflow)?;
                    let b = factor.checked_mul(&m[(r, j)]).ok_or_else(overflow)?;
                    let num = a.checked_sub(&b).ok_or_else(overflow)?;
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "inexact fraction-free division");
                    m[(i, j)] = q;
                }
                m[(i, c)] = T::zero();
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        Ok(Echelon {
            matrix: m,
            pivots,
            denominator: prev,
            swaps,
        })
    }

    pub fn try_rank(&self) -> Result<usize> {
        Ok(self.fraction_free_rref()?.rank())
    }

    pub fn try_determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        if self.rows == 0 {
            return Ok(T::one());
        }
        let e = self.fraction_free_rref()?;
        if e.rank() < self.rows {
            return Ok(T::zero());
        }
        Ok(if e.swaps % 2 == 0 {
            e.denominator
        } else {
            -e.denominator
        })
    }

    pub fn try_nullspace(&self) -> Result<Vec<Vec<T>>> {
        Ok(self.fraction_free_rref()?.nullspace())
    }

    /// Exact inverse of a matrix with determinant ±1.
    pub fn try_unimodular_inverse(&self) -> Result<Self> {
        let det = self.try_determinant()?;
        if !det.abs().is_one() {
            return Err(LinalgError::NotUnimodular(det.to_bigint()));
        }
        let n = self.rows;
        let augmented = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let e = augmented.fraction_free_rref()?;
        debug_assert_eq!(e.pivots, (0..n).collect::<Vec<_>>());
        // the pivot value is ±1, so dividing by it is multiplying by it
        let d = e.denominator;
        Ok(Self::from_fn(n, n, |i, j| {
            e.matrix[(i, n + j)].clone() * d.clone()
        }))
    }

    /// Characteristic polynomial `det(xI - M)`, ascending coefficients,
    /// by the Faddeev-LeVerrier recurrence (its divisions are exact over ℤ).
    pub fn try_characteristic_polynomial(&self) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let overflow = || LinalgError::Overflow("characteristic polynomial");
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut aux = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.try_mul(&aux)?;
            for i in 0..n {
                next[(i, i)] = next[(i, i)]
                    .checked_add(&coeffs[n - k + 1])
                    .ok_or_else(overflow)?;
            }
            let am = self.try_mul(&next)?;
            let trace = (0..n).try_fold(T::zero(), |acc, i| acc.checked_add(&am[(i, i)]));
            let trace = trace.ok_or_else(overflow)?;
            let k_t = T::from_bigint(&BigInt::from(k)).ok_or_else(overflow)?;
            coeffs[n - k] = -(trace / k_t);
            aux = next;
        }
        Ok(coeffs)
    }
}

/// Divides out the content and makes the first nonzero entry positive.
pub fn primitive_part<T: IntegerRing>(x: &[T]) -> Vec<T> {
    let content = x.iter().fold(T::zero(), |g, a| g.gcd(a));
    if content.is_zero() {
        return x.to_vec();
    }
    let first_negative = x
        .iter()
        .find(|a| !a.is_zero())
        .is_some_and(|a| a.is_negative());
    let content = if first_negative { -content } else { content };
    x.iter().map(|a| a.clone() / content.clone()).collect()
}

/// Nonnegative gcd of all entries (`gcd(x, 0) = x`).
pub fn content<T: IntegerRing>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |g, a| g.gcd(a))
}

/// Rank over ℚ of the given vectors equals their number.
pub fn try_linearly_independent<T: IntegerRing>(vectors: &[Vec<T>]) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(true);
    }
    let m = Matrix::from_rows(vectors.to_vec())?;
    Ok(m.try_rank()? == vectors.len())
}

/// Arbitrary-precision wrappers: these cannot overflow, so only genuine
/// precondition failures surface as errors.
impl Matrix<BigInt> {
    pub fn rank(&self) -> usize {
        self.try_rank().expect("bigint elimination cannot overflow")
    }

    pub fn determinant(&self) -> BigInt {
        self.try_determinant()
            .expect("determinant of non-square matrix")
    }

    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        self.try_nullspace()
            .expect("bigint elimination cannot overflow")
    }

    pub fn unimodular_inverse(&self) -> Result<Self> {
        self.try_unimodular_inverse()
    }

    pub fn characteristic_polynomial(&self) -> Vec<BigInt> {
        self.try_characteristic_polynomial()
            .expect("characteristic polynomial of non-square matrix")
    }

    pub fn to_rational(&self) -> Matrix<BigRational> {
        self.map(|x| BigRational::from_integer(x.clone()))
    }
}

pub fn linearly_independent(vectors: &[Vec<BigInt>]) -> bool {
    assert!(
        vectors.windows(2).all(|w| w[0].len() == w[1].len()),
        "vectors must have equal length"
    );
    try_linearly_independent(vectors).expect("bigint elimination cannot overflow")
}

/// Coordinates of `target` in the basis `basis` (assumed independent), or
/// `None` when `target` is outside their span.
pub fn coordinates_in_basis(basis: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let mut columns = basis.to_vec();
    columns.push(target.to_vec());
    let m = Matrix::from_columns(&columns).ok()?;
    let kernel = m.nullspace();
    let k = basis.len();
    let x = kernel.into_iter().find(|x| !x[k].is_zero())?;
    let scale = -x[k].clone();
    Some(
        x[..k]
            .iter()
            .map(|a| BigRational::new(a.clone(), scale.clone()))
            .collect(),
    )
}

/// A homogeneous linear condition on the entries of an unknown `n x n` matrix `X`.
#[derive(Debug, Clone)]
pub enum MatrixConstraint<T> {
    /// `M^T X M = X`
    Invariant(Matrix<T>),
    /// `X^T = X`
    Symmetric,
    /// `X^T = -X`
    Antisymmetric,
    /// `Σ c_k X_k = 0` over the row-major entries of `X`.
    Linear(Vec<T>),
}

impl<T: Ring> MatrixConstraint<T> {
    fn equations(&self, n: usize) -> Result<Vec<Vec<T>>> {
        let idx = |i: usize, j: usize| i * n + j;
        let mut out = Vec::new();
        match self {
            MatrixConstraint::Invariant(m) => {
                if m.shape() != (n, n) {
                    return Err(LinalgError::DimensionMismatch {
                        op: "invariance constraint",
                        left: m.shape(),
                        right: (n, n),
                    });
                }
                // (M^T X M)_{ij} = Σ_{k,l} M_{ki} X_{kl} M_{lj}
                for i in 0..n {
                    for j in 0..n {
                        let mut row = vec![T::zero(); n * n];
                        for k in 0..n {
                            for l in 0..n {
                                row[idx(k, l)] = m[(k, i)]
                                    .checked_mul(&m[(l, j)])
                                    .ok_or(LinalgError::Overflow("constraint"))?;
                            }
                        }
                        row[idx(i, j)] = row[idx(i, j)].clone() - T::one();
                        out.push(row);
                    }
                }
            }
            MatrixConstraint::Symmetric | MatrixConstraint::Antisymmetric => {
                let sign = if matches!(self, MatrixConstraint::Symmetric) {
                    -T::one()
                } else {
                    T::one()
                };
                for i in 0..n {
                    for j in i..n {
                        let mut row = vec![T::zero(); n * n];
                        row[idx(i, j)] = T::one();
                        row[idx(j, i)] = row[idx(j, i)].clone() + sign.clone();
                        if row.iter().any(|c| !c.is_zero()) {
                            out.push(row);
                        }
                    }
                }
            }
            MatrixConstraint::Linear(coeffs) => {
                if coeffs.len() != n * n {
                    return Err(LinalgError::DimensionMismatch {
                        op: "linear constraint",
                        left: (1, coeffs.len()),
                        right: (1, n * n),
                    });
                }
                out.push(coeffs.clone());
            }
        }
        Ok(out)
    }
}

/// Basis of the space of `n x n` matrices satisfying every constraint.
///
/// Each basis matrix has integer entries with content 1 and a positive first
/// nonzero entry in row-major order. The basis is the one read off the
/// reduced echelon form, so it is reproducible.
pub fn kernel_basis<T: IntegerRing>(
    n: usize,
    constraints: &[MatrixConstraint<T>],
) -> Result<Vec<Matrix<T>>> {
    let mut rows = Vec::new();
    for c in constraints {
        rows.extend(c.equations(n)?);
    }
    let system = if rows.is_empty() {
        Matrix::zeros(0, n * n)
    } else {
        Matrix::from_rows(rows)?
    };
    Ok(system
        .try_nullspace()?
        .into_iter()
        .map(|x| Matrix {
            rows: n,
            cols: n,
            data: x,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};
    use proptest::prelude::*;

    fn int(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
        .unwrap()
    }

    fn ivec(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().copied().map(BigInt::from).collect()
    }

    // Laplace expansion along the first row, independent of elimination.
    fn cofactor_det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn identity_is_neutral() {
        let m = int(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(&Matrix::identity(3) * &m, m);
        assert_eq!(&m * &Matrix::identity(3), m);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = int(vec![vec![1, 2]]);
        assert!(matches!(
            a.try_mul(&a),
            Err(LinalgError::DimensionMismatch { .. })
        ));
        assert!(a.try_mul_vec(&ivec(&[1, 2, 3])).is_err());
    }

    #[test]
    fn fast_path_overflow_is_detected() {
        let big = Matrix::<i128>::from_fn(2, 2, |_, _| i128::MAX / 2);
        assert_eq!(big.try_mul(&big), Err(LinalgError::Overflow("mat_mul")));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let rows = vec![
            vec![2, -1, 0, 3],
            vec![1, 4, -2, 0],
            vec![0, 5, 1, 1],
            vec![3, 0, 2, -4],
        ];
        let m = int(rows.clone());
        assert_eq!(m.determinant(), BigInt::from(cofactor_det(&rows)));
        // a row swap is needed here
        let rows = vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]];
        assert_eq!(
            int(rows.clone()).determinant(),
            BigInt::from(cofactor_det(&rows))
        );
    }

    #[test]
    fn unimodular_inverse_rejects_other_determinants() {
        let m = int(vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(
            m.unimodular_inverse(),
            Err(LinalgError::NotUnimodular(BigInt::from(2)))
        );
        let i = Matrix::<BigInt>::identity(4);
        assert_eq!(i.unimodular_inverse().unwrap(), i);
    }

    #[test]
    fn independence_small_cases() {
        let v = ivec(&[1, 2, 3]);
        assert!(!linearly_independent(&[v.clone(), v.clone(), v.clone()]));
        assert!(linearly_independent(&[]));
        assert!(linearly_independent(&[
            ivec(&[1, 0, 0]),
            ivec(&[1, 1, 0]),
            ivec(&[1, 1, 1])
        ]));
        assert!(!linearly_independent(&[ivec(&[0, 0, 0])]));
    }

    #[test]
    fn kernel_without_constraints_is_everything() {
        let basis = kernel_basis::<BigInt>(2, &[]).unwrap();
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn symmetric_and_antisymmetric_force_zero() {
        let basis = kernel_basis::<BigInt>(
            3,
            &[MatrixConstraint::Symmetric, MatrixConstraint::Antisymmetric],
        )
        .unwrap();
        assert!(basis.is_empty());
        let anti = kernel_basis::<BigInt>(4, &[MatrixConstraint::Antisymmetric]).unwrap();
        assert_eq!(anti.len(), 6);
        let sym = kernel_basis::<BigInt>(4, &[MatrixConstraint::Symmetric]).unwrap();
        assert_eq!(sym.len(), 10);
    }

    #[test]
    fn kernel_basis_is_normalized() {
        let basis =
            kernel_basis::<BigInt>(2, &[MatrixConstraint::Linear(ivec(&[2, 4, 0, 0]))]).unwrap();
        for b in &basis {
            let entries = b.entries();
            assert!(content(entries).is_one());
            assert!(entries.iter().find(|x| !x.is_zero()).unwrap().is_positive());
            assert!(dot(entries, &ivec(&[2, 4, 0, 0])).unwrap().is_zero());
        }
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn coordinates_in_span() {
        let basis = vec![ivec(&[1, 0, 0]), ivec(&[0, 2, 0])];
        let coords = coordinates_in_basis(&basis, &ivec(&[3, 1, 0])).unwrap();
        assert_eq!(coords[0], BigRational::from_integer(3.into()));
        assert_eq!(coords[1], BigRational::new(1.into(), 2.into()));
        assert!(coordinates_in_basis(&basis, &ivec(&[0, 0, 1])).is_none());
    }

    #[test]
    fn companion_examples() {
        let p: Poly<BigInt> = "1,-3,1".parse().unwrap();
        assert_eq!(
            companion_matrix(&p).unwrap(),
            int(vec![vec![0, -1], vec![1, 3]])
        );

        let mum: Poly<BigInt> = "1,-6,15,-20,15,-6,1".parse().unwrap();
        let a = companion_matrix(&mum).unwrap();
        assert_eq!(a.column(5), ivec(&[-1, 6, -15, 20, -15, 6]));
        assert_eq!(
            a.try_mul_vec(&unit_vector(6, 0)).unwrap(),
            unit_vector(6, 1)
        );
        assert!((&a * &a.unimodular_inverse().unwrap()).is_identity());

        let phi9: Poly<BigInt> = "1,0,0,1,0,0,1".parse().unwrap();
        assert_eq!(
            companion_matrix(&phi9).unwrap().column(5),
            ivec(&[-1, 0, 0, -1, 0, 0])
        );

        let not_monic: Poly<BigInt> = "1,2".parse().unwrap();
        assert_eq!(companion_matrix(&not_monic), Err(LinalgError::NotMonic));
        assert_eq!(
            companion_matrix(&Poly::<BigInt>::one()),
            Err(LinalgError::NotMonic)
        );
    }

    #[test]
    fn characteristic_polynomial_of_small_matrix() {
        // [[0,-1],[1,3]] is the companion matrix of x^2 - 3x + 1
        let m = int(vec![vec![0, -1], vec![1, 3]]);
        assert_eq!(m.characteristic_polynomial(), ivec(&[1, -3, 1]));
    }

    fn small_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-5i64..=5, len)
    }

    fn gram_det(vs: &[Vec<i64>]) -> i128 {
        let g: Vec<Vec<i64>> = vs
            .iter()
            .map(|a| {
                vs.iter()
                    .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect();
        cofactor_det(&g)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        // Independent over ℚ iff the Gram determinant is nonzero.
        #[test]
        fn independence_agrees_with_gram_determinant(
            (a, b, c) in (1usize..=6).prop_flat_map(|n| (small_vec(n), small_vec(n), small_vec(n)))
        ) {
            let vs = vec![a, b, c];
            let big: Vec<Vec<BigInt>> = vs.iter().map(|v| ivec(v)).collect();
            prop_assert_eq!(linearly_independent(&big), gram_det(&vs) != 0);
        }
    }

    proptest! {
        #[test]
        fn determinant_agrees_with_laplace(rows in (1usize..=5).prop_flat_map(|n| prop::collection::vec(small_vec(n), n))) {
            prop_assert_eq!(int(rows.clone()).determinant(), BigInt::from(cofactor_det(&rows)));
        }

        #[test]
        fn nullspace_vectors_are_annihilated(rows in (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(small_vec(c), r))) {
            let m = int(rows);
            let kernel = m.nullspace();
            prop_assert_eq!(kernel.len() + m.rank(), m.cols());
            for x in kernel {
                prop_assert!(m.try_mul_vec(&x).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn unimodular_inverse_of_products(ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..12)) {
            // products of elementary matrices are unimodular
            let mut m = Matrix::<BigInt>::identity(4);
            for (i, j, s) in ops {
                if i == j { continue; }
                let mut e = Matrix::<BigInt>::identity(4);
                e[(i, j)] = BigInt::from(s);
                m = &m * &e;
            }
            let inv = m.unimodular_inverse().unwrap();
            prop_assert!((&m * &inv).is_identity());
            prop_assert!((&inv * &m).is_identity());
        }

        // det(tI - C) evaluated at integer points, compared against p(t)
        #[test]
        fn companion_has_the_right_characteristic_polynomial(
            lower in (1usize..=8).prop_flat_map(|n| prop::collection::vec(-6i64..=6, n))
        ) {
            let mut coeffs = ivec(&lower);
            coeffs.push(BigInt::one());
            let p = Poly::new(coeffs.clone());
            let c = companion_matrix(&p).unwrap();
            prop_assert_eq!(c.characteristic_polynomial(), coeffs);
            let n = c.rows();
            for t in -2i64..=2 {
                let shifted: Vec<Vec<i64>> = (0..n)
                    .map(|i| (0..n).map(|j| {
                        let x: i64 = (&c[(i, j)]).try_into().unwrap();
                        if i == j { t - x } else { -x }
                    }).collect())
                    .collect();
                prop_assert_eq!(BigInt::from(cofactor_det(&shifted)), p.eval(&BigInt::from(t)));
            }
        }

        #[test]
        fn generic_paths_agree(rows in prop::collection::vec(small_vec(4), 4)) {
            let fast = Matrix::<i128>::from_rows(rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()).unwrap();
            let big = int(rows);
            prop_assert_eq!(BigInt::from(fast.try_determinant().unwrap()), big.determinant());
            prop_assert_eq!(fast.try_rank().unwrap(), big.rank());
        }
    }
}
