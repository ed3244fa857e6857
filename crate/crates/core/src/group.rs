//! Group data of a pair: the companion generators `A`, `B`, the
//! transvection `C = A^-1 B`, the vector `v = (C - I) e_n` and the invariant
//! symplectic form `Ω`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{companion_matrix, kernel_basis, unit_vector, LinalgError, MatrixConstraint};
use crate::pairs::QualifiedPair;
use crate::{IntMatrix, IntPoly, IntVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("f and g have different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("invariant antisymmetric forms span a space of dimension {0}, expected 1")]
    DimensionNotOne(usize),
    #[error("invariant antisymmetric form is degenerate")]
    Degenerate,
}

/// Companion matrices of `f` and `g` with their exact inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorPair {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub a_inv: IntMatrix,
    pub b_inv: IntMatrix,
    pub n: usize,
}

impl GeneratorPair {
    pub fn from_polys(f: &IntPoly, g: &IntPoly) -> Result<Self, GroupError> {
        let a = companion_matrix(f)?;
        let b = companion_matrix(g)?;
        if a.rows() != b.rows() {
            return Err(GroupError::DegreeMismatch(a.rows(), b.rows()));
        }
        Ok(GeneratorPair {
            a_inv: a.unimodular_inverse()?,
            b_inv: b.unimodular_inverse()?,
            n: a.rows(),
            a,
            b,
        })
    }

    /// `C = A^-1 B`
    pub fn transvection(&self) -> IntMatrix {
        &self.a_inv * &self.b
    }
}

pub fn build_generators(pair: &QualifiedPair) -> Result<GeneratorPair, GroupError> {
    GeneratorPair::from_polys(&pair.f_poly, &pair.g_poly)
}

/// `v = (A^-1 B - I) e_n`
pub fn compute_v(gens: &GeneratorPair) -> IntVector {
    let c = gens.transvection();
    let mut v = c.column(gens.n - 1);
    v[gens.n - 1] -= 1;
    v
}

/// A nondegenerate antisymmetric integer form, primitive, with `Ω(v, e_n) > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticForm {
    matrix: IntMatrix,
}

impl SymplecticForm {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `Ω(x, y) = x^T Ω y`
    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        self.matrix
            .bilinear(x, y)
            .expect("vector length matches form")
    }

    /// `X^T Ω X = Ω`
    pub fn preserved_by(&self, x: &IntMatrix) -> bool {
        &(&x.transpose() * &self.matrix) * x == self.matrix
    }
}

fn invariance_constraints(
    gens: &GeneratorPair,
    shape: MatrixConstraint<BigInt>,
) -> Vec<MatrixConstraint<BigInt>> {
    vec![
        MatrixConstraint::Invariant(gens.a.clone()),
        MatrixConstraint::Invariant(gens.b.clone()),
        shape,
    ]
}

pub fn antisymmetric_invariants(gens: &GeneratorPair) -> Result<Vec<IntMatrix>, GroupError> {
    Ok(kernel_basis(
        gens.n,
        &invariance_constraints(gens, MatrixConstraint::Antisymmetric),
    )?)
}

pub fn symmetric_invariant_dimension(gens: &GeneratorPair) -> Result<usize, GroupError> {
    Ok(kernel_basis(
        gens.n,
        &invariance_constraints(gens, MatrixConstraint::Symmetric),
    )?
    .len())
}

/// Solves `A^T X A = X`, `B^T X B = X`, `X^T = -X` and normalizes the
/// unique-up-to-scalar solution.
pub fn invariant_symplectic_form(gens: &GeneratorPair) -> Result<SymplecticForm, GroupError> {
    let mut basis = antisymmetric_invariants(gens)?;
    if basis.len() != 1 {
        return Err(GroupError::DimensionNotOne(basis.len()));
    }
    let mut omega = basis.pop().expect("one basis element");
    if omega.determinant().is_zero() {
        return Err(GroupError::Degenerate);
    }
    let v = compute_v(gens);
    let en = unit_vector(gens.n, gens.n - 1);
    if omega.bilinear(&v, &en)?.is_negative() {
        omega = omega.map(|x| -x);
    }
    Ok(SymplecticForm { matrix: omega })
}

/// `rank(C - I) = 1` and `(C - I)^2 = 0`.
pub fn is_transvection(c: &IntMatrix) -> bool {
    if !c.is_square() {
        return false;
    }
    let Ok(n) = c.try_sub(&IntMatrix::identity(c.rows())) else {
        return false;
    };
    n.rank() == 1 && (&n * &n).entries().iter().all(Zero::is_zero)
}

/// Everything derived from a pair that the search and certificate consume.
#[derive(Debug, Clone)]
pub struct HypergeometricGroup {
    pub generators: GeneratorPair,
    pub v: IntVector,
    pub omega: SymplecticForm,
}

impl HypergeometricGroup {
    pub fn new(pair: &QualifiedPair) -> Result<Self, GroupError> {
        Self::from_generators(build_generators(pair)?)
    }

    pub fn from_polys(f: &IntPoly, g: &IntPoly) -> Result<Self, GroupError> {
        Self::from_generators(GeneratorPair::from_polys(f, g)?)
    }

    pub fn from_generators(generators: GeneratorPair) -> Result<Self, GroupError> {
        let omega = invariant_symplectic_form(&generators)?;
        Ok(HypergeometricGroup {
            v: compute_v(&generators),
            generators,
            omega,
        })
    }

    pub fn n(&self) -> usize {
        self.generators.n
    }
}
