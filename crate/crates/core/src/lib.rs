//! Exact-arithmetic toolkit for symplectic hypergeometric groups.
//!
//! Given a pair of monic integer polynomials `f`, `g` that are products of
//! cyclotomic polynomials, the hypergeometric group is generated by their
//! companion matrices `A`, `B`. This crate enumerates such pairs, builds the
//! group data (`v = (A^-1 B - I) e_n` and the invariant symplectic form),
//! searches for witness words `γ` for which `γv` has last coordinate in
//! `{±1, ±2}` and `{v, γv, γ^-1 v}` are independent, and verifies the full
//! arithmeticity certificate derived from such a witness.
//!
//! The linear algebra is generic over the scalar type (see [`scalar`]); the
//! aliases below fix the concrete types used throughout.

pub mod certify;
pub mod cyclotomic;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod pairs;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod search;
pub mod serde_int;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Arbitrary-precision integer scalar.
pub type Int = BigInt;
/// Exact rational scalar (always in lowest terms, positive denominator).
pub type Rat = BigRational;

pub type IntMatrix = linalg::Matrix<BigInt>;
pub type RatMatrix = linalg::Matrix<BigRational>;
/// Overflow-checked machine-integer matrix used on the witness search hot path.
pub type FastMatrix = linalg::Matrix<i128>;

pub type IntVector = Vec<BigInt>;
pub type RatVector = Vec<BigRational>;

pub type IntPoly = poly::Poly<BigInt>;

pub use certify::{verify_proposition, CertificateReport, CheckId, Verdict};
pub use cyclotomic::{CycloFactorization, ParameterList};
pub use group::{GeneratorPair, HypergeometricGroup, SymplecticForm};
pub use pairs::{Convention, PairClassification, QualifiedPair};
pub use report::{PairRecord, ReproductionReport};
pub use search::{search_witness, Letter, SearchConfig, SearchOutcome, Word};

/// Version string recorded in cache records and reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
