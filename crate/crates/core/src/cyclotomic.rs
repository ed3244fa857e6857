//! Cyclotomic polynomials, cyclotomic factorizations and the
//! parameter dictionary `Φ_m ↔ {a/m : gcd(a, m) = 1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::Poly;
use crate::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("not a product of cyclotomic polynomials (residual factor {residual})")]
    NotCyclotomicProduct { residual: String },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("odd degree {0} has no scalar-shift partner in the qualified setting")]
    OddDegree(usize),
    #[error("cannot parse factorization {0:?}")]
    Parse(String),
    #[error("parameters {0:?} do not come from a product of cyclotomic polynomials")]
    InvalidParameters(String),
}

pub fn totient(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// All `m` with `φ(m) ≤ degree`, increasing. Uses `φ(m) ≥ sqrt(m/2)`, so
/// nothing beyond `2·degree²` qualifies.
pub fn admissible_indices(degree: usize) -> Vec<u32> {
    let bound = (2 * degree * degree).max(2) as u32;
    (1..=bound)
        .filter(|&m| totient(m) as usize <= degree)
        .collect()
}

/// `Φ_m` by exact division of `x^m - 1` by the `Φ_d` for proper divisors `d`.
pub fn cyclotomic_poly(m: u32) -> IntPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut result = IntPoly::x_pow_minus_one(m as usize);
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        result = result
            .div_exact_monic(&cyclotomic_poly(d))
            .expect("proper divisor cyclotomics divide x^m - 1");
    }
    result
}

/// Index `m'` with `Φ_m(-x) = ±Φ_{m'}(x)`.
pub fn shifted_index(m: u32) -> u32 {
    if m % 2 == 1 {
        2 * m
    } else if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

/// `x ↦ p(-x)` for a monic polynomial of even degree.
pub fn scalar_shift(p: &IntPoly) -> Result<IntPoly, CyclotomicError> {
    match p.degree() {
        Some(d) if d % 2 == 0 => Ok(p.negate_variable()),
        Some(d) => Err(CyclotomicError::OddDegree(d)),
        None => Err(CyclotomicError::NotMonic),
    }
}

/// Multiset of cyclotomic indices with multiplicities.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CycloFactorization {
    factors: BTreeMap<u32, u32>,
}

impl CycloFactorization {
    pub fn from_indices(indices: impl IntoIterator<Item = u32>) -> Self {
        let mut factors = BTreeMap::new();
        for m in indices {
            assert!(m >= 1, "cyclotomic index must be positive");
            *factors.entry(m).or_insert(0) += 1;
        }
        CycloFactorization { factors }
    }

    /// `Φ_m^k`
    pub fn power(m: u32, k: u32) -> Self {
        Self::from_indices(std::iter::repeat_n(m, k as usize))
    }

    pub fn factors(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.factors.iter().map(|(&m, &k)| (m, k))
    }

    pub fn multiplicity(&self, m: u32) -> u32 {
        self.factors.get(&m).copied().unwrap_or(0)
    }

    /// Sorted indices with repetition, the ordering key for factorizations.
    pub fn indices(&self) -> Vec<u32> {
        self.factors
            .iter()
            .flat_map(|(&m, &k)| std::iter::repeat_n(m, k as usize))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(&m, &k)| (totient(m) * k) as usize)
            .sum()
    }

    pub fn expand(&self) -> IntPoly {
        self.factors.iter().fold(IntPoly::one(), |acc, (&m, &k)| {
            let phi = cyclotomic_poly(m);
            (0..k).fold(acc, |a, _| a.mul(&phi))
        })
    }

    /// `Φ_1(0) = -1` and `Φ_m(0) = 1` otherwise.
    pub fn constant_term(&self) -> i32 {
        if self.multiplicity(1).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn shares_factor_with(&self, other: &Self) -> bool {
        self.factors.keys().any(|m| other.factors.contains_key(m))
    }

    pub fn common_factors(&self, other: &Self) -> Vec<u32> {
        self.factors
            .keys()
            .filter(|m| other.factors.contains_key(m))
            .copied()
            .collect()
    }

    /// Factorization of `p(-x)` for even total degree.
    pub fn scalar_shift(&self) -> Self {
        Self::from_indices(self.indices().into_iter().map(shifted_index))
    }
}

impl PartialOrd for CycloFactorization {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycloFactorization {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices().cmp(&other.indices())
    }
}

/// `m^k` terms joined by commas, `^1` omitted: `1^6`, `3^2,6`.
impl fmt::Display for CycloFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, k)) in self.factors().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if k == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{m}^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Φ[{self}]")
    }
}

impl FromStr for CycloFactorization {
    type Err = CyclotomicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CyclotomicError::Parse(s.to_string());
        let mut indices = Vec::new();
        for term in s.split(',') {
            let term = term.trim();
            let (m, k) = match term.split_once('^') {
                Some((m, k)) => (m, k.parse::<u32>().map_err(|_| err())?),
                None => (term, 1),
            };
            let m = m.parse::<u32>().map_err(|_| err())?;
            if m == 0 || k == 0 {
                return Err(err());
            }
            indices.extend(std::iter::repeat_n(m, k as usize));
        }
        Ok(Self::from_indices(indices))
    }
}

impl From<CycloFactorization> for String {
    fn from(f: CycloFactorization) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for CycloFactorization {
    type Error = CyclotomicError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Factor a monic polynomial into cyclotomics by trial division in
/// increasing index.
pub fn factorization_from_poly(p: &IntPoly) -> Result<CycloFactorization, CyclotomicError> {
    if !p.is_monic() {
        return Err(CyclotomicError::NotMonic);
    }
    let degree = p.degree().unwrap_or(0);
    let mut rest = p.clone();
    let mut indices = Vec::new();
    for m in admissible_indices(degree) {
        let phi = cyclotomic_poly(m);
        while let Some(q) = rest.div_exact_monic(&phi) {
            rest = q;
            indices.push(m);
        }
        if rest.degree() == Some(0) {
            break;
        }
    }
    if rest != Poly::one() {
        return Err(CyclotomicError::NotCyclotomicProduct {
            residual: rest.pretty(),
        });
    }
    Ok(CycloFactorization::from_indices(indices))
}

/// Sorted multiset of parameters in `[0, 1)`, each in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct ParameterList(Vec<Rational64>);

impl ParameterList {
    pub fn new(mut values: Vec<Rational64>) -> Result<Self, CyclotomicError> {
        let zero = Rational64::zero();
        let one = Rational64::one();
        if let Some(bad) = values.iter().find(|r| **r < zero || **r >= one) {
            return Err(CyclotomicError::InvalidParameters(bad.to_string()));
        }
        values.sort();
        Ok(ParameterList(values))
    }

    pub fn values(&self) -> &[Rational64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Closed under `r ↦ (1 - r) mod 1`.
    pub fn is_self_reciprocal(&self) -> bool {
        let mut mirrored: Vec<Rational64> = self
            .0
            .iter()
            .map(|r| {
                if r.is_zero() {
                    *r
                } else {
                    Rational64::one() - r
                }
            })
            .collect();
        mirrored.sort();
        mirrored == self.0
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for ParameterList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// Comma-separated fractions, e.g. `1/3,1/3,2/3,2/3,1/6,5/6`; order is irrelevant.
impl FromStr for ParameterList {
    type Err = CyclotomicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Rational64>()
                    .map_err(|_| CyclotomicError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ParameterList::new(values)
    }
}

impl From<ParameterList> for Vec<String> {
    fn from(p: ParameterList) -> Self {
        p.to_strings()
    }
}

impl TryFrom<Vec<String>> for ParameterList {
    type Error = CyclotomicError;
    fn try_from(v: Vec<String>) -> Result<Self, Self::Error> {
        v.join(",").parse()
    }
}

pub fn parameters_from_factorization(fac: &CycloFactorization) -> ParameterList {
    let mut values = Vec::with_capacity(fac.degree());
    for (m, k) in fac.factors() {
        for a in (0..m).filter(|a| a.gcd(&m) == 1) {
            for _ in 0..k {
                values.push(Rational64::new(a as i64, m as i64));
            }
        }
    }
    ParameterList::new(values).expect("a/m lies in [0, 1)")
}

/// Inverse of [`parameters_from_factorization`]: every denominator `q` must
/// come with all residues coprime to `q`, each the same number of times.
pub fn factorization_from_parameters(
    params: &ParameterList,
) -> Result<CycloFactorization, CyclotomicError> {
    let mut counts: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for r in params.values() {
        let q = *r.denom() as u32;
        let a = *r.numer() as u32;
        *counts.entry((q, a)).or_insert(0) += 1;
    }
    let mut indices = Vec::new();
    let denominators: std::collections::BTreeSet<u32> = counts.keys().map(|&(q, _)| q).collect();
    for q in denominators {
        let Some(&mult) = counts.get(&(q, if q == 1 { 0 } else { 1 })) else {
            return Err(CyclotomicError::InvalidParameters(params.to_string()));
        };
        let complete = (0..q)
            .filter(|a| a.gcd(&q) == 1)
            .all(|a| counts.get(&(q, a)) == Some(&mult));
        let residues = counts.keys().filter(|&&(d, _)| d == q).count();
        if !complete || residues != totient(q) as usize {
            return Err(CyclotomicError::InvalidParameters(params.to_string()));
        }
        indices.extend(std::iter::repeat_n(q, mult as usize));
    }
    Ok(CycloFactorization::from_indices(indices))
}

impl From<&CycloFactorization> for Vec<BigInt> {
    fn from(f: &CycloFactorization) -> Self {
        f.expand().coeffs().to_vec()
    }
}
