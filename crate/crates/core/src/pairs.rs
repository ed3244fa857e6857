//! Qualified pairs `(f, g)` of cyclotomic products and their enumeration up
//! to scalar shift (and optionally swap).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{
    admissible_indices, parameters_from_factorization, totient, CycloFactorization, ParameterList,
};
use crate::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairsError {
    #[error("degree must be even and at least 2 (got {0})")]
    BadDegree(usize),
    #[error("f and g are equal")]
    Identical,
    #[error("not a qualified pair: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotQualified(Vec<Disqualification>),
}

/// Identification of pairs during deduplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Convention {
    /// `(f, g) ~ (f(-x), g(-x))`
    #[serde(rename = "shift")]
    ShiftOnly,
    /// additionally `(f, g) ~ (g, f)`, since both orders generate `⟨A, B⟩`
    #[default]
    #[serde(rename = "shift+swap")]
    ShiftSwap,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::ShiftOnly => "shift",
            Convention::ShiftSwap => "shift+swap",
        })
    }
}

impl FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shift" => Ok(Convention::ShiftOnly),
            "shift+swap" | "swap" => Ok(Convention::ShiftSwap),
            other => Err(format!(
                "unknown convention {other:?} (expected shift or shift+swap)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    F,
    G,
}

/// A failed qualification condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Disqualification {
    DegreeMismatch { f: usize, g: usize },
    Identical,
    CommonFactor(Vec<u32>),
    Imprimitive { k: usize },
    ConstantTerm { side: Side, value: i32 },
}

impl fmt::Display for Disqualification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disqualification::DegreeMismatch { f: df, g: dg } => {
                write!(f, "degrees differ (deg f = {df}, deg g = {dg})")
            }
            Disqualification::Identical => write!(f, "f = g"),
            Disqualification::CommonFactor(ms) => {
                let names: Vec<String> = ms.iter().map(|m| format!("Φ{m}")).collect();
                write!(f, "common root: shared factor {}", names.join(", "))
            }
            Disqualification::Imprimitive { k } => {
                write!(f, "imprimitive: f and g are both polynomials in x^{k}")
            }
            Disqualification::ConstantTerm { side, value } => {
                write!(
                    f,
                    "{}(0) = {value}, expected 1",
                    if *side == Side::F { "f" } else { "g" }
                )
            }
        }
    }
}

/// Every failed condition, in a fixed order; empty iff the pair qualifies.
pub fn qualification(f: &CycloFactorization, g: &CycloFactorization) -> Vec<Disqualification> {
    let mut reasons = Vec::new();
    let (df, dg) = (f.degree(), g.degree());
    if df != dg {
        reasons.push(Disqualification::DegreeMismatch { f: df, g: dg });
    }
    if f == g {
        reasons.push(Disqualification::Identical);
    }
    let common = f.common_factors(g);
    if !common.is_empty() && f != g {
        reasons.push(Disqualification::CommonFactor(common));
    }
    let (fp, gp) = (f.expand(), g.expand());
    if let Some(k) =
        (2..=df.max(dg)).find(|&k| fp.is_power_substitution(k) && gp.is_power_substitution(k))
    {
        reasons.push(Disqualification::Imprimitive { k });
    }
    for (side, fac) in [(Side::F, f), (Side::G, g)] {
        let value = fac.constant_term();
        if value != 1 {
            reasons.push(Disqualification::ConstantTerm { side, value });
        }
    }
    reasons
}

pub fn is_qualified(f: &CycloFactorization, g: &CycloFactorization) -> bool {
    qualification(f, g).is_empty()
}

/// Leading coefficient of `f - g`, signed.
pub fn leading_coeff_diff(f: &IntPoly, g: &IntPoly) -> Result<BigInt, PairsError> {
    let diff = f.sub(g);
    if diff.is_zero() {
        return Err(PairsError::Identical);
    }
    Ok(diff.leading_coefficient())
}

/// A validated pair with its expanded polynomials. `pair_id` is `f|g` in
/// factorization text, e.g. `1^6|3^2,6`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QualifiedPair {
    pub f: CycloFactorization,
    pub g: CycloFactorization,
    pub f_poly: IntPoly,
    pub g_poly: IntPoly,
    pub degree: usize,
    pub lc: BigInt,
    pub pair_id: String,
}

impl QualifiedPair {
    /// Validates the pair as oriented; no canonicalization.
    pub fn new(f: CycloFactorization, g: CycloFactorization) -> Result<Self, PairsError> {
        let reasons = qualification(&f, &g);
        if !reasons.is_empty() {
            return Err(PairsError::NotQualified(reasons));
        }
        let (f_poly, g_poly) = (f.expand(), g.expand());
        let lc = leading_coeff_diff(&f_poly, &g_poly)?;
        Ok(QualifiedPair {
            pair_id: format!("{f}|{g}"),
            degree: f.degree(),
            f,
            g,
            f_poly,
            g_poly,
            lc,
        })
    }

    pub fn abs_lc(&self) -> BigInt {
        self.lc.abs()
    }

    pub fn alpha(&self) -> ParameterList {
        parameters_from_factorization(&self.f)
    }

    pub fn beta(&self) -> ParameterList {
        parameters_from_factorization(&self.g)
    }

    /// `f = (x - 1)^n`
    pub fn is_mum(&self) -> bool {
        self.f.multiplicity(1) as usize == self.degree
    }

    pub fn is_sv_arithmetic(&self) -> bool {
        self.abs_lc() <= BigInt::from(2)
    }

    pub fn scalar_shift(&self) -> Self {
        QualifiedPair::new(self.f.scalar_shift(), self.g.scalar_shift())
            .expect("scalar shift preserves qualification")
    }

    pub fn swapped(&self) -> Self {
        QualifiedPair::new(self.g.clone(), self.f.clone()).expect("swap preserves qualification")
    }

    pub fn canonical(&self, convention: Convention) -> Self {
        let (f, g) = canonical_orientation(&self.f, &self.g, convention);
        if f == self.f && g == self.g {
            return self.clone();
        }
        QualifiedPair::new(f, g).expect("orbit members qualify")
    }
}

fn canonical_orientation(
    f: &CycloFactorization,
    g: &CycloFactorization,
    convention: Convention,
) -> (CycloFactorization, CycloFactorization) {
    let (sf, sg) = (f.scalar_shift(), g.scalar_shift());
    let mut orbit = vec![(f.clone(), g.clone()), (sf.clone(), sg.clone())];
    if convention == Convention::ShiftSwap {
        orbit.push((g.clone(), f.clone()));
        orbit.push((sg, sf));
    }
    orbit.into_iter().min().expect("orbit is nonempty")
}

/// Lexicographically least member of the orbit of `(f, g)` under the convention.
pub fn canonical_representative(
    f: &CycloFactorization,
    g: &CycloFactorization,
    convention: Convention,
) -> Result<QualifiedPair, PairsError> {
    let (cf, cg) = canonical_orientation(f, g, convention);
    QualifiedPair::new(cf, cg)
}

/// All cyclotomic products of the given even degree, sorted by index list.
pub fn enumerate_factorizations(degree: usize) -> Result<Vec<CycloFactorization>, PairsError> {
    if degree < 2 || degree % 2 == 1 {
        return Err(PairsError::BadDegree(degree));
    }
    let indices = admissible_indices(degree);
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(&indices, degree, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn fill(
    indices: &[u32],
    remaining: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<CycloFactorization>,
) {
    if remaining == 0 {
        out.push(CycloFactorization::from_indices(current.iter().copied()));
        return;
    }
    let Some((&m, rest)) = indices.split_first() else {
        return;
    };
    let d = totient(m) as usize;
    let mut taken = 0;
    loop {
        fill(rest, remaining - taken * d, current, out);
        if (taken + 1) * d > remaining {
            break;
        }
        taken += 1;
        current.push(m);
    }
    current.truncate(current.len() - taken);
}

/// Qualified pairs up to the convention, one canonical representative per
/// orbit, ordered by `(f, g)`.
pub fn enumerate_qualified_pairs(
    degree: usize,
    convention: Convention,
) -> Result<Vec<QualifiedPair>, PairsError> {
    let facs = enumerate_factorizations(degree)?;
    let mut out = Vec::new();
    for f in &facs {
        if f.constant_term() != 1 {
            continue;
        }
        for g in &facs {
            if g.constant_term() != 1 || f.shares_factor_with(g) || !is_qualified(f, g) {
                continue;
            }
            if canonical_orientation(f, g, convention) == (f.clone(), g.clone()) {
                out.push(QualifiedPair::new(f.clone(), g.clone())?);
            }
        }
    }
    Ok(out)
}

/// The maximally unipotent family `f = (x - 1)^n`.
pub fn enumerate_mum_pairs(
    degree: usize,
    convention: Convention,
) -> Result<Vec<QualifiedPair>, PairsError> {
    Ok(enumerate_qualified_pairs(degree, convention)?
        .into_iter()
        .filter(QualifiedPair::is_mum)
        .collect())
}

/// Arithmeticity status of a pair as far as this toolkit can decide it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum PairClassification {
    /// `|lc(f - g)| ≤ 2`
    SvArithmetic,
    WitnessArithmetic {
        word: String,
        length: usize,
    },
    Obstructed {
        #[serde(with = "crate::serde_int")]
        gcd: BigInt,
    },
    Unknown {
        searched_depth: usize,
    },
}

impl PairClassification {
    pub fn label(&self) -> &'static str {
        match self {
            PairClassification::SvArithmetic => "sv_arithmetic",
            PairClassification::WitnessArithmetic { .. } => "witness_arithmetic",
            PairClassification::Obstructed { .. } => "obstructed",
            PairClassification::Unknown { .. } => "unknown",
        }
    }
}
