//! Per-pair records for listings and the table-reproduction report.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::fixtures::{self, TableARow, TableDRow};
use crate::group::{GroupError, HypergeometricGroup};
use crate::linalg::content;
use crate::pairs::{
    enumerate_qualified_pairs, Convention, PairClassification, PairsError, QualifiedPair,
};
use crate::search::SearchOutcome;
use crate::IntVector;

/// Classification from the cheap criteria alone: the small-`lc` criterion,
/// then the gcd obstruction, otherwise unknown with nothing searched.
pub fn preliminary_classification(pair: &QualifiedPair, v: &IntVector) -> PairClassification {
    if pair.is_sv_arithmetic() {
        return PairClassification::SvArithmetic;
    }
    let gcd = content(v);
    if gcd > BigInt::from(2) {
        PairClassification::Obstructed { gcd }
    } else {
        PairClassification::Unknown { searched_depth: 0 }
    }
}

pub fn classify(pair: &QualifiedPair, outcome: &SearchOutcome) -> PairClassification {
    if pair.is_sv_arithmetic() {
        return PairClassification::SvArithmetic;
    }
    match outcome {
        SearchOutcome::Found { witness, .. } => PairClassification::WitnessArithmetic {
            word: witness.word.to_string(),
            length: witness.word.len(),
        },
        SearchOutcome::NotFound { max_depth, .. } => PairClassification::Unknown {
            searched_depth: *max_depth,
        },
        SearchOutcome::Obstructed { gcd } => PairClassification::Obstructed { gcd: gcd.clone() },
        SearchOutcome::BudgetExhausted {
            completed_depth, ..
        } => PairClassification::Unknown {
            searched_depth: *completed_depth,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_id: String,
    pub convention: Convention,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    #[serde(with = "crate::serde_int::vec")]
    pub f_coeffs: Vec<BigInt>,
    #[serde(with = "crate::serde_int::vec")]
    pub g_coeffs: Vec<BigInt>,
    #[serde(with = "crate::serde_int")]
    pub lc: BigInt,
    #[serde(with = "crate::serde_int::vec")]
    pub v: Vec<BigInt>,
    #[serde(with = "crate::serde_int")]
    pub gcd_v: BigInt,
    /// Row-major.
    pub omega: Vec<Vec<i64>>,
    pub classification: PairClassification,
}

impl PairRecord {
    pub fn new(pair: &QualifiedPair, convention: Convention) -> Result<Self, GroupError> {
        let group = HypergeometricGroup::new(pair)?;
        let omega = group
            .omega
            .matrix()
            .to_rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| i64::try_from(x).expect("form entries are small"))
                    .collect()
            })
            .collect();
        Ok(PairRecord {
            pair_id: pair.pair_id.clone(),
            convention,
            alpha: pair.alpha().to_strings(),
            beta: pair.beta().to_strings(),
            f_coeffs: pair.f_poly.coeffs().to_vec(),
            g_coeffs: pair.g_poly.coeffs().to_vec(),
            lc: pair.lc.clone(),
            gcd_v: content(&group.v),
            classification: preliminary_classification(pair, &group.v),
            v: group.v,
            omega,
        })
    }

    pub fn csv_row(&self) -> CsvRow {
        let (witness, depth) = match &self.classification {
            PairClassification::WitnessArithmetic { word, length } => (word.clone(), Some(*length)),
            PairClassification::Unknown { searched_depth } => {
                (String::new(), Some(*searched_depth))
            }
            _ => (String::new(), None),
        };
        let join = |xs: &[String]| xs.join(",");
        CsvRow {
            pair_id: self.pair_id.clone(),
            alpha: join(&self.alpha),
            beta: join(&self.beta),
            lc: self.lc.to_string(),
            v: self
                .v
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
            gcd_v: self.gcd_v.to_string(),
            class: self.classification.label().to_string(),
            witness,
            depth,
        }
    }
}

/// Flat form for CSV; `depth` is the witness length or the searched depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub pair_id: String,
    pub alpha: String,
    pub beta: String,
    pub lc: String,
    pub v: String,
    pub gcd_v: String,
    pub class: String,
    pub witness: String,
    pub depth: Option<usize>,
}

/// Expected data the reproduction report compares against.
#[derive(Debug, Clone)]
pub struct ReferenceData {
    pub table_a: Vec<TableARow>,
    pub table_d: Vec<TableDRow>,
    pub total: usize,
    pub small_lc: usize,
    pub large_lc: usize,
    pub remaining: usize,
}

impl ReferenceData {
    pub fn published() -> Self {
        ReferenceData {
            table_a: fixtures::table_a().to_vec(),
            table_d: fixtures::table_d().to_vec(),
            total: fixtures::QUALIFIED_PAIRS,
            small_lc: fixtures::SMALL_LC_PAIRS,
            large_lc: fixtures::QUALIFIED_PAIRS - fixtures::SMALL_LC_PAIRS,
            remaining: fixtures::LARGE_LC_WITNESS_PAIRS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportCheck {
    pub name: &'static str,
    pub passed: bool,
    pub mismatches: Vec<String>,
}

impl ReportCheck {
    fn new(name: &'static str, mismatches: Vec<String>) -> Self {
        ReportCheck {
            name,
            passed: mismatches.is_empty(),
            mismatches,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproductionReport {
    pub convention: Convention,
    pub total: usize,
    pub small_lc: usize,
    pub large_lc: usize,
    pub remaining: usize,
    pub checks: Vec<ReportCheck>,
}

impl ReproductionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ReproductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "convention {}", self.convention)?;
        writeln!(
            f,
            "pairs {} (|lc| <= 2: {}, |lc| >= 3: {}), remaining with witness: {}",
            self.total, self.small_lc, self.large_lc, self.remaining
        )?;
        for check in &self.checks {
            writeln!(
                f,
                "{} {}",
                if check.passed { "PASS" } else { "FAIL" },
                check.name
            )?;
            for m in &check.mismatches {
                writeln!(f, "     {m}")?;
            }
        }
        Ok(())
    }
}

fn show(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Cross-check enumeration and invariants against the reference tables.
pub fn reproduce(
    reference: &ReferenceData,
    convention: Convention,
) -> Result<ReproductionReport, PairsError> {
    let pairs = enumerate_qualified_pairs(6, convention)?;
    let by_id: HashMap<&str, &QualifiedPair> =
        pairs.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let small = pairs.iter().filter(|p| p.is_sv_arithmetic()).count();
    let large = pairs.len() - small;

    let mut table_a = Vec::new();
    let mut mum_seen = BTreeSet::new();
    for row in &reference.table_a {
        let Ok(g) = crate::cyclotomic::factorization_from_parameters(&row.beta) else {
            table_a.push(format!(
                "row {}: beta {} is not cyclotomic",
                row.row, row.beta
            ));
            continue;
        };
        let Ok(pair) = QualifiedPair::new("1^6".parse().expect("valid"), g) else {
            table_a.push(format!("row {}: pair is not qualified", row.row));
            continue;
        };
        let id = pair.canonical(convention).pair_id;
        if !by_id.contains_key(id.as_str()) {
            table_a.push(format!("row {}: {} not enumerated", row.row, id));
        }
        mum_seen.insert(id);
        if pair.abs_lc() != BigInt::from(row.abs_lc) {
            table_a.push(format!(
                "row {}: |lc| expected {} computed {}",
                row.row,
                row.abs_lc,
                pair.abs_lc()
            ));
        }
        match HypergeometricGroup::new(&pair) {
            Ok(group) if group.v != row.v => table_a.push(format!(
                "row {}: v expected {} computed {}",
                row.row,
                show(&row.v),
                show(&group.v)
            )),
            Ok(_) => {}
            Err(e) => table_a.push(format!("row {}: {e}", row.row)),
        }
    }
    for p in pairs.iter().filter(|p| p.is_mum() && !p.is_sv_arithmetic()) {
        if !mum_seen.contains(&p.pair_id) {
            table_a.push(format!(
                "{} has |lc| >= 3 but is missing from the table",
                p.pair_id
            ));
        }
    }

    let mut table_d = Vec::new();
    let mut d_seen = BTreeSet::new();
    for row in &reference.table_d {
        let parsed = crate::cyclotomic::factorization_from_parameters(&row.alpha).and_then(|f| {
            Ok((
                f,
                crate::cyclotomic::factorization_from_parameters(&row.beta)?,
            ))
        });
        let Ok((f, g)) = parsed else {
            table_d.push(format!("row {}: parameters are not cyclotomic", row.row));
            continue;
        };
        let Ok(pair) = QualifiedPair::new(f, g) else {
            table_d.push(format!("row {}: pair is not qualified", row.row));
            continue;
        };
        let id = pair.canonical(convention).pair_id;
        match by_id.get(id.as_str()) {
            None => table_d.push(format!("row {}: {} not enumerated", row.row, id)),
            Some(p) if p.is_sv_arithmetic() => {
                table_d.push(format!("row {}: {} has |lc| <= 2", row.row, id))
            }
            Some(p) if p.is_mum() => table_d.push(format!(
                "row {}: {} is in the unipotent family",
                row.row, id
            )),
            Some(_) => {}
        }
        if !d_seen.insert(id.clone()) {
            table_d.push(format!("row {}: {} listed twice", row.row, id));
        }
    }

    let mut counts = Vec::new();
    for (name, expected, got) in [
        ("total", reference.total, pairs.len()),
        ("|lc| <= 2", reference.small_lc, small),
        ("|lc| >= 3", reference.large_lc, large),
    ] {
        if expected != got {
            counts.push(format!("{name}: expected {expected} computed {got}"));
        }
    }

    let remaining = pairs
        .iter()
        .filter(|p| {
            !p.is_sv_arithmetic() && !mum_seen.contains(&p.pair_id) && !d_seen.contains(&p.pair_id)
        })
        .count();
    let mut rest = Vec::new();
    if remaining != reference.remaining {
        rest.push(format!(
            "expected {} computed {} (= {} - {} - {} - {})",
            reference.remaining,
            remaining,
            pairs.len(),
            small,
            mum_seen.len(),
            d_seen.len()
        ));
    }

    Ok(ReproductionReport {
        convention,
        total: pairs.len(),
        small_lc: small,
        large_lc: large,
        remaining,
        checks: vec![
            ReportCheck::new("unipotent table: beta, |lc|, v for every row", table_a),
            ReportCheck::new(
                "unknown table: every row enumerated with |lc| >= 3",
                table_d,
            ),
            ReportCheck::new("counts: total, |lc| <= 2, |lc| >= 3", counts),
            ReportCheck::new("remaining |lc| >= 3 pairs with a witness", rest),
        ],
    })
}
