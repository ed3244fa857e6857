//! Independent check that a word satisfies the arithmeticity criterion,
//! recomputing every intermediate object of the argument.
//!
//! For `γ` with `c` = last entry of `γv`: `C1 = A^-1 B`, `C2 = γ^-1 C1 γ`,
//! `C3 = γ C1 γ^-1`, `w1 = v`, `w2 = γ^-1 v`, `w3 = γv`, `W = span{w1, w2, w3}`,
//! and `e` spans the radical of `Ω` restricted to `W`. Restrictions to `W`
//! are written in the basis `{e, w1, w2}`, one column per basis vector.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::group::{is_transvection, HypergeometricGroup};
use crate::linalg::{
    coordinates_in_basis, linearly_independent, primitive_part, unit_vector, Matrix,
};
use crate::search::{LetterMatrices, Word};
use crate::{IntMatrix, IntVector, Rat, RatMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    LastEntry,
    Independence,
    OmegaRelations,
    Transvections,
    RadicalDimension,
    FixedRadical,
    C1Form,
    C2Form,
    L1Nonzero,
    UUnipotent,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::LastEntry,
        CheckId::Independence,
        CheckId::OmegaRelations,
        CheckId::Transvections,
        CheckId::RadicalDimension,
        CheckId::FixedRadical,
        CheckId::C1Form,
        CheckId::C2Form,
        CheckId::L1Nonzero,
        CheckId::UUnipotent,
    ];

    /// Step of the argument the check belongs to, `a` through `h`.
    pub fn letter(self) -> char {
        match self {
            CheckId::LastEntry => 'a',
            CheckId::Independence => 'b',
            CheckId::OmegaRelations => 'c',
            CheckId::Transvections => 'd',
            CheckId::RadicalDimension | CheckId::FixedRadical => 'e',
            CheckId::C1Form | CheckId::C2Form => 'f',
            CheckId::L1Nonzero => 'g',
            CheckId::UUnipotent => 'h',
        }
    }

    /// Field name in the JSON form of a report.
    pub fn key(self) -> &'static str {
        match self {
            CheckId::LastEntry => "last_entry_ok",
            CheckId::Independence => "independence_ok",
            CheckId::OmegaRelations => "omega_checks_ok",
            CheckId::Transvections => "transvection_ok",
            CheckId::RadicalDimension => "radical_dimension_ok",
            CheckId::FixedRadical => "fixed_e_ok",
            CheckId::C1Form => "c1_form_ok",
            CheckId::C2Form => "c2_form_ok",
            CheckId::L1Nonzero => "l1_nonzero_ok",
            CheckId::UUnipotent => "u_unipotent_ok",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CheckId::LastEntry => "last entry c of γv is ±1 or ±2",
            CheckId::Independence => "γ^-1 v, v, γv linearly independent",
            CheckId::OmegaRelations => "Ω(v,e_j)=0 for j<n, Ω(v,e_n)≠0, Ω(γv,v)=-cΩ(v,e_n)",
            CheckId::Transvections => "C1, C2, C3 are transvections with (C_i-1) landing in Q·w_i",
            CheckId::RadicalDimension => "Ω restricted to W has a one-dimensional radical <e>",
            CheckId::FixedRadical => "C_i e = e for i = 1, 2, 3",
            CheckId::C1Form => "C1|W = [[1,0,0],[0,1,-c],[0,0,1]]",
            CheckId::C2Form => "C2|W = [[1,0,0],[0,1,0],[0,c,1]]",
            CheckId::L1Nonzero => "C3|W has first column (1,0,0) and l1 ≠ 0",
            CheckId::UUnipotent => "lower-right block u of C3|W satisfies (u-1)^2 = 0",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.letter(), self.description())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail(CheckId),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub word: Word,
    pub c: BigInt,
    pub gamma_v: IntVector,
    pub gamma_inv_v: IntVector,
    pub omega_v_en: BigInt,
    /// Checks in order with their outcome; later checks are absent when
    /// independence fails, since `W` is then not three-dimensional.
    pub checks: Vec<(CheckId, bool)>,
    pub gram: Option<IntMatrix>,
    pub radical: Option<IntVector>,
    pub c1_restricted: Option<RatMatrix>,
    pub c2_restricted: Option<RatMatrix>,
    pub c3_restricted: Option<RatMatrix>,
    pub l1: Option<Rat>,
    pub verdict: Verdict,
}

impl CertificateReport {
    pub fn first_failure(&self) -> Option<CheckId> {
        match self.verdict {
            Verdict::Pass => None,
            Verdict::Fail(id) => Some(id),
        }
    }

    /// One field per check (`null` when not reached) plus the computed data.
    pub fn to_json(&self) -> serde_json::Value {
        let ints = |xs: &[BigInt]| xs.iter().map(crate::serde_int::to_json).collect::<Vec<_>>();
        let rat_rows = |m: &Option<RatMatrix>| {
            m.as_ref().map(|m| {
                m.to_rows()
                    .iter()
                    .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
        };
        let mut out = serde_json::json!({
            "word": self.word.to_string(),
            "length": self.word.len(),
            "c": crate::serde_int::to_json(&self.c),
            "gamma_v": ints(&self.gamma_v),
            "gamma_inv_v": ints(&self.gamma_inv_v),
            "omega_v_en": crate::serde_int::to_json(&self.omega_v_en),
            "e_vector": self.radical.as_deref().map(ints),
            "c1_w": rat_rows(&self.c1_restricted),
            "c2_w": rat_rows(&self.c2_restricted),
            "c3_w": rat_rows(&self.c3_restricted),
            "l1": self.l1.as_ref().map(ToString::to_string),
            "verdict": self.verdict,
        });
        let map = out.as_object_mut().expect("object");
        for id in CheckId::ALL {
            map.insert(id.key().to_string(), serde_json::json!(self.check(id)));
        }
        out
    }

    pub fn check(&self, id: CheckId) -> Option<bool> {
        self.checks
            .iter()
            .find(|(c, _)| *c == id)
            .map(|&(_, ok)| ok)
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |xs: &[BigInt]| {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        writeln!(f, "word        {}", self.word)?;
        writeln!(f, "length      {}", self.word.len())?;
        writeln!(f, "c           {}", self.c)?;
        writeln!(f, "γv          ({})", show(&self.gamma_v))?;
        writeln!(f, "γ^-1 v      ({})", show(&self.gamma_inv_v))?;
        writeln!(f, "Ω(v,e_n)    {}", self.omega_v_en)?;
        if let Some(e) = &self.radical {
            writeln!(f, "e           ({})", show(e))?;
        }
        for (name, m) in [
            ("C1|W", &self.c1_restricted),
            ("C2|W", &self.c2_restricted),
            ("C3|W", &self.c3_restricted),
        ] {
            if let Some(m) = m {
                writeln!(f, "{name:<12}{m}")?;
            }
        }
        if let Some(l1) = &self.l1 {
            writeln!(f, "l1          {l1}")?;
        }
        for (id, ok) in &self.checks {
            writeln!(f, "{} {}", if *ok { "ok  " } else { "FAIL" }, id)?;
        }
        match self.verdict {
            Verdict::Pass => write!(f, "verdict     pass"),
            Verdict::Fail(id) => write!(f, "verdict     fail at ({})", id.letter()),
        }
    }
}

fn rat_matrix(rows: [[i64; 3]; 3]) -> RatMatrix {
    Matrix::from_fn(3, 3, |i, j| Rat::from_integer(BigInt::from(rows[i][j])))
}

/// Matrix of `x ↦ C x` on `span(basis)` in that basis, or `None` if some
/// image leaves the span.
fn restrict(c: &IntMatrix, basis: &[IntVector]) -> Option<RatMatrix> {
    let columns = basis
        .iter()
        .map(|b| coordinates_in_basis(basis, &c.try_mul_vec(b).expect("conformable")))
        .collect::<Option<Vec<_>>>()?;
    Matrix::from_columns(&columns).ok()
}

fn transvection_along(c: &IntMatrix, w: &IntVector) -> bool {
    if !is_transvection(c) {
        return false;
    }
    let n = c.rows();
    let shifted = c.try_sub(&Matrix::identity(n)).expect("square");
    let mut columns = vec![w.clone()];
    columns.extend((0..n).map(|j| shifted.column(j)));
    Matrix::from_columns(&columns)
        .expect("equal lengths")
        .rank()
        == 1
}

pub fn verify_proposition(group: &HypergeometricGroup, word: &Word) -> CertificateReport {
    let n = group.n();
    let gens = &group.generators;
    let letters = LetterMatrices::new(gens);
    let v = &group.v;
    let omega = &group.omega;

    let gamma = letters.evaluate(word).expect("bigint");
    let gamma_inv = letters.evaluate(&word.inverse()).expect("bigint");
    let gamma_v = gamma.try_mul_vec(v).expect("conformable");
    let gamma_inv_v = gamma_inv.try_mul_vec(v).expect("conformable");
    let c = gamma_v[n - 1].clone();
    let e_n = unit_vector::<BigInt>(n, n - 1);
    let omega_v_en = omega.pairing(v, &e_n);

    let mut report = CertificateReport {
        word: word.clone(),
        c: c.clone(),
        gamma_v: gamma_v.clone(),
        gamma_inv_v: gamma_inv_v.clone(),
        omega_v_en: omega_v_en.clone(),
        checks: Vec::new(),
        gram: None,
        radical: None,
        c1_restricted: None,
        c2_restricted: None,
        c3_restricted: None,
        l1: None,
        verdict: Verdict::Pass,
    };

    let abs_c = c.abs();
    report.checks.push((
        CheckId::LastEntry,
        abs_c == BigInt::one() || abs_c == BigInt::from(2),
    ));

    let w = [v.clone(), gamma_inv_v.clone(), gamma_v.clone()];
    let independent = linearly_independent(&w);
    report.checks.push((CheckId::Independence, independent));
    if !independent {
        report.verdict = Verdict::Fail(CheckId::Independence);
        if !report.checks[0].1 {
            report.verdict = Verdict::Fail(CheckId::LastEntry);
        }
        return report;
    }

    let form_ok = (0..n - 1).all(|j| omega.pairing(v, &unit_vector(n, j)).is_zero())
        && !omega_v_en.is_zero()
        && omega.pairing(&gamma_v, v) == -(&c * &omega_v_en);
    report.checks.push((CheckId::OmegaRelations, form_ok));

    let c1 = gens.transvection();
    let c2 = &(&gamma_inv * &c1) * &gamma;
    let c3 = &(&gamma * &c1) * &gamma_inv;
    let cs = [c1, c2, c3];
    let transvections_ok = cs.iter().zip(&w).all(|(ci, wi)| transvection_along(ci, wi));
    report
        .checks
        .push((CheckId::Transvections, transvections_ok));

    let gram = Matrix::from_fn(3, 3, |i, j| omega.pairing(&w[i], &w[j]));
    let kernel = gram.nullspace();
    let radical = (kernel.len() == 1).then(|| {
        let a = &kernel[0];
        let combo: IntVector = (0..n)
            .map(|k| (0..3).map(|i| &a[i] * &w[i][k]).sum())
            .collect();
        let mut e = primitive_part(&combo);
        if e.iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative())
        {
            e.iter_mut().for_each(|x| *x = -x.clone());
        }
        e
    });
    report.gram = Some(gram);
    report.radical = radical.clone();
    report
        .checks
        .push((CheckId::RadicalDimension, radical.is_some()));
    let fixed_ok = radical.as_ref().is_some_and(|e| {
        cs.iter()
            .all(|ci| &ci.try_mul_vec(e).expect("conformable") == e)
    });
    report.checks.push((CheckId::FixedRadical, fixed_ok));

    if let Some(e) = &radical {
        let basis = [e.clone(), w[0].clone(), w[1].clone()];
        let restricted: Vec<Option<RatMatrix>> = cs.iter().map(|ci| restrict(ci, &basis)).collect();
        report.c1_restricted = restricted[0].clone();
        report.c2_restricted = restricted[1].clone();
        report.c3_restricted = restricted[2].clone();
    }
    let ci = c.to_i64().unwrap_or(0);
    let c1_ok =
        report.c1_restricted.as_ref() == Some(&rat_matrix([[1, 0, 0], [0, 1, -ci], [0, 0, 1]]));
    report.checks.push((CheckId::C1Form, c1_ok));
    let c2_ok =
        report.c2_restricted.as_ref() == Some(&rat_matrix([[1, 0, 0], [0, 1, 0], [0, ci, 1]]));
    report.checks.push((CheckId::C2Form, c2_ok));

    let one = Rat::one();
    let zero = Rat::zero();
    let third_ok = report.c3_restricted.as_ref().is_some_and(|m| {
        m[(0, 0)] == one && m[(1, 0)] == zero && m[(2, 0)] == zero && !m[(0, 1)].is_zero()
    });
    report.l1 = report.c3_restricted.as_ref().map(|m| m[(0, 1)].clone());
    report.checks.push((CheckId::L1Nonzero, third_ok));

    let unipotent_ok = report.c3_restricted.as_ref().is_some_and(|m| {
        let u_minus = m
            .block(1..3, 1..3)
            .try_sub(&Matrix::identity(2))
            .expect("2x2");
        (&u_minus * &u_minus).entries().iter().all(Zero::is_zero)
    });
    report.checks.push((CheckId::UUnipotent, unipotent_ok));

    if let Some(&(id, _)) = report.checks.iter().find(|(_, ok)| !ok) {
        report.verdict = Verdict::Fail(id);
    }
    report
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSummary {
    pub total: usize,
    pub passed: usize,
    /// First-failure counts.
    pub failures: BTreeMap<CheckId, usize>,
}

impl TableSummary {
    pub fn record(&mut self, report: &CertificateReport) {
        self.total += 1;
        match report.verdict {
            Verdict::Pass => self.passed += 1,
            Verdict::Fail(id) => *self.failures.entry(id).or_default() += 1,
        }
    }
}

/// Certify a batch of `(group, word)` pairs.
pub fn verify_table<'a>(
    rows: impl IntoIterator<Item = (&'a HypergeometricGroup, &'a Word)>,
) -> (Vec<CertificateReport>, TableSummary) {
    let mut summary = TableSummary::default();
    let reports = rows
        .into_iter()
        .map(|(group, word)| {
            let report = verify_proposition(group, word);
            summary.record(&report);
            report
        })
        .collect();
    (reports, summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycloFactorization;
    use crate::pairs::QualifiedPair;
    use crate::IntPoly;

    fn group(f: &str, g: &str) -> HypergeometricGroup {
        let pair = QualifiedPair::new(f.parse::<CycloFactorization>().unwrap(), g.parse().unwrap())
            .unwrap();
        HypergeometricGroup::new(&pair).unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn row_17_passes_with_expected_matrices() {
        let report = verify_proposition(&group("1^6", "3^2,6"), &word("A^2BA^-1B^4A"));
        assert_eq!(report.verdict, Verdict::Pass, "{report}");
        assert_eq!(report.c, BigInt::from(-2));
        assert_eq!(
            report.c1_restricted,
            Some(rat_matrix([[1, 0, 0], [0, 1, 2], [0, 0, 1]]))
        );
        assert_eq!(
            report.c2_restricted,
            Some(rat_matrix([[1, 0, 0], [0, 1, 0], [0, -2, 1]]))
        );
        assert!(!report.l1.unwrap().is_zero());
        assert_eq!(report.checks.len(), CheckId::ALL.len());
    }

    #[test]
    fn radical_is_orthogonal_to_w() {
        let g = group("1^6", "3,6^2");
        let report = verify_proposition(&g, &word("B^3"));
        assert!(report.verdict.passed());
        let e = report.radical.unwrap();
        for w in [&g.v, &report.gamma_v, &report.gamma_inv_v] {
            assert!(g.omega.pairing(&e, w).is_zero());
        }
    }

    #[test]
    fn dependent_triple_fails_at_independence() {
        let f: IntPoly = "1,3,4,3,1".parse().unwrap();
        let g: IntPoly = "1,0,2,0,1".parse().unwrap();
        let grp = HypergeometricGroup::from_polys(&f, &g).unwrap();
        let report = verify_proposition(&grp, &word("BA"));
        assert_eq!(report.c, BigInt::from(2));
        assert_eq!(report.check(CheckId::LastEntry), Some(true));
        assert_eq!(report.first_failure(), Some(CheckId::Independence));
        assert!(report.radical.is_none() && report.c3_restricted.is_none());
    }

    #[test]
    fn bad_last_entry_is_reported_first() {
        let report = verify_proposition(&group("1^6", "3^2,6"), &word("A"));
        assert_eq!(report.first_failure(), Some(CheckId::LastEntry));
    }

    #[test]
    fn summary_counts_first_failures() {
        let g = group("1^6", "3^2,6");
        let words = [word("A^2BA^-1B^4A"), word("A"), word("B^2")];
        let (reports, summary) = verify_table(words.iter().map(|w| (&g, w)));
        assert_eq!(reports.len(), 3);
        assert_eq!(summary.total, 3);
        assert_eq!(summary.passed, 1);
        assert_eq!(summary.failures.values().sum::<usize>(), 2);
    }

    #[test]
    fn json_has_one_field_per_check() {
        let report = verify_proposition(&group("1^6", "3^2,6"), &word("A^2BA^-1B^4A"));
        let json = report.to_json();
        for id in CheckId::ALL {
            assert_eq!(json[id.key()], serde_json::json!(true));
        }
        assert_eq!(json["verdict"], serde_json::json!("pass"));
        assert_eq!(json["c"], serde_json::json!(-2));
    }

    #[test]
    fn check_letters() {
        let letters: String = CheckId::ALL.iter().map(|c| c.letter()).collect();
        assert_eq!(letters, "abcdeeffgh");
    }
}
