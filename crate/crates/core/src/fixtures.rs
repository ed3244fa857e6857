//! Published reference data for degree six: the maximally unipotent table
//! (f = (x - 1)^6, all `|lc(f - g)| ≥ 3`) and the table of remaining pairs
//! with `|lc| ≥ 3` and no known witness. Parsed from the files under `data/`.

use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::cyclotomic::{factorization_from_parameters, CycloFactorization, ParameterList};
use crate::pairs::QualifiedPair;
use crate::search::Word;
use crate::{IntPoly, IntVector};

/// Qualified degree-6 pairs under shift and swap.
pub const QUALIFIED_PAIRS: usize = 458;
/// Of those, pairs with `|lc(f - g)| ≤ 2`.
pub const SMALL_LC_PAIRS: usize = 211;
/// Pairs with `|lc| ≥ 3` outside the maximally unipotent family that have a witness.
pub const LARGE_LC_WITNESS_PAIRS: usize = 143;
pub const MUM_PAIRS_DEGREE_6: usize = 40;
pub const MUM_PAIRS_DEGREE_4: usize = 14;

/// Rows whose `v` has content above 2, with that content.
pub const OBSTRUCTED_ROWS: [(usize, u32); 5] = [(1, 4), (8, 4), (15, 9), (37, 7), (38, 3)];
/// Rows with a witness of length at most 6.
pub const SHORT_WITNESS_ROWS: [usize; 6] = [20, 22, 25, 32, 33, 35];
/// Rows known to have no witness of length ≤ 15; used at smaller depths.
pub const NO_WITNESS_ROWS: [usize; 3] = [2, 3, 4];

#[derive(Debug, Clone)]
pub struct TableARow {
    pub row: usize,
    pub beta: ParameterList,
    pub abs_lc: u32,
    pub v: IntVector,
    pub witness: Option<Word>,
}

impl TableARow {
    pub fn g(&self) -> CycloFactorization {
        factorization_from_parameters(&self.beta).expect("table parameters are cyclotomic")
    }

    pub fn pair(&self) -> QualifiedPair {
        let f: CycloFactorization = "1^6".parse().expect("valid");
        QualifiedPair::new(f, self.g()).expect("table pairs are qualified")
    }
}

#[derive(Debug, Clone)]
pub struct TableDRow {
    pub row: usize,
    pub alpha: ParameterList,
    pub beta: ParameterList,
}

impl TableDRow {
    pub fn pair(&self) -> QualifiedPair {
        let f =
            factorization_from_parameters(&self.alpha).expect("table parameters are cyclotomic");
        let g = factorization_from_parameters(&self.beta).expect("table parameters are cyclotomic");
        QualifiedPair::new(f, g).expect("table pairs are qualified")
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').collect())
}

pub fn table_a() -> &'static [TableARow] {
    static ROWS: OnceLock<Vec<TableARow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        data_lines(include_str!("../data/table_a.tsv"))
            .map(|cols| TableARow {
                row: cols[0].parse().expect("row"),
                beta: cols[1].parse().expect("beta"),
                abs_lc: cols[2].parse().expect("lc"),
                v: cols[3]
                    .split(',')
                    .map(|x| x.parse::<BigInt>().expect("v"))
                    .collect(),
                witness: (cols[4] != "-").then(|| cols[4].parse().expect("witness")),
            })
            .collect()
    })
}

pub fn table_a_row(row: usize) -> Option<&'static TableARow> {
    table_a().iter().find(|r| r.row == row)
}

pub fn table_d() -> &'static [TableDRow] {
    static ROWS: OnceLock<Vec<TableDRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        data_lines(include_str!("../data/table_d.tsv"))
            .map(|cols| TableDRow {
                row: cols[0].parse().expect("row"),
                alpha: cols[1].parse().expect("alpha"),
                beta: cols[2].parse().expect("beta"),
            })
            .collect()
    })
}

/// A last-entry hit whose triple `{γ^-1 v, v, γv}` is dependent.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub f: IntPoly,
    pub g: IntPoly,
    pub word: Word,
    pub c: i64,
    pub v: IntVector,
}

pub fn counterexamples() -> Vec<Counterexample> {
    let ints = |xs: &[i64]| xs.iter().copied().map(BigInt::from).collect::<Vec<_>>();
    vec![
        Counterexample {
            f: IntPoly::new(ints(&[1, 3, 4, 3, 1])),
            g: IntPoly::new(ints(&[1, 0, 2, 0, 1])),
            word: "BA".parse().expect("valid"),
            c: 2,
            v: ints(&[3, 2, 3, 0]),
        },
        Counterexample {
            f: IntPoly::new(ints(&[1, 3, 3, 2, 3, 3, 1])),
            g: IntPoly::new(ints(&[1, 0, 0, 1, 0, 0, 1])),
            word: "B^2A".parse().expect("valid"),
            c: 1,
            v: ints(&[3, 3, 1, 3, 3, 0]),
        },
    ]
}
