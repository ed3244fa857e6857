//! Witness search over reduced words in `{A, B, A^-1, B^-1}`.
//!
//! Iterative deepening: for each length `d ≤ k` every reduced word of length
//! exactly `d` is examined in lexicographic order `A < B < A^-1 < B^-1`, and
//! the least word passing the candidate test is returned. Words are evaluated
//! left to right with right multiplication, so a word `X1 X2 … Xd` is the
//! matrix product in that order.
//!
//! The hot loop runs on overflow-checked `i128` matrices; a subtree whose
//! products overflow is rescanned with `BigInt`. Work at each depth is split
//! by reduced prefixes of a fixed pivot length and merged by prefix order,
//! so results and node counts do not depend on the number of workers.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{compute_v, GeneratorPair, GroupError};
use crate::linalg::{self, content, LinalgError, Matrix};
use crate::pairs::QualifiedPair;
use crate::scalar::{Ring, ToBigInt};
use crate::{IntMatrix, IntVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    AInv,
    BInv,
}

impl Letter {
    /// In search order.
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::B => Letter::BInv,
            Letter::AInv => Letter::A,
            Letter::BInv => Letter::B,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn base(self) -> char {
        match self {
            Letter::A | Letter::AInv => 'A',
            Letter::B | Letter::BInv => 'B',
        }
    }

    fn is_inverse(self) -> bool {
        matches!(self, Letter::AInv | Letter::BInv)
    }

    fn from_base(c: char, inverse: bool) -> Letter {
        match (c, inverse) {
            ('A', false) => Letter::A,
            ('B', false) => Letter::B,
            ('A', true) => Letter::AInv,
            _ => Letter::BInv,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "{}^-1", self.base())
        } else {
            write!(f, "{}", self.base())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("exponent 0 at byte {position}")]
    ZeroExponent { position: usize },
    #[error("word is not reduced: letters {position} and {} cancel", position + 1)]
    NotReduced { position: usize },
}

/// Reduced word: no letter is followed by its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self, WordError> {
        if let Some(position) = letters.windows(2).position(|w| w[1] == w[0].inverse()) {
            return Err(WordError::NotReduced { position });
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Space-separated letters, e.g. `A A B A^-1`.
    pub fn flat(&self) -> String {
        self.0
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Number of reduced words of the same length that precede this one.
    pub fn lex_rank(&self) -> u64 {
        let d = self.0.len();
        let mut rank = 0u64;
        for (i, &x) in self.0.iter().enumerate() {
            let smaller = Letter::ALL
                .iter()
                .filter(|&&y| y < x && (i == 0 || y != self.0[i - 1].inverse()))
                .count() as u64;
            rank += smaller * 3u64.pow((d - i - 1) as u32);
        }
        rank
    }
}

/// Runs collapsed into exponents: `A^2BA^-1B^4A`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.0.len() {
            let x = self.0[i];
            let run = self.0[i..].iter().take_while(|&&y| y == x).count();
            match (x.is_inverse(), run) {
                (false, 1) => write!(f, "{}", x.base())?,
                (false, k) => write!(f, "{}^{k}", x.base())?,
                (true, k) => write!(f, "{}^-{k}", x.base())?,
            }
            i += run;
        }
        Ok(())
    }
}

/// Grammar: `WORD := TERM+`, `TERM := ATOM ("^" "-"? DIGITS)?`,
/// `ATOM := "A" | "B" | "(" WORD ")"`. A negative exponent inverts the atom.
/// No whitespace; the expanded word must be reduced.
impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = WordParser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let letters = parser.word()?;
        if parser.pos != s.len() {
            return Err(parser.syntax("unexpected character"));
        }
        Word::new(letters)
    }
}

struct WordParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl WordParser<'_> {
    fn syntax(&self, message: &str) -> WordError {
        WordError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Vec<Letter>, WordError> {
        let mut out = Vec::new();
        while matches!(self.peek(), Some(b'A' | b'B' | b'(')) {
            out.extend(self.term()?);
        }
        if out.is_empty() {
            return Err(self.syntax("expected A, B or ("));
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Vec<Letter>, WordError> {
        let atom = match self.peek() {
            Some(c @ (b'A' | b'B')) => {
                self.pos += 1;
                vec![Letter::from_base(c as char, false)]
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.word()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected )"));
                }
                self.pos += 1;
                inner
            }
            _ => return Err(self.syntax("expected A, B or (")),
        };
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.pos += 1;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected exponent digits"));
        }
        let exponent: usize = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.syntax("exponent too large"))?;
        if exponent == 0 {
            return Err(WordError::ZeroExponent { position: start });
        }
        let unit: Vec<Letter> = if negative {
            atom.iter().rev().map(|l| l.inverse()).collect()
        } else {
            atom
        };
        Ok(unit.repeat(exponent))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The four generator matrices, indexed by [`Letter`].
#[derive(Debug, Clone)]
pub struct LetterMatrices<T> {
    mats: [Matrix<T>; 4],
}

impl<T: Ring> LetterMatrices<T> {
    pub fn get(&self, x: Letter) -> &Matrix<T> {
        &self.mats[x.index()]
    }

    pub fn evaluate(&self, word: &Word) -> Result<Matrix<T>, LinalgError> {
        let n = self.mats[0].rows();
        word.letters()
            .iter()
            .try_fold(Matrix::identity(n), |m, &x| m.try_mul(self.get(x)))
    }
}

impl LetterMatrices<BigInt> {
    pub fn new(gens: &GeneratorPair) -> Self {
        LetterMatrices {
            mats: [
                gens.a.clone(),
                gens.b.clone(),
                gens.a_inv.clone(),
                gens.b_inv.clone(),
            ],
        }
    }

    pub fn narrow<T: ToBigInt>(&self) -> Option<LetterMatrices<T>> {
        let convert = |m: &IntMatrix| m.try_map(T::from_bigint);
        Some(LetterMatrices {
            mats: [
                convert(&self.mats[0])?,
                convert(&self.mats[1])?,
                convert(&self.mats[2])?,
                convert(&self.mats[3])?,
            ],
        })
    }

    /// `γv` for the word `γ`, as a chain of matrix-vector products.
    pub fn apply(&self, word: &Word, v: &[BigInt]) -> IntVector {
        word.letters().iter().rev().fold(v.to_vec(), |u, &x| {
            self.get(x).try_mul_vec(&u).expect("square generators")
        })
    }
}

pub fn evaluate_word(word: &Word, gens: &GeneratorPair) -> IntMatrix {
    LetterMatrices::new(gens)
        .evaluate(word)
        .expect("bigint products cannot overflow")
}

fn is_small_last_entry(x: &BigInt) -> bool {
    let a = x.abs();
    a == BigInt::one() || a == BigInt::from(2)
}

/// Last entry of `Mv` in `{±1, ±2}`, and only then `{M^-1 v, v, Mv}` independent.
pub fn candidate_check(m: &IntMatrix, v: &IntVector) -> bool {
    let mv = m.try_mul_vec(v).expect("conformable");
    if !mv.last().is_some_and(is_small_last_entry) {
        return false;
    }
    let Ok(inv) = m.unimodular_inverse() else {
        return false;
    };
    let minv = inv.try_mul_vec(v).expect("conformable");
    linalg::linearly_independent(&[minv, v.clone(), mv])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("v is the zero vector")]
    ZeroVector,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `Some(gcd)` when the gcd of the entries of `v` exceeds 2: then no `γv`
/// can have last entry `±1` or `±2`.
pub fn gcd_obstruction(v: &IntVector) -> Result<Option<BigInt>, SearchError> {
    if v.iter().all(Zero::is_zero) {
        return Err(SearchError::ZeroVector);
    }
    let g = content(v);
    Ok((g > BigInt::from(2)).then_some(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub threads: usize,
    pub pivot_depth: usize,
    /// Abort before a depth whose words would push the total past this.
    pub node_budget: Option<u64>,
    /// Report every witness of minimal length, not just the least one.
    pub all_at_min_depth: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 10,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            pivot_depth: 4,
            node_budget: None,
            all_at_min_depth: false,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(max_depth: usize) -> Self {
        SearchConfig {
            max_depth,
            ..Self::default()
        }
    }
}

/// Words examined at each length, index = length.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NodeStats {
    pub per_depth: Vec<u64>,
}

impl NodeStats {
    pub fn total(&self) -> u64 {
        self.per_depth.iter().sum()
    }
}

/// Number of reduced words of length `d`.
pub fn reduced_word_count(d: usize) -> u64 {
    if d == 0 {
        1
    } else {
        4 * 3u64.pow(d as u32 - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: Word,
    pub matrix: IntMatrix,
    pub gamma_v: IntVector,
    pub gamma_inv_v: IntVector,
    pub last_entry: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        witness: Witness,
        /// All minimal-length witnesses in order, when requested.
        all_at_depth: Vec<Word>,
        nodes: NodeStats,
    },
    NotFound {
        max_depth: usize,
        nodes: NodeStats,
    },
    Obstructed {
        gcd: BigInt,
    },
    BudgetExhausted {
        completed_depth: usize,
        nodes: NodeStats,
    },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn nodes(&self) -> Option<&NodeStats> {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::NotFound { nodes, .. }
            | SearchOutcome::BudgetExhausted { nodes, .. } => Some(nodes),
            SearchOutcome::Obstructed { .. } => None,
        }
    }
}

/// Gcd shortcut, then [`WitnessSearch::run`].
pub fn search_witness(
    pair: &QualifiedPair,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    let gens = crate::group::build_generators(pair)?;
    WitnessSearch::new(&gens).search(cfg)
}

/// Result of scanning one prefix subtree at a fixed length.
struct SubtreeScan {
    hits: Vec<Word>,
    leaves: u64,
}

/// Search engine for one generator pair; shareable across threads.
pub struct WitnessSearch {
    big: LetterMatrices<BigInt>,
    fast: Option<LetterMatrices<i128>>,
    v: IntVector,
    n: usize,
}

impl WitnessSearch {
    pub fn new(gens: &GeneratorPair) -> Self {
        let big = LetterMatrices::new(gens);
        WitnessSearch {
            fast: big.narrow(),
            big,
            v: compute_v(gens),
            n: gens.n,
        }
    }

    pub fn v(&self) -> &IntVector {
        &self.v
    }

    pub fn search(&self, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
        if let Some(gcd) = gcd_obstruction(&self.v)? {
            return Ok(SearchOutcome::Obstructed { gcd });
        }
        Ok(self.run(cfg))
    }

    /// Iterative deepening without the gcd shortcut.
    pub fn run(&self, cfg: &SearchConfig) -> SearchOutcome {
        let mut nodes = NodeStats::default();
        for d in 0..=cfg.max_depth {
            if let Some(budget) = cfg.node_budget {
                if nodes.total() + reduced_word_count(d) > budget {
                    return SearchOutcome::BudgetExhausted {
                        completed_depth: d.saturating_sub(1),
                        nodes,
                    };
                }
            }
            let (hits, leaves) = self.scan_depth(d, cfg);
            if let Some(first) = hits.first() {
                nodes.per_depth.push(if cfg.all_at_min_depth {
                    leaves
                } else {
                    first.lex_rank() + 1
                });
                return SearchOutcome::Found {
                    witness: self.witness(first.clone()),
                    all_at_depth: if cfg.all_at_min_depth {
                        hits.clone()
                    } else {
                        Vec::new()
                    },
                    nodes,
                };
            }
            nodes.per_depth.push(leaves);
        }
        SearchOutcome::NotFound {
            max_depth: cfg.max_depth,
            nodes,
        }
    }

    pub fn witness(&self, word: Word) -> Witness {
        let matrix = self.big.evaluate(&word).expect("bigint");
        let gamma_v = self.big.apply(&word, &self.v);
        let gamma_inv_v = self.big.apply(&word.inverse(), &self.v);
        Witness {
            last_entry: gamma_v[self.n - 1].clone(),
            word,
            matrix,
            gamma_v,
            gamma_inv_v,
        }
    }

    /// Exact confirmation of a last-entry hit.
    fn confirm(&self, letters: &[Letter]) -> bool {
        let word = Word(letters.to_vec());
        let gv = self.big.apply(&word, &self.v);
        if !is_small_last_entry(&gv[self.n - 1]) {
            return false;
        }
        let giv = self.big.apply(&word.inverse(), &self.v);
        linalg::linearly_independent(&[giv, self.v.clone(), gv])
    }

    /// Hits at exactly length `d` (least first; only the least one unless
    /// `all_at_min_depth`) and the number of leaves examined.
    fn scan_depth(&self, d: usize, cfg: &SearchConfig) -> (Vec<Word>, u64) {
        if d == 0 {
            let hit = self.confirm(&[]);
            return (
                if hit {
                    vec![Word::default()]
                } else {
                    Vec::new()
                },
                1,
            );
        }
        let p = cfg.pivot_depth.clamp(1, d);
        let prefixes = reduced_words(p);
        let results: Mutex<Vec<Option<SubtreeScan>>> =
            Mutex::new((0..prefixes.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        let best = AtomicUsize::new(usize::MAX);
        let worker = || loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            if i >= prefixes.len() {
                break;
            }
            if !cfg.all_at_min_depth && i > best.load(Ordering::Relaxed) {
                continue;
            }
            let scan = self.scan_subtree(&prefixes[i], d, cfg.all_at_min_depth);
            if !scan.hits.is_empty() {
                best.fetch_min(i, Ordering::Relaxed);
            }
            results.lock().expect("no poisoned workers")[i] = Some(scan);
        };
        let threads = cfg.threads.clamp(1, prefixes.len());
        if threads == 1 {
            worker();
        } else {
            std::thread::scope(|s| {
                for _ in 0..threads {
                    s.spawn(worker);
                }
            });
        }
        let mut hits = Vec::new();
        let mut leaves = 0;
        for scan in results
            .into_inner()
            .expect("no poisoned workers")
            .into_iter()
            .flatten()
        {
            leaves += scan.leaves;
            hits.extend(scan.hits);
            if !cfg.all_at_min_depth && !hits.is_empty() {
                break;
            }
        }
        (hits, leaves)
    }

    fn scan_subtree(&self, prefix: &Word, d: usize, collect_all: bool) -> SubtreeScan {
        if let Some(fast) = &self.fast {
            if let Some(v) = self
                .v
                .iter()
                .map(i128::from_bigint)
                .collect::<Option<Vec<_>>>()
            {
                if let Ok(scan) = self.scan_subtree_in(fast, &v, prefix, d, collect_all) {
                    return scan;
                }
            }
        }
        self.scan_subtree_in(&self.big, &self.v, prefix, d, collect_all)
            .expect("bigint products cannot overflow")
    }

    fn scan_subtree_in<T: Ring>(
        &self,
        mats: &LetterMatrices<T>,
        v: &[T],
        prefix: &Word,
        d: usize,
        collect_all: bool,
    ) -> Result<SubtreeScan, LinalgError> {
        let letter_v: Vec<Vec<T>> = Letter::ALL
            .iter()
            .map(|&x| mats.get(x).try_mul_vec(v))
            .collect::<Result<_, _>>()?;
        let mut ctx = DfsContext {
            engine: self,
            mats,
            letter_v,
            stack: vec![Matrix::identity(self.n); d],
            word: Vec::with_capacity(d),
            target: d,
            collect_all,
            scan: SubtreeScan {
                hits: Vec::new(),
                leaves: 0,
            },
        };
        // stack[k] holds the product of the first k letters
        let (head, last) = prefix.letters().split_at(prefix.len() - 1);
        for (k, &x) in head.iter().enumerate() {
            let next = ctx.stack[k].try_mul(mats.get(x))?;
            ctx.stack[k + 1] = next;
            ctx.word.push(x);
        }
        if prefix.len() == d {
            ctx.leaf(last[0])?;
        } else {
            let x = last[0];
            let next = ctx.stack[head.len()].try_mul(mats.get(x))?;
            ctx.stack[head.len() + 1] = next;
            ctx.word.push(x);
            ctx.descend()?;
        }
        Ok(ctx.scan)
    }
}

struct DfsContext<'a, T> {
    engine: &'a WitnessSearch,
    mats: &'a LetterMatrices<T>,
    letter_v: Vec<Vec<T>>,
    stack: Vec<Matrix<T>>,
    word: Vec<Letter>,
    target: usize,
    collect_all: bool,
    scan: SubtreeScan,
}

impl<T: Ring> DfsContext<'_, T> {
    fn done(&self) -> bool {
        !self.collect_all && !self.scan.hits.is_empty()
    }

    fn allowed(&self) -> impl Iterator<Item = Letter> {
        let last = self.word.last().copied();
        Letter::ALL
            .into_iter()
            .filter(move |&x| last != Some(x.inverse()))
    }

    /// Word has `target - 1` letters; try each final letter via the last
    /// row of the running product against the precomputed `Xv`.
    fn leaf(&mut self, x: Letter) -> Result<(), LinalgError> {
        self.scan.leaves += 1;
        let level = self.word.len();
        let row = self.stack[level].row(self.engine.n - 1);
        let entry =
            linalg::dot(row, &self.letter_v[x.index()]).ok_or(LinalgError::Overflow("leaf"))?;
        let two = T::one() + T::one();
        let small = entry == T::one() || entry == -T::one() || entry == two || entry == -two;
        if small {
            self.word.push(x);
            if self.engine.confirm(&self.word) {
                self.scan.hits.push(Word(self.word.clone()));
            }
            self.word.pop();
        }
        Ok(())
    }

    fn descend(&mut self) -> Result<(), LinalgError> {
        let level = self.word.len();
        let letters: Vec<Letter> = self.allowed().collect();
        for x in letters {
            if self.done() {
                break;
            }
            if level + 1 == self.target {
                self.leaf(x)?;
                continue;
            }
            let (lo, hi) = self.stack.split_at_mut(level + 1);
            lo[level].mul_into(self.mats.get(x), &mut hi[0])?;
            self.word.push(x);
            self.descend()?;
            self.word.pop();
        }
        Ok(())
    }
}

/// All reduced words of length `d` in lexicographic order.
pub fn reduced_words(d: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Letter>| {
                let last = w.last().copied();
                Letter::ALL
                    .into_iter()
                    .filter(move |&x| last != Some(x.inverse()))
                    .map(move |x| {
                        let mut next = w.clone();
                        next.push(x);
                        next
                    })
            })
            .collect();
    }
    out.into_iter().map(Word).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycloFactorization;
    use crate::IntPoly;
    use proptest::prelude::*;

    fn pair(f: &str, g: &str) -> QualifiedPair {
        QualifiedPair::new(f.parse::<CycloFactorization>().unwrap(), g.parse().unwrap()).unwrap()
    }

    fn ivec(xs: &[i64]) -> IntVector {
        xs.iter().copied().map(BigInt::from).collect()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    use Letter::*;

    #[test]
    fn parse_examples() {
        assert_eq!(w("B^3").letters(), &[B, B, B]);
        let row17 = w("A^2BA^-1B^4A");
        assert_eq!(row17.letters(), &[A, A, B, AInv, B, B, B, B, A]);
        assert_eq!(row17.len(), 9);
        assert_eq!(
            "AA^-1".parse::<Word>(),
            Err(WordError::NotReduced { position: 0 })
        );
        assert_eq!(w("A^4B^4A(A^2B)^-1").to_string(), "A^4B^4AB^-1A^-2");
        assert_eq!(w("A^4B^4A(AB)^-1").len(), 11);
        assert_eq!(w("B^-4AB^4").letters()[..4], [BInv; 4]);
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "C", "A^", "A^-", "A B", "(AB", "AB)", "a", "A^x"] {
            assert!(
                matches!(bad.parse::<Word>(), Err(WordError::Syntax { .. })),
                "{bad:?}"
            );
        }
        assert_eq!(
            "A^0".parse::<Word>(),
            Err(WordError::ZeroExponent { position: 2 })
        );
        assert!(matches!(
            "A(A)^-1".parse::<Word>(),
            Err(WordError::NotReduced { .. })
        ));
    }

    #[test]
    fn format_examples() {
        let word = Word::new(vec![A, A, B, AInv, B, B, B, B, A]).unwrap();
        assert_eq!(word.to_string(), "A^2BA^-1B^4A");
        assert_eq!(word.flat(), "A A B A^-1 B B B B A");
        assert_eq!(Word::new(vec![BInv, BInv]).unwrap().to_string(), "B^-2");
    }

    #[test]
    fn lex_rank_matches_enumeration_order() {
        for d in 1..=4 {
            for (i, word) in reduced_words(d).iter().enumerate() {
                assert_eq!(word.lex_rank(), i as u64);
            }
            assert_eq!(reduced_words(d).len() as u64, reduced_word_count(d));
        }
    }

    #[test]
    fn evaluation_examples() {
        let gens = crate::group::build_generators(&pair("1^6", "3,6^2")).unwrap();
        assert!(evaluate_word(&Word::default(), &gens).is_identity());
        let b3 = &(&gens.b * &gens.b) * &gens.b;
        assert_eq!(evaluate_word(&w("B^3"), &gens), b3);
    }

    #[test]
    fn candidate_check_examples() {
        let p = pair("1^6", "3^2,6");
        let gens = crate::group::build_generators(&p).unwrap();
        let v = compute_v(&gens);
        assert!(candidate_check(
            &evaluate_word(&w("A^2BA^-1B^4A"), &gens),
            &v
        ));
        assert!(!candidate_check(&gens.b, &v));

        let f: IntPoly = "1,3,4,3,1".parse().unwrap();
        let g: IntPoly = "1,0,2,0,1".parse().unwrap();
        let gens = GeneratorPair::from_polys(&f, &g).unwrap();
        let v = compute_v(&gens);
        let ba = evaluate_word(&w("BA"), &gens);
        assert_eq!(ba.try_mul_vec(&v).unwrap()[3], BigInt::from(2));
        assert!(!candidate_check(&ba, &v));
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(
            gcd_obstruction(&ivec(&[-12, 0, -40, 0, -12, 0])),
            Ok(Some(BigInt::from(4)))
        );
        assert_eq!(
            gcd_obstruction(&ivec(&[-9, 9, -27, 9, -9, 0])),
            Ok(Some(BigInt::from(9)))
        );
        assert_eq!(gcd_obstruction(&ivec(&[-7, 13, -21, 13, -7, 0])), Ok(None));
        assert_eq!(gcd_obstruction(&ivec(&[2, 4, 0])), Ok(None));
        assert_eq!(
            gcd_obstruction(&ivec(&[0, 0])),
            Err(SearchError::ZeroVector)
        );
    }

    #[test]
    fn node_counts_are_exact_when_nothing_is_found() {
        // row 2 of the MUM table has no witness of length ≤ 15
        let gens = crate::group::build_generators(&pair("1^6", "2^4,3")).unwrap();
        let engine = WitnessSearch::new(&gens);
        let cfg = SearchConfig {
            max_depth: 6,
            threads: 3,
            pivot_depth: 2,
            ..SearchConfig::default()
        };
        match engine.search(&cfg).unwrap() {
            SearchOutcome::NotFound { nodes, max_depth } => {
                assert_eq!(max_depth, 6);
                let expected: Vec<u64> = (0..=6).map(reduced_word_count).collect();
                assert_eq!(nodes.per_depth, expected);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    // Exhaustive check of every reduced word up to length 3, in order.
    #[test]
    fn row_20_minimal_witness_matches_exhaustive_scan() {
        let p = pair("1^6", "3,6^2");
        let gens = crate::group::build_generators(&p).unwrap();
        let v = compute_v(&gens);
        let oracle = (0..=3)
            .flat_map(reduced_words)
            .find(|word| candidate_check(&evaluate_word(word, &gens), &v))
            .expect("B^3 works");
        assert_eq!(oracle.len(), 3);
        let outcome = search_witness(&p, &SearchConfig::with_depth(3)).unwrap();
        let witness = outcome.witness().unwrap();
        assert_eq!(witness.word, oracle);
        assert!(candidate_check(&evaluate_word(&w("B^3"), &gens), &v));
        let nodes = outcome.nodes().unwrap();
        assert_eq!(nodes.per_depth[..3], [1, 4, 12]);
        assert_eq!(nodes.per_depth[3], oracle.lex_rank() + 1);
    }

    #[test]
    fn all_at_min_depth_lists_every_minimal_witness() {
        let p = pair("1^6", "3,6^2");
        let gens = crate::group::build_generators(&p).unwrap();
        let v = compute_v(&gens);
        let expected: Vec<Word> = reduced_words(3)
            .into_iter()
            .filter(|word| candidate_check(&evaluate_word(word, &gens), &v))
            .collect();
        let cfg = SearchConfig {
            max_depth: 3,
            all_at_min_depth: true,
            threads: 2,
            pivot_depth: 1,
            ..SearchConfig::default()
        };
        match search_witness(&p, &cfg).unwrap() {
            SearchOutcome::Found {
                all_at_depth,
                nodes,
                witness,
            } => {
                assert_eq!(all_at_depth, expected);
                assert_eq!(witness.word, expected[0]);
                assert_eq!(nodes.per_depth[3], 36);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn obstructed_pairs_short_circuit() {
        let outcome = search_witness(&pair("1^6", "2^6"), &SearchConfig::with_depth(5)).unwrap();
        assert_eq!(
            outcome,
            SearchOutcome::Obstructed {
                gcd: BigInt::from(4)
            }
        );
        // and the raw engine agrees that nothing short exists
        let gens = crate::group::build_generators(&pair("1^6", "2^6")).unwrap();
        let raw = WitnessSearch::new(&gens).run(&SearchConfig::with_depth(5));
        assert!(matches!(raw, SearchOutcome::NotFound { .. }));
    }

    #[test]
    fn budget_is_reported_separately() {
        let cfg = SearchConfig {
            max_depth: 8,
            node_budget: Some(200),
            ..SearchConfig::default()
        };
        match search_witness(&pair("1^6", "2^4,3"), &cfg).unwrap() {
            SearchOutcome::BudgetExhausted {
                completed_depth,
                nodes,
            } => {
                // 1 + 4 + 12 + 36 + 108 = 161; length 5 would add 324
                assert_eq!(completed_depth, 4);
                assert_eq!(nodes.total(), 161);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bigint_fallback_agrees_with_fast_path() {
        let gens = crate::group::build_generators(&pair("1^6", "3^2,6")).unwrap();
        let engine = WitnessSearch::new(&gens);
        let prefix = w("A^2");
        let fast = engine
            .scan_subtree_in(
                engine.fast.as_ref().unwrap(),
                &engine
                    .v
                    .iter()
                    .map(|x| i128::from_bigint(x).unwrap())
                    .collect::<Vec<_>>(),
                &prefix,
                9,
                true,
            )
            .unwrap();
        let slow = engine
            .scan_subtree_in(&engine.big, &engine.v, &prefix, 9, true)
            .unwrap();
        assert_eq!(fast.hits, slow.hits);
        assert_eq!(fast.leaves, slow.leaves);
        assert!(fast.hits.contains(&w("A^2BA^-1B^4A")));
    }

    #[test]
    fn overflowing_fast_path_falls_back() {
        // i8 overflows almost immediately; the engine must still be exact
        let gens = crate::group::build_generators(&pair("1^6", "3^2,6")).unwrap();
        let engine = WitnessSearch::new(&gens);
        let tiny: LetterMatrices<i8> = engine.big.narrow().unwrap();
        let v8: Vec<i8> = engine
            .v
            .iter()
            .map(|x| i8::from_bigint(x).unwrap())
            .collect();
        let prefix = w("AB");
        assert!(engine
            .scan_subtree_in(&tiny, &v8, &prefix, 9, true)
            .is_err());
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0usize..4, 0..=max).prop_map(|xs| {
            let mut letters: Vec<Letter> = Vec::new();
            for x in xs {
                let l = Letter::ALL[x];
                if letters.last() == Some(&l.inverse()) {
                    letters.pop();
                } else {
                    letters.push(l);
                }
            }
            Word::new(letters).unwrap()
        })
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(word in word_strategy(12)) {
            prop_assume!(!word.is_empty());
            prop_assert_eq!(word.to_string().parse::<Word>().unwrap(), word);
        }

        #[test]
        fn word_times_inverse_is_identity(word in word_strategy(8)) {
            let gens = crate::group::build_generators(&pair("1^6", "4,5")).unwrap();
            let m = &evaluate_word(&word, &gens) * &evaluate_word(&word.inverse(), &gens);
            prop_assert!(m.is_identity());
        }
    }
}
