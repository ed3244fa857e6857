//! Independent oracles for integration tests. Nothing here calls into the
//! library's linear algebra or search code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type M = Vec<Vec<BigInt>>;

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().copied().map(BigInt::from).collect()
}

/// Companion matrix from ascending coefficients: ones on the subdiagonal,
/// `-c_i` down the last column.
pub fn companion(coeffs: &[BigInt]) -> M {
    let n = coeffs.len() - 1;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        if i > 0 {
            m[i][i - 1] = BigInt::one();
        }
        m[i][n - 1] = -coeffs[i].clone();
    }
    m
}

pub fn identity(n: usize) -> M {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mul(a: &M, b: &M) -> M {
    let n = a.len();
    let p = b[0].len();
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &M, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &M) -> M {
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Rank over the rationals by plain Gaussian elimination.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Inverse over the rationals, asserted integral.
pub fn integer_inverse(a: &M) -> M {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            a[i].iter()
                .cloned()
                .chain((0..n).map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                }))
                .map(BigRational::from_integer)
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).expect("invertible");
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot = m[c].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
    }
    m.iter()
        .map(|r| {
            r[n..]
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "inverse is not integral");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

fn checklast(v: &[BigInt]) -> bool {
    let e = v.last().expect("nonempty");
    [1, -1, 2, -2].iter().any(|&c| *e == BigInt::from(c))
}

pub struct NaiveOutcome {
    /// First hit in preorder, as letter indices 0..4 for A, B, A^-1, B^-1.
    pub word: Option<Vec<usize>>,
    pub nodes_per_depth: Vec<u64>,
}

struct Naive {
    k: usize,
    mats: [M; 4],
    v: Vec<BigInt>,
    nodes: Vec<u64>,
}

impl Naive {
    fn tryone(&self, m: &M, minv: &M) -> bool {
        let mv = mul_vec(m, &self.v);
        checklast(&mv) && rank(&[mul_vec(minv, &self.v), self.v.clone(), mv]) == 3
    }

    // Preorder: test the node, then its children unless one already worked.
    fn tryall(&mut self, s: &mut Vec<usize>, m: &M, minv: &M) -> bool {
        self.nodes[s.len()] += 1;
        if self.tryone(m, minv) {
            return true;
        }
        if s.len() < self.k {
            let inverse = |x: usize| (x + 2) % 4;
            for x in 0..4 {
                if s.last().is_some_and(|&l| x == inverse(l)) {
                    continue;
                }
                s.push(x);
                let next = mul(m, &self.mats[x]);
                let next_inv = mul(&self.mats[inverse(x)], minv);
                if self.tryall(s, &next, &next_inv) {
                    return true;
                }
                s.pop();
            }
        }
        false
    }
}

/// Straight port of the exhaustive preorder search over words of length ≤ k.
pub fn naive_search(f: &[BigInt], g: &[BigInt], k: usize) -> NaiveOutcome {
    let a = companion(f);
    let b = companion(g);
    let a_inv = integer_inverse(&a);
    let b_inv = integer_inverse(&b);
    let n = a.len();
    let mut en = vec![BigInt::zero(); n];
    en[n - 1] = BigInt::one();
    let c = mul(&a_inv, &b);
    let v: Vec<BigInt> = mul_vec(&c, &en)
        .into_iter()
        .zip(&en)
        .map(|(x, e)| x - e)
        .collect();
    let mut naive = Naive {
        k,
        mats: [a, b, a_inv, b_inv],
        v,
        nodes: vec![0; k + 1],
    };
    let mut s = Vec::new();
    let found = naive.tryall(&mut s, &identity(n), &identity(n));
    NaiveOutcome {
        word: found.then_some(s),
        nodes_per_depth: naive.nodes,
    }
}

/// `(A^-1 B - I) e_n` by direct matrix arithmetic.
pub fn v_by_matrices(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let a_inv = integer_inverse(&companion(f));
    let b = companion(g);
    let c = mul(&a_inv, &b);
    let n = c.len();
    (0..n)
        .map(|i| {
            c[i][n - 1].clone()
                - if i == n - 1 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
        })
        .collect()
}
