//! Partitions and the transition matrices between monomial and complete
//! homogeneous symmetric functions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::intmat::{rat_inverse, RatMatrix};
use crate::scalars::Rational;

/// A weakly decreasing sequence of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

type Poly = HashMap<Vec<u32>, BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `h_k(y_1..y_n)`: every degree-`k` monomial with coefficient 1.
fn complete_homogeneous(k: u32, nvars: usize) -> Poly {
    fn go(k: u32, i: usize, cur: &mut Vec<u32>, out: &mut Poly) {
        if i + 1 == cur.len() {
            cur[i] = k;
            out.insert(cur.clone(), BigInt::one());
            return;
        }
        for e in 0..=k {
            cur[i] = e;
            go(k - e, i + 1, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Poly::new();
    if nvars == 0 {
        if k == 0 {
            out.insert(Vec::new(), BigInt::one());
        }
        return out;
    }
    go(k, 0, &mut vec![0; nvars], &mut out);
    out
}

/// `h_Lambda` as an explicit polynomial in `nvars` variables.
pub fn h_polynomial(lam: &Partition, nvars: usize) -> HashMap<Vec<u32>, BigInt> {
    let mut acc = Poly::new();
    acc.insert(vec![0; nvars], BigInt::one());
    for &k in lam.parts() {
        acc = poly_mul(&acc, &complete_homogeneous(k, nvars));
    }
    acc
}

fn padded(lam: &Partition, nvars: usize) -> Vec<u32> {
    let mut v = lam.parts().to_vec();
    v.resize(nvars, 0);
    v
}

struct DegreeTables {
    parts: Vec<Partition>,
    /// `h_in_m[a][b]`: coefficient of `m_{parts[b]}` in `h_{parts[a]}`.
    h_in_m: Vec<Vec<BigInt>>,
    /// `m_in_h[a][b]`: coefficient of `h_{parts[b]}` in `m_{parts[a]}`.
    m_in_h: Vec<Vec<BigInt>>,
}

fn build_degree(n: u32) -> DegreeTables {
    let parts = partitions_of(n);
    let nvars = n as usize;
    let h_in_m: Vec<Vec<BigInt>> = parts
        .iter()
        .map(|lam| {
            let poly = h_polynomial(lam, nvars);
            parts
                .iter()
                .map(|mu| poly.get(&padded(mu, nvars)).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    let rat: RatMatrix = h_in_m
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    // h = H m, so m = H^{-1} h
    let inv = rat_inverse(&rat).expect("h basis is a basis of symmetric functions");
    let m_in_h = inv
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|q| {
                    assert!(q.is_integer(), "non-integral transition coefficient {q}");
                    q.to_integer()
                })
                .collect()
        })
        .collect();
    DegreeTables {
        parts,
        h_in_m,
        m_in_h,
    }
}

fn tables(n: u32) -> Arc<DegreeTables> {
    static MEMO: OnceLock<Mutex<HashMap<u32, Arc<DegreeTables>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = memo.lock().expect("symfunc memo poisoned").get(&n) {
        return t.clone();
    }
    let built = Arc::new(build_degree(n));
    memo.lock()
        .expect("symfunc memo poisoned")
        .entry(n)
        .or_insert(built)
        .clone()
}

fn row_for(lam: &Partition, pick: impl Fn(&DegreeTables) -> &Vec<Vec<BigInt>>) -> BTreeMap<Partition, BigInt> {
    let t = tables(lam.size());
    let a = t.parts.iter().position(|p| p == lam).expect("partition enumerated");
    let rows = pick(&t);
    t.parts
        .iter()
        .zip(&rows[a])
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| (p.clone(), c.clone()))
        .collect()
}

/// Integer coefficients `k` with `m_Lambda = sum k_{Lambda'} h_{Lambda'}`.
pub fn m_in_h(lam: &Partition) -> BTreeMap<Partition, BigInt> {
    row_for(lam, |t| &t.m_in_h)
}

/// Expansion of `h_Lambda` in the monomial basis.
pub fn h_in_m(lam: &Partition) -> BTreeMap<Partition, BigInt> {
    row_for(lam, |t| &t.h_in_m)
}
