use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{CosetLabel, DualVector, EvenLattice};
use crate::scalars::{int, Cyclotomic, Rational};
use crate::symfunc::{m_in_h, Partition};

/// A product of creation modes `alpha^{(i)}(-n)` applied to `iota(e_charge)`.
///
/// Modes are kept sorted as `(basis index, n)` pairs with repetition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial {
    modes: Vec<(usize, u32)>,
    charge: DualVector,
}

impl FockMonomial {
    pub fn new(mut modes: Vec<(usize, u32)>, charge: DualVector) -> Self {
        assert!(modes.iter().all(|&(_, n)| n >= 1), "creation modes need n >= 1");
        modes.sort_unstable();
        FockMonomial { modes, charge }
    }

    pub fn bare(charge: DualVector) -> Self {
        FockMonomial {
            modes: Vec::new(),
            charge,
        }
    }

    pub fn modes(&self) -> &[(usize, u32)] {
        &self.modes
    }

    pub fn charge(&self) -> &DualVector {
        &self.charge
    }

    pub fn is_bare(&self) -> bool {
        self.modes.is_empty()
    }

    /// Total mode degree `sum n`.
    pub fn degree(&self) -> u32 {
        self.modes.iter().map(|&(_, n)| n).sum()
    }

    pub fn max_mode(&self) -> u32 {
        self.modes.iter().map(|&(_, n)| n).max().unwrap_or(0)
    }

    pub fn with_charge(&self, charge: DualVector) -> Self {
        FockMonomial {
            modes: self.modes.clone(),
            charge,
        }
    }

    pub(crate) fn insert_mode(&self, i: usize, n: u32) -> Self {
        let mut modes = self.modes.clone();
        let pos = modes.partition_point(|&m| m < (i, n));
        modes.insert(pos, (i, n));
        FockMonomial {
            modes,
            charge: self.charge.clone(),
        }
    }

    pub(crate) fn remove_at(&self, pos: usize) -> Self {
        let mut modes = self.modes.clone();
        modes.remove(pos);
        FockMonomial {
            modes,
            charge: self.charge.clone(),
        }
    }

    /// Distinct modes with their multiplicities and first position.
    pub(crate) fn grouped(&self) -> Vec<((usize, u32), usize, usize)> {
        let mut out: Vec<((usize, u32), usize, usize)> = Vec::new();
        for (pos, &m) in self.modes.iter().enumerate() {
            match out.last_mut() {
                Some((last, k, _)) if *last == m => *k += 1,
                _ => out.push((m, 1, pos)),
            }
        }
        out
    }

    fn merge(&self, other: &FockMonomial) -> FockMonomial {
        let mut modes = self.modes.clone();
        modes.extend_from_slice(&other.modes);
        modes.sort_unstable();
        FockMonomial {
            modes,
            charge: other.charge.clone(),
        }
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in &self.modes {
            write!(f, "a{}(-{}) ", i + 1, n)?;
        }
        write!(f, "e{}", self.charge)
    }
}

/// A finite linear combination of monomials whose charges share one coset.
#[derive(Clone, PartialEq, Eq)]
pub struct FockVector {
    coset: CosetLabel,
    terms: BTreeMap<FockMonomial, Cyclotomic>,
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c}) {m:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FockVector {
    pub fn zero(coset: CosetLabel) -> Self {
        FockVector {
            coset,
            terms: BTreeMap::new(),
        }
    }

    pub fn coset(&self) -> &CosetLabel {
        &self.coset
    }

    pub fn terms(&self) -> &BTreeMap<FockMonomial, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> Option<&Cyclotomic> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (m, x) in &other.terms {
            if unit {
                self.add_term(m.clone(), x);
            } else {
                self.add_term(m.clone(), &(x * c));
            }
        }
    }

    pub fn add_assign(&mut self, other: &FockVector) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x);
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> FockVector {
        let mut out = FockVector::zero(self.coset.clone());
        out.add_scaled(self, c);
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> FockVector {
        FockVector {
            coset: self.coset.clone(),
            terms: if q.is_zero() {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))).collect()
            },
        }
    }

    pub fn neg(&self) -> FockVector {
        self.scale_rational(&-Rational::one())
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), &-x);
        }
        out
    }

    pub fn plus(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }
}

/// Operations on the Fock spaces `V_{beta+L}` of one lattice.
#[derive(Clone, Debug)]
pub struct FockSpace {
    lattice: Arc<EvenLattice>,
}

/// Outcome of grading a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Homogeneous(Rational),
    Inhomogeneous,
    Zero,
}

impl FockSpace {
    pub fn new(lattice: Arc<EvenLattice>) -> Self {
        FockSpace { lattice }
    }

    pub fn lattice(&self) -> &Arc<EvenLattice> {
        &self.lattice
    }

    pub fn one(&self) -> Cyclotomic {
        Cyclotomic::one(self.lattice.field())
    }

    pub fn scalar(&self, q: Rational) -> Cyclotomic {
        Cyclotomic::from_rational(self.lattice.field(), q)
    }

    /// `iota(e_gamma)`.
    pub fn iota(&self, gamma: &DualVector) -> Result<FockVector> {
        self.monomial(&[], gamma)
    }

    /// The vacuum of `V_L`.
    pub fn vacuum(&self) -> FockVector {
        self.iota(&DualVector::zero(self.lattice.rank()))
            .expect("zero lies in the dual")
    }

    /// `alpha^{(i_1)}(-n_1) ... iota(e_gamma)` with 0-based basis indices.
    pub fn monomial(&self, modes: &[(usize, u32)], gamma: &DualVector) -> Result<FockVector> {
        let coset = self.lattice.coset(gamma)?;
        for &(i, n) in modes {
            if i >= self.lattice.rank() {
                return Err(Error::DimensionMismatch {
                    expected: self.lattice.rank(),
                    got: i + 1,
                });
            }
            if n == 0 {
                return Err(Error::Parse("creation modes need n >= 1".into()));
            }
        }
        let mut v = FockVector::zero(coset);
        v.add_term(FockMonomial::new(modes.to_vec(), gamma.clone()), &self.one());
        Ok(v)
    }

    /// Builds a vector from arbitrary terms, validating charges and coset.
    pub fn from_terms(&self, coset: Option<CosetLabel>, terms: Vec<(FockMonomial, Cyclotomic)>) -> Result<FockVector> {
        let mut label = coset;
        let mut v: Option<FockVector> = None;
        for (m, c) in terms {
            self.lattice.require_dual(m.charge())?;
            let cs = self.lattice.coset_unchecked(m.charge());
            match &label {
                Some(l) if *l != cs => {
                    return Err(Error::CosetMismatch(format!(
                        "charge {} is not in {}",
                        m.charge(),
                        l
                    )))
                }
                Some(_) => {}
                None => label = Some(cs),
            }
            if m.modes().iter().any(|&(i, _)| i >= self.lattice.rank()) {
                return Err(Error::DimensionMismatch {
                    expected: self.lattice.rank(),
                    got: m.modes().iter().map(|&(i, _)| i + 1).max().unwrap_or(0),
                });
            }
            v.get_or_insert_with(|| FockVector::zero(label.clone().expect("set above")))
                .add_term(m, &c);
        }
        Ok(v.unwrap_or_else(|| FockVector::zero(label.unwrap_or_else(|| self.lattice.zero_coset()))))
    }

    pub fn monomial_weight(&self, m: &FockMonomial) -> Rational {
        self.lattice.norm(m.charge()) + int(m.degree() as i64)
    }

    pub fn weight(&self, v: &FockVector) -> Weight {
        let mut w: Option<Rational> = None;
        for m in v.terms().keys() {
            let x = self.monomial_weight(m);
            match &w {
                None => w = Some(x),
                Some(y) if *y != x => return Weight::Inhomogeneous,
                _ => {}
            }
        }
        w.map(Weight::Homogeneous).unwrap_or(Weight::Zero)
    }

    /// Splits a vector into homogeneous parts keyed by weight.
    pub fn homogeneous_parts(&self, v: &FockVector) -> BTreeMap<Rational, FockVector> {
        let mut out: BTreeMap<Rational, FockVector> = BTreeMap::new();
        for (m, c) in v.terms() {
            out.entry(self.monomial_weight(m))
                .or_insert_with(|| FockVector::zero(v.coset().clone()))
                .add_term(m.clone(), c);
        }
        out
    }

    fn check_dim(&self, h: &DualVector) -> Result<()> {
        self.lattice.check_dim(h)
    }

    /// The Heisenberg mode `h(n)` for any `h` in `Q (x) L`.
    pub fn apply_mode(&self, h: &DualVector, n: i64, v: &FockVector) -> Result<FockVector> {
        self.check_dim(h)?;
        Ok(self.mode(h, n, v))
    }

    pub(crate) fn mode(&self, h: &DualVector, n: i64, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.coset().clone());
        for (m, c) in v.terms() {
            self.mode_on_monomial(h, n, m, c, &mut out);
        }
        out
    }

    pub(crate) fn mode_on_monomial(&self, h: &DualVector, n: i64, m: &FockMonomial, c: &Cyclotomic, out: &mut FockVector) {
        use std::cmp::Ordering;
        match n.cmp(&0) {
            Ordering::Less => {
                for (i, hi) in h.coords().iter().enumerate() {
                    if !hi.is_zero() {
                        out.add_term(m.insert_mode(i, (-n) as u32), &c.scale(hi));
                    }
                }
            }
            Ordering::Equal => {
                let s = self.lattice.pair(h, m.charge());
                if !s.is_zero() {
                    out.add_term(m.clone(), &c.scale(&s));
                }
            }
            Ordering::Greater => {
                let n = n as u32;
                for ((j, k), mult, pos) in m.grouped() {
                    if k != n {
                        continue;
                    }
                    let hj = self.lattice.pair(h, &self.lattice.basis_vector(j));
                    if hj.is_zero() {
                        continue;
                    }
                    let f = hj * int(n as i64) * int(mult as i64);
                    out.add_term(m.remove_at(pos), &c.scale(&f));
                }
            }
        }
    }

    /// `e_lambda` acting by left multiplication in the twisted group algebra.
    pub fn e_mult(&self, lambda: &DualVector, v: &FockVector) -> Result<FockVector> {
        self.lattice.require_dual(lambda)?;
        let coset = self.lattice.coset_unchecked(&(v.coset().rep() + lambda));
        let mut out = FockVector::zero(coset);
        for (m, c) in v.terms() {
            let eps = self.lattice.epsilon_unchecked(lambda, m.charge());
            out.add_term(m.with_charge(lambda + m.charge()), &(c * &eps));
        }
        Ok(out)
    }

    /// Multiplies by a polynomial in creation modes given as a charge-zero vector.
    pub(crate) fn multiply_creation(&self, poly: &FockVector, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.coset().clone());
        for (p, a) in poly.terms() {
            for (m, b) in v.terms() {
                out.add_term(p.merge(m), &(a * b));
            }
        }
        out
    }

    /// The operator coefficients `s_{gamma,n}` of `x^n` in `E^-(-gamma, x)`,
    /// as charge-zero creation polynomials, for `n` in `0..=max_power`.
    pub fn e_minus_polys(&self, gamma: &DualVector, max_power: usize) -> Vec<FockVector> {
        let vac = self.vacuum();
        let mut s = vec![vac];
        for n in 1..=max_power {
            let mut acc = FockVector::zero(self.lattice.zero_coset());
            for mm in 1..=n {
                acc.add_assign(&self.mode(gamma, -(mm as i64), &s[n - mm]));
            }
            s.push(acc.scale_rational(&Rational::new(BigInt::one(), BigInt::from(n))));
        }
        s
    }

    /// Coefficients of `x^0 .. x^max_power` in `E^-(-gamma, x) v`.
    pub fn e_minus(&self, gamma: &DualVector, v: &FockVector, max_power: usize) -> Result<Vec<FockVector>> {
        self.check_dim(gamma)?;
        Ok(self
            .e_minus_polys(gamma, max_power)
            .iter()
            .map(|p| self.multiply_creation(p, v))
            .collect())
    }

    /// Coefficients of `x^0, x^{-1}, ...` in `E^+(-gamma, x) v`; the list ends
    /// at the last nonzero coefficient.
    pub fn e_plus(&self, gamma: &DualVector, v: &FockVector) -> Result<Vec<FockVector>> {
        self.check_dim(gamma)?;
        Ok(self.e_plus_unchecked(gamma, v))
    }

    pub(crate) fn e_plus_unchecked(&self, gamma: &DualVector, v: &FockVector) -> Vec<FockVector> {
        let max_deg = v.terms().keys().map(|m| m.degree()).max().unwrap_or(0) as usize;
        let mut t = vec![v.clone()];
        for n in 1..=max_deg {
            let mut acc = FockVector::zero(v.coset().clone());
            for mm in 1..=n {
                acc.add_assign(&self.mode(gamma, mm as i64, &t[n - mm]));
            }
            t.push(acc.scale_rational(&Rational::new(-BigInt::one(), BigInt::from(n))));
        }
        while t.len() > 1 && t.last().map(|x| x.is_zero()).unwrap_or(false) {
            t.pop();
        }
        t
    }

    /// `L(-1)`, `L(0)` or `L(1)` in the free-field realization.
    pub fn virasoro(&self, n: i64, v: &FockVector) -> Result<FockVector> {
        match n {
            -1 => Ok(self.l_minus_one(v)),
            0 => Ok(self.l_zero(v)),
            1 => Ok(self.l_one(v)),
            _ => Err(Error::Parse(format!("only L(-1), L(0), L(1) are available, got L({n})"))),
        }
    }

    pub fn l_zero(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.coset().clone());
        for (m, c) in v.terms() {
            out.add_term(m.clone(), &c.scale(&self.monomial_weight(m)));
        }
        out
    }

    pub fn l_minus_one(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.coset().clone());
        for (m, c) in v.terms() {
            // acting on iota(e_gamma)
            for (i, gi) in m.charge().coords().iter().enumerate() {
                if !gi.is_zero() {
                    out.add_term(m.insert_mode(i, 1), &c.scale(gi));
                }
            }
            for ((i, k), mult, pos) in m.grouped() {
                let f = int(k as i64) * int(mult as i64);
                out.add_term(m.remove_at(pos).insert_mode(i, k + 1), &c.scale(&f));
            }
        }
        out
    }

    pub fn l_one(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.coset().clone());
        for (m, c) in v.terms() {
            for ((i, k), mult, pos) in m.grouped() {
                let rest = m.remove_at(pos);
                if k >= 2 {
                    let f = int(k as i64) * int(mult as i64);
                    out.add_term(rest.insert_mode(i, k - 1), &c.scale(&f));
                } else {
                    let s = self.lattice.pair(&self.lattice.basis_vector(i), m.charge());
                    if !s.is_zero() {
                        out.add_term(rest, &c.scale(&(s * int(mult as i64))));
                    }
                }
            }
        }
        out
    }

    /// `L(1)^k / k!` applied to `v`.
    pub fn l_one_divided(&self, k: u32, v: &FockVector) -> FockVector {
        let mut cur = v.clone();
        for j in 1..=k {
            cur = self.l_one(&cur).scale_rational(&Rational::new(BigInt::one(), BigInt::from(j)));
        }
        cur
    }

    /// `s_{gamma, n}` as an operator.
    pub fn s_op(&self, gamma: &DualVector, n: u32, v: &FockVector) -> FockVector {
        let polys = self.e_minus_polys(gamma, n as usize);
        self.multiply_creation(&polys[n as usize], v)
    }

    /// `h_Lambda(gamma) = s_{gamma,lambda_1} ... s_{gamma,lambda_k}`.
    pub fn h_op(&self, gamma: &DualVector, lam: &Partition, v: &FockVector) -> Result<FockVector> {
        self.lattice.require_dual(gamma)?;
        Ok(self.h_op_unchecked(gamma, lam, v))
    }

    pub(crate) fn h_op_unchecked(&self, gamma: &DualVector, lam: &Partition, v: &FockVector) -> FockVector {
        let Some(&top) = lam.parts().first() else {
            return v.clone();
        };
        let polys = self.e_minus_polys(gamma, top as usize);
        let mut cur = v.clone();
        for &p in lam.parts() {
            cur = self.multiply_creation(&polys[p as usize], &cur);
        }
        cur
    }

    /// `m_Lambda(alpha^{(i)}) = sum k_{Lambda'} h_{Lambda'}(-beta^{(i)})`.
    pub fn m_op(&self, i: usize, lam: &Partition, v: &FockVector) -> Result<FockVector> {
        if i >= self.lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.lattice.rank(),
                got: i + 1,
            });
        }
        let minus_beta = -&self.lattice.dual_basis_vector(i);
        let mut out = FockVector::zero(v.coset().clone());
        for (mu, k) in m_in_h(lam) {
            let term = self.h_op_unchecked(&minus_beta, &mu, v);
            out.add_scaled(&term, &self.scalar(Rational::from_integer(k)));
        }
        Ok(out)
    }
}
