//! Exact scalars: arbitrary-precision rationals and elements of the
//! cyclotomic field `Q(zeta_N)` in the power basis modulo `Phi_N`.
//!
//! Every phase the library manipulates is a root of unity `e^{2 pi i r}`
//! with rational `r`, so a single cyclotomic field per lattice session is
//! enough to hold all structure constants exactly.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number; always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

/// Fractional part in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Generalized binomial coefficient `C(a, k)` for integer `a` (possibly negative).
pub fn binom(a: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(a - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Big-integer lcm of a sequence, starting from 1.
pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

// ---------------------------------------------------------------------------
// Cyclotomic fields

/// The field `Q(zeta_N)`, stored as `Q[x]/(Phi_N(x))`.
pub struct CyclotomicField {
    order: u64,
    degree: usize,
    /// Monic `Phi_N`, low degree first, length `degree + 1`.
    modulus: Vec<BigInt>,
    /// `zeta^k` reduced, for `k` in `0..order`.
    powers: Vec<Vec<Rational>>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn cyclotomic_polynomial(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d, memo);
            p = poly_div_exact(&p, &phi_d);
        }
    }
    memo.insert(n, p.clone());
    p
}

fn field_registry() -> &'static Mutex<HashMap<u64, Arc<CyclotomicField>>> {
    static REG: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CyclotomicField {
    /// The shared field of order `n`; fields are interned per order.
    pub fn get(n: u64) -> Arc<CyclotomicField> {
        assert!(n >= 1, "cyclotomic order must be positive");
        let mut reg = field_registry().lock().expect("field registry poisoned");
        reg.entry(n)
            .or_insert_with(|| Arc::new(CyclotomicField::build(n)))
            .clone()
    }

    fn build(n: u64) -> CyclotomicField {
        let modulus = cyclotomic_polynomial(n, &mut HashMap::new());
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x
            let top = cur[degree - 1].clone();
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1].clone();
            }
            cur[0] = Rational::zero();
            if !top.is_zero() {
                for j in 0..degree {
                    cur[j] -= &top * Rational::from_integer(modulus[j].clone());
                }
            }
        }
        CyclotomicField {
            order: n,
            degree,
            modulus,
            powers,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Euler phi of the order: the dimension over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    fn reduce(&self, mut poly: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree;
        for k in (d..poly.len()).rev() {
            let c = std::mem::take(&mut poly[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                if !self.modulus[j].is_zero() {
                    poly[k - d + j] -= &c * Rational::from_integer(self.modulus[j].clone());
                }
            }
        }
        poly.truncate(d);
        poly.resize(d, Rational::zero());
        poly
    }
}

/// Element of `Q(zeta_N)`.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coords: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyclotomic {
            field: field.clone(),
            coords: vec![Rational::zero(); field.degree],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Rational::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: Rational) -> Self {
        let mut z = Self::zero(field);
        z.coords[0] = q;
        z
    }

    pub fn from_int(field: &Arc<CyclotomicField>, n: i64) -> Self {
        Self::from_rational(field, int(n))
    }

    /// Builds an element from power-basis coordinates (reduced modulo `Phi_N`).
    pub fn from_coords(field: &Arc<CyclotomicField>, coords: Vec<Rational>) -> Self {
        Cyclotomic {
            field: field.clone(),
            coords: field.reduce(coords),
        }
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let n = field.order as i64;
        let idx = k.rem_euclid(n) as usize;
        Cyclotomic {
            field: field.clone(),
            coords: field.powers[idx].clone(),
        }
    }

    /// `e^{2 pi i r}`; fails when the denominator of `r` does not divide `N`.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, r: &Rational) -> Result<Self> {
        let scaled = r * Rational::from_integer(BigInt::from(field.order));
        if !scaled.is_integer() {
            let required = r.denom().lcm(&BigInt::from(field.order));
            return Err(Error::IncompatibleOrder {
                value: fmt_rational(r),
                order: field.order,
                required: required.to_string(),
            });
        }
        let n = BigInt::from(field.order);
        let k = scaled.to_integer().mod_floor(&n);
        Ok(Self::zeta_pow(field, k.to_i64().expect("small exponent")))
    }

    /// `e^{pi i q}`.
    pub fn exp_pi_i(field: &Arc<CyclotomicField>, q: &Rational) -> Result<Self> {
        Self::root_of_unity(field, &(q / int(2)))
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if this element lies in `Q * 1`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_rational_integer(&self) -> bool {
        self.as_rational().map(|q| q.is_integer()).unwrap_or(false)
    }

    /// True when every power-basis coordinate is an integer, i.e. the element
    /// lies in `Z[zeta_N]`.
    pub fn is_cyclotomic_integer(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    fn check_same(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order,
            "mixing cyclotomic fields of orders {} and {}",
            self.field.order,
            other.field.order
        );
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.field);
        }
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&Rational::from_integer(n.clone()))
    }

    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.inverse().expect("inverse of zero").pow(-k);
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[x]`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let a = trim(self.coords.clone());
        // invariant: s_i * a == r_i (mod modulus)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Phi_N is irreducible
        debug_assert_eq!(r0.len(), 1);
        let inv_c = r0[0].recip();
        let s: Vec<Rational> = s0.iter().map(|c| c * &inv_c).collect();
        Some(Self::from_coords(&self.field, s))
    }

    /// Recognizes `zeta^k` (exact), returning `k` in `0..N`.
    pub fn as_root_of_unity(&self) -> Option<u64> {
        (0..self.field.order).find(|&k| self.field.powers[k as usize] == self.coords)
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Rational::zero());
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl Eq for Cyclotomic {}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})z{}", self.field.order),
                _ => format!("({c})z{}^{k}", self.field.order),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_same(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_same(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_same(rhs);
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        let d = self.field.degree;
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coords: self.field.reduce(prod),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        self.check_same(rhs);
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        self.check_same(rhs);
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

/// Absolute value helper for diagnostics.
pub fn abs_rational(q: &Rational) -> Rational {
    q.abs()
}
