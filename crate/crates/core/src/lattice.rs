//! Even nondegenerate lattices, their duals and cosets, and the
//! bimultiplicative 2-cocycle used to twist the group algebra of the dual.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{self, IntMatrix, RatMatrix};
use crate::scalars::{frac, int, lcm_all, Cyclotomic, CyclotomicField, Rational};

/// A vector of `Q (x) L`, in coordinates with respect to the chosen basis of `L`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DualVector(pub Vec<Rational>);

impl DualVector {
    pub fn zero(rank: usize) -> Self {
        DualVector(vec![Rational::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        DualVector(v.iter().map(|&x| int(x)).collect())
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Rational::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        DualVector(self.0.iter().map(|c| c * q).collect())
    }
}

impl fmt::Debug for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl<'a> Add<&'a DualVector> for &'a DualVector {
    type Output = DualVector;
    fn add(self, rhs: &DualVector) -> DualVector {
        DualVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a DualVector> for &'a DualVector {
    type Output = DualVector;
    fn sub(self, rhs: &DualVector) -> DualVector {
        DualVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DualVector {
    type Output = DualVector;
    fn neg(self) -> DualVector {
        DualVector(self.0.iter().map(|a| -a).collect())
    }
}

/// A coset `beta + L`, stored through its canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CosetLabel {
    rep: DualVector,
}

impl CosetLabel {
    pub fn rep(&self) -> &DualVector {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+L", self.rep)
    }
}

pub struct EvenLattice {
    name: Option<String>,
    gram: IntMatrix,
    gram_q: RatMatrix,
    gram_inv: RatMatrix,
    /// `delta[i]` in L-coordinates.
    delta: Vec<DualVector>,
    divisors: Vec<BigInt>,
    dual_gram: RatMatrix,
    /// Maps L-coordinates to delta-coordinates.
    to_delta: RatMatrix,
    /// Exponents `q_ij` with `epsilon(delta_i, delta_j) = e^{2 pi i q_ij}`.
    cocycle: RatMatrix,
    field: Arc<CyclotomicField>,
    positive_definite: bool,
}

impl fmt::Debug for EvenLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvenLattice")
            .field("name", &self.name)
            .field("gram", &self.gram)
            .field("divisors", &self.divisors)
            .finish()
    }
}

impl EvenLattice {
    pub fn from_i64(gram: &[Vec<i64>]) -> Result<Arc<EvenLattice>> {
        Self::new(intmat::to_int_matrix(gram), None)
    }

    /// Validates the Gram matrix and computes the Smith-compatible basis of the dual.
    pub fn new(gram: IntMatrix, name: Option<String>) -> Result<Arc<EvenLattice>> {
        let r = gram.len();
        if r == 0 {
            return Err(Error::Degenerate);
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    got: row.len(),
                });
            }
            for j in 0..r {
                if row[j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
            if row[i].is_odd() {
                return Err(Error::NotEven {
                    row: i,
                    col: i,
                    value: row[i].to_string(),
                });
            }
        }
        let gram_q = intmat::to_rat_matrix(&gram);
        let gram_inv = intmat::rat_inverse(&gram_q).ok_or(Error::Degenerate)?;

        let snf = intmat::smith(&gram);
        let divisors = snf.diag.clone();
        let v = &snf.v;
        let delta: Vec<DualVector> = (0..r)
            .map(|i| {
                let d = Rational::from_integer(divisors[i].clone());
                DualVector((0..r).map(|k| Rational::from_integer(v[k][i].clone()) / &d).collect())
            })
            .collect();
        let v_inv = intmat::rat_inverse(&intmat::to_rat_matrix(v)).expect("unimodular");
        let to_delta: RatMatrix = v_inv
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let d = Rational::from_integer(divisors[i].clone());
                row.into_iter().map(|x| x * &d).collect()
            })
            .collect();

        let pair = |a: &DualVector, b: &DualVector| -> Rational {
            let gb = intmat::rat_mat_vec(&gram_q, &b.0);
            a.0.iter().zip(&gb).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
        };
        let dual_gram: RatMatrix = delta
            .iter()
            .map(|a| delta.iter().map(|b| pair(a, b)).collect())
            .collect();
        let cocycle: RatMatrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i > j {
                            &dual_gram[i][j] / int(2)
                        } else if i == j {
                            Rational::from_integer(divisors[i].clone()) * &dual_gram[i][i] / int(4)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();

        let dual_dens: Vec<BigInt> = dual_gram.iter().flatten().map(|q| q.denom().clone()).collect();
        let cocycle_dens: Vec<BigInt> = cocycle.iter().flatten().map(|q| q.denom().clone()).collect();
        let order = (lcm_all(&dual_dens) * BigInt::from(4))
            .lcm(&lcm_all(&cocycle_dens))
            .to_u64()
            .expect("field order fits in u64");
        let field = CyclotomicField::get(order);

        let positive_definite = leading_minors_positive(&gram_q);

        Ok(Arc::new(EvenLattice {
            name,
            gram,
            gram_q,
            gram_inv,
            delta,
            divisors,
            dual_gram,
            to_delta,
            cocycle,
            field,
            positive_definite,
        }))
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &RatMatrix {
        &self.gram_inv
    }

    pub fn delta(&self, i: usize) -> &DualVector {
        &self.delta[i]
    }

    pub fn deltas(&self) -> &[DualVector] {
        &self.delta
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.divisors
    }

    pub fn dual_gram(&self) -> &RatMatrix {
        &self.dual_gram
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    pub fn determinant(&self) -> BigInt {
        intmat::det(&self.gram)
    }

    /// `alpha^{(i)}`, the i-th basis vector of L.
    pub fn basis_vector(&self, i: usize) -> DualVector {
        DualVector::unit(self.rank(), i)
    }

    /// `beta^{(i)}`, the basis of the dual with `<beta^{(i)}, alpha^{(j)}> = delta_ij`.
    pub fn dual_basis_vector(&self, i: usize) -> DualVector {
        DualVector(self.gram_inv.iter().map(|row| row[i].clone()).collect())
    }

    pub fn check_dim(&self, v: &DualVector) -> Result<()> {
        if v.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.rank(),
            });
        }
        Ok(())
    }

    pub fn pairing(&self, u: &DualVector, v: &DualVector) -> Result<Rational> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.pair(u, v))
    }

    /// Unchecked bilinear form.
    pub fn pair(&self, u: &DualVector, v: &DualVector) -> Rational {
        let mut s = Rational::zero();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.0.iter().enumerate() {
                if !vj.is_zero() && !self.gram[i][j].is_zero() {
                    s += ui * vj * Rational::from_integer(self.gram[i][j].clone());
                }
            }
        }
        s
    }

    /// `<v, v> / 2`.
    pub fn norm(&self, v: &DualVector) -> Rational {
        self.pair(v, v) / int(2)
    }

    pub fn in_lattice(&self, v: &DualVector) -> bool {
        v.rank() == self.rank() && v.is_integral()
    }

    pub fn in_dual(&self, v: &DualVector) -> bool {
        v.rank() == self.rank()
            && intmat::rat_mat_vec(&self.gram_q, &v.0)
                .iter()
                .all(|c| c.is_integer())
    }

    pub fn require_dual(&self, v: &DualVector) -> Result<()> {
        self.check_dim(v)?;
        if !self.in_dual(v) {
            return Err(Error::NotInDual(v.to_string()));
        }
        Ok(())
    }

    pub fn require_lattice(&self, v: &DualVector) -> Result<()> {
        self.check_dim(v)?;
        if !self.in_lattice(v) {
            return Err(Error::NotInLattice(v.to_string()));
        }
        Ok(())
    }

    /// Integer coordinates of a dual vector in the delta basis.
    pub fn delta_coords(&self, v: &DualVector) -> Vec<BigInt> {
        intmat::rat_mat_vec(&self.to_delta, &v.0)
            .into_iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect()
    }

    fn from_delta_coords(&self, c: &[BigInt]) -> DualVector {
        let mut out = DualVector::zero(self.rank());
        for (ci, d) in c.iter().zip(&self.delta) {
            if ci.is_zero() {
                continue;
            }
            let q = Rational::from_integer(ci.clone());
            for (o, x) in out.0.iter_mut().zip(&d.0) {
                *o += &q * x;
            }
        }
        out
    }

    pub fn coset(&self, v: &DualVector) -> Result<CosetLabel> {
        self.require_dual(v)?;
        Ok(self.coset_unchecked(v))
    }

    pub fn coset_unchecked(&self, v: &DualVector) -> CosetLabel {
        let c: Vec<BigInt> = self
            .delta_coords(v)
            .into_iter()
            .zip(&self.divisors)
            .map(|(c, d)| c.mod_floor(d))
            .collect();
        CosetLabel {
            rep: self.from_delta_coords(&c),
        }
    }

    pub fn zero_coset(&self) -> CosetLabel {
        CosetLabel {
            rep: DualVector::zero(self.rank()),
        }
    }

    /// Every coset of `L` in its dual, in lexicographic order of delta-coordinates.
    pub fn cosets(&self) -> Vec<CosetLabel> {
        let mut out = vec![Vec::<BigInt>::new()];
        for d in &self.divisors {
            let d = d.to_i64().expect("small divisor");
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(BigInt::from(k));
                        p
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|c| CosetLabel {
                rep: self.from_delta_coords(&c),
            })
            .collect()
    }

    /// `e^{2 pi i r}` in the session field.
    pub fn root(&self, r: &Rational) -> Result<Cyclotomic> {
        Cyclotomic::root_of_unity(&self.field, r)
    }

    /// `e^{pi i q}` in the session field.
    pub fn exp_pi_i(&self, q: &Rational) -> Result<Cyclotomic> {
        Cyclotomic::exp_pi_i(&self.field, q)
    }

    /// `r` with `epsilon(beta, gamma) = e^{2 pi i r}`, reduced into `[0, 1)`.
    pub fn epsilon_exponent(&self, beta: &DualVector, gamma: &DualVector) -> Result<Rational> {
        self.require_dual(beta)?;
        self.require_dual(gamma)?;
        Ok(self.epsilon_exponent_unchecked(beta, gamma))
    }

    pub(crate) fn epsilon_exponent_unchecked(&self, beta: &DualVector, gamma: &DualVector) -> Rational {
        let b = self.delta_coords(beta);
        let c = self.delta_coords(gamma);
        let mut s = Rational::zero();
        for (i, bi) in b.iter().enumerate() {
            if bi.is_zero() {
                continue;
            }
            for (j, cj) in c.iter().enumerate() {
                if !cj.is_zero() && !self.cocycle[i][j].is_zero() {
                    s += &self.cocycle[i][j] * Rational::from_integer(bi * cj);
                }
            }
        }
        frac(&s)
    }

    pub fn epsilon(&self, beta: &DualVector, gamma: &DualVector) -> Result<Cyclotomic> {
        self.root(&self.epsilon_exponent(beta, gamma)?)
    }

    pub(crate) fn epsilon_unchecked(&self, beta: &DualVector, gamma: &DualVector) -> Cyclotomic {
        self.root(&self.epsilon_exponent_unchecked(beta, gamma))
            .expect("cocycle exponents are compatible with the field order")
    }

    /// Exponent of the commutator map `c(beta, gamma)`.
    pub fn comm_exponent(&self, beta: &DualVector, gamma: &DualVector) -> Result<Rational> {
        Ok(frac(
            &(self.epsilon_exponent(beta, gamma)? - self.epsilon_exponent(gamma, beta)?),
        ))
    }

    pub fn comm_c(&self, beta: &DualVector, gamma: &DualVector) -> Result<Cyclotomic> {
        self.root(&self.comm_exponent(beta, gamma)?)
    }

    /// All `gamma` in `coset` with `<gamma, gamma>/2 <= bound`, sorted by norm then coordinates.
    pub fn vectors_in_coset(&self, coset: &CosetLabel, bound: &Rational) -> Result<Vec<DualVector>> {
        if !self.positive_definite {
            return Err(Error::IndefiniteLattice);
        }
        let r = self.rank();
        if bound.is_negative() {
            return Ok(Vec::new());
        }
        let rep = coset.rep();
        // |gamma_i| <= sqrt(<gamma,gamma> * Ginv_ii)
        let two_b = bound.to_f64_lossy() * 2.0;
        let ranges: Vec<(i64, i64)> = (0..r)
            .map(|i| {
                let radius = (two_b * self.gram_inv[i][i].to_f64_lossy()).sqrt() + 1e-6;
                let center = rep.0[i].to_f64_lossy();
                ((center - radius).floor() as i64 - 1, (center + radius).ceil() as i64 + 1)
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        enumerate_box(&ranges, 0, &mut cur, &mut |x| {
            let v = DualVector(
                rep.0
                    .iter()
                    .zip(x)
                    .map(|(c, &k)| c + int(k))
                    .collect(),
            );
            if &self.norm(&v) <= bound {
                out.push(v);
            }
        });
        out.sort_by(|a, b| self.norm(a).cmp(&self.norm(b)).then_with(|| a.cmp(b)));
        Ok(out)
    }
}

/// Outcome of [`EvenLattice::cocycle_audit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleAudit {
    pub smith_compatible: bool,
    pub bimultiplicative: bool,
    pub commutator_on_lattice: bool,
    pub sign_condition: bool,
    pub checked: usize,
    /// First failure of each property, as a readable location.
    pub failures: Vec<String>,
}

impl CocycleAudit {
    pub fn pass(&self) -> bool {
        self.smith_compatible && self.bimultiplicative && self.commutator_on_lattice && self.sign_condition
    }
}

impl EvenLattice {
    /// Small dual vectors used by the audit: `0`, `+-delta_i`, `delta_i + delta_j`, `alpha_i`.
    fn audit_vectors(&self) -> Vec<DualVector> {
        let r = self.rank();
        let mut out = vec![DualVector::zero(r)];
        for i in 0..r {
            out.push(self.delta[i].clone());
            out.push(-&self.delta[i]);
            out.push(self.basis_vector(i));
            for j in i + 1..r {
                out.push(&self.delta[i] + &self.delta[j]);
            }
        }
        out.truncate(24);
        out
    }

    /// Re-verifies the defining properties of the cocycle on a fixed sample:
    /// bimultiplicativity in both slots, `c(a,b) = (-1)^<a,b>` on `L`, `eps(a,g) = +-1`
    /// when either argument lies in `L`, and that the divisors give the index `|det|`.
    pub fn cocycle_audit(&self) -> CocycleAudit {
        let r = self.rank();
        let mut a = CocycleAudit {
            smith_compatible: true,
            bimultiplicative: true,
            commutator_on_lattice: true,
            sign_condition: true,
            checked: 0,
            failures: Vec::new(),
        };
        let index: BigInt = self.divisors.iter().product();
        let unimodular = {
            let rows: Vec<Vec<Rational>> = (0..r)
                .map(|i| self.delta[i].scale(&Rational::from_integer(self.divisors[i].clone())).0)
                .collect();
            rows.iter().flatten().all(|c| c.is_integer())
                && intmat::det(&rows.iter().map(|row| row.iter().map(|c| c.to_integer()).collect()).collect::<IntMatrix>())
                    .abs()
                    .is_one()
        };
        if index != self.determinant().abs() || !unimodular || !self.delta.iter().all(|d| self.in_dual(d)) {
            a.smith_compatible = false;
            a.failures.push("divisor basis does not match the dual".into());
        }
        let e = |x: &DualVector, y: &DualVector| self.epsilon_exponent_unchecked(x, y);
        let vs = self.audit_vectors();
        'bi: for x in &vs {
            for y in &vs {
                for z in &vs {
                    a.checked += 1;
                    let left = frac(&(e(&(x + y), z) - e(x, z) - e(y, z)));
                    let right = frac(&(e(z, &(x + y)) - e(z, x) - e(z, y)));
                    if !left.is_zero() || !right.is_zero() {
                        a.bimultiplicative = false;
                        a.failures.push(format!("bimultiplicativity at ({x}, {y}, {z})"));
                        break 'bi;
                    }
                }
            }
        }
        'comm: for i in 0..r {
            for j in 0..r {
                a.checked += 1;
                let (x, y) = (self.basis_vector(i), self.basis_vector(j));
                let c = frac(&(e(&x, &y) - e(&y, &x)));
                if c != frac(&(self.pair(&x, &y) / int(2))) {
                    a.commutator_on_lattice = false;
                    a.failures.push(format!("commutator at ({x}, {y})"));
                    break 'comm;
                }
            }
        }
        'sign: for x in vs.iter().filter(|v| self.in_lattice(v)) {
            for g in &vs {
                a.checked += 1;
                if !frac(&(e(x, g) * int(2))).is_zero() || !frac(&(e(g, x) * int(2))).is_zero() {
                    a.sign_condition = false;
                    a.failures.push(format!("sign condition at ({x}, {g})"));
                    break 'sign;
                }
            }
        }
        a
    }
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for Rational {
    fn to_f64_lossy(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::MAX) / self.denom().to_f64().unwrap_or(1.0)
    }
}

fn enumerate_box(ranges: &[(i64, i64)], i: usize, cur: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if i == ranges.len() {
        f(cur);
        return;
    }
    for k in ranges[i].0..=ranges[i].1 {
        cur[i] = k;
        enumerate_box(ranges, i + 1, cur, f);
    }
}

/// Sylvester's criterion via elimination without pivoting.
fn leading_minors_positive(g: &RatMatrix) -> bool {
    let n = g.len();
    let mut a = g.clone();
    for c in 0..n {
        if !a[c][c].is_positive() {
            return false;
        }
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let s = &f * &a[c][j];
                a[i][j] -= s;
            }
        }
    }
    true
}
