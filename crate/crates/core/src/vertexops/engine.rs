use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fock::{FockMonomial, FockSpace, FockVector};
use crate::lattice::{CosetLabel, DualVector};
use crate::scalars::{binom, frac, int, Cyclotomic, Rational};
use crate::series::{TruncSeries, Window};

type MemoKey = (FockMonomial, FockMonomial, Rational);

/// Evaluates the intertwining operator `Y_beta` on `V_{beta+L} (x) V_{L°}`
/// coefficient by coefficient.
///
/// Generators `iota(e_lambda)` act through the normal-ordered exponential
/// formula; descendants are peeled one creation mode at a time with the
/// iterate formula for the Heisenberg field. With `beta = 0` this is the
/// module vertex operator `Y`.
pub struct Intertwiner {
    fs: FockSpace,
    beta: DualVector,
    scale: Cyclotomic,
    memo: RefCell<HashMap<MemoKey, FockVector>>,
    e_minus: RefCell<HashMap<DualVector, Vec<FockVector>>>,
}

impl Intertwiner {
    pub fn new(fs: &FockSpace, beta: &DualVector) -> Result<Self> {
        fs.lattice().require_dual(beta)?;
        Ok(Intertwiner {
            fs: fs.clone(),
            beta: beta.clone(),
            scale: fs.one(),
            memo: RefCell::new(HashMap::new()),
            e_minus: RefCell::new(HashMap::new()),
        })
    }

    /// The module vertex operator `Y` of `V_L` acting on `V_{L°}`.
    pub fn vertex(fs: &FockSpace) -> Self {
        Self::new(fs, &DualVector::zero(fs.lattice().rank())).expect("zero lies in the dual")
    }

    /// The same operator multiplied by `c`.
    pub fn with_scale(mut self, c: &Cyclotomic) -> Self {
        self.scale = &self.scale * c;
        self
    }

    pub fn scale(&self) -> &Cyclotomic {
        &self.scale
    }

    pub fn fock(&self) -> &FockSpace {
        &self.fs
    }

    pub fn beta(&self) -> &DualVector {
        &self.beta
    }

    pub fn source_coset(&self) -> CosetLabel {
        self.fs.lattice().coset_unchecked(&self.beta)
    }

    /// Exponent offset in `[0,1)` of `Y(u,x)v` for `u` in the source coset and `v` in `gamma`.
    pub fn offset(&self, gamma: &CosetLabel) -> Rational {
        frac(&self.fs.lattice().pair(&self.beta, gamma.rep()))
    }

    pub fn target_coset(&self, gamma: &CosetLabel) -> CosetLabel {
        self.fs.lattice().coset_unchecked(&(&self.beta + gamma.rep()))
    }

    fn check_source(&self, u: &FockVector) -> Result<()> {
        let src = self.source_coset();
        if u.coset() != &src {
            return Err(Error::CosetMismatch(format!(
                "operator is defined on {src}, input lies in {}",
                u.coset()
            )));
        }
        Ok(())
    }

    /// Lower bound on exponents of `Y(u,x)v` for monomials.
    pub fn lowest_bound(&self, u: &FockMonomial, v: &FockMonomial) -> Rational {
        self.fs.lattice().pair(u.charge(), v.charge()) - int(u.degree() as i64) - int(v.degree() as i64)
    }

    /// Lower bound on exponents of `Y(u,x)v` over all term pairs.
    pub fn lowest_bound_vec(&self, u: &FockVector, v: &FockVector) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        for mu in u.terms().keys() {
            for mv in v.terms().keys() {
                let b = self.lowest_bound(mu, mv);
                if best.as_ref().is_none_or(|x| &b < x) {
                    best = Some(b);
                }
            }
        }
        best
    }

    fn s_polys(&self, lambda: &DualVector, upto: usize) -> Vec<FockVector> {
        if let Some(p) = self.e_minus.borrow().get(lambda) {
            if p.len() > upto {
                return p[..=upto].to_vec();
            }
        }
        let polys = self.fs.e_minus_polys(lambda, upto.max(4));
        let out = polys[..=upto].to_vec();
        self.e_minus.borrow_mut().insert(lambda.clone(), polys);
        out
    }

    fn zero_in(&self, coset: CosetLabel) -> FockVector {
        FockVector::zero(coset)
    }

    /// Phase `eps(lambda,mu) e^{pi i <beta,mu>} c(mu,beta)` attached to `Y(iota(e_lambda),x) iota(e_mu)`.
    fn generator_phase(&self, lambda: &DualVector, mu: &DualVector) -> Cyclotomic {
        let l = self.fs.lattice();
        let r = l.epsilon_exponent_unchecked(lambda, mu)
            + l.pair(&self.beta, mu) / int(2)
            + l.epsilon_exponent_unchecked(mu, &self.beta)
            - l.epsilon_exponent_unchecked(&self.beta, mu);
        l.root(&frac(&r)).expect("phases fit the field")
    }

    fn generator_coeff(&self, lambda: &DualVector, v: &FockMonomial, p: &Rational) -> FockVector {
        let l = self.fs.lattice();
        let mu = v.charge();
        let target_charge = lambda + mu;
        let target = l.coset_unchecked(&target_charge);
        let k = p - l.pair(lambda, mu);
        if !k.is_integer() {
            return self.zero_in(target);
        }
        let k = k.to_integer().to_i64().expect("small exponent");
        let dv = v.degree() as i64;
        if k < -dv {
            return self.zero_in(target);
        }
        let mut vv = FockVector::zero(l.coset_unchecked(mu));
        vv.add_term(v.clone(), &self.fs.one());
        let plus = self.fs.e_plus_unchecked(lambda, &vv);
        let top = (k + plus.len() as i64 - 1).max(0) as usize;
        let polys = self.s_polys(lambda, top);
        let mut out = FockVector::zero(target.clone());
        for (b, t) in plus.iter().enumerate() {
            let a = k + b as i64;
            if a < 0 || t.is_zero() {
                continue;
            }
            let prod = self.fs.multiply_creation(&polys[a as usize], t);
            for (m, c) in prod.terms() {
                out.add_term(m.with_charge(target_charge.clone()), c);
            }
        }
        out.scale(&self.generator_phase(lambda, mu))
    }

    /// Coefficient of `x^p` in `Y(u,x)v` for monomials.
    pub fn coeff_monomial(&self, u: &FockMonomial, v: &FockMonomial, p: &Rational) -> FockVector {
        let key = (u.clone(), v.clone(), p.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = self.compute(u, v, p);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn compute(&self, u: &FockMonomial, v: &FockMonomial, p: &Rational) -> FockVector {
        let l = self.fs.lattice();
        let target = l.coset_unchecked(&(u.charge() + v.charge()));
        if p < &self.lowest_bound(u, v) {
            return self.zero_in(target);
        }
        let Some((&(i, n), _)) = u.modes().split_first() else {
            return self.generator_coeff(u.charge(), v, p);
        };
        let w = FockMonomial::new(u.modes()[1..].to_vec(), u.charge().clone());
        let h = l.basis_vector(i);
        let n = n as i64;
        let mut out = FockVector::zero(target);

        // sum_j C(n+j-1, j) h(-n-j) [coefficient of x^{p-j} in Y(w,x)v]
        let low = self.lowest_bound(&w, v);
        let span = p - &low;
        if span >= Rational::zero() {
            let jmax = span.floor().to_integer().to_i64().expect("small");
            for j in 0..=jmax {
                let inner = self.coeff_monomial(&w, v, &(p - int(j)));
                if inner.is_zero() {
                    continue;
                }
                let c = Rational::from_integer(binom(n + j - 1, j));
                let raised = self.fs.mode(&h, -(n + j), &inner);
                out.add_scaled(&raised, &self.fs.scalar(c));
            }
        }

        // -(-1)^n sum_j C(n+j-1, j) [coefficient of x^{p+n+j} in Y(w,x) h(j) v]
        let sign = if n % 2 == 0 { -1 } else { 1 };
        let mut vv = FockVector::zero(l.coset_unchecked(v.charge()));
        vv.add_term(v.clone(), &self.fs.one());
        for j in 0..=(v.max_mode() as i64) {
            let hv = self.fs.mode(&h, j, &vv);
            if hv.is_zero() {
                continue;
            }
            let c = Rational::from_integer(binom(n + j - 1, j) * BigInt::from(sign));
            let q = p + int(n + j);
            for (m, a) in hv.terms() {
                let inner = self.coeff_monomial(&w, m, &q);
                if inner.is_zero() {
                    continue;
                }
                out.add_scaled(&inner, &a.scale(&c));
            }
        }
        out
    }

    /// Coefficient of `x^p` in `Y(u,x)v`.
    pub fn coeff(&self, u: &FockVector, v: &FockVector, p: &Rational) -> Result<FockVector> {
        self.check_source(u)?;
        Ok(self.coeff_unchecked(u, v, p))
    }

    pub(crate) fn coeff_unchecked(&self, u: &FockVector, v: &FockVector, p: &Rational) -> FockVector {
        let target = self.target_coset(v.coset());
        let mut out = FockVector::zero(target);
        for (mu, a) in u.terms() {
            for (mv, b) in v.terms() {
                let c = self.coeff_monomial(mu, mv, p);
                if !c.is_zero() {
                    out.add_scaled(&c, &(a * b));
                }
            }
        }
        if self.scale.is_one() {
            out
        } else {
            out.scale(&self.scale)
        }
    }

    /// `Y(u,x)v` over the exponent window.
    pub fn series(&self, u: &FockVector, v: &FockVector, window: Window) -> Result<TruncSeries> {
        self.check_source(u)?;
        let offset = self.offset(v.coset());
        let mut s = TruncSeries::over_window(&offset, window, self.target_coset(v.coset()));
        for k in s.exp_min()..=s.exp_max() {
            let p = s.exponent(k);
            s.set(k, self.coeff_unchecked(u, v, &p));
        }
        Ok(s)
    }

    /// Lowest exponent of `Y(u,x)v` carrying a nonzero coefficient, if any.
    pub fn actual_lowest(&self, u: &FockVector, v: &FockVector) -> Option<Rational> {
        let low = self.lowest_bound_vec(u, v)?;
        // coefficients of x^p have weight wt u + wt v + p >= 0
        let top = self.max_weight(u) + self.max_weight(v);
        let mut p = low;
        let stop = -self.min_weight(u) - self.min_weight(v) + &top + int(64);
        while p <= stop {
            if !self.coeff_unchecked(u, v, &p).is_zero() {
                return Some(p);
            }
            p += Rational::one();
        }
        None
    }

    fn max_weight(&self, v: &FockVector) -> Rational {
        v.terms()
            .keys()
            .map(|m| self.fs.monomial_weight(m))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn min_weight(&self, v: &FockVector) -> Rational {
        v.terms()
            .keys()
            .map(|m| self.fs.monomial_weight(m))
            .min()
            .unwrap_or_else(Rational::zero)
    }
}

/// Coefficients of `Y(iota(e_alpha), x) v` computed straight from
/// `E^-(-alpha,x) E^+(-alpha,x) e_alpha x^alpha`, without the engine.
pub fn vertex_generator(fs: &FockSpace, alpha: &DualVector, v: &FockVector, window: Window) -> Result<TruncSeries> {
    let l = fs.lattice();
    l.require_lattice(alpha)?;
    let target = l.coset_unchecked(&(alpha + v.coset().rep()));
    let offset = frac(&l.pair(alpha, v.coset().rep()));
    let mut s = TruncSeries::over_window(&offset, window, target.clone());
    let mut acc: HashMap<i64, FockVector> = HashMap::new();
    for (m, c) in v.terms() {
        let mut single = FockVector::zero(v.coset().clone());
        single.add_term(m.clone(), c);
        let shifted = fs.e_mult(alpha, &single)?;
        let base = l.pair(alpha, m.charge());
        let plus = fs.e_plus(alpha, &shifted)?;
        let kmin = base.clone() - int(plus.len() as i64 - 1);
        let top = (Rational::from_integer(window.hi.into()) - &kmin).floor();
        let top = top.to_integer().to_i64().unwrap_or(0).max(0) as usize;
        let polys = fs.e_minus_polys(alpha, top);
        for (b, t) in plus.iter().enumerate() {
            for (a, poly) in polys.iter().enumerate() {
                let p = &base + int(a as i64) - int(b as i64);
                let Some(k) = s.shift_of(&p) else { continue };
                if k < s.exp_min() || k > s.exp_max() {
                    continue;
                }
                let term = fs.multiply_creation(poly, t);
                acc.entry(k)
                    .or_insert_with(|| FockVector::zero(target.clone()))
                    .add_assign(&term);
            }
        }
    }
    for (k, v) in acc {
        s.set(k, v);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EvenLattice;
    use crate::scalars::rat;

    fn a1() -> FockSpace {
        FockSpace::new(EvenLattice::from_i64(&[vec![2]]).unwrap())
    }

    fn alpha() -> DualVector {
        DualVector::from_ints(&[1])
    }

    fn delta() -> DualVector {
        DualVector(vec![rat(1, 2)])
    }

    #[test]
    fn vacuum_acts_as_identity() {
        let fs = a1();
        let y = Intertwiner::vertex(&fs);
        let v = fs.monomial(&[(0, 2)], &delta()).unwrap();
        let s = y.series(&fs.vacuum(), &v, Window::new(-4, 4).unwrap()).unwrap();
        let nonzero: Vec<_> = s.iter().collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(s.coeff(&int(0)).unwrap(), v);
    }

    #[test]
    fn generator_examples() {
        let fs = a1();
        let y = Intertwiner::vertex(&fs);
        let u = fs.iota(&alpha()).unwrap();
        let v = fs.iota(&-&alpha()).unwrap();
        assert_eq!(y.coeff(&u, &v, &int(-2)).unwrap(), fs.vacuum());
        assert_eq!(
            y.coeff(&u, &v, &int(-1)).unwrap(),
            fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap()
        );
        let s = y.series(&u, &u, Window::new(-2, 2).unwrap()).unwrap();
        assert_eq!(s.lowest(), Some(int(2)));
        assert_eq!(s.coeff(&int(2)).unwrap(), fs.iota(&DualVector::from_ints(&[2])).unwrap());
    }

    #[test]
    fn heisenberg_field_zero_mode() {
        let fs = a1();
        let y = Intertwiner::vertex(&fs);
        let a = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        let ed = fs.iota(&delta()).unwrap();
        assert_eq!(y.coeff(&a, &ed, &int(-1)).unwrap(), ed);
        let ea = fs.iota(&alpha()).unwrap();
        assert_eq!(y.coeff(&a, &ea, &int(-1)).unwrap(), ea.scale_rational(&int(2)));
    }

    #[test]
    fn half_sector_intertwiner() {
        let fs = a1();
        let y = Intertwiner::new(&fs, &delta()).unwrap();
        let ed = fs.iota(&delta()).unwrap();
        let s = y.series(&ed, &ed, Window::new(-2, 3).unwrap()).unwrap();
        let em = fs.e_minus(&delta(), &fs.iota(&alpha()).unwrap(), 2).unwrap();
        for (k, e) in em.iter().enumerate() {
            let p = rat(1, 2) + int(k as i64);
            assert_eq!(s.coeff(&p).unwrap(), e.neg(), "exponent {p}");
        }
        assert_eq!(s.lowest(), Some(rat(1, 2)));
    }

    #[test]
    fn descendant_path_matches_generator_formula() {
        let fs = a1();
        let y = Intertwiner::vertex(&fs);
        let w = Window::new(-4, 3).unwrap();
        for charge in [-1i64, 1, 2] {
            let a = DualVector::from_ints(&[charge]);
            let u = fs.iota(&a).unwrap();
            let v = fs.monomial(&[(0, 1), (0, 2)], &delta()).unwrap();
            let direct = vertex_generator(&fs, &a, &v, w).unwrap();
            let engine = y.series(&u, &v, w).unwrap();
            assert!(direct.same_coefficients(&engine), "charge {charge}");
        }
    }

    #[test]
    fn heisenberg_field_matches_modes() {
        // Y(a(-1)1, x) = sum a(n) x^{-n-1}
        let fs = a1();
        let y = Intertwiner::vertex(&fs);
        let a = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        let v = fs.monomial(&[(0, 1), (0, 3)], &delta()).unwrap();
        for n in -3i64..=4 {
            let got = y.coeff(&a, &v, &int(-n - 1)).unwrap();
            assert_eq!(got, fs.apply_mode(&alpha(), n, &v).unwrap(), "mode {n}");
        }
    }
}
