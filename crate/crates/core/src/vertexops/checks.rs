use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::lattice::{CosetLabel, DualVector};
use crate::scalars::{binom, fmt_rational, int, Cyclotomic, Rational};
use crate::series::Window;

use super::engine::Intertwiner;
use super::opposite::{opposite_coeff, pairing_from_intertwiner};
use super::params::IntertwinerSpec;

/// The two sides of a failed identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discrepancy {
    Vectors { lhs: FockVector, rhs: FockVector },
    Scalars { lhs: Cyclotomic, rhs: Cyclotomic },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub location: String,
    pub discrepancy: Discrepancy,
}

/// Outcome of a coefficientwise identity check; `witness` is the first failing coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<Mismatch>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: true,
            checked: 0,
            witness: None,
        }
    }

    fn vectors(&mut self, location: impl FnOnce() -> String, lhs: FockVector, rhs: FockVector) {
        self.checked += 1;
        if lhs != rhs && self.pass {
            self.pass = false;
            self.witness = Some(Mismatch {
                location: location(),
                discrepancy: Discrepancy::Vectors { lhs, rhs },
            });
        }
    }

    fn scalars(&mut self, location: impl FnOnce() -> String, lhs: Cyclotomic, rhs: Cyclotomic) {
        self.checked += 1;
        if lhs != rhs && self.pass {
            self.pass = false;
            self.witness = Some(Mismatch {
                location: location(),
                discrepancy: Discrepancy::Scalars { lhs, rhs },
            });
        }
    }

}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "pass" } else { "FAIL" };
        write!(f, "{}: {status} ({} coefficients)", self.name, self.checked)?;
        if let Some(w) = &self.witness {
            write!(f, " first failure at {}", w.location)?;
        }
        Ok(())
    }
}

fn to_int(q: &Rational) -> i64 {
    q.to_integer().to_i64().expect("exponent fits i64")
}

fn binom_scalar(fs: &FockSpace, a: i64, k: i64) -> Cyclotomic {
    fs.scalar(Rational::from_integer(binom(a, k)))
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `L(-1)^k / k!` applied `k = 0, 1, ...` times to `v`, up to `kmax`.
fn l_minus_one_powers(fs: &FockSpace, v: &FockVector, kmax: i64) -> Vec<FockVector> {
    let mut out = vec![v.clone()];
    for k in 1..=kmax.max(0) {
        let next = fs
            .l_minus_one(&out[(k - 1) as usize])
            .scale_rational(&Rational::new(1.into(), k.into()));
        out.push(next);
    }
    out
}

/// Verifies `a(m) Y(w1,x) w2 - Y(w1,x) a(m) w2 = sum_i C(m,i) x^{m-i} Y(a(i) w1, x) w2`
/// on every exponent of the window.
pub fn check_commutator(y: &Intertwiner, h: &DualVector, m: i64, w1: &FockVector, w2: &FockVector, window: Window) -> Result<CheckReport> {
    let fs = y.fock();
    let mut rep = CheckReport::new("commutator");
    let a_w2 = fs.apply_mode(h, m, w2)?;
    let top = w1.terms().keys().map(|t| t.max_mode()).max().unwrap_or(0) as i64;
    let raised: Vec<FockVector> = (0..=top).map(|i| fs.mode(h, i, w1)).collect();
    for q in window.exponents(&y.offset(w2.coset())) {
        let lhs = fs.mode(h, m, &y.coeff(w1, w2, &q)?).sub(&y.coeff(w1, &a_w2, &q)?);
        let mut rhs = FockVector::zero(lhs.coset().clone());
        for (i, ai) in raised.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let i = i as i64;
            let c = y.coeff(ai, w2, &(&q - int(m) + int(i)))?;
            rhs.add_scaled(&c, &binom_scalar(fs, m, i));
        }
        rep.vectors(|| format!("x^{}", fmt_rational(&q)), lhs, rhs);
    }
    Ok(rep)
}

/// Smallest `k >= 1` with `v_n w = 0` for all `n >= k`.
pub fn minimal_commutativity_order(fs: &FockSpace, v: &FockVector, w: &FockVector) -> i64 {
    let yv = Intertwiner::vertex(fs);
    match yv.actual_lowest(v, w) {
        Some(p) => (-to_int(&p)).max(1),
        None => 1,
    }
}

/// Verifies `(x1-x2)^k Y(v,x1) Y(w1,x2) w2 = (x1-x2)^k Y(w1,x2) Y(v,x1) w2` on the
/// grid of `x1` exponents from `outer` and `x2` exponents from `inner`.
pub fn check_weak_commutativity(
    y: &Intertwiner,
    v: &FockVector,
    k: i64,
    w1: &FockVector,
    w2: &FockVector,
    outer: Window,
    inner: Window,
) -> Result<CheckReport> {
    let fs = y.fock();
    if !v.coset().is_zero() {
        return Err(Error::CosetMismatch(format!("v must lie in V_L, got {}", v.coset())));
    }
    let minimal = minimal_commutativity_order(fs, v, w1);
    if k < minimal {
        return Err(Error::WeakCommutativityOrder { given: k, minimal });
    }
    let yv = Intertwiner::vertex(fs);
    let mut rep = CheckReport::new("weak commutativity");
    for a in outer.lo..=outer.hi {
        for b in inner.exponents(&y.offset(w2.coset())) {
            let mut lhs = FockVector::zero(y.target_coset(w2.coset()));
            let mut rhs = lhs.clone();
            for j in 0..=k {
                let c = binom_scalar(fs, k, j).scale_int(&sign(j).into());
                let ea = int(a - k + j);
                let eb = &b - int(j);
                let inner_l = y.coeff(w1, w2, &eb)?;
                lhs.add_scaled(&yv.coeff(v, &inner_l, &ea)?, &c);
                let inner_r = yv.coeff(v, w2, &ea)?;
                rhs.add_scaled(&y.coeff(w1, &inner_r, &eb)?, &c);
            }
            rep.vectors(|| format!("x1^{a} x2^{}", fmt_rational(&b)), lhs, rhs);
        }
    }
    Ok(rep)
}

/// Verifies the iterate formula
/// `Y(v_n w1, x2) w2 = Res_{x1} [(x1-x2)^n Y(v,x1) Y(w1,x2) - (-x2+x1)^n Y(w1,x2) Y(v,x1)] w2`.
pub fn check_iterate(y: &Intertwiner, v: &FockVector, n: i64, w1: &FockVector, w2: &FockVector, window: Window) -> Result<CheckReport> {
    let fs = y.fock();
    if !v.coset().is_zero() {
        return Err(Error::CosetMismatch(format!("v must lie in V_L, got {}", v.coset())));
    }
    let yv = Intertwiner::vertex(fs);
    let vn_w1 = yv.coeff(v, w1, &int(-n - 1))?;
    let low12 = y.lowest_bound_vec(w1, w2);
    let low_v2 = yv.lowest_bound_vec(v, w2);
    let mut rep = CheckReport::new("iterate");
    for b in window.exponents(&y.offset(w2.coset())) {
        let lhs = y.coeff(&vn_w1, w2, &b)?;
        let mut rhs = FockVector::zero(lhs.coset().clone());
        if let Some(low) = &low12 {
            let mut jmax = (&b - low).floor();
            if n >= 0 {
                jmax = jmax.min(int(n));
            }
            for j in 0..=to_int(&jmax) {
                let c = binom_scalar(fs, n, j).scale_int(&sign(j).into());
                let inner = y.coeff(w1, w2, &(&b - int(j)))?;
                rhs.add_scaled(&yv.coeff(v, &inner, &int(j - n - 1))?, &c);
            }
        }
        if let Some(low) = &low_v2 {
            let mut jmax = to_int(&(-int(1) - low).floor());
            if n >= 0 {
                jmax = jmax.min(n);
            }
            for j in 0..=jmax {
                let c = binom_scalar(fs, n, j).scale_int(&(-sign(n - j)).into());
                let inner = yv.coeff(v, w2, &int(-1 - j))?;
                rhs.add_scaled(&y.coeff(w1, &inner, &(&b - int(n) + int(j)))?, &c);
            }
        }
        rep.vectors(|| format!("x2^{}", fmt_rational(&b)), lhs, rhs);
    }
    Ok(rep)
}

/// Verifies the commutator expansion
/// `(w1)_p v_q w2 = sum_{i<=m} sum_{j<=k} (-1)^{i+j} C(-k,i) C(k,j) v_{q+i+j} (w1)_{p-i-j} w2`
/// where `(w)_p` is the coefficient of `x^{-p-1}`, `p = p_k - offset`, and `k`, `m`
/// are computed from the actual truncation orders.
pub fn check_commform(y: &Intertwiner, p_k: i64, q: i64, v: &FockVector, w1: &FockVector, w2: &FockVector) -> Result<CheckReport> {
    let fs = y.fock();
    if !v.coset().is_zero() {
        return Err(Error::CosetMismatch(format!("v must lie in V_L, got {}", v.coset())));
    }
    let yv = Intertwiner::vertex(fs);
    let top_mode = |w: &FockVector| yv.actual_lowest(v, w).map(|p| -to_int(&p) - 1);
    let k = top_mode(w1).map_or(0, |n| (n + 1).max(0));
    let m = top_mode(w2).map_or(0, |n| (n - q).max(0));
    let p = int(p_k) - y.offset(w2.coset());
    let mode = |p: &Rational| -p - int(1);
    let vq_w2 = yv.coeff(v, w2, &int(-q - 1))?;
    let lhs = y.coeff(w1, &vq_w2, &mode(&p))?;
    let mut rhs = FockVector::zero(lhs.coset().clone());
    // both factors depend only on s = i + j
    for s in 0..=m + k {
        let c: BigInt = ((s - k).max(0)..=s.min(m)).map(|i| binom(-k, i) * binom(k, s - i)).sum();
        if c.is_zero() {
            continue;
        }
        let c = Rational::from_integer(c * sign(s));
        let inner = y.coeff(w1, w2, &mode(&(&p - int(s))))?;
        let outer = yv.coeff(v, &inner, &int(-(q + s) - 1))?;
        rhs.add_scaled(&outer, &fs.scalar(c));
    }
    let mut rep = CheckReport::new("commutator expansion");
    rep.vectors(|| format!("p = {}, q = {q}, k = {k}, m = {m}", fmt_rational(&p)), lhs, rhs);
    Ok(rep)
}

/// Verifies `Y(L(-1) w1, x) w2 = d/dx Y(w1, x) w2` on the window.
pub fn check_derivative(y: &Intertwiner, w1: &FockVector, w2: &FockVector, window: Window) -> Result<CheckReport> {
    let fs = y.fock();
    let d = fs.l_minus_one(w1);
    let mut rep = CheckReport::new("L(-1)-derivative");
    for p in window.exponents(&y.offset(w2.coset())) {
        let lhs = y.coeff(&d, w2, &p)?;
        let next = &p + int(1);
        let rhs = y.coeff(w1, w2, &next)?.scale_rational(&next);
        rep.vectors(|| format!("x^{}", fmt_rational(&p)), lhs, rhs);
    }
    Ok(rep)
}

/// Reports for the symmetries of one intertwining operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    /// `Omega_{-1}(Omega_0(Y)) = Y`.
    pub omega_inverse: CheckReport,
    /// `Omega_0(Y)` is a multiple of `Y_gamma` on `V_{gamma+L} (x) V_{beta+L}`.
    pub skew_symmetry: CheckReport,
    /// `<A_0(Y)(w1,x) w3', w2> = <w3', Y°_0(w1,x) w2>` with `A_0(Y)` a multiple of `Y_beta`.
    pub adjunction: CheckReport,
    /// `(Y(v,x)u, w) = (u, Y°(v,x)w)` for the pairing built from intertwiners.
    pub invariance: CheckReport,
}

impl SymmetryReport {
    pub fn pass(&self) -> bool {
        self.omega_inverse.pass && self.skew_symmetry.pass && self.adjunction.pass && self.invariance.pass
    }

    pub fn parts(&self) -> [&CheckReport; 4] {
        [&self.omega_inverse, &self.skew_symmetry, &self.adjunction, &self.invariance]
    }
}

/// Coefficient of `x^q` in `Omega_r(Y)(w2,x) w1 = e^{xL(-1)} Y(w1, e^{(2r+1) pi i} x) w2`,
/// for `r` in `{0, -1}`, built from the coefficient function `coef`.
fn omega_coeff(
    fs: &FockSpace,
    target: &CosetLabel,
    forward: bool,
    q: &Rational,
    low: &Rational,
    coef: &dyn Fn(&Rational) -> Result<FockVector>,
) -> Result<FockVector> {
    let l = fs.lattice();
    let kmax = to_int(&(q - low).floor());
    let mut out = FockVector::zero(target.clone());
    for k in 0..=kmax {
        let e = q - int(k);
        let c = coef(&e)?;
        if c.is_zero() {
            continue;
        }
        let phase_arg = if forward { e.clone() } else { -&e };
        let phase = l.exp_pi_i(&phase_arg).expect("phases fit the field");
        let term = l_minus_one_powers(fs, &c, k).pop().expect("nonempty");
        out.add_scaled(&term, &phase);
    }
    Ok(out)
}

/// First exponent from `start` on, within `steps`, where `f` is nonzero.
fn first_nonzero(start: &Rational, steps: i64, f: &dyn Fn(&Rational) -> Result<Cyclotomic>) -> Result<Option<(Rational, Cyclotomic)>> {
    for s in 0..=steps {
        let q = start + int(s);
        let v = f(&q)?;
        if !v.is_zero() {
            return Ok(Some((q, v)));
        }
    }
    Ok(None)
}

/// Checks the skew-symmetry and contragredient symmetries of `spec` on the
/// inputs `w1` in `V_{beta+L}`, `w2` in `V_{gamma+L}`, `w3_dual` in `V_{-beta-gamma+L}`,
/// and the invariance of the intertwiner pairing under `Y(probe, x)`.
pub fn check_skew_and_contragredient(
    fs: &FockSpace,
    spec: &IntertwinerSpec,
    w1: &FockVector,
    w2: &FockVector,
    w3_dual: &FockVector,
    probe: &FockVector,
    window: Window,
) -> Result<SymmetryReport> {
    let l = fs.lattice().clone();
    let target = spec.target(fs);
    let dual_target = l.coset_unchecked(&-target.rep());
    if w1.coset() != &spec.beta || w2.coset() != &spec.gamma || w3_dual.coset() != &dual_target {
        return Err(Error::CosetMismatch(format!(
            "inputs must lie in {}, {}, {}",
            spec.beta, spec.gamma, dual_target
        )));
    }
    if !probe.coset().is_zero() {
        return Err(Error::CosetMismatch(format!("probe must lie in V_L, got {}", probe.coset())));
    }
    let y = spec.build(fs)?;
    let offset = y.offset(w2.coset());
    let exps = window.exponents(&offset);

    // Omega_{-1} Omega_0 = id
    let mut omega_inverse = CheckReport::new("Omega_-1 Omega_0 = id");
    if let Some(low) = y.lowest_bound_vec(w1, w2) {
        let base = |e: &Rational| y.coeff(w1, w2, e);
        let forward = |e: &Rational| omega_coeff(fs, &target, true, e, &low, &base);
        for p in &exps {
            let back = omega_coeff(fs, &target, false, p, &low, &forward)?;
            omega_inverse.vectors(|| format!("x^{}", fmt_rational(p)), back, y.coeff(w1, w2, p)?);
        }
    }

    // Omega_0(Y) = c * Y_gamma, with c fitted on the generators
    let mut skew_symmetry = CheckReport::new("skew symmetry");
    let y_gamma = Intertwiner::new(fs, spec.gamma.rep())?;
    let g1 = fs.iota(spec.beta.rep())?;
    let g2 = fs.iota(spec.gamma.rep())?;
    let fit_skew = {
        let low = y.lowest_bound(&g1.terms().keys().next().expect("generator").clone(), g2.terms().keys().next().expect("generator"));
        let base = |e: &Rational| y.coeff(&g1, &g2, e);
        let lead = omega_coeff(fs, &target, true, &low, &low, &base)?;
        let other = y_gamma.coeff(&g2, &g1, &low)?;
        let key = other.terms().iter().next().map(|(m, c)| (m.clone(), c.clone()));
        key.and_then(|(m, c)| lead.coefficient(&m).map(|a| a * &c.inverse().expect("nonzero")))
    };
    match fit_skew {
        Some(c) => {
            let yg = Intertwiner::new(fs, spec.gamma.rep())?.with_scale(&c);
            for (a, b) in [(&g1, &g2), (w1, w2)] {
                if let Some(low) = y.lowest_bound_vec(a, b) {
                    let base = |e: &Rational| y.coeff(a, b, e);
                    for q in &exps {
                        let lhs = omega_coeff(fs, &target, true, q, &low, &base)?;
                        skew_symmetry.vectors(|| format!("x^{}", fmt_rational(q)), lhs, yg.coeff(b, a, q)?);
                    }
                }
            }
        }
        None => skew_symmetry.scalars(
            || "generator fit".to_string(),
            Cyclotomic::zero(l.field()),
            Cyclotomic::one(l.field()),
        ),
    }

    // A_0(Y) = kappa * Y_beta, with kappa fitted on the generators
    let mut adjunction = CheckReport::new("contragredient adjunction");
    let y_beta = Intertwiner::new(fs, spec.beta.rep())?;
    let g3 = fs.iota(&-&(spec.beta.rep() + spec.gamma.rep()))?;
    let adj_offset = y_beta.offset(&dual_target);
    let sides = |a: &FockVector, b: &FockVector, d: &FockVector, q: &Rational| -> Result<(Cyclotomic, Cyclotomic)> {
        let lhs = fs.pair(&y_beta.coeff(a, d, q)?, b)?;
        let rhs = fs.pair(d, &opposite_coeff(&y, a, b, q)?)?;
        Ok((lhs, rhs))
    };
    let start = y_beta.lowest_bound_vec(&g1, &g3).unwrap_or_else(Rational::zero);
    let fit = first_nonzero(&start, 16, &|q| Ok(sides(&g1, &g2, &g3, q)?.0))?;
    match fit {
        Some((q0, lhs0)) => {
            let rhs0 = sides(&g1, &g2, &g3, &q0)?.1;
            let kappa = &rhs0 * &lhs0.inverse().expect("nonzero");
            let adj_exps = window.exponents(&adj_offset);
            for (a, b, d) in [(&g1, &g2, &g3), (w1, w2, w3_dual)] {
                for q in &adj_exps {
                    let (lhs, rhs) = sides(a, b, d, q)?;
                    adjunction.scalars(|| format!("x^{}", fmt_rational(q)), &lhs * &kappa, rhs);
                }
            }
        }
        None => adjunction.scalars(
            || "generator fit".to_string(),
            Cyclotomic::zero(l.field()),
            Cyclotomic::one(l.field()),
        ),
    }

    // invariance of the intertwiner pairing between V_{-beta-gamma+L} and V_{beta+gamma+L}
    let mut invariance = CheckReport::new("invariance of the intertwiner pairing");
    let partner = exps
        .iter()
        .map(|p| y.coeff(w1, w2, p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|c| !c.is_zero());
    if let Some(w) = partner {
        let yv = Intertwiner::vertex(fs);
        for q in window.lo..=window.hi {
            let q = int(q);
            let lhs = pairing_from_intertwiner(fs, &yv.coeff(probe, w3_dual, &q)?, &w)?;
            let rhs = pairing_from_intertwiner(fs, w3_dual, &opposite_coeff(&yv, probe, &w, &q)?)?;
            invariance.scalars(|| format!("x^{}", fmt_rational(&q)), lhs, rhs);
        }
    }
    Ok(SymmetryReport {
        omega_inverse,
        skew_symmetry,
        adjunction,
        invariance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EvenLattice;
    use crate::scalars::rat;

    fn a1() -> FockSpace {
        FockSpace::new(EvenLattice::from_i64(&[vec![2]]).unwrap())
    }

    fn d() -> DualVector {
        DualVector(vec![rat(1, 2)])
    }

    fn alpha() -> DualVector {
        DualVector::from_ints(&[1])
    }

    #[test]
    fn commutator_examples() {
        let fs = a1();
        let y = Intertwiner::new(&fs, &d()).unwrap();
        let ed = fs.iota(&d()).unwrap();
        let w = Window::new(-3, 3).unwrap();
        assert!(check_commutator(&y, &alpha(), 1, &ed, &ed, w).unwrap().pass);
        assert!(check_commutator(&y, &alpha(), 0, &ed, &ed, w).unwrap().pass);
        let w2 = fs.monomial(&[(0, 1)], &d()).unwrap().scale_rational(&rat(1, 2));
        assert!(check_commutator(&y, &d(), 2, &ed, &w2, w).unwrap().pass);
        let desc = fs.monomial(&[(0, 1), (0, 2)], &d()).unwrap();
        assert!(check_commutator(&y, &alpha(), -2, &desc, &w2, w).unwrap().pass);
    }

    #[test]
    fn weak_commutativity_examples() {
        let fs = a1();
        let y = Intertwiner::new(&fs, &d()).unwrap();
        let ed = fs.iota(&d()).unwrap();
        let em = fs.iota(&-&d()).unwrap();
        let ea = fs.iota(&alpha()).unwrap();
        let w = Window::new(-2, 2).unwrap();
        let k = minimal_commutativity_order(&fs, &ea, &ed);
        assert!(check_weak_commutativity(&y, &ea, k, &ed, &ed, w, w).unwrap().pass);
        let h = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        assert!(check_weak_commutativity(&y, &h, 2, &ed, &em, w, w).unwrap().pass);
        assert!(check_weak_commutativity(&y, &fs.vacuum(), 1, &ed, &ed, w, w).unwrap().pass);
        assert!(matches!(
            check_weak_commutativity(&y, &h, 0, &ed, &ed, w, w),
            Err(Error::WeakCommutativityOrder { given: 0, minimal: 1 })
        ));
    }

    #[test]
    fn iterate_examples() {
        let fs = a1();
        let y = Intertwiner::new(&fs, &d()).unwrap();
        let ed = fs.iota(&d()).unwrap();
        let ea = fs.iota(&alpha()).unwrap();
        let h = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        let w = Window::new(-2, 3).unwrap();
        for v in [&ea, &h] {
            for n in [-2, -1, 0, 1] {
                let r = check_iterate(&y, v, n, &ed, &ed, w).unwrap();
                assert!(r.pass, "n = {n}: {r}");
            }
        }
    }

    #[test]
    fn commform_examples() {
        let fs = a1();
        let y = Intertwiner::new(&fs, &d()).unwrap();
        let ed = fs.iota(&d()).unwrap();
        let dd = fs.monomial(&[(0, 1)], &d()).unwrap();
        let ea = fs.iota(&alpha()).unwrap();
        let h = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        for (v, w2) in [(&ea, &ed), (&h, &ed), (&h, &dd), (&ea, &dd)] {
            for (pk, q) in [(-1, 0), (0, -1), (1, 1), (-2, -2)] {
                let r = check_commform(&y, pk, q, v, &ed, w2).unwrap();
                assert!(r.pass, "{r}");
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let fs = a1();
        let w = Window::new(-3, 3).unwrap();
        let y = Intertwiner::new(&fs, &d()).unwrap();
        let ed = fs.iota(&d()).unwrap();
        assert!(check_derivative(&y, &ed, &ed, w).unwrap().pass);
        let yv = Intertwiner::vertex(&fs);
        let ea = fs.iota(&alpha()).unwrap();
        let ema = fs.iota(&-&alpha()).unwrap();
        assert!(check_derivative(&yv, &ea, &ema, w).unwrap().pass);
        assert!(check_derivative(&yv, &fs.vacuum(), &ema, w).unwrap().pass);
    }

    #[test]
    fn symmetries_on_half_sector() {
        let fs = a1();
        let l = fs.lattice().clone();
        let dc = l.coset(&d()).unwrap();
        let zero = l.zero_coset();
        let spec = IntertwinerSpec::normalized(&fs, &dc, &dc, &fs.one());
        let ed = fs.iota(&d()).unwrap();
        let h = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        let r = check_skew_and_contragredient(&fs, &spec, &ed, &ed, &fs.vacuum(), &h, Window::new(-2, 2).unwrap()).unwrap();
        for part in r.parts() {
            assert!(part.pass && part.checked > 0, "{part}");
        }
        let spec2 = IntertwinerSpec::normalized(&fs, &dc, &zero, &fs.one());
        let w2 = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        let w3 = fs.iota(&-&d()).unwrap();
        let r = check_skew_and_contragredient(&fs, &spec2, &ed, &w2, &w3, &h, Window::new(-2, 2).unwrap()).unwrap();
        for part in r.parts() {
            assert!(part.pass && part.checked > 0, "{part}");
        }
    }
}
