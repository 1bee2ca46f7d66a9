use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::scalars::{frac, int, Cyclotomic, Rational};
use crate::series::{TruncSeries, Window};

use super::engine::Intertwiner;

/// `e^{xL(1)} e^{pi i L(0)} x^{-2L(0)} u` as `(phase, shift, L(1)^j u / j!)` terms
/// for each homogeneous part of `u`: the term contributes `x^{j - 2h}`.
fn opposite_terms(fs: &FockSpace, u: &FockVector) -> Vec<(Cyclotomic, Rational, FockVector)> {
    let l = fs.lattice();
    let mut out = Vec::new();
    for (h, part) in fs.homogeneous_parts(u) {
        let phase = l.root(&frac(&(&h / int(2)))).expect("phases fit the field");
        let mut cur = part;
        let mut j = 0i64;
        while !cur.is_zero() {
            out.push((phase.clone(), int(j) - &h * int(2), cur.clone()));
            j += 1;
            cur = fs.l_one(&cur).scale_rational(&Rational::new(1.into(), j.into()));
        }
    }
    out
}

/// Coefficient of `x^q` in `Y°_0(u,x)v = Y(e^{xL(1)} e^{pi i L(0)} x^{-2L(0)} u, x^{-1}) v`.
pub fn opposite_coeff(y: &Intertwiner, u: &FockVector, v: &FockVector, q: &Rational) -> Result<FockVector> {
    let fs = y.fock();
    let mut out = FockVector::zero(y.target_coset(v.coset()));
    for (phase, shift, w) in opposite_terms(fs, u) {
        // x^{shift} Y(w, x^{-1}) contributes x^{shift - p}
        let p = &shift - q;
        let c = y.coeff(&w, v, &p)?;
        if !c.is_zero() {
            out.add_scaled(&c, &phase);
        }
    }
    Ok(out)
}

/// The opposite operator `Y°_0(u,x)v` over the window.
pub fn opposite_op(y: &Intertwiner, u: &FockVector, v: &FockVector, window: Window) -> Result<TruncSeries> {
    let fs = y.fock();
    let offset = match fs.homogeneous_parts(u).keys().next() {
        Some(h) => frac(&(-(h * int(2)) - y.offset(v.coset()))),
        None => Rational::zero(),
    };
    let mut s = TruncSeries::over_window(&offset, window, y.target_coset(v.coset()));
    for k in s.exp_min()..=s.exp_max() {
        let q = s.exponent(k);
        s.set(k, opposite_coeff(y, u, v, &q)?);
    }
    Ok(s)
}

/// The invariant pairing `Res_x x^{-1} (1, Y°_0(u, e^{pi i} x) e^{xL(1)} v)` built from
/// `Y = e^{pi i <rho,rho>/2} eps(rho,rho) Y_rho`, with `rho` the representative of `u`'s coset.
pub fn pairing_from_intertwiner(fs: &FockSpace, u: &FockVector, v: &FockVector) -> Result<Cyclotomic> {
    let l = fs.lattice();
    let rho = u.coset().rep().clone();
    let expected = l.coset_unchecked(&-&rho);
    if v.coset() != &expected {
        return Err(Error::CosetMismatch(format!(
            "pairing needs opposite cosets, got {} and {}",
            u.coset(),
            v.coset()
        )));
    }
    let kappa = l
        .root(&frac(&(l.norm(&rho) / int(2) + l.epsilon_exponent_unchecked(&rho, &rho))))
        .expect("phases fit the field");
    let y = Intertwiner::new(fs, &rho)?.with_scale(&kappa);
    let vac = fs.vacuum();
    let mut total = Cyclotomic::zero(l.field());
    let mut cur = v.clone();
    let mut k = 0i64;
    while !cur.is_zero() {
        // x^q picks up e^{pi i q}, and Res x^{-1} x^{q+k} needs q = -k
        let c = opposite_coeff(&y, u, &cur, &int(-k))?;
        let p = fs.pair(&vac, &c)?;
        if k % 2 == 0 {
            total += &p;
        } else {
            total -= &p;
        }
        k += 1;
        cur = fs.l_one(&cur).scale_rational(&Rational::new(1.into(), k.into()));
    }
    Ok(total)
}
