//! Truncated formal series `sum_k c_k x^{offset + k}` with Fock-space coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::lattice::CosetLabel;
use crate::scalars::{frac, Rational};

/// Inclusive bounds on the exponents of `x` to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Parse(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi })
    }

    /// Integer shifts `k` with `lo <= offset + k <= hi`.
    pub fn shifts(&self, offset: &Rational) -> std::ops::RangeInclusive<i64> {
        let lo = (Rational::from_integer(self.lo.into()) - offset).ceil().to_integer();
        let hi = (Rational::from_integer(self.hi.into()) - offset).floor().to_integer();
        let lo: i64 = lo.try_into().expect("window fits i64");
        let hi: i64 = hi.try_into().expect("window fits i64");
        lo..=hi
    }

    /// The exponents `offset + k` in the window, in increasing order.
    pub fn exponents(&self, offset: &Rational) -> Vec<Rational> {
        let off = frac(offset);
        self.shifts(&off)
            .map(|k| &off + Rational::from_integer(k.into()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    offset: Rational,
    coeffs: BTreeMap<i64, FockVector>,
    exp_min: i64,
    exp_max: i64,
    coset: CosetLabel,
}

impl TruncSeries {
    /// An all-zero series over the shifts `exp_min..=exp_max`.
    pub fn new(offset: &Rational, exp_min: i64, exp_max: i64, coset: CosetLabel) -> Self {
        TruncSeries {
            offset: frac(offset),
            coeffs: BTreeMap::new(),
            exp_min,
            exp_max,
            coset,
        }
    }

    pub fn over_window(offset: &Rational, window: Window, coset: CosetLabel) -> Self {
        let r = window.shifts(&frac(offset));
        Self::new(offset, *r.start(), *r.end(), coset)
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn exp_min(&self) -> i64 {
        self.exp_min
    }

    pub fn exp_max(&self) -> i64 {
        self.exp_max
    }

    pub fn coset(&self) -> &CosetLabel {
        &self.coset
    }

    pub fn exponent(&self, k: i64) -> Rational {
        &self.offset + Rational::from_integer(k.into())
    }

    /// Splits an exponent into its integer shift, if it lies in `offset + Z`.
    pub fn shift_of(&self, p: &Rational) -> Option<i64> {
        let k = p - &self.offset;
        if k.is_integer() {
            k.to_integer().try_into().ok()
        } else {
            None
        }
    }

    pub fn set(&mut self, k: i64, v: FockVector) {
        assert!(k >= self.exp_min && k <= self.exp_max, "shift outside the computed window");
        if v.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, v);
        }
    }

    /// Coefficient of `x^p`; fails when `p` lies outside the computed window.
    pub fn coeff(&self, p: &Rational) -> Result<FockVector> {
        let Some(k) = self.shift_of(p) else {
            return Ok(FockVector::zero(self.coset.clone()));
        };
        if k < self.exp_min || k > self.exp_max {
            return Err(Error::InsufficientWindow {
                needed_min: p.to_string(),
                needed_max: p.to_string(),
            });
        }
        Ok(self
            .coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| FockVector::zero(self.coset.clone())))
    }

    /// Nonzero coefficients as `(shift, vector)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &FockVector)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn lowest(&self) -> Option<Rational> {
        self.coeffs.keys().next().map(|&k| self.exponent(k))
    }

    /// Finite coefficient maps compare equal when they agree on every shift.
    pub fn same_coefficients(&self, other: &TruncSeries) -> bool {
        self.offset == other.offset && self.coeffs == other.coeffs
    }

    pub(crate) fn from_parts(offset: Rational, coeffs: BTreeMap<i64, FockVector>, exp_min: i64, exp_max: i64, coset: CosetLabel) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        TruncSeries {
            offset: if offset.is_zero() { offset } else { frac(&offset) },
            coeffs,
            exp_min,
            exp_max,
            coset,
        }
    }
}
