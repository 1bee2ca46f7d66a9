use rayon::prelude::*;

use crate::error::Result;
use crate::fock::{FockSpace, IntegralBasis};
use crate::lattice::CosetLabel;
use crate::scalars::{int, Cyclotomic, Rational};

use super::engine::Intertwiner;
use super::params::IntertwinerSpec;

/// One non-integral coordinate: the `target_index`-th dual coordinate of the
/// `x^exponent` coefficient of `Y(w1_i, x) w2_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanWitness {
    pub i: usize,
    pub j: usize,
    pub exponent: Rational,
    pub target_index: usize,
    pub coordinate: Cyclotomic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub beta: CosetLabel,
    pub gamma: CosetLabel,
    pub target: CosetLabel,
    pub scale: Cyclotomic,
    /// Weight cutoff of the input bases.
    pub cutoff: Rational,
    /// Weight cutoff of the output coefficients.
    pub out_cutoff: Rational,
    pub pairs: usize,
    pub coefficients: usize,
    pub coordinates: usize,
    pub pass: bool,
    pub witnesses: Vec<ScanWitness>,
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Output weight cutoff; defaults to the input cutoff.
    pub out_cutoff: Option<Rational>,
    /// Worker threads; defaults to `ZVOA_THREADS`, then to rayon's default.
    pub threads: Option<usize>,
}

/// Thread count requested through `ZVOA_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("ZVOA_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

#[derive(Default)]
struct Tally {
    coefficients: usize,
    coordinates: usize,
    witnesses: Vec<ScanWitness>,
}

fn scan_pair(y: &Intertwiner, fs: &FockSpace, b1: &IntegralBasis, b2: &IntegralBasis, target: &IntegralBasis, out_cutoff: &Rational, i: usize, j: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let (w1, w2) = (&b1.vectors[i], &b2.vectors[j]);
    let Some(low) = y.lowest_bound_vec(w1, w2) else {
        return Ok(t);
    };
    // the x^p coefficient has weight wt1 + wt2 + p
    let top = out_cutoff - &b1.labels[i].weight - &b2.labels[j].weight;
    let mut p = low;
    while p <= top {
        let c = y.coeff(w1, w2, &p)?;
        if !c.is_zero() {
            t.coefficients += 1;
            for (k, coord) in fs.dual_coordinates(&c, target)? {
                t.coordinates += 1;
                if !coord.is_rational_integer() {
                    t.witnesses.push(ScanWitness {
                        i,
                        j,
                        exponent: p.clone(),
                        target_index: k,
                        coordinate: coord,
                    });
                }
            }
        }
        p += int(1);
    }
    Ok(t)
}

/// Expands every coefficient of `scale * Y_{beta,gamma,Z}(w1,x) w2`, for `w1`, `w2`
/// running over the integral bases through `cutoff`, in coordinates of the graded
/// dual `V'_{-beta-gamma+L,Z}` and reports the non-integral ones. The result is
/// qualified by the cutoffs: it says nothing about higher weights.
pub fn integrality_scan(fs: &FockSpace, beta: &CosetLabel, gamma: &CosetLabel, scale: &Cyclotomic, cutoff: &Rational) -> Result<ScanReport> {
    integrality_scan_with(fs, beta, gamma, scale, cutoff, &ScanOptions::default())
}

pub fn integrality_scan_with(
    fs: &FockSpace,
    beta: &CosetLabel,
    gamma: &CosetLabel,
    scale: &Cyclotomic,
    cutoff: &Rational,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    let l = fs.lattice();
    let spec = IntertwinerSpec::normalized(fs, beta, gamma, scale);
    let target_coset = spec.target(fs);
    let out_cutoff = opts.out_cutoff.clone().unwrap_or_else(|| cutoff.clone());
    let b1 = fs.integral_basis(beta, cutoff)?;
    let b2 = fs.integral_basis(gamma, cutoff)?;
    let target = fs.integral_basis(&l.coset_unchecked(&-target_coset.rep()), &out_cutoff)?;
    let pairs: Vec<(usize, usize)> = (0..b1.len())
        .flat_map(|i| (0..b2.len()).map(move |j| (i, j)))
        .collect();
    let run = || -> Result<Vec<Tally>> {
        pairs
            .par_iter()
            .map_init(
                || spec.build(fs).expect("validated representatives"),
                |y, &(i, j)| scan_pair(y, fs, &b1, &b2, &target, &out_cutoff, i, j),
            )
            .collect()
    };
    let threads = opts.threads.or_else(threads_from_env);
    let tallies = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| crate::error::Error::Parse(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let mut report = ScanReport {
        beta: beta.clone(),
        gamma: gamma.clone(),
        target: target_coset,
        scale: scale.clone(),
        cutoff: cutoff.clone(),
        out_cutoff,
        pairs: pairs.len(),
        coefficients: 0,
        coordinates: 0,
        pass: true,
        witnesses: Vec::new(),
    };
    for t in tallies {
        report.coefficients += t.coefficients;
        report.coordinates += t.coordinates;
        report.witnesses.extend(t.witnesses);
    }
    report
        .witnesses
        .sort_by(|a, b| (a.i, a.j, &a.exponent, a.target_index).cmp(&(b.i, b.j, &b.exponent, b.target_index)));
    report.pass = report.witnesses.is_empty();
    Ok(report)
}
