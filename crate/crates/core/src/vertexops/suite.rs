use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fock::{FockSpace, FockVector, IntegralBasis};
use crate::lattice::{CosetLabel, DualVector};
use crate::scalars::{int, Rational};
use crate::series::Window;

use super::checks::{
    check_commform, check_commutator, check_derivative, check_iterate, check_skew_and_contragredient, check_weak_commutativity,
    minimal_commutativity_order, CheckReport, SymmetryReport,
};
use super::engine::Intertwiner;
use super::params::IntertwinerSpec;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub instances: usize,
    pub seed: u64,
    /// Largest weight of the sampled homogeneous inputs.
    pub max_weight: Rational,
    /// Number of exponents examined past the lowest one.
    pub span: i64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            instances: 20,
            seed: 0,
            max_weight: int(3),
            span: 2,
        }
    }
}

/// One sampled instance of one identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteCase {
    pub index: usize,
    pub beta: CosetLabel,
    pub gamma: CosetLabel,
    /// Parameters of the instance in readable form.
    pub detail: String,
    pub report: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryCase {
    pub index: usize,
    pub beta: CosetLabel,
    pub gamma: CosetLabel,
    pub report: SymmetryReport,
}

struct Sampler<'a> {
    fs: &'a FockSpace,
    rng: ChaCha8Rng,
    cutoff: Rational,
    bases: BTreeMap<CosetLabel, IntegralBasis>,
}

impl<'a> Sampler<'a> {
    fn new(fs: &'a FockSpace, seed: u64, cutoff: &Rational) -> Self {
        Sampler {
            fs,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cutoff: cutoff.clone(),
            bases: BTreeMap::new(),
        }
    }

    fn coset(&mut self) -> CosetLabel {
        let all = self.fs.lattice().cosets();
        all.choose(&mut self.rng).expect("at least the zero coset").clone()
    }

    /// A homogeneous integral combination of one or two basis vectors of equal weight.
    fn homogeneous(&mut self, coset: &CosetLabel, max_weight: Option<&Rational>) -> Result<FockVector> {
        if !self.bases.contains_key(coset) {
            let b = self.fs.integral_basis(coset, &self.cutoff)?;
            self.bases.insert(coset.clone(), b);
        }
        let b = &self.bases[coset];
        let mut weights: Vec<&Rational> = b.labels.iter().map(|l| &l.weight).collect();
        weights.dedup();
        if let Some(m) = max_weight {
            weights.retain(|w| *w <= m);
        }
        let w = (*weights.choose(&mut self.rng).expect("the lowest weight is below the cutoff")).clone();
        let idx = b.indices_of_weight(&w);
        let mut out = FockVector::zero(coset.clone());
        let terms = self.rng.gen_range(1..=idx.len().min(2));
        for &i in idx.choose_multiple(&mut self.rng, terms) {
            let c = [-2i64, -1, 1, 2][self.rng.gen_range(0..4)];
            out.add_scaled(&b.vectors[i], &self.fs.scalar(int(c)));
        }
        if out.is_zero() {
            out = b.vectors[idx[0]].clone();
        }
        Ok(out)
    }

    fn heisenberg_direction(&mut self) -> DualVector {
        let l = self.fs.lattice();
        let i = self.rng.gen_range(0..l.rank());
        if self.rng.gen_bool(0.5) {
            l.basis_vector(i)
        } else {
            l.delta(i).clone()
        }
    }
}

fn window_from(low: Option<Rational>, span: i64) -> Window {
    let lo = low.map_or(0, |p| p.floor().to_integer().try_into().expect("small exponent"));
    Window::new(lo, lo + span).expect("ordered")
}

/// Runs the commutator, weak commutativity, iterate, commutator-formula and
/// derivative identities on `opts.instances` seeded random homogeneous instances each.
pub fn axiom_suite(fs: &FockSpace, opts: &SuiteOptions) -> Result<Vec<SuiteCase>> {
    let mut s = Sampler::new(fs, opts.seed, &opts.max_weight);
    let zero = fs.lattice().zero_coset();
    let mut out = Vec::new();
    for index in 0..opts.instances {
        let beta = s.coset();
        let gamma = s.coset();
        let y = Intertwiner::new(fs, beta.rep())?;
        let w1 = s.homogeneous(&beta, None)?;
        let w2 = s.homogeneous(&gamma, None)?;
        let v = s.homogeneous(&zero, Some(&int(2)))?;
        let window = window_from(y.lowest_bound_vec(&w1, &w2), opts.span);
        let mut push = |detail: String, report: CheckReport| {
            out.push(SuiteCase {
                index,
                beta: beta.clone(),
                gamma: gamma.clone(),
                detail,
                report,
            })
        };

        let h = s.heisenberg_direction();
        let m = s.rng.gen_range(-2..=2);
        push(format!("h = {h}, m = {m}"), check_commutator(&y, &h, m, &w1, &w2, window)?);

        let k = minimal_commutativity_order(fs, &v, &w1);
        let yv = Intertwiner::vertex(fs);
        let outer = window_from(yv.lowest_bound_vec(&v, &w2), opts.span);
        push(format!("k = {k}"), check_weak_commutativity(&y, &v, k, &w1, &w2, outer, window)?);

        let n = s.rng.gen_range(-2..=2);
        push(format!("n = {n}"), check_iterate(&y, &v, n, &w1, &w2, window)?);

        let p_k = s.rng.gen_range(-2..=2);
        let q = s.rng.gen_range(-2..=2);
        push(format!("p = {p_k}, q = {q}"), check_commform(&y, p_k, q, &v, &w1, &w2)?);

        push(String::new(), check_derivative(&y, &w1, &w2, window)?);
    }
    Ok(out)
}

/// Runs the skew-symmetry and contragredient checks on seeded random instances of
/// the normalized intertwiners.
pub fn symmetry_suite(fs: &FockSpace, opts: &SuiteOptions) -> Result<Vec<SymmetryCase>> {
    let mut s = Sampler::new(fs, opts.seed, &opts.max_weight);
    let l = fs.lattice().clone();
    let zero = l.zero_coset();
    let mut out = Vec::new();
    for index in 0..opts.instances {
        let beta = s.coset();
        let gamma = s.coset();
        let spec = IntertwinerSpec::normalized(fs, &beta, &gamma, &fs.one());
        let dual_target = l.coset_unchecked(&-spec.target(fs).rep());
        let w1 = s.homogeneous(&beta, None)?;
        let w2 = s.homogeneous(&gamma, None)?;
        let w3 = s.homogeneous(&dual_target, None)?;
        let probe = s.homogeneous(&zero, Some(&int(2)))?;
        let y = spec.build(fs)?;
        let window = window_from(y.lowest_bound_vec(&w1, &w2), opts.span);
        let report = check_skew_and_contragredient(fs, &spec, &w1, &w2, &w3, &probe, window)?;
        out.push(SymmetryCase { index, beta, gamma, report });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EvenLattice;

    #[test]
    fn small_suites_pass_and_repeat() {
        let fs = FockSpace::new(EvenLattice::from_i64(&[vec![2]]).unwrap());
        let opts = SuiteOptions {
            instances: 4,
            seed: 7,
            max_weight: int(2),
            span: 1,
        };
        let a = axiom_suite(&fs, &opts).unwrap();
        assert_eq!(a.len(), 20);
        for c in &a {
            assert!(c.report.pass, "{} {}", c.detail, c.report);
        }
        assert_eq!(a, axiom_suite(&fs, &opts).unwrap());
        for c in symmetry_suite(&fs, &opts).unwrap() {
            assert!(c.report.pass(), "{:?}", c.report);
        }
    }
}
