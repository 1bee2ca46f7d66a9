use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{CosetLabel, DualVector};
use crate::scalars::{int, Cyclotomic, Rational};
use crate::symfunc::{partitions_of, Partition};

use super::vector::{FockSpace, FockVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    /// The integral form `V_{beta+L,Z}`.
    Standard,
    /// The graded dual `V'_{-beta+L,Z}` realized inside `V_{beta+L}`.
    Dual,
}

/// Index data of one basis vector: charge `alpha + rep` and one partition per basis index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub alpha: DualVector,
    pub charge: DualVector,
    pub parts: Vec<Partition>,
    pub weight: Rational,
}

#[derive(Clone, Debug)]
pub struct IntegralBasis {
    pub kind: FormKind,
    pub cutoff: Rational,
    pub rep: DualVector,
    pub labels: Vec<BasisLabel>,
    pub vectors: Vec<FockVector>,
}

impl IntegralBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Indices of the vectors of the given weight.
    pub fn indices_of_weight(&self, w: &Rational) -> Vec<usize> {
        (0..self.len()).filter(|&i| &self.labels[i].weight == w).collect()
    }
}

/// All tuples of partitions, one per basis index, of total size `d`.
fn partition_tuples(rank: usize, d: u32) -> Vec<Vec<Partition>> {
    if rank == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for head in partitions_of(first) {
            for tail in partition_tuples(rank - 1, d - first) {
                let mut t = vec![head.clone()];
                t.extend(tail);
                out.push(t);
            }
        }
    }
    out
}

impl FockSpace {
    fn require_definite(&self) -> Result<()> {
        if !self.lattice().is_positive_definite() {
            return Err(Error::IndefiniteLattice);
        }
        Ok(())
    }

    /// Labels `(alpha, Lambda_1..Lambda_l)` of weight at most `cutoff` in the
    /// coset of `rep`, sorted by weight, charge, then partitions.
    fn basis_labels(&self, rep: &DualVector, cutoff: &Rational) -> Result<Vec<BasisLabel>> {
        self.require_definite()?;
        let l = self.lattice();
        let coset = l.coset(rep)?;
        let mut labels = Vec::new();
        for gamma in l.vectors_in_coset(&coset, cutoff)? {
            let n = l.norm(&gamma);
            let budget = (cutoff - &n).floor().to_integer().to_u32().unwrap_or(0);
            for d in 0..=budget {
                for parts in partition_tuples(l.rank(), d) {
                    labels.push(BasisLabel {
                        alpha: &gamma - rep,
                        charge: gamma.clone(),
                        parts,
                        weight: &n + int(d as i64),
                    });
                }
            }
        }
        labels.sort_by(|a, b| {
            a.weight
                .cmp(&b.weight)
                .then_with(|| a.charge.cmp(&b.charge))
                .then_with(|| a.parts.cmp(&b.parts))
        });
        Ok(labels)
    }

    fn max_part(labels: &[BasisLabel]) -> usize {
        labels
            .iter()
            .flat_map(|lab| lab.parts.iter().flat_map(|p| p.parts().first().copied()))
            .max()
            .unwrap_or(0) as usize
    }

    /// Basis `h_{Lambda_1}(alpha^{(1)}) ... h_{Lambda_l}(alpha^{(l)}) iota(e_alpha e_rep)`
    /// of the integral form of the coset of `rep`, built against that representative.
    pub fn integral_basis_at(&self, rep: &DualVector, cutoff: &Rational) -> Result<IntegralBasis> {
        let l = self.lattice();
        l.require_dual(rep)?;
        let labels = self.basis_labels(rep, cutoff)?;
        let top = Self::max_part(&labels);
        let polys: Vec<Vec<FockVector>> = (0..l.rank())
            .map(|i| self.e_minus_polys(&l.basis_vector(i), top))
            .collect();
        let vectors = labels
            .iter()
            .map(|lab| {
                let eps = l.epsilon_unchecked(&lab.alpha, rep);
                let mut v = self.iota(&lab.charge).expect("charge in dual").scale(&eps);
                for (i, lam) in lab.parts.iter().enumerate() {
                    for &p in lam.parts() {
                        v = self.multiply_creation(&polys[i][p as usize], &v);
                    }
                }
                v
            })
            .collect();
        Ok(IntegralBasis {
            kind: FormKind::Standard,
            cutoff: cutoff.clone(),
            rep: rep.clone(),
            labels,
            vectors,
        })
    }

    /// The integral form `V_{beta+L,Z}` through weight `cutoff`, built on the
    /// canonical representative.
    pub fn integral_basis(&self, coset: &CosetLabel, cutoff: &Rational) -> Result<IntegralBasis> {
        self.integral_basis_at(coset.rep(), cutoff)
    }

    /// Dual vector `(-1)^{<alpha,alpha>/2} eps(alpha,alpha) m_{Lambda_1}(alpha^{(1)}) ... iota(e_alpha e_rho)`.
    fn dual_vector(&self, rho: &DualVector, alpha: &DualVector, parts: &[Partition]) -> FockVector {
        let l = self.lattice();
        let sign_exp = l.norm(alpha) / int(2) + l.epsilon_exponent_unchecked(alpha, alpha);
        let eps = l.epsilon_unchecked(alpha, rho);
        let coeff = &l.root(&sign_exp).expect("sign") * &eps;
        let mut v = self
            .iota(&(alpha + rho))
            .expect("charge in dual")
            .scale(&coeff);
        for (i, lam) in parts.iter().enumerate() {
            v = self.m_op(i, lam, &v).expect("valid index");
        }
        v
    }

    /// Basis of the graded dual `V'_{-beta+L,Z}` inside `V_{beta+L}`, listed so
    /// that its i-th vector pairs to 1 with the i-th vector of
    /// `integral_basis(-beta)` and to 0 with the others.
    pub fn dual_basis(&self, coset: &CosetLabel, cutoff: &Rational) -> Result<IntegralBasis> {
        let l = self.lattice();
        let rho = coset.rep().clone();
        let opposite = l.coset_unchecked(&-&rho);
        let sigma = opposite.rep().clone();
        let target = self.integral_basis(&opposite, cutoff)?;
        let mut labels = Vec::with_capacity(target.len());
        let mut vectors = Vec::with_capacity(target.len());
        for lab in &target.labels {
            // partner charge -alpha - rho equals alpha' + sigma
            let charge = -&lab.charge;
            let alpha = &charge - &rho;
            let v = self.dual_vector(&rho, &alpha, &lab.parts);
            // iota(e_{alpha'} e_sigma) = sign * iota(e_{-alpha} e_{-rho})
            let sign_exp = l.epsilon_exponent_unchecked(&lab.alpha, &sigma)
                - l.epsilon_exponent_unchecked(&-&alpha, &-&rho);
            let sign = l.root(&sign_exp).expect("sign");
            vectors.push(v.scale(&sign));
            labels.push(BasisLabel {
                alpha,
                charge,
                parts: lab.parts.clone(),
                weight: lab.weight.clone(),
            });
        }
        Ok(IntegralBasis {
            kind: FormKind::Dual,
            cutoff: cutoff.clone(),
            rep: rho,
            labels,
            vectors,
        })
    }

    /// Coordinates of a homogeneous `w` in `V_{tau+L}` with respect to the dual
    /// basis: the pairings of `w` with `integral_basis(-tau)` vectors of the same weight.
    pub fn dual_coordinates(&self, w: &FockVector, target: &IntegralBasis) -> Result<Vec<(usize, Cyclotomic)>> {
        let mut out = Vec::new();
        for (wt, part) in self.homogeneous_parts(w) {
            for j in target.indices_of_weight(&wt) {
                let c = self.pair(&part, &target.vectors[j])?;
                if !c.is_zero() {
                    out.push((j, c));
                }
            }
        }
        out.sort_by_key(|(j, _)| *j);
        Ok(out)
    }
}
