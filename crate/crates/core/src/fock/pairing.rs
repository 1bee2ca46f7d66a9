use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::DualVector;
use crate::scalars::{frac, int, Cyclotomic, Rational};

use super::vector::{FockMonomial, FockSpace, FockVector};

impl FockSpace {
    /// Exponent `r` of the normalization `e^{2 pi i r}` carried by
    /// `(iota(e_gamma), iota(e_{-gamma}))`, with `rho` the representative
    /// of the coset of `gamma`.
    pub(crate) fn base_pairing_exponent(&self, rho: &DualVector, gamma: &DualVector) -> Rational {
        let l = self.lattice();
        let renorm = l.norm(rho) / int(2) + l.epsilon_exponent_unchecked(rho, rho);
        let shifted = &(gamma - rho) - rho;
        let base = l.pair(&shifted, gamma) / int(4)
            - (l.epsilon_exponent_unchecked(gamma, rho) - l.epsilon_exponent_unchecked(rho, gamma))
            - l.epsilon_exponent_unchecked(gamma, gamma);
        frac(&(renorm + base))
    }

    /// The normalized invariant pairing between `V_{beta+L}` and `V_{-beta+L}`,
    /// computed against the canonical representative of the coset of `u`.
    pub fn pair(&self, u: &FockVector, v: &FockVector) -> Result<Cyclotomic> {
        let l = self.lattice();
        let expected = l.coset_unchecked(&-u.coset().rep());
        if &expected != v.coset() {
            return Err(Error::CosetMismatch(format!(
                "pairing needs opposite cosets, got {} and {}",
                u.coset(),
                v.coset()
            )));
        }
        let rho = u.coset().rep().clone();
        let mut total = Cyclotomic::zero(l.field());
        for (mu, a) in u.terms() {
            for (mv, b) in v.terms() {
                if mu.degree() != mv.degree() || !(mu.charge() + mv.charge()).is_zero() {
                    continue;
                }
                let s = self.pair_monomials(mu, mv);
                if s.is_zero() {
                    continue;
                }
                let phase = l
                    .root(&self.base_pairing_exponent(&rho, mu.charge()))
                    .expect("pairing phases fit the field");
                total += &(&(a * b) * &phase).scale(&s);
            }
        }
        Ok(total)
    }

    /// Heisenberg part of the pairing of two monomials with opposite charges:
    /// the modes of `mu` are moved across as `-a(n)`.
    fn pair_monomials(&self, mu: &FockMonomial, mv: &FockMonomial) -> Rational {
        let l = self.lattice();
        let one = self.one();
        let mut cur = FockVector::zero(l.coset_unchecked(mv.charge()));
        cur.add_term(mv.clone(), &one);
        for &(i, n) in mu.modes() {
            cur = self.mode(&l.basis_vector(i), n as i64, &cur).neg();
            if cur.is_zero() {
                return Rational::zero();
            }
        }
        let bare = FockMonomial::bare(mv.charge().clone());
        match cur.coefficient(&bare) {
            Some(c) => c.as_rational().cloned().expect("Heisenberg pairings are rational"),
            None => Rational::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EvenLattice;
    use crate::scalars::rat;

    fn a1() -> FockSpace {
        FockSpace::new(EvenLattice::from_i64(&[vec![2]]).unwrap())
    }

    #[test]
    fn vacuum_is_normalized() {
        let fs = a1();
        assert!(fs.pair(&fs.vacuum(), &fs.vacuum()).unwrap().is_one());
    }

    #[test]
    fn half_root_sector() {
        let fs = a1();
        let d = DualVector(vec![rat(1, 2)]);
        let u = fs.iota(&d).unwrap();
        let v = fs.iota(&-&d).unwrap();
        assert!(fs.pair(&u, &v).unwrap().is_one());
        // same charge does not pair
        assert!(fs.pair(&u, &u).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_descendant() {
        let fs = a1();
        let v = fs.monomial(&[(0, 1)], &DualVector::zero(1)).unwrap();
        assert_eq!(fs.pair(&v, &v).unwrap(), fs.scalar(int(-2)));
    }

    #[test]
    fn coset_mismatch() {
        let fs = FockSpace::new(EvenLattice::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap());
        let g = DualVector(vec![rat(1, 3), rat(2, 3)]);
        let u = fs.iota(&g).unwrap();
        assert!(matches!(fs.pair(&u, &u), Err(Error::CosetMismatch(_))));
    }
}
