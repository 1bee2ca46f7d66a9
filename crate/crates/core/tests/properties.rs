use std::sync::Arc;

use proptest::prelude::*;

use zvoa::affine_sl2::{act_divided, hom_lattice, Generator, IrrModZ};
use zvoa::fock::{FockSpace, FockVector};
use zvoa::json::{fock_vector_from_json, fock_vector_to_json, series_from_json, series_to_json};
use zvoa::intmat::IntMatrix;
use zvoa::scalars::{binom, int, rat};
use zvoa::series::Window;
use zvoa::vertexops::Intertwiner;
use zvoa::{Cyclotomic, CyclotomicField, DualVector, EvenLattice};

fn a2() -> FockSpace {
    FockSpace::new(EvenLattice::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap())
}

fn cyclotomic(field: &Arc<CyclotomicField>, coords: &[i64]) -> Cyclotomic {
    let mut out = Cyclotomic::zero(field);
    for (k, &c) in coords.iter().enumerate() {
        out += &Cyclotomic::zeta_pow(field, k as i64).scale(&int(c));
    }
    out
}

/// A vector in the coset of `[1/3, 2/3]` built from small modes and charges.
fn vector(fs: &FockSpace, terms: &[(Vec<(usize, u32)>, [i64; 2], i64)], coset_shift: bool) -> FockVector {
    let base = if coset_shift {
        DualVector(vec![rat(1, 3), rat(2, 3)])
    } else {
        DualVector(vec![rat(-1, 3), rat(-2, 3)])
    };
    let mut out = FockVector::zero(fs.lattice().coset(&base).unwrap());
    for (modes, shift, c) in terms {
        let m = fs.monomial(modes, &(&base + &DualVector::from_ints(shift))).unwrap();
        out.add_scaled(&m, &fs.scalar(int(*c)));
    }
    out
}

fn term() -> impl Strategy<Value = (Vec<(usize, u32)>, [i64; 2], i64)> {
    (
        proptest::collection::vec((0usize..2, 1u32..3), 0..3),
        [-1i64..2, -1i64..2],
        -3i64..4,
    )
}

fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    (0..a.len())
        .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_ring_laws(a in proptest::collection::vec(-3i64..4, 4), b in proptest::collection::vec(-3i64..4, 4), c in proptest::collection::vec(-3i64..4, 4)) {
        let f = CyclotomicField::get(12);
        let (a, b, c) = (cyclotomic(&f, &a), cyclotomic(&f, &b), cyclotomic(&f, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn roots_of_unity_multiply(p in -24i64..24, q in -24i64..24) {
        let f = CyclotomicField::get(24);
        let (r, s) = (rat(p, 24), rat(q, 24));
        let prod = &Cyclotomic::root_of_unity(&f, &r).unwrap() * &Cyclotomic::root_of_unity(&f, &s).unwrap();
        prop_assert_eq!(prod, Cyclotomic::root_of_unity(&f, &(r + s)).unwrap());
    }

    #[test]
    fn pairing_adjoint_for_modes(u in proptest::collection::vec(term(), 1..3), v in proptest::collection::vec(term(), 1..3), h in [-2i64..3, -2i64..3], n in 1i64..4) {
        let fs = a2();
        let u = vector(&fs, &u, true);
        let v = vector(&fs, &v, false);
        let h = DualVector::from_ints(&h);
        let lhs = fs.pair(&fs.apply_mode(&h, n, &u).unwrap(), &v).unwrap();
        let rhs = fs.pair(&u, &fs.apply_mode(&h, -n, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, -rhs);
    }

    #[test]
    fn pure_sectors_pair_only_with_opposite_charge(a in [-2i64..3, -2i64..3], b in [-2i64..3, -2i64..3]) {
        let fs = a2();
        let g = &DualVector(vec![rat(1, 3), rat(2, 3)]) + &DualVector::from_ints(&a);
        let g2 = &DualVector(vec![rat(-1, 3), rat(-2, 3)]) + &DualVector::from_ints(&b);
        let p = fs.pair(&fs.iota(&g).unwrap(), &fs.iota(&g2).unwrap()).unwrap();
        prop_assert_eq!(p.is_zero(), !(&g + &g2).is_zero());
    }

    #[test]
    fn vectors_and_series_round_trip(u in proptest::collection::vec(term(), 0..4), v in proptest::collection::vec(term(), 1..3)) {
        let fs = a2();
        let u = vector(&fs, &u, true);
        prop_assert_eq!(fock_vector_from_json(&fs, &fock_vector_to_json(&u)).unwrap(), u.clone());
        let v = vector(&fs, &v, true);
        let y = Intertwiner::new(&fs, v.coset().rep()).unwrap();
        let s = y.series(&v, &u, Window::new(-2, 1).unwrap()).unwrap();
        prop_assert_eq!(series_from_json(&fs, &series_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn divided_powers_compose(lam in 0u32..7, a in 0u32..5, b in 0u32..5) {
        let v = IrrModZ::new(lam);
        for g in [Generator::E, Generator::F] {
            let lhs = matmul(&act_divided(g, a, v), &act_divided(g, b, v));
            let c = binom((a + b) as i64, a as i64);
            let rhs: IntMatrix = act_divided(g, a + b, v).iter().map(|r| r.iter().map(|x| x * &c).collect()).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hom_rank_symmetric_in_sources(level in 0u32..4, a in 0u32..4, b in 0u32..4, c in 0u32..4) {
        prop_assume!(a <= level && b <= level && c <= level);
        prop_assert_eq!(hom_lattice(level, a, b, c).unwrap().rank, hom_lattice(level, b, a, c).unwrap().rank);
    }
}

#[test]
fn sl2_relations_as_matrices() {
    for lam in 0..=6 {
        let v = IrrModZ::new(lam);
        let e = act_divided(Generator::E, 1, v);
        let f = act_divided(Generator::F, 1, v);
        let ef = matmul(&e, &f);
        let fe = matmul(&f, &e);
        for k in 0..v.dim() {
            for j in 0..v.dim() {
                let h = if k == j { lam as i64 - 2 * k as i64 } else { 0 };
                assert_eq!(&ef[k][j] - &fe[k][j], h.into(), "[e,f] = h on V({lam})");
            }
        }
    }
}
