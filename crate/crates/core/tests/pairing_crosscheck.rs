//! The invariant pairing computed from the vertex operator of the lattice algebra
//! agrees with the direct normal-ordered pairing on whole integral bases.

use zvoa::fock::FockSpace;
use zvoa::scalars::int;
use zvoa::vertexops::pairing_from_intertwiner;
use zvoa::EvenLattice;

fn check(fs: &FockSpace, cutoff: i64) -> usize {
    let l = fs.lattice().clone();
    let mut checked = 0;
    for beta in l.cosets() {
        let opposite = l.coset_unchecked(&-beta.rep());
        let left = fs.integral_basis(&beta, &int(cutoff)).unwrap();
        let right = fs.integral_basis(&opposite, &int(cutoff)).unwrap();
        for (i, u) in left.vectors.iter().enumerate() {
            for v in right.indices_of_weight(&left.labels[i].weight).into_iter().map(|j| &right.vectors[j]) {
                let direct = fs.pair(u, v).unwrap();
                let via = pairing_from_intertwiner(fs, u, v).unwrap();
                assert_eq!(direct, via, "{beta}: {i}");
                checked += 1;
            }
        }
    }
    checked
}

#[test]
fn a1_through_weight_three() {
    let fs = FockSpace::new(EvenLattice::from_i64(&[vec![2]]).unwrap());
    assert!(check(&fs, 3) > 50);
}

#[test]
fn a2_through_weight_two() {
    let fs = FockSpace::new(EvenLattice::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap());
    assert!(check(&fs, 2) > 50);
}

#[test]
fn pairing_on_the_vertex_algebra_is_symmetric() {
    let fs = FockSpace::new(EvenLattice::from_i64(&[vec![2]]).unwrap());
    let l = fs.lattice().clone();
    let zero = l.zero_coset();
    let b = fs.integral_basis(&zero, &int(3)).unwrap();
    for u in &b.vectors {
        for v in &b.vectors {
            assert_eq!(fs.pair(u, v).unwrap(), fs.pair(v, u).unwrap());
        }
    }
}
