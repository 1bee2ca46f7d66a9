//! Dense exact linear algebra over `Z` and `Q`: Hermite and Smith normal
//! forms, lattice membership, integer kernels and rational elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalars::Rational;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn to_int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn to_rat_matrix(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn kron(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (ar, ac) = (a.len(), a.first().map_or(0, |r| r.len()));
    let (br, bc) = (b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = vec![vec![BigInt::zero(); ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[i * br + k][j * bc + l] = &a[i][j] * &b[k][l];
                }
            }
        }
    }
    out
}

fn min_abs_in_column(a: &IntMatrix, col: usize, from: usize) -> Option<usize> {
    (from..a.len())
        .filter(|&i| !a[i][col].is_zero())
        .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()))
}

fn row_axpy(a: &mut IntMatrix, target: usize, q: &BigInt, source: usize) {
    // row[target] -= q * row[source]
    if q.is_zero() {
        return;
    }
    let src = a[source].clone();
    for (x, s) in a[target].iter_mut().zip(&src) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

/// Row Hermite normal form of the lattice spanned by the given rows.
/// Zero rows are dropped; pivots are positive and entries above each pivot
/// are reduced into `[0, pivot)`.
pub fn hnf_rows(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let mut found = false;
        while let Some(p) = min_abs_in_column(&a, c, r) {
            found = true;
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                row_axpy(&mut a, i, &q, r);
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            row_axpy(&mut a, i, &q, r);
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Membership of `v` in the row span of a Hermite form produced by [`hnf_rows`].
pub fn in_row_lattice(hnf: &IntMatrix, v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in hnf {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if v[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = v[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        for (x, s) in v.iter_mut().zip(row) {
            *x -= &q * s;
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// Smith decomposition `U * A * V = diag(d)`, `U`, `V` unimodular,
/// `d_1 | d_2 | ...`, nonnegative, with zeros last.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<BigInt>,
}

pub fn smith(a: &IntMatrix) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut a = a.clone();
    let mut u = identity(m);
    // track V through its transpose so column ops become row ops
    let mut vt = identity(n);

    let swap_cols = |a: &mut IntMatrix, vt: &mut IntMatrix, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        vt.swap(i, j);
    };
    // col[target] -= q * col[source]
    let col_axpy = |a: &mut IntMatrix, vt: &mut IntMatrix, target: usize, q: &BigInt, source: usize| {
        if q.is_zero() {
            return;
        }
        for row in a.iter_mut() {
            if !row[source].is_zero() {
                let s = row[source].clone();
                row[target] -= q * s;
            }
        }
        row_axpy(vt, target, q, source);
    };

    let k = m.min(n);
    for t in 0..k {
        // pivot with minimal nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, &mut vt, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, &q, t);
                row_axpy(&mut u, i, &q, t);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, &mut vt, j, &q, t);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    u.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut a, &mut vt, t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block
            let mut bad_row = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t]) {
                        bad_row = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, &minus_one, i);
                    row_axpy(&mut u, t, &minus_one, i);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let diag = (0..k).map(|i| a[i][i].clone()).collect();
    Smith {
        u,
        v: transpose(&vt),
        diag,
    }
}

/// A `Z`-basis (as columns, returned as a list of vectors) of the integer
/// kernel `{x in Z^n : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix, ncols: usize) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return (0..ncols)
            .map(|i| {
                (0..ncols)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
    }
    let s = smith(a);
    let rank = s.diag.iter().filter(|d| !d.is_zero()).count();
    (rank..ncols)
        .map(|j| s.v.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form over `Q`; returns the matrix and pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (a, pivots)
}

pub fn rat_rank(m: &RatMatrix) -> usize {
    rref(m).1.len()
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn rat_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let aug: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rat_mat_vec(a: &RatMatrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = to_rat_matrix(m);
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let s = &f * &a[c][j];
                a[i][j] -= s;
            }
        }
    }
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        to_int_matrix(rows)
    }

    #[test]
    fn smith_of_a2_gram() {
        let g = m(&[vec![2, -1], vec![-1, 2]]);
        let s = smith(&g);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(3)]);
        let d = mat_mul(&mat_mul(&s.u, &g), &s.v);
        assert_eq!(d, m(&[vec![1, 0], vec![0, 3]]));
    }

    #[test]
    fn kernel_spans_integer_solutions() {
        let a = m(&[vec![2, 4, 6]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
        // (1, -2, 1) and (3, 0, -1) must be in the span
        let h = hnf_rows(&k);
        assert!(in_row_lattice(&h, &[1, -2, 1].map(BigInt::from)));
        assert!(in_row_lattice(&h, &[3, 0, -1].map(BigInt::from)));
    }

    #[test]
    fn hnf_membership() {
        let h = hnf_rows(&m(&[vec![2, 0], vec![0, 2], vec![1, 1]]));
        assert_eq!(h.len(), 2);
        assert!(in_row_lattice(&h, &[3, 1].map(BigInt::from)));
        assert!(!in_row_lattice(&h, &[1, 0].map(BigInt::from)));
    }

    #[test]
    fn inverse_and_det() {
        let g = m(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(det(&g), BigInt::from(3));
        let inv = rat_inverse(&to_rat_matrix(&g)).unwrap();
        assert_eq!(inv[0][0], Rational::new(2.into(), 3.into()));
        assert!(rat_inverse(&to_rat_matrix(&m(&[vec![1, 2], vec![2, 4]]))).is_none());
    }

    proptest! {
        #[test]
        fn smith_is_a_valid_decomposition(entries in proptest::collection::vec(-6i64..7, 12)) {
            let a: IntMatrix = entries.chunks(4).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let s = smith(&a);
            let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
            for i in 0..3 {
                for j in 0..4 {
                    let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                    prop_assert_eq!(&d[i][j], &expect);
                }
            }
            for w in s.diag.windows(2) {
                if !w[1].is_zero() {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                } else {
                    prop_assert!(true);
                }
            }
            prop_assert_eq!(det(&s.u).abs(), BigInt::one());
            prop_assert_eq!(det(&s.v).abs(), BigInt::one());
        }

        #[test]
        fn hnf_preserves_span(entries in proptest::collection::vec(-5i64..6, 9)) {
            let rows: IntMatrix = entries.chunks(3).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let h = hnf_rows(&rows);
            for r in &rows {
                prop_assert!(in_row_lattice(&h, r));
            }
            let back = hnf_rows(&h);
            prop_assert_eq!(back, h);
        }
    }
}
