//! Integral intertwining operators for affine `sl_2` at positive integral level,
//! computed as `Hom` lattices over the divided-power form `U_Z(sl_2)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intmat::{hnf_rows, in_row_lattice, integer_kernel, kron, mat_mul, rat_rank, smith, to_rat_matrix, transpose, IntMatrix};
use crate::scalars::binom;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    F,
}

/// The classical integral form `(L_lam)_Z` with basis `v_k = f^{(k)} v_0`, `k = 0..=lam`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IrrModZ {
    pub lam: u32,
}

impl IrrModZ {
    pub fn new(lam: u32) -> Self {
        IrrModZ { lam }
    }

    pub fn dim(&self) -> usize {
        self.lam as usize + 1
    }
}

fn zeros(r: usize, c: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); c]; r]
}

/// Matrix of `e^{(m)}` or `f^{(m)}` on `(L_lam)_Z`; column `k` is the image of `v_k`.
pub fn act_divided(gen: Generator, m: u32, target: IrrModZ) -> IntMatrix {
    let n = target.dim();
    let lam = target.lam as i64;
    let m = m as i64;
    let mut a = zeros(n, n);
    for k in 0..n as i64 {
        match gen {
            Generator::F if k + m <= lam => a[(k + m) as usize][k as usize] = binom(k + m, m),
            Generator::E if k - m >= 0 => a[(k - m) as usize][k as usize] = binom(lam - k + m, m),
            _ => {}
        }
    }
    a
}

/// Diagonal matrix of `binom(h + m - 1, m)` on `(L_lam)_Z`.
pub fn act_h_binom(m: u32, target: IrrModZ) -> IntMatrix {
    let n = target.dim();
    let mut a = zeros(n, n);
    for (k, row) in a.iter_mut().enumerate() {
        let h = target.lam as i64 - 2 * k as i64;
        row[k] = binom(h + m as i64 - 1, m as i64);
    }
    a
}

/// `(L_lam1)_Z (x)_Z (L_lam2)_Z` with basis `v_i (x) v_j` at index `i * (lam2 + 1) + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TensorLattice {
    pub left: IrrModZ,
    pub right: IrrModZ,
}

impl TensorLattice {
    pub fn new(lam1: u32, lam2: u32) -> Self {
        TensorLattice {
            left: IrrModZ::new(lam1),
            right: IrrModZ::new(lam2),
        }
    }

    pub fn rank(&self) -> usize {
        self.left.dim() * self.right.dim()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.right.dim() + j
    }
}

/// `Delta x^{(m)} = sum_{i+j=m} x^{(i)} (x) x^{(j)}` on the tensor lattice.
pub fn tensor_action(gen: Generator, m: u32, t: TensorLattice) -> IntMatrix {
    let n = t.rank();
    let mut out = zeros(n, n);
    for i in 0..=m {
        let k = kron(&act_divided(gen, i, t.left), &act_divided(gen, m - i, t.right));
        for (r, row) in k.into_iter().enumerate() {
            for (c, x) in row.into_iter().enumerate() {
                out[r][c] += x;
            }
        }
    }
    out
}

/// `U_Z`-stable sublattice of the tensor lattice, kept as Hermite-normal-form rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubLattice {
    pub ambient: usize,
    pub rows: IntMatrix,
}

impl SubLattice {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        if self.rows.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        in_row_lattice(&self.rows, v)
    }
}

fn apply(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |s, (x, y)| s + x * y))
        .collect()
}

fn tensor_generators(t: TensorLattice) -> Vec<IntMatrix> {
    let top = t.left.lam + t.right.lam;
    let mut gens = Vec::new();
    for m in 1..=top {
        gens.push(tensor_action(Generator::E, m, t));
        gens.push(tensor_action(Generator::F, m, t));
    }
    gens
}

/// The lattice `W_Z` generated over `U_Z` by `v_0 (x) e^{(l - lam1 + 1)} w`, `w` running
/// over the basis of `(L_lam2)_Z`, saturated breadth-first until the Hermite form is stable.
pub fn build_wz(level: u32, lam1: u32, lam2: u32) -> Result<SubLattice> {
    check_level(level, &[lam1, lam2])?;
    let t = TensorLattice::new(lam1, lam2);
    let n = t.rank();
    let r = IrrModZ::new(lam2);
    let power = act_divided(Generator::E, level - lam1 + 1, r);
    let mut rows: IntMatrix = Vec::new();
    for j in 0..r.dim() {
        let mut v = vec![BigInt::zero(); n];
        for (k, row) in power.iter().enumerate() {
            if !row[j].is_zero() {
                v[t.index(0, k)] = row[j].clone();
            }
        }
        rows.push(v);
    }
    let gens = tensor_generators(t);
    let mut current = hnf_rows(&rows);
    loop {
        let mut next = current.clone();
        for g in &gens {
            for row in &current {
                next.push(apply(g, row));
            }
        }
        let next = hnf_rows(&next);
        if next == current {
            break;
        }
        current = next;
    }
    Ok(SubLattice { ambient: n, rows: current })
}

/// Matrices of `e^{(m)}`, `f^{(m)}` on the dual basis of `(L_lam)_Z`: `(-1)^m` times the transpose.
pub fn dual_module(gen: Generator, m: u32, lam: u32) -> IntMatrix {
    let a = transpose(&act_divided(gen, m, IrrModZ::new(lam)));
    if m.is_multiple_of(2) {
        a
    } else {
        a.into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect()
    }
}

fn check_level(level: u32, lams: &[u32]) -> Result<()> {
    if let Some(l) = lams.iter().find(|&&l| l > level) {
        return Err(Error::Parse(format!("weight {l} exceeds the level {level}")));
    }
    Ok(())
}

/// A `Z`-basis of `Hom_{U_Z}((L_lam1 (x) L_lam2)_Z / W_Z, (L_lam3)_Z')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomLattice {
    pub level: u32,
    pub weights: [u32; 3],
    pub rank: usize,
    /// Each map as a `(lam3 + 1) x (lam1 + 1)(lam2 + 1)` integer matrix.
    pub basis: Vec<IntMatrix>,
    /// Nonzero elementary divisors of `W_Z` inside the tensor lattice.
    pub wz_divisors: Vec<BigInt>,
    /// Free rank of the quotient by `W_Z`.
    pub quotient_rank: usize,
}

impl HomLattice {
    /// Invariant factors of the quotient greater than one, its torsion.
    pub fn quotient_torsion(&self) -> Vec<BigInt> {
        self.wz_divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Rows of the linear system on `vec(M)` (row-major, `M` of size `n3 x n`) encoding
/// `M X_T = X_D M` for `X` in `{e, f}` and `M w = 0` for the rows `w` of `W`.
fn constraint_rows(t: TensorLattice, lam3: u32, wz: &IntMatrix) -> IntMatrix {
    let n = t.rank();
    let n3 = lam3 as usize + 1;
    let unknowns = n3 * n;
    let var = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    for gen in [Generator::E, Generator::F] {
        let xt = tensor_action(gen, 1, t);
        let xd = dual_module(gen, 1, lam3);
        // (M X_T - X_D M)[r][c] = sum_k M[r][k] X_T[k][c] - sum_k X_D[r][k] M[k][c]
        for r in 0..n3 {
            for c in 0..n {
                let mut row = vec![BigInt::zero(); unknowns];
                for (k, xrow) in xt.iter().enumerate() {
                    row[var(r, k)] += &xrow[c];
                }
                for (k, x) in xd[r].iter().enumerate() {
                    row[var(k, c)] -= x;
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    for w in wz {
        for r in 0..n3 {
            let mut row = vec![BigInt::zero(); unknowns];
            for (c, x) in w.iter().enumerate() {
                row[var(r, c)] = x.clone();
            }
            rows.push(row);
        }
    }
    rows
}

pub fn hom_lattice(level: u32, lam1: u32, lam2: u32, lam3: u32) -> Result<HomLattice> {
    check_level(level, &[lam1, lam2, lam3])?;
    let t = TensorLattice::new(lam1, lam2);
    let n = t.rank();
    let n3 = lam3 as usize + 1;
    let wz = build_wz(level, lam1, lam2)?;
    let rows = constraint_rows(t, lam3, &wz.rows);
    let kernel = integer_kernel(&rows, n3 * n);
    // canonical Z-basis: Hermite form with positive pivots
    let kernel = hnf_rows(&kernel);
    let basis = kernel
        .iter()
        .map(|v| v.chunks(n).map(|c| c.to_vec()).collect())
        .collect();
    let wz_divisors = if wz.rows.is_empty() {
        Vec::new()
    } else {
        smith(&wz.rows).diag.into_iter().filter(|d| !d.is_zero()).collect()
    };
    Ok(HomLattice {
        level,
        weights: [lam1, lam2, lam3],
        rank: kernel.len(),
        basis,
        quotient_rank: n - wz.rank(),
        wz_divisors,
    })
}

/// Dimension over `Q` of the space of equivariant maps on the same constraint system,
/// by rational rank.
pub fn fusion_oracle(level: u32, lam1: u32, lam2: u32, lam3: u32) -> Result<usize> {
    check_level(level, &[lam1, lam2, lam3])?;
    let t = TensorLattice::new(lam1, lam2);
    let unknowns = (lam3 as usize + 1) * t.rank();
    let wz = build_wz(level, lam1, lam2)?;
    let rows = constraint_rows(t, lam3, &wz.rows);
    if rows.is_empty() {
        return Ok(unknowns);
    }
    Ok(unknowns - rat_rank(&to_rat_matrix(&rows)))
}

/// Checks that `M` intertwines `e` and `f` and kills `W_Z`.
pub fn is_hom(level: u32, lam1: u32, lam2: u32, lam3: u32, m: &IntMatrix) -> Result<bool> {
    let t = TensorLattice::new(lam1, lam2);
    for gen in [Generator::E, Generator::F] {
        let lhs = mat_mul(m, &tensor_action(gen, 1, t));
        let rhs = mat_mul(&dual_module(gen, 1, lam3), m);
        if lhs != rhs {
            return Ok(false);
        }
    }
    let wz = build_wz(level, lam1, lam2)?;
    Ok(wz.rows.iter().all(|w| apply(m, w).iter().all(|x| x.is_zero())))
}

/// All fusion ranks at the given level, keyed by `(lam1, lam2, lam3)` in lexicographic order.
pub fn fusion_table(level: u32) -> Result<Vec<([u32; 3], usize)>> {
    let mut out = Vec::new();
    for a in 0..=level {
        for b in 0..=level {
            for c in 0..=level {
                out.push(([a, b, c], hom_lattice(level, a, b, c)?.rank));
            }
        }
    }
    Ok(out)
}
