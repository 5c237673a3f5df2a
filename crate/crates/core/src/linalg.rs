//! Small dense exact linear algebra: Smith normal form over ℤ and
//! Gaussian elimination over ℚ.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `u · a · v = diag(d)` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub u: Matrix,
    pub v: Matrix,
    pub rows: usize,
    pub cols: usize,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn swap_cols(m: &mut Matrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

// row_i += k * row_j
fn add_row(m: &mut Matrix, i: usize, j: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let src = m[j].clone();
    for (dst, s) in m[i].iter_mut().zip(src.iter()) {
        *dst += k * s;
    }
}

// col_i += k * col_j
fn add_col(m: &mut Matrix, i: usize, j: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[j].clone();
        row[i] += k * s;
    }
}

pub fn smith_normal_form(a: &Matrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let steps = rows.min(cols);
    for t in 0..steps {
        // pivot: smallest nonzero absolute value in the trailing block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => m[i][j].abs() < m[bi][bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    add_row(&mut m, i, t, &-q.clone());
                    add_row(&mut u, i, t, &-q);
                    dirty |= !m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    add_col(&mut m, j, t, &-q.clone());
                    add_col(&mut v, j, t, &-q);
                    dirty |= !m[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut fix = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !m[i][j].is_multiple_of(&m[t][t]) {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => {
                    add_row(&mut m, t, i, &BigInt::one());
                    add_row(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if t < rows && t < cols && m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let diagonal = (0..steps).map(|i| m[i][i].clone()).collect();
    Smith { diagonal, u, v, rows, cols }
}

/// Integer solution of `a·x ≡ b` where row `i` is read modulo `moduli[i]`
/// (0 = exact equation). Returns any solution, or `None`.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt], moduli: &[u64]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let slack: Vec<usize> = (0..rows).filter(|&i| moduli[i] != 0).collect();
    let total = cols + slack.len();
    let mut m: Matrix = vec![vec![BigInt::zero(); total]; rows];
    for i in 0..rows {
        for j in 0..cols {
            m[i][j] = a[i][j].clone();
        }
    }
    for (k, &i) in slack.iter().enumerate() {
        m[i][cols + k] = BigInt::from(moduli[i]);
    }
    let s = smith_normal_form(&m, total);
    let ub: Vec<BigInt> = (0..rows)
        .map(|i| (0..rows).fold(BigInt::zero(), |acc, k| acc + &s.u[i][k] * &b[k]))
        .collect();
    let mut z = vec![BigInt::zero(); total];
    for i in 0..rows {
        let d = if i < s.diagonal.len() { s.diagonal[i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            if !ub[i].is_multiple_of(&d) {
                return None;
            }
            z[i] = &ub[i] / &d;
        }
    }
    let x = (0..cols)
        .map(|j| (0..total).fold(BigInt::zero(), |acc, k| acc + &s.v[j][k] * &z[k]))
        .collect();
    Some(x)
}

/// Rational solution of `a·x = b`; rows with a nonzero modulus describe
/// torsion and carry no information over ℚ.
pub fn solve_rational(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    moduli: &[u64],
) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigRational>> = Vec::new();
    for (i, row) in a.iter().enumerate() {
        if moduli[i] == 0 {
            let mut r = row.clone();
            r.push(b[i].clone());
            m.push(r);
        }
    }
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let src = m[r].clone();
                for (dst, s) in m[i].iter_mut().zip(src.iter()) {
                    *dst = &*dst - &(&f * s);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Kernel rank and cokernel invariants of an integer map `ℤ^cols → ℤ^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KerCoker {
    pub kernel_rank: usize,
    pub cokernel_free: usize,
    pub cokernel_torsion: Vec<BigInt>,
}

pub fn kernel_cokernel(a: &Matrix, cols: usize) -> KerCoker {
    let rows = a.len();
    let s = smith_normal_form(a, cols);
    let rank = s.rank();
    let torsion = s
        .diagonal
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect();
    KerCoker { kernel_rank: cols - rank, cokernel_free: rows - rank, cokernel_torsion: torsion }
}
