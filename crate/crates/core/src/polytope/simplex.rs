//! Exact two-phase simplex over big rationals with Bland's anti-cycling
//! rule. Problem sizes here are tiny (a handful of rows, at most a few
//! hundred columns), so the dense tableau is fine.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal {
        value: BigRational,
        solution: Vec<BigRational>,
    },
}

/// Maximizes `c . x` subject to `A x = b`, `x >= 0`.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpResult {
    let rows = a.len();
    let cols = c.len();
    debug_assert!(a.iter().all(|row| row.len() == cols));
    debug_assert_eq!(b.len(), rows);

    // Tableau with artificial columns appended; rhs normalized nonnegative.
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row: Vec<BigRational> = a[i].clone();
        let mut bi = b[i].clone();
        if bi.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            bi = -bi;
        }
        row.extend((0..rows).map(|j| {
            if j == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        t.push(row);
        rhs.push(bi);
    }
    let total = cols + rows;
    let mut basis: Vec<usize> = (cols..total).collect();

    // Phase 1: drive the artificial variables to zero.
    let phase1_obj: Vec<BigRational> = (0..total)
        .map(|j| {
            if j >= cols {
                -BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    run_simplex(&mut t, &mut rhs, &mut basis, &phase1_obj, total);
    let phase1_value: BigRational = basis
        .iter()
        .zip(&rhs)
        .filter(|(&bv, _)| bv >= cols)
        .map(|(_, v)| v.clone())
        .sum();
    if !phase1_value.is_zero() {
        return LpResult::Infeasible;
    }

    // Drive leftover artificial basics out (their value is zero).
    let mut drop_rows: Vec<usize> = Vec::new();
    for i in 0..rows {
        if basis[i] >= cols {
            if let Some(j) = (0..cols).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut rhs, &mut basis, i, j);
            } else {
                drop_rows.push(i);
            }
        }
    }
    for &i in drop_rows.iter().rev() {
        t.remove(i);
        rhs.remove(i);
        basis.remove(i);
    }

    // Phase 2 on the real objective; artificial columns may never re-enter.
    let mut phase2_obj: Vec<BigRational> = c.to_vec();
    phase2_obj.extend((0..rows).map(|_| BigRational::zero()));
    if !run_simplex(&mut t, &mut rhs, &mut basis, &phase2_obj, cols) {
        return LpResult::Unbounded;
    }

    let mut solution = vec![BigRational::zero(); cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            solution[bv] = rhs[i].clone();
        }
    }
    let value = c
        .iter()
        .zip(&solution)
        .map(|(ci, xi)| ci * xi)
        .sum();
    LpResult::Optimal { value, solution }
}

/// Feasibility of `A x = b`, `x >= 0`.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, |row| row.len());
    let c = vec![BigRational::zero(); cols];
    match maximize(a, b, &c) {
        LpResult::Optimal { solution, .. } => Some(solution),
        _ => None,
    }
}

/// Runs simplex iterations until optimality (true) or unboundedness (false).
/// Only columns `< enterable` may enter the basis.
fn run_simplex(
    t: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    basis: &mut [usize],
    obj: &[BigRational],
    enterable: usize,
) -> bool {
    loop {
        let entering = (0..enterable).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut reduced = obj[j].clone();
            for (i, &bv) in basis.iter().enumerate() {
                if !obj[bv].is_zero() && !t[i][j].is_zero() {
                    reduced -= &obj[bv] * &t[i][j];
                }
            }
            reduced.is_positive()
        });
        let Some(j) = entering else {
            return true;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..t.len() {
            if t[i][j].is_positive() {
                let ratio = &rhs[i] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else {
            return false;
        };
        pivot(t, rhs, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<BigRational>], rhs: &mut [BigRational], basis: &mut [usize], row: usize, col: usize) {
    let scale = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v = &*v / &scale;
    }
    rhs[row] = &rhs[row] / &scale;
    for i in 0..t.len() {
        if i != row && !t[i][col].is_zero() {
            let factor = t[i][col].clone();
            for j in 0..t[i].len() {
                let sub = &factor * &t[row][j];
                t[i][j] = &t[i][j] - sub;
            }
            let sub = &factor * &rhs[row];
            rhs[i] = &rhs[i] - sub;
        }
    }
    basis[row] = col;
}
