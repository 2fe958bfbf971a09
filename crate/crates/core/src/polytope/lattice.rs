//! Lattice generation test via Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// True iff the differences `s - s0` of the given integer points generate
/// the full lattice `Z^n` as a group. Decided by reducing the difference
/// matrix to Smith normal form: the lattice is full exactly when the rank is
/// `n` and every elementary divisor is a unit.
pub fn generates_lattice(points: &[Vec<i64>]) -> bool {
    let Some(first) = points.first() else {
        return false;
    };
    let n = first.len();
    if n == 0 {
        return true;
    }
    let mut rows: Vec<Vec<BigInt>> = points
        .iter()
        .skip(1)
        .map(|p| {
            p.iter()
                .zip(first)
                .map(|(a, b)| BigInt::from(*a) - BigInt::from(*b))
                .collect()
        })
        .collect();
    if rows.len() < n {
        return false;
    }
    let divisors = smith_divisors(&mut rows, n);
    divisors.len() == n && divisors.iter().all(|d| d.abs() == BigInt::from(1))
}

/// Affine rank of a set of integer points: the linear rank of the
/// differences from the first point.
pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let n = first.len();
    let mut rows: Vec<Vec<BigInt>> = points
        .iter()
        .skip(1)
        .map(|p| {
            p.iter()
                .zip(first)
                .map(|(a, b)| BigInt::from(*a) - BigInt::from(*b))
                .collect()
        })
        .collect();
    smith_divisors(&mut rows, n).len()
}

/// Diagonal of the Smith normal form (nonzero entries only).
fn smith_divisors(m: &mut [Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut divisors = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < m.len() && left < cols {
        // Pick the smallest-magnitude nonzero pivot in the active block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..m.len() {
            for j in left..cols {
                if !m[i][j].is_zero()
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(left, pj);
        }

        // Reduce the pivot row and column; repeat until both are clean.
        let mut clean = false;
        while !clean {
            clean = true;
            for i in top + 1..m.len() {
                if !m[i][left].is_zero() {
                    let q = m[i][left].div_floor(&m[top][left]);
                    for j in left..cols {
                        let sub = &q * &m[top][j];
                        m[i][j] -= sub;
                    }
                    if !m[i][left].is_zero() {
                        m.swap(top, i);
                        clean = false;
                    }
                }
            }
            for j in left + 1..cols {
                if !m[top][j].is_zero() {
                    let q = m[top][j].div_floor(&m[top][left]);
                    for row in m.iter_mut().skip(top) {
                        let sub = &q * &row[left];
                        row[j] -= sub;
                    }
                    if !m[top][j].is_zero() {
                        for row in m.iter_mut().skip(top) {
                            row.swap(left, j);
                        }
                        clean = false;
                    }
                }
            }
        }
        divisors.push(m[top][left].clone());
        top += 1;
        left += 1;
    }
    divisors
}
