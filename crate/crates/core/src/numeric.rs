//! Small shared numeric helpers: dense linear solves for the Newton steps,
//! exact/float conversions, and deterministic sampling grids.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Solves the dense complex system `a x = b` by Gaussian elimination with
/// partial pivoting. `a` is row-major and consumed.
pub fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .norm_sqr()
                    .partial_cmp(&a[j][col].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if a[pivot][col].norm_sqr() == 0.0 {
            return Err(Error::InvalidArgument("singular linear system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let rhs = b[col];
            b[row] -= factor * rhs;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}

/// Determinant of a dense complex matrix by elimination with partial
/// pivoting. The empty matrix has determinant 1.
pub fn det_complex(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        if a[pivot][col].norm_sqr() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
        }
    }
    det
}

/// Real counterpart of [`solve_complex`].
pub fn solve_real(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Vec<f64>> {
    let ac = a
        .into_iter()
        .map(|row| row.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
        .collect();
    let bc = b.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    Ok(solve_complex(ac, bc)?.into_iter().map(|v| v.re).collect())
}

/// Converts a big rational to `f64`, scaling by powers of two first so that
/// values far beyond the `f64` exponent range of either numerator or
/// denominator still convert (the *ratio* must fit, the parts need not).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let numer = r.numer();
    let denom = r.denom();
    let shift = numer.bits() as i64 - denom.bits() as i64;
    // Bring the ratio near 1, convert, and restore the exponent.
    let (scaled_n, scaled_d) = if shift >= 0 {
        (numer.clone(), denom.clone() << shift as u64)
    } else {
        (numer.clone() << (-shift) as u64, denom.clone())
    };
    let approx = big_to_f64(&scaled_n) / big_to_f64(&scaled_d);
    approx * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

fn big_to_f64(x: &BigInt) -> f64 {
    // Keep the top 64 bits; enough for a f64 mantissa.
    let bits = x.bits();
    if bits <= 63 {
        return x.to_f64().unwrap_or(0.0);
    }
    let drop = bits - 63;
    let top = x >> drop;
    top.to_f64().unwrap_or(0.0) * 2f64.powi(drop.min(i32::MAX as u64) as i32)
}

/// Exact conversion of a finite `f64` into a rational (dyadic) number.
pub fn f64_to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x} has no exact rational")))
}

/// Natural logarithm of |r| for a nonzero rational, stable for values far
/// outside the `f64` range.
pub fn rational_ln_abs(r: &BigRational) -> f64 {
    assert!(!r.is_zero(), "log of zero");
    let numer = r.numer().abs();
    let denom = r.denom().abs();
    big_ln(&numer) - big_ln(&denom)
}

fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 63 {
        return x.to_f64().unwrap().ln();
    }
    let drop = bits - 63;
    let top = (x >> drop).to_f64().unwrap();
    top.ln() + drop as f64 * std::f64::consts::LN_2
}

/// `count` evenly spaced values covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "linspace needs at least two samples");
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Uniform phase grid on the circle: `count` angles in `[0, 2pi)`, offset by
/// half a step so that the real axis is not sampled exactly (real-coefficient
/// fibers are often tangent there).
pub fn phase_grid(count: usize) -> Vec<f64> {
    let step = std::f64::consts::TAU / count as f64;
    (0..count).map(|i| (i as f64 + 0.5) * step).collect()
}

/// Cartesian product of `k` copies of the phase grid, in lexicographic order.
/// `k = 0` yields a single empty combination.
pub fn phase_grid_nd(count: usize, k: usize) -> Vec<Vec<f64>> {
    let axis = phase_grid(count);
    let mut combos = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(combos.len() * axis.len());
        for combo in &combos {
            for &theta in &axis {
                let mut c = combo.clone();
                c.push(theta);
                next.push(c);
            }
        }
        combos = next;
    }
    combos
}
