//! Tangent-line geometry of the graph amoeba of an analytically continued
//! scalar partition function `Z = A(z)/B(z)`.
//!
//! Along a real branch, the boundary of the graph amoeba is parametrized by
//! `(log|z|, log|Z(z)|)`; its tangent line is `x2 = u x1 + s` with slope
//! `u(z) = z Z'(z)/Z(z)` (the mean-energy relation) and intercept
//! `s(z) = log|Z| - u log|z|` (the entropy). Different branches of the same
//! rational function describe twin spectra; a common tangent marks a mean
//! energy at which the two developments carry equal entropy.

use crate::error::{Error, Result};

/// A real rational function, numerator and denominator in ascending
/// coefficient order.
#[derive(Debug, Clone)]
pub struct RationalPartition {
    num: Vec<f64>,
    den: Vec<f64>,
}

fn eval(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

fn eval_derivative(coeffs: &[f64], z: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * z + k as f64 * c)
}

impl RationalPartition {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Self {
        RationalPartition { num, den }
    }

    pub fn value(&self, z: f64) -> f64 {
        eval(&self.num, z) / eval(&self.den, z)
    }

    /// The tangent slope `u(z) = z Z'/Z`, i.e. the mean energy carried by
    /// the branch point.
    pub fn mean_energy(&self, z: f64) -> f64 {
        let a = eval(&self.num, z);
        let b = eval(&self.den, z);
        let da = eval_derivative(&self.num, z);
        let db = eval_derivative(&self.den, z);
        z * (da * b - a * db) / (a * b)
    }

    /// The tangent intercept `s(z) = log|Z(z)| - u(z) log z`: the entropy
    /// attached to the branch point.
    pub fn entropy_intercept(&self, z: f64) -> f64 {
        self.value(z).abs().ln() - self.mean_energy(z) * z.ln()
    }

    /// Solves `mean_energy(z) = u` on a branch where the mean is monotone,
    /// by bisection over `(lo, hi)`.
    pub fn solve_mean(&self, u: f64, lo: f64, hi: f64) -> Result<f64> {
        let f = |z: f64| self.mean_energy(z) - u;
        let (mut a, mut b) = (lo, hi);
        let (fa, fb) = (f(a), f(b));
        if !fa.is_finite() || !fb.is_finite() || fa * fb > 0.0 {
            return Err(Error::InvalidArgument(format!(
                "mean energy {u} is not bracketed on ({lo}, {hi})"
            )));
        }
        let increasing = fa < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let fm = f(mid);
            if !fm.is_finite() {
                return Err(Error::NoConvergence {
                    iterations: 200,
                    residual: f64::NAN,
                });
            }
            if (fm < 0.0) == increasing {
                a = mid;
            } else {
                b = mid;
            }
            if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
                break;
            }
        }
        Ok(0.5 * (a + b))
    }
}

/// Finds the common tangent of two real branches: the mean energy `u0` at
/// which the tangent lines of branch A and branch B coincide, together with
/// the shared intercept. Each branch is given as a bisection bracket for
/// `solve_mean`; the search bisects the intercept difference over
/// `(u_lo, u_hi)`.
pub fn common_tangent(
    partition: &RationalPartition,
    branch_a: (f64, f64),
    branch_b: (f64, f64),
    u_lo: f64,
    u_hi: f64,
) -> Result<(f64, f64)> {
    let gap = |u: f64| -> Result<f64> {
        let za = partition.solve_mean(u, branch_a.0, branch_a.1)?;
        let zb = partition.solve_mean(u, branch_b.0, branch_b.1)?;
        Ok(partition.entropy_intercept(za) - partition.entropy_intercept(zb))
    };
    let (mut a, mut b) = (u_lo, u_hi);
    let (ga, gb) = (gap(a)?, gap(b)?);
    if ga * gb > 0.0 {
        return Err(Error::InvalidArgument(
            "intercept difference does not change sign on the given range".into(),
        ));
    }
    let rising = ga < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let gm = gap(mid)?;
        if (gm < 0.0) == rising {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() <= 1e-12 {
            break;
        }
    }
    let u0 = 0.5 * (a + b);
    let z0 = partition.solve_mean(u0, branch_a.0, branch_a.1)?;
    Ok((u0, partition.entropy_intercept(z0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z = 1 + z^2/(1-z) = (1 - z + z^2)/(1 - z): the continued partition
    /// function of the spectrum {0, 2, 3, 4, ...}.
    fn gapped() -> RationalPartition {
        RationalPartition::new(vec![1.0, -1.0, 1.0], vec![1.0, -1.0])
    }

    #[test]
    fn values_and_means() {
        let z = gapped();
        assert!((z.value(0.5) - 1.5).abs() < 1e-12);
        assert!((z.value(2.0) - (-3.0)).abs() < 1e-12);
        // Mean energy vanishes at z -> 0 like 2 z^2.
        assert!(z.mean_energy(1e-6).abs() < 1e-10);
    }

    #[test]
    fn inner_branch_solve() {
        let z = gapped();
        // At u = 1/2 the inner solution is the golden-ratio point
        // (3 - sqrt 5)/2.
        let inner = z.solve_mean(0.5, 1e-9, 1.0 - 1e-12).unwrap();
        assert!((inner - 0.3819660112501051).abs() < 1e-10, "inner {inner}");
        let outer = z.solve_mean(0.5, 1.0 + 1e-9, 1e9).unwrap();
        assert!((outer - 2.618033988749895).abs() < 1e-9, "outer {outer}");
    }

    #[test]
    fn common_tangent_at_one_half() {
        let z = gapped();
        let (u0, intercept) = common_tangent(
            &z,
            (1e-9, 1.0 - 1e-12),
            (1.0 + 1e-9, 1e9),
            0.05,
            0.95,
        )
        .unwrap();
        assert!((u0 - 0.5).abs() <= 1e-9, "u0 = {u0}");
        // Both tangent intercepts equal log 2 there.
        assert!((intercept - 2.0f64.ln()).abs() <= 1e-8, "intercept {intercept}");
    }
}
