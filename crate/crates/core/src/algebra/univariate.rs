//! Dense univariate complex polynomials and a simultaneous-iteration
//! (Aberth–Ehrlich) root solver with deterministic initialization.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;

/// Coefficients in ascending degree order; the leading coefficient is
/// nonzero unless the polynomial is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl UnivariateComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().map_or(false, |c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        UnivariateComplexPolynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and derivative in one Horner pass.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Backward-error scale of evaluation at `z`: the sum of term magnitudes.
    pub fn evaluation_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        let mut power = 1.0;
        for c in &self.coeffs {
            acc += c.norm() * power;
            power *= r;
        }
        acc.max(f64::MIN_POSITIVE)
    }

    /// All complex roots, with multiple roots appearing as clusters.
    ///
    /// Exact zero roots (vanishing low-order coefficients) are stripped
    /// first; the rest are found by Aberth–Ehrlich simultaneous iteration
    /// started on a circle whose radius is the Cauchy bound. The
    /// initialization is deterministic, so downstream point clouds are
    /// reproducible. Each returned root satisfies
    /// `|p(root)| <= tol * scale(p, root)`. The list is sorted by
    /// (re, im) for a stable output order.
    pub fn roots(&self, tol: f64) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "root extraction on the zero polynomial".into(),
            ));
        }
        if self.degree() < 1 {
            return Ok(Vec::new());
        }
        let zeros_at_origin = self
            .coeffs
            .iter()
            .take_while(|c| c.norm_sqr() == 0.0)
            .count();
        let reduced: Vec<Complex64> = self.coeffs[zeros_at_origin..].to_vec();
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];

        let degree = reduced.len() - 1;
        if degree == 0 {
            sort_roots(&mut roots);
            return Ok(roots);
        }
        if degree == 1 {
            roots.push(-reduced[0] / reduced[1]);
            sort_roots(&mut roots);
            return Ok(roots);
        }

        let p = UnivariateComplexPolynomial {
            coeffs: reduced.clone(),
        };
        let lead = reduced[degree].norm();
        let cauchy = 1.0
            + reduced[..degree]
                .iter()
                .map(|c| c.norm() / lead)
                .fold(0.0, f64::max);
        // Offset the start angles so no guess sits on a symmetry axis.
        let offset = 0.95 / degree as f64 + std::f64::consts::FRAC_PI_4 / degree as f64;
        let mut guesses: Vec<Complex64> = (0..degree)
            .map(|k| {
                let angle = std::f64::consts::TAU * k as f64 / degree as f64 + offset;
                Complex64::from_polar(cauchy, angle)
            })
            .collect();

        let mut best_residual = f64::INFINITY;
        for _ in 0..MAX_ITERATIONS {
            let mut moved = 0.0f64;
            for i in 0..degree {
                let zi = guesses[i];
                let (pv, dv) = p.evaluate_with_derivative(zi);
                if pv.norm_sqr() == 0.0 {
                    continue;
                }
                let ratio = if dv.norm_sqr() == 0.0 {
                    // Flat spot: nudge deterministically off the stationary point.
                    Complex64::new(1e-8 * (1.0 + zi.norm()), 1e-8)
                } else {
                    pv / dv
                };
                let mut coupling = Complex64::new(0.0, 0.0);
                for (j, &zj) in guesses.iter().enumerate() {
                    if j != i {
                        let diff = zi - zj;
                        if diff.norm_sqr() > 0.0 {
                            coupling += diff.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - ratio * coupling;
                let step = if denom.norm_sqr() == 0.0 {
                    ratio
                } else {
                    ratio / denom
                };
                guesses[i] = zi - step;
                moved = moved.max(step.norm() / (1.0 + guesses[i].norm()));
            }
            let residual = guesses
                .iter()
                .map(|&z| p.evaluate(z).norm() / p.evaluation_scale(z))
                .fold(0.0, f64::max);
            best_residual = best_residual.min(residual);
            if residual <= tol || moved < 1e-16 {
                // Polish with plain Newton; multiple roots stay as clusters.
                for g in guesses.iter_mut() {
                    for _ in 0..2 {
                        let (pv, dv) = p.evaluate_with_derivative(*g);
                        if dv.norm_sqr() > 0.0 {
                            let next = *g - pv / dv;
                            if p.evaluate(next).norm() <= pv.norm() {
                                *g = next;
                            }
                        }
                    }
                }
                let final_residual = guesses
                    .iter()
                    .map(|&z| p.evaluate(z).norm() / p.evaluation_scale(z))
                    .fold(0.0, f64::max);
                if final_residual <= tol {
                    roots.extend(guesses);
                    sort_roots(&mut roots);
                    return Ok(roots);
                }
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_ITERATIONS,
            residual: best_residual,
        })
    }
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_golden_roots() {
        // z^2 - 3z + 1: roots (3 +- sqrt 5)/2.
        let p = UnivariateComplexPolynomial::from_real(&[1.0, -3.0, 1.0]);
        let roots = p.roots(1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - Complex64::new(0.38196601125010515, 0.0)).norm() < 1e-10);
        assert!((roots[1] - Complex64::new(2.618033988749895, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn linear_root() {
        let p = UnivariateComplexPolynomial::from_real(&[-1.0, 1.0]);
        let roots = p.roots(1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cubic_with_imaginary_pair() {
        // 1 + z + z^2 + z^3 = (z + 1)(z^2 + 1): roots -1, +-i.
        let p = UnivariateComplexPolynomial::from_real(&[1.0, 1.0, 1.0, 1.0]);
        let roots = p.roots(1e-12).unwrap();
        assert_eq!(roots.len(), 3);
        for expected in [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
        ] {
            assert!(roots.iter().any(|r| (r - expected).norm() < 1e-9));
        }
    }

    #[test]
    fn strips_zero_roots() {
        // z^2 (z - 2)
        let p = UnivariateComplexPolynomial::from_real(&[0.0, 0.0, -2.0, 1.0]);
        let roots = p.roots(1e-12).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[0], Complex64::new(0.0, 0.0));
        assert_eq!(roots[1], Complex64::new(0.0, 0.0));
        assert!((roots[2] - Complex64::new(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn residuals_meet_tolerance_on_random_like_family() {
        // A fixed family with spread-out magnitudes.
        let p = UnivariateComplexPolynomial::from_real(&[12.0, -7.5, 0.25, 3.0, -1.0, 0.125]);
        let tol = 1e-11;
        let roots = p.roots(tol).unwrap();
        assert_eq!(roots.len(), 5);
        for r in roots {
            assert!(p.evaluate(r).norm() <= tol * p.evaluation_scale(r));
        }
    }

    #[test]
    fn roots_of_unity_high_degree() {
        // z^12 - 1: all roots on the unit circle.
        let mut coeffs = vec![0.0; 13];
        coeffs[0] = -1.0;
        coeffs[12] = 1.0;
        let p = UnivariateComplexPolynomial::from_real(&coeffs);
        let roots = p.roots(1e-11).unwrap();
        assert_eq!(roots.len(), 12);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        let p = UnivariateComplexPolynomial::from_real(&[0.0]);
        assert!(p.roots(1e-12).is_err());
    }
}
