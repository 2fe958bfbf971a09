//! The logarithmic Gauss map `z -> (z_1 Q'_1 : ... : z_n Q'_n)`, its
//! inversion through the critical-point system, and amoeba contours as
//! log-images of the real-direction preimages.
//!
//! Newton iterations run in logarithmic coordinates `xi = log z`, where the
//! system is polynomial in `e^xi` and well scaled; the Euler derivative
//! `z_k d/dz_k` is the natural differential there.

use num_complex::Complex64;

use crate::algebra::LaurentPolynomial;
use crate::error::{Error, Result};
use crate::numeric::solve_complex;

const MAX_NEWTON_ITERATIONS: usize = 60;
const NEWTON_TOL: f64 = 1e-12;

/// A point of complex projective space, normalized so the largest-modulus
/// coordinate is 1.
#[derive(Debug, Clone)]
pub struct ProjectiveDirection(Vec<Complex64>);

impl ProjectiveDirection {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        let max = coords.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return Err(Error::InvalidArgument(
                "projective direction cannot be zero".into(),
            ));
        }
        let pivot = coords.iter().find(|c| c.norm() == max).copied().unwrap();
        Ok(ProjectiveDirection(
            coords.iter().map(|c| c / pivot).collect(),
        ))
    }

    pub fn from_real(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    /// Projective distance: the largest normalized 2x2 minor between the
    /// two representatives; zero exactly for equal projective points.
    pub fn distance(&self, other: &ProjectiveDirection) -> f64 {
        let a = &self.0;
        let b = &other.0;
        let na = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let nb = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let minor = (a[i] * b[j] - a[j] * b[i]).norm();
                worst = worst.max(minor / (na * nb));
            }
        }
        worst
    }

    /// Whether the direction admits a real representative.
    pub fn is_real(&self, tol: f64) -> bool {
        self.0.iter().all(|c| c.im.abs() <= tol)
    }
}

/// Evaluates the logarithmic Gauss map at a regular point of the
/// hypersurface `Q = 0`.
pub fn log_gauss(q: &LaurentPolynomial, z: &[Complex64], tol: f64) -> Result<ProjectiveDirection> {
    if z.iter().any(|c| c.norm_sqr() == 0.0) {
        return Err(Error::InvalidArgument(
            "the Gauss map lives on the torus: zero coordinates excluded".into(),
        ));
    }
    let (value, euler_grad, _) = q.evaluate_with_euler(z)?;
    let scale = q.evaluation_scale(z).max(f64::MIN_POSITIVE);
    if value.norm() > tol * scale {
        return Err(Error::InvalidArgument(format!(
            "point is not on the hypersurface: |Q| = {:.3e} (scale {:.3e})",
            value.norm(),
            scale
        )));
    }
    let grad_scale: f64 = euler_grad.iter().map(|g| g.norm()).fold(0.0, f64::max);
    if grad_scale <= 1e-14 * scale {
        return Err(Error::SingularPoint);
    }
    ProjectiveDirection::new(euler_grad)
}

/// A solution of the critical-point system.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub z: Vec<Complex64>,
    /// Relative residual of the system at the solution.
    pub residual: f64,
    /// The Newton system was singular at the solution: the logarithmic
    /// Gauss map is not locally invertible there.
    pub degenerate_jacobian: bool,
}

struct NewtonStep {
    residual: Vec<Complex64>,
    jacobian: Vec<Vec<Complex64>>,
    scales: Vec<f64>,
}

/// Damped Newton on a square system in logarithmic coordinates.
fn damped_newton(
    seed: &[Complex64],
    eval: impl Fn(&[Complex64]) -> Result<NewtonStep>,
) -> Result<CriticalPoint> {
    if seed.iter().any(|c| c.norm_sqr() == 0.0) {
        return Err(Error::InvalidArgument("seed must lie on the torus".into()));
    }
    let mut xi: Vec<Complex64> = seed.iter().map(|c| c.ln()).collect();
    let z_of = |xi: &[Complex64]| -> Vec<Complex64> { xi.iter().map(|c| c.exp()).collect() };
    let rel = |step: &NewtonStep| -> f64 {
        let worst = step
            .residual
            .iter()
            .zip(&step.scales)
            .map(|(r, s)| r.norm() / (1.0 + s))
            .fold(0.0, f64::max);
        // Overflowed evaluations must never look converged.
        if worst.is_finite()
            && step
                .jacobian
                .iter()
                .all(|row| row.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
        {
            worst
        } else {
            f64::INFINITY
        }
    };
    let mut current = eval(&z_of(&xi))?;
    let mut best = rel(&current);
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if best <= NEWTON_TOL {
            break;
        }
        let rhs: Vec<Complex64> = current.residual.iter().map(|r| -r).collect();
        let delta = match solve_complex(current.jacobian.clone(), rhs) {
            Ok(d) => d,
            Err(_) => {
                return Err(Error::NoConvergence {
                    iterations: MAX_NEWTON_ITERATIONS,
                    residual: best,
                })
            }
        };
        let mut lambda = 1.0f64;
        let mut improved = false;
        for _ in 0..24 {
            let trial: Vec<Complex64> = xi
                .iter()
                .zip(&delta)
                .map(|(x, d)| x + d * lambda)
                .collect();
            if let Ok(step) = eval(&z_of(&trial)) {
                let r = rel(&step);
                if r < best {
                    xi = trial;
                    current = step;
                    best = r;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if best <= NEWTON_TOL {
        let degenerate = jacobian_is_degenerate(&current.jacobian);
        return Ok(CriticalPoint {
            z: z_of(&xi),
            residual: best,
            degenerate_jacobian: degenerate,
        });
    }
    Err(Error::NoConvergence {
        iterations: MAX_NEWTON_ITERATIONS,
        residual: best,
    })
}

fn jacobian_is_degenerate(j: &[Vec<Complex64>]) -> bool {
    let n = j.len();
    let mut a: Vec<Vec<Complex64>> = j.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    let mut scale = 1.0f64;
    for row in j {
        scale *= row
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &k| a[i][col].norm().total_cmp(&a[k][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return true;
        }
        a.swap(col, pivot);
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det.norm() <= 1e-10 * scale
}

/// Inverts the logarithmic Gauss map: finds `z` with `Q(z) = 0` and
/// `gamma(z)` projectively equal to the real direction `dir`, by damped
/// Newton from `seed`.
pub fn inverse_gauss(
    q: &LaurentPolynomial,
    dir: &[f64],
    seed: &[Complex64],
) -> Result<CriticalPoint> {
    let n = q.n();
    if dir.len() != n || seed.len() != n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    if dir.iter().all(|&d| d == 0.0) {
        return Err(Error::InvalidArgument("direction cannot be zero".into()));
    }
    // Pivot axis: the largest direction component, so the cross equations
    // are well scaled.
    let pivot = (0..n)
        .max_by(|&i, &j| dir[i].abs().partial_cmp(&dir[j].abs()).unwrap())
        .unwrap();
    damped_newton(seed, |z| {
        let (value, theta, hess) = q.evaluate_with_euler(z)?;
        let scale_q = q.evaluation_scale(z);
        let theta_scale: Vec<f64> = euler_scales(q, z);
        let mut residual = vec![value];
        let mut jacobian = vec![theta.clone()];
        let mut scales = vec![scale_q];
        for j in 0..n {
            if j == pivot {
                continue;
            }
            residual.push(theta[j] * dir[pivot] - theta[pivot] * dir[j]);
            jacobian.push(
                (0..n)
                    .map(|k| hess[j][k] * dir[pivot] - hess[pivot][k] * dir[j])
                    .collect(),
            );
            scales.push(theta_scale[j] * dir[pivot].abs() + theta_scale[pivot] * dir[j].abs());
        }
        Ok(NewtonStep {
            residual,
            jacobian,
            scales,
        })
    })
}

/// Magnitude scales of the Euler derivatives at `z`.
fn euler_scales(q: &LaurentPolynomial, z: &[Complex64]) -> Vec<f64> {
    let n = q.n();
    let mut scales = vec![0.0f64; n];
    for (e, c) in q.terms() {
        let mut magnitude = c.norm();
        for (zj, &a) in z.iter().zip(e.coords()) {
            if a != 0 {
                magnitude *= zj.norm().powi(a as i32);
            }
        }
        for j in 0..n {
            scales[j] += magnitude * (e.coords()[j].unsigned_abs() as f64);
        }
    }
    scales
}

/// Solves the graph relation `z_j f'_j / f = u_j` for all `j`: the critical
/// point of `Log` restricted to the graph `w = f(z)` over the direction
/// `(-u : 1)`, and the fundamental mean-energy relation when `f` is a
/// partition function.
pub fn graph_inverse_gauss(
    f: &LaurentPolynomial,
    u: &[f64],
    seed: &[Complex64],
) -> Result<CriticalPoint> {
    let n = f.n();
    if u.len() != n || seed.len() != n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let seed_value = f.evaluate(seed)?;
    if seed_value.norm_sqr() == 0.0 {
        return Err(Error::InvalidArgument("f vanishes at the seed".into()));
    }
    // Rows are the ratio form theta_j / f - u_j. On the positive real axis
    // this is the weighted-mean relation, monotone in log coordinates, so
    // the damped iteration converges globally there; the unscaled
    // polynomial form has spurious flat dips far from the solution.
    damped_newton(seed, |z| {
        let (value, theta, hess) = f.evaluate_with_euler(z)?;
        if value.norm_sqr() == 0.0 {
            return Err(Error::SingularPoint);
        }
        let residual: Vec<Complex64> = (0..n).map(|j| theta[j] / value - u[j]).collect();
        let jacobian: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| hess[j][k] / value - theta[j] * theta[k] / (value * value))
                    .collect()
            })
            .collect();
        let scale = f.evaluation_scale(z) / value.norm();
        let scales: Vec<f64> = (0..n).map(|j| scale + u[j].abs()).collect();
        Ok(NewtonStep {
            residual,
            jacobian,
            scales,
        })
    })
}

/// One verified point of the amoeba contour.
#[derive(Debug, Clone)]
pub struct ContourPoint {
    /// Log-image of the critical point.
    pub x: Vec<f64>,
    /// The critical point itself.
    pub z: Vec<Complex64>,
    /// The real normal direction it was found for.
    pub direction: Vec<f64>,
    /// Continuation branch label.
    pub branch: usize,
}

/// Sweeps the given real directions, continuing solutions from one
/// direction to the next and adding the fresh seeds each time. Directions
/// with no found solution contribute nothing; every returned point is
/// verified against the Gauss map. The map is generally many-to-one, so
/// several branches per direction are expected.
pub fn contour(
    q: &LaurentPolynomial,
    directions: &[Vec<f64>],
    fresh_seeds: &[Vec<Complex64>],
) -> Vec<ContourPoint> {
    let mut out = Vec::new();
    let mut carried: Vec<(usize, Vec<Complex64>)> = Vec::new();
    let mut next_branch = 0usize;
    for dir in directions {
        let mut found: Vec<Vec<Complex64>> = Vec::new();
        let seeds = carried
            .iter()
            .map(|(_, z)| z.clone())
            .chain(fresh_seeds.iter().cloned());
        for seed in seeds {
            let Ok(cp) = inverse_gauss(q, dir, &seed) else {
                continue;
            };
            let Ok(gamma) = log_gauss(q, &cp.z, 1e-6) else {
                continue;
            };
            let Ok(dir_proj) = ProjectiveDirection::from_real(dir) else {
                continue;
            };
            if gamma.distance(&dir_proj) > 1e-6 {
                continue;
            }
            let duplicate = found.iter().any(|w| {
                w.iter()
                    .zip(&cp.z)
                    .all(|(a, b)| (a - b).norm() <= 1e-8 * (1.0 + a.norm()))
            });
            if !duplicate {
                found.push(cp.z);
            }
        }
        // Stable branch labels: inherit from the nearest carried solution.
        let mut new_carried: Vec<(usize, Vec<Complex64>)> = Vec::new();
        let mut used: Vec<bool> = vec![false; carried.len()];
        for z in found {
            let mut best: Option<(usize, f64)> = None;
            for (ci, (_, prev)) in carried.iter().enumerate() {
                if used[ci] {
                    continue;
                }
                let d: f64 = prev
                    .iter()
                    .zip(&z)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((ci, d));
                }
            }
            let branch = match best {
                Some((ci, d)) if d <= 1.0 + carried[ci].1.iter().map(|c| c.norm()).sum::<f64>() => {
                    used[ci] = true;
                    carried[ci].0
                }
                _ => {
                    let b = next_branch;
                    next_branch += 1;
                    b
                }
            };
            let x: Vec<f64> = z.iter().map(|c| c.norm().ln()).collect();
            out.push(ContourPoint {
                x,
                z: z.clone(),
                direction: dir.clone(),
                branch,
            });
            new_carried.push((branch, z));
        }
        carried = new_carried;
    }
    out
}

/// Deterministic fresh seed set for contour sweeps: a few radii and phases
/// spread over the torus.
pub fn default_seeds(n: usize, count: usize) -> Vec<Vec<Complex64>> {
    let golden = 0.618_033_988_749_894_9_f64;
    (0..count)
        .map(|k| {
            (0..n)
                .map(|j| {
                    let t = golden * (1.0 + k as f64 + 3.0 * j as f64);
                    let radius = 0.35 + 1.7 * (t - t.floor());
                    let phase = std::f64::consts::TAU * ((t * 2.39).fract());
                    Complex64::from_polar(radius, phase)
                })
                .collect()
        })
        .collect()
}

/// Residual of the first-order criticality of the monomial `z^dir` on the
/// hypersurface at `z`: the largest normalized derivative of `z^dir` along
/// an orthonormal tangent basis of the hypersurface. Near zero exactly when
/// the Gauss map takes the value `dir` at `z`.
pub fn tangential_residual(q: &LaurentPolynomial, dir: &[f64], z: &[Complex64]) -> Result<f64> {
    let n = q.n();
    let (_, theta, _) = q.evaluate_with_euler(z)?;
    // Ordinary gradient of Q: theta_j / z_j.
    let grad: Vec<Complex64> = theta.iter().zip(z).map(|(t, zj)| t / zj).collect();
    let grad_norm: f64 = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    if grad_norm == 0.0 {
        return Err(Error::SingularPoint);
    }
    // Orthonormal tangent basis via Gram-Schmidt against the gradient
    // (Hermitian inner product: tangency means <t, conj grad> = 0).
    let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
    };
    let ghat: Vec<Complex64> = grad.iter().map(|g| (g / grad_norm).conj()).collect();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for axis in 0..n {
        if basis.len() == n - 1 {
            break;
        }
        let mut v: Vec<Complex64> = (0..n)
            .map(|j| {
                if j == axis {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let proj = inner(&v, &ghat);
        for j in 0..n {
            v[j] -= proj * ghat[j];
        }
        for b in &basis {
            let p = inner(&v, b);
            for j in 0..n {
                v[j] -= p * b[j];
            }
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for c in v.iter_mut() {
                *c /= norm;
            }
            basis.push(v);
        }
    }
    // d(z^dir) along tangent t, divided by z^dir: sum_j dir_j t_j / z_j.
    let dir_norm: f64 = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
    let mut worst = 0.0f64;
    for t in &basis {
        let deriv: Complex64 = (0..n).map(|j| t[j] / z[j] * dir[j]).sum();
        let scale: f64 = dir_norm
            * t.iter()
                .zip(z)
                .map(|(tj, zj)| (tj / zj).norm_sqr())
                .sum::<f64>()
                .sqrt();
        worst = worst.max(deriv.norm() / scale.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}
