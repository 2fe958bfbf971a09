//! The multidimensional Darwin-Fowler engine: partition functions over
//! vector spectra, the fundamental mean-energy and occupation relations,
//! entropy and temperature, exact finite-ensemble statistics, and the
//! admissibility of mean energies.
//!
//! The mean-energy system `z_j Z'_j / Z = u_j` is solved by minimizing the
//! convex function `log Z(e^x) - <u, x>`: its gradient is exactly the
//! weighted-mean relation, strict convexity (for a spectrum that affinely
//! spans) gives the unique positive solution, and the minimum value is the
//! per-system entropy. Admissibility is decided exactly: the solvable mean
//! energies are the interior of the convex hull of the spectrum.

mod exact;
mod tangent;

pub use exact::{enumerate_states, exact_stats, ExactStats, MAX_ENUMERATION_SYSTEMS};
pub use tangent::{common_tangent, RationalPartition};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{ExponentVector, LaurentPolynomial};
use crate::error::{Error, Result};
use crate::numeric::{f64_to_rational, rational_to_f64, solve_real};
use crate::polytope::{self, generates_lattice, Polyhedron};

const GRADIENT_TOL: f64 = 1e-10;
const ESCAPE_RADIUS: f64 = 50.0;
const MAX_SOLVER_ITERATIONS: usize = 500;

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    n: usize,
    shift: Vec<String>,
    points: Vec<Vec<i64>>,
    recession: Vec<Vec<i64>>,
}

/// A finite energy spectrum (with optional recession rays describing the
/// untruncated tail), stored as a rational shift plus an integer part that
/// contains the zero vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SpectrumRepr", try_from = "SpectrumRepr")]
pub struct Spectrum {
    n: usize,
    shift: Vec<BigRational>,
    /// Integer energies, sorted lexicographically; the first is zero.
    points: Vec<Vec<i64>>,
    recession: Vec<Vec<i64>>,
    generates: bool,
}

impl From<Spectrum> for SpectrumRepr {
    fn from(s: Spectrum) -> Self {
        SpectrumRepr {
            n: s.n,
            shift: s.shift.iter().map(|c| c.to_string()).collect(),
            points: s.points,
            recession: s.recession,
        }
    }
}

impl TryFrom<SpectrumRepr> for Spectrum {
    type Error = Error;

    fn try_from(repr: SpectrumRepr) -> Result<Self> {
        let shift: Vec<BigRational> = repr
            .shift
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<_>>()?;
        if shift.len() != repr.n {
            return Err(Error::InvalidArgument("shift dimension mismatch".into()));
        }
        let points: Vec<Vec<BigRational>> = repr
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&shift)
                    .map(|(&c, s)| BigRational::from_integer(BigInt::from(c)) + s)
                    .collect()
            })
            .collect();
        Spectrum::new(points, repr.recession)
    }
}

/// Parses "p/q", integer, or plain decimal strings into exact rationals.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = |m: &str| Error::InvalidArgument(format!("cannot parse rational '{t}': {m}"));
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad("numerator"))?;
        let d: BigInt = den.trim().parse().map_err(|_| bad("denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let ip: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad("integer part"))?
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad("fraction part"));
        }
        let fp: BigInt = frac.parse().map_err(|_| bad("fraction part"))?;
        let denom = BigInt::from(10u8).pow(frac.len() as u32);
        return Ok(BigRational::from_integer(ip)
            + BigRational::new(fp * sign, denom));
    }
    let n: BigInt = t.parse().map_err(|_| bad("integer"))?;
    Ok(BigRational::from_integer(n))
}

impl Spectrum {
    /// Builds a spectrum from rational energy vectors. The lexicographically
    /// smallest point becomes the recorded shift; all differences from it
    /// must be integral.
    pub fn new(points: Vec<Vec<BigRational>>, recession: Vec<Vec<i64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        };
        let n = first.len();
        if n == 0 || points.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidSpectrum("inconsistent dimensions".into()));
        }
        let shift = points.iter().min().unwrap().clone();
        let mut integer_points = Vec::with_capacity(points.len());
        for p in &points {
            let mut ip = Vec::with_capacity(n);
            for (c, s) in p.iter().zip(&shift) {
                let d = c - s;
                if !d.denom().is_one() {
                    return Err(Error::InvalidSpectrum(
                        "energy differences must be integral".into(),
                    ));
                }
                ip.push(d.numer().to_i64().ok_or_else(|| {
                    Error::InvalidSpectrum("energy difference exceeds i64".into())
                })?);
            }
            integer_points.push(ip);
        }
        integer_points.sort();
        let before = integer_points.len();
        integer_points.dedup();
        if integer_points.len() != before {
            return Err(Error::InvalidSpectrum("points must be pairwise distinct".into()));
        }
        if recession.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpectrum("recession dimension mismatch".into()));
        }
        let generates = generates_lattice(&integer_points);
        Ok(Spectrum {
            n,
            shift,
            points: integer_points,
            recession,
            generates,
        })
    }

    /// Spectrum with integer energies and zero shift.
    pub fn from_integer(points: Vec<Vec<i64>>, recession: Vec<Vec<i64>>) -> Result<Self> {
        let rational = points
            .iter()
            .map(|p| p.iter().map(|&c| BigRational::from_integer(c.into())).collect())
            .collect();
        let mut s = Self::new(rational, recession)?;
        // Keep the caller's origin: undo the lex-min normalization so the
        // integer points are exactly as given.
        if !s.shift.iter().all(|c| c.is_zero()) {
            let offset: Vec<i64> = s
                .shift
                .iter()
                .map(|c| c.numer().to_i64().unwrap())
                .collect();
            for p in s.points.iter_mut() {
                for (v, o) in p.iter_mut().zip(&offset) {
                    *v += o;
                }
            }
            s.shift = vec![BigRational::zero(); s.n];
        }
        Ok(s)
    }

    /// Scalar spectrum from a list of energies.
    pub fn scalar(points: &[i64]) -> Result<Self> {
        Self::from_integer(points.iter().map(|&p| vec![p]).collect(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> &[BigRational] {
        &self.shift
    }

    /// The integer part of the spectrum, sorted; energies are
    /// `shift + point`.
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn recession(&self) -> &[Vec<i64>] {
        &self.recession
    }

    /// Whether the differences of the spectrum generate the full lattice.
    pub fn generates_lattice(&self) -> bool {
        self.generates
    }

    /// The partition function of the integer part: unit coefficients on the
    /// spectrum exponents. The rational shift is a recorded monomial
    /// prefactor, not stored here.
    pub fn partition_function(&self) -> LaurentPolynomial {
        let mut z = LaurentPolynomial::new(self.n);
        for p in &self.points {
            z.add_term(ExponentVector::new(p.clone()), Complex64::new(1.0, 0.0));
        }
        z
    }

    /// Convex hull of the full (shifted) spectrum with its recession rays.
    pub fn hull(&self) -> Result<Polyhedron> {
        let pts: Vec<polytope::RationalPoint> = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&self.shift)
                    .map(|(&c, s)| BigRational::from_integer(BigInt::from(c)) + s)
                    .collect()
            })
            .collect();
        let rays: Vec<polytope::RationalPoint> = self
            .recession
            .iter()
            .map(|r| polytope::rational_point(r))
            .collect();
        polytope::hull_with_recession(&pts, &rays)
    }

    /// Exact admissibility of a mean energy: `u` must lie strictly inside
    /// the convex hull of the spectrum.
    pub fn admissible(&self, u: &[BigRational]) -> Result<bool> {
        if u.len() != self.n {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        Ok(self.hull()?.contains_interior(u))
    }

    /// Whether the integer points affinely span `R^n` (required for strict
    /// convexity of the solver objective).
    fn affinely_spans(&self) -> bool {
        crate::polytope::affine_rank(&self.points) == self.n
    }
}

/// The solved thermodynamic state at a mean energy `u`.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSolution {
    /// The requested mean energy (full, including the shift).
    pub u: Vec<f64>,
    /// The positive solution of the mean-energy system.
    pub z: Vec<f64>,
    /// `mu = -log z`, the Lagrange multipliers.
    pub mu: Vec<f64>,
    /// Temperature vector `T_j = -1 / log z_j`; infinite where `z_j = 1`.
    pub temperature: Vec<f64>,
    /// Per-system entropy `log Z - <u, log z>`.
    pub entropy: f64,
    /// Gradient norm at exit.
    pub grad_norm: f64,
}

fn log_weights(points: &[Vec<i64>], x: &[f64]) -> (f64, Vec<f64>) {
    let dots: Vec<f64> = points
        .iter()
        .map(|p| p.iter().zip(x).map(|(&m, &xi)| m as f64 * xi).sum())
        .collect();
    let max = dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = dots.iter().map(|d| (d - max).exp()).sum();
    let log_z = max + sum.ln();
    let weights = dots.iter().map(|d| (d - max).exp() / sum).collect();
    (log_z, weights)
}

/// Solves the mean-energy system for `u` strictly inside the hull, by
/// Newton descent on the convex objective `log Z(e^x) - <u, x>` starting
/// from `start` (the origin by default).
///
/// Points outside the closed hull are rejected exactly before any
/// iteration; on the boundary the minimising sequence escapes to infinity,
/// which is detected at `|x| > 50` and reported as a boundary divergence.
pub fn solve_mean_energy_from(
    spectrum: &Spectrum,
    u: &[f64],
    start: &[f64],
) -> Result<EnsembleSolution> {
    let n = spectrum.n();
    if u.len() != n || start.len() != n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    if !spectrum.affinely_spans() {
        return Err(Error::InvalidSpectrum(
            "spectrum does not affinely span; the objective is not strictly convex".into(),
        ));
    }
    // Exact admissibility gate on the closed hull. For a boundary point
    // the objective has no finite minimizer: the gradient still decays
    // along the escaping iterates, so gradient convergence is only
    // accepted for exactly-interior targets and the boundary case is left
    // to demonstrate its escape.
    let u_exact: Vec<BigRational> = u.iter().map(|&v| f64_to_rational(v)).collect::<Result<_>>()?;
    let hull = spectrum.hull()?;
    if !hull.contains(&u_exact) {
        return Err(Error::Inadmissible);
    }
    let interior = hull.contains_interior(&u_exact);
    let shift_f: Vec<f64> = spectrum.shift.iter().map(rational_to_f64).collect();
    let u_int: Vec<f64> = u.iter().zip(&shift_f).map(|(a, s)| a - s).collect();

    let points = &spectrum.points;
    let objective = |x: &[f64]| -> f64 {
        let (log_z, _) = log_weights(points, x);
        log_z - u_int.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    };

    let mut x = start.to_vec();
    let mut value = objective(&x);
    for _ in 0..MAX_SOLVER_ITERATIONS {
        let (_, weights) = log_weights(points, &x);
        let mean: Vec<f64> = (0..n)
            .map(|j| {
                points
                    .iter()
                    .zip(&weights)
                    .map(|(p, w)| p[j] as f64 * w)
                    .sum()
            })
            .collect();
        // Weighted-deviation form: avoids the catastrophic cancellation of
        // mean - u when the weights concentrate on one spectrum point.
        let grad: Vec<f64> = (0..n)
            .map(|j| {
                points
                    .iter()
                    .zip(&weights)
                    .map(|(p, w)| w * (p[j] as f64 - u_int[j]))
                    .sum()
            })
            .collect();
        let grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if interior && grad_norm <= GRADIENT_TOL {
            return Ok(assemble_solution(spectrum, u, &x, grad_norm));
        }
        // Covariance Hessian of the log-partition function.
        let mut hess = vec![vec![0.0f64; n]; n];
        for (p, w) in points.iter().zip(&weights) {
            for j in 0..n {
                for k in 0..n {
                    hess[j][k] += w * (p[j] as f64 - mean[j]) * (p[k] as f64 - mean[k]);
                }
            }
        }
        let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
        let direction = match solve_real(hess, neg_grad.clone()) {
            Ok(d) => d,
            Err(_) => neg_grad,
        };
        let slope: f64 = grad.iter().zip(&direction).map(|(g, d)| g * d).sum();
        let direction = if slope < 0.0 {
            direction
        } else {
            grad.iter().map(|g| -g).collect()
        };
        let slope: f64 = grad.iter().zip(&direction).map(|(g, d)| g * d).sum();
        // A boundary target has no finite minimizer: the objective decays
        // to its infimum along escaping iterates and eventually rounds
        // flat, so acceptance there tolerates rounding-scale ties; the
        // escape radius below is the real verdict. Interior targets use
        // the strict Armijo test.
        let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let noise = if interior {
            0.0
        } else {
            32.0 * f64::EPSILON * (1.0 + x_norm + value.abs())
        };
        let mut lambda = 1.0f64;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = x
                .iter()
                .zip(&direction)
                .map(|(xi, di)| xi + lambda * di)
                .collect();
            let tv = objective(&trial);
            let moved = trial.iter().zip(&x).any(|(a, b)| a != b);
            if moved && tv <= value + 1e-4 * lambda * slope + noise {
                x = trial;
                value = tv;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted && interior {
            // Near the minimum the objective decrease drops below f64
            // resolution and the Armijo test goes blind; the full Newton
            // step still contracts the gradient quadratically, so accept it
            // on gradient decrease instead.
            let trial: Vec<f64> = x.iter().zip(&direction).map(|(xi, di)| xi + di).collect();
            let (_, tw) = log_weights(points, &trial);
            let tg: f64 = (0..n)
                .map(|j| {
                    points
                        .iter()
                        .zip(&tw)
                        .map(|(p, w)| w * (p[j] as f64 - u_int[j]))
                        .sum::<f64>()
                        .powi(2)
                })
                .sum::<f64>()
                .sqrt();
            if tg < grad_norm {
                value = objective(&trial);
                x = trial;
                accepted = true;
            }
        }
        if !accepted {
            // Line search exhausted: either converged to rounding or stuck.
            if interior && grad_norm <= GRADIENT_TOL * 10.0 {
                return Ok(assemble_solution(spectrum, u, &x, grad_norm));
            }
            return Err(Error::NoConvergence {
                iterations: MAX_SOLVER_ITERATIONS,
                residual: grad_norm,
            });
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > ESCAPE_RADIUS {
            return Err(Error::BoundaryDivergence { norm });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_SOLVER_ITERATIONS,
        residual: f64::NAN,
    })
}

/// [`solve_mean_energy_from`] started at the origin.
pub fn solve_mean_energy(spectrum: &Spectrum, u: &[f64]) -> Result<EnsembleSolution> {
    solve_mean_energy_from(spectrum, u, &vec![0.0; spectrum.n()])
}

fn assemble_solution(
    spectrum: &Spectrum,
    u: &[f64],
    x: &[f64],
    grad_norm: f64,
) -> EnsembleSolution {
    let (log_z, _) = log_weights(&spectrum.points, x);
    let shift_f: Vec<f64> = spectrum.shift.iter().map(rational_to_f64).collect();
    let u_int: Vec<f64> = u.iter().zip(&shift_f).map(|(a, s)| a - s).collect();
    let entropy = log_z - u_int.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    EnsembleSolution {
        u: u.to_vec(),
        z: x.iter().map(|&v| v.exp()).collect(),
        mu: x.iter().map(|&v| -v).collect(),
        temperature: x
            .iter()
            .map(|&v| if v == 0.0 { f64::INFINITY } else { -1.0 / v })
            .collect(),
        entropy,
        grad_norm,
    }
}

/// Most-probable occupation numbers for `N` systems:
/// `a_k = N z^{eps_k} / Z(z)`.
pub fn occupations(spectrum: &Spectrum, solution: &EnsembleSolution, n_systems: u64) -> Vec<f64> {
    let x: Vec<f64> = solution.mu.iter().map(|&m| -m).collect();
    let (_, weights) = log_weights(&spectrum.points, &x);
    weights.iter().map(|w| w * n_systems as f64).collect()
}

/// Compares the finite-difference gradient of the entropy against
/// `mu = -log z` and returns the largest deviation over the axes.
pub fn entropy_gradient_check(spectrum: &Spectrum, u: &[f64], h: f64) -> Result<f64> {
    let center = solve_mean_energy(spectrum, u)?;
    let mut worst = 0.0f64;
    for j in 0..spectrum.n() {
        let mut up = u.to_vec();
        up[j] += h;
        let mut dn = u.to_vec();
        dn[j] -= h;
        let s_up = solve_mean_energy(spectrum, &up)?.entropy;
        let s_dn = solve_mean_energy(spectrum, &dn)?.entropy;
        let fd = (s_up - s_dn) / (2.0 * h);
        worst = worst.max((fd - center.mu[j]).abs());
    }
    Ok(worst)
}

/// One row of an exact-vs-asymptotic occupation comparison.
#[derive(Debug, Clone)]
pub struct OccupationComparison {
    pub n_systems: u64,
    pub k: usize,
    pub exact: BigRational,
    pub asymptotic: f64,
    pub relative_error: f64,
}

/// Compares exact average occupation numbers with their thermodynamic-limit
/// form `N z^{eps_k}/Z(z(u))` for each ensemble size in `n_list`.
/// Requires a lattice-generating spectrum, an interior rational `u`, and
/// integral `N * u`.
pub fn compare_average_occupations(
    spectrum: &Spectrum,
    u: &[BigRational],
    n_list: &[u64],
) -> Result<Vec<OccupationComparison>> {
    if !spectrum.generates_lattice() {
        return Err(Error::InvalidSpectrum(
            "spectrum differences do not generate the full lattice".into(),
        ));
    }
    if !spectrum.admissible(u)? {
        return Err(Error::Inadmissible);
    }
    let u_f: Vec<f64> = u.iter().map(rational_to_f64).collect();
    let solution = solve_mean_energy(spectrum, &u_f)?;
    let per_system = occupations(spectrum, &solution, 1);

    let u_int: Vec<BigRational> = u
        .iter()
        .zip(spectrum.shift())
        .map(|(a, s)| a - s)
        .collect();
    let mut rows = Vec::new();
    for &n_systems in n_list {
        let energy: Vec<i64> = u_int
            .iter()
            .map(|ui| {
                let e = ui * BigRational::from_integer(BigInt::from(n_systems));
                if e.denom().is_one() {
                    e.numer().to_i64().ok_or_else(|| {
                        Error::InvalidArgument("energy exceeds i64".into())
                    })
                } else {
                    Err(Error::InvalidArgument(format!(
                        "N * u must be integral (N = {n_systems})"
                    )))
                }
            })
            .collect::<Result<_>>()?;
        let stats = exact_stats(spectrum, n_systems, &energy)?;
        for (k, exact) in stats.averages.iter().enumerate() {
            let asymptotic = per_system[k] * n_systems as f64;
            let exact_f = rational_to_f64(exact);
            let relative_error = (exact_f - asymptotic).abs() / asymptotic.abs().max(1e-300);
            rows.push(OccupationComparison {
                n_systems,
                k,
                exact: exact.clone(),
                asymptotic,
                relative_error,
            });
        }
    }
    Ok(rows)
}
