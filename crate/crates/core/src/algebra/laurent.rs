//! Sparse Laurent polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::univariate::UnivariateComplexPolynomial;

/// An integer exponent vector of fixed length (the ambient dimension).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn new(coords: Vec<i64>) -> Self {
        ExponentVector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Real inner product with a float vector.
    pub fn dot_f64(&self, s: &[f64]) -> f64 {
        self.0.iter().zip(s).map(|(&a, &b)| a as f64 * b).sum()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

/// A Laurent polynomial: a finite map from exponent vectors to nonzero
/// complex coefficients. Supports negative exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolyRepr", try_from = "PolyRepr")]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<ExponentVector, Complex64>,
}

impl From<LaurentPolynomial> for PolyRepr {
    fn from(p: LaurentPolynomial) -> Self {
        PolyRepr {
            n: p.n,
            terms: p
                .terms
                .into_iter()
                .map(|(e, c)| TermRepr {
                    exp: e.0,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyRepr> for LaurentPolynomial {
    type Error = Error;

    fn try_from(repr: PolyRepr) -> Result<Self> {
        let mut p = LaurentPolynomial::new(repr.n);
        for t in repr.terms {
            if t.exp.len() != repr.n {
                return Err(Error::InvalidArgument(format!(
                    "exponent {:?} has length {} but n = {}",
                    t.exp,
                    t.exp.len(),
                    repr.n
                )));
            }
            p.add_term(ExponentVector(t.exp), Complex64::new(t.re, t.im));
        }
        Ok(p)
    }
}

impl LaurentPolynomial {
    /// The zero polynomial in `n` variables.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "ambient dimension must be at least 1");
        LaurentPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from real coefficients, dropping zeros.
    pub fn from_real_terms(n: usize, terms: &[(&[i64], f64)]) -> Self {
        let mut p = LaurentPolynomial::new(n);
        for (exp, c) in terms {
            assert_eq!(exp.len(), n, "exponent length mismatch");
            p.add_term(ExponentVector(exp.to_vec()), Complex64::new(*c, 0.0));
        }
        p
    }

    /// Adds `coeff * z^exp`, removing the entry if the sum cancels.
    pub fn add_term(&mut self, exp: ExponentVector, coeff: Complex64) {
        assert_eq!(exp.dim(), self.n, "exponent length mismatch");
        let entry = self.terms.entry(exp.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        if entry.norm_sqr() == 0.0 {
            self.terms.remove(&exp);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The exponent support as a list of integer points.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Exponent spread (max minus min) along one axis; 0 for the zero
    /// polynomial.
    pub fn degree_spread(&self, axis: usize) -> i64 {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for e in self.terms.keys() {
            lo = lo.min(e.0[axis]);
            hi = hi.max(e.0[axis]);
        }
        if lo > hi {
            0
        } else {
            hi - lo
        }
    }

    fn monomial_value(&self, exp: &ExponentVector, z: &[Complex64]) -> Result<Complex64> {
        let mut v = Complex64::new(1.0, 0.0);
        for (axis, &a) in exp.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if z[axis].norm_sqr() == 0.0 {
                if a < 0 {
                    return Err(Error::ZeroCoordinate { axis });
                }
                return Ok(Complex64::new(0.0, 0.0));
            }
            v *= z[axis].powi(a as i32);
        }
        Ok(v)
    }

    /// Evaluates the polynomial at `z`.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        assert_eq!(z.len(), self.n, "point dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, coeff) in &self.terms {
            acc += coeff * self.monomial_value(exp, z)?;
        }
        Ok(acc)
    }

    /// Sum of term magnitudes at `z`; the natural scale for residual checks.
    pub fn evaluation_scale(&self, z: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(exp, coeff)| {
                self.monomial_value(exp, z)
                    .map(|m| (coeff * m).norm())
                    .unwrap_or(f64::INFINITY)
            })
            .sum()
    }

    /// Term-wise partial derivative in the given axis.
    pub fn partial(&self, axis: usize) -> LaurentPolynomial {
        assert!(axis < self.n);
        let mut out = LaurentPolynomial::new(self.n);
        for (exp, coeff) in &self.terms {
            let a = exp.0[axis];
            if a == 0 {
                continue;
            }
            let mut e = exp.clone();
            e.0[axis] -= 1;
            out.add_term(e, coeff * a as f64);
        }
        out
    }

    /// The Euler derivative `z_axis * d/dz_axis`; exponents are unchanged,
    /// each coefficient picks up the factor `alpha_axis`.
    pub fn euler_derivative(&self, axis: usize) -> LaurentPolynomial {
        assert!(axis < self.n);
        let mut out = LaurentPolynomial::new(self.n);
        for (exp, coeff) in &self.terms {
            let a = exp.0[axis];
            if a == 0 {
                continue;
            }
            out.add_term(exp.clone(), coeff * a as f64);
        }
        out
    }

    /// Evaluates in one pass the value, the Euler gradient
    /// `g_j = sum alpha_j a z^alpha`, and the Euler Hessian
    /// `h_jk = sum alpha_j alpha_k a z^alpha`.
    pub fn evaluate_with_euler(
        &self,
        z: &[Complex64],
    ) -> Result<(Complex64, Vec<Complex64>, Vec<Vec<Complex64>>)> {
        let n = self.n;
        let mut value = Complex64::new(0.0, 0.0);
        let mut grad = vec![Complex64::new(0.0, 0.0); n];
        let mut hess = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (exp, coeff) in &self.terms {
            let term = coeff * self.monomial_value(exp, z)?;
            value += term;
            for j in 0..n {
                let aj = exp.0[j] as f64;
                if aj == 0.0 {
                    continue;
                }
                grad[j] += term * aj;
                for k in 0..n {
                    let ak = exp.0[k] as f64;
                    if ak != 0.0 {
                        hess[j][k] += term * (aj * ak);
                    }
                }
            }
        }
        Ok((value, grad, hess))
    }

    /// Restricts to a one-variable fiber: every coordinate except `axis` is
    /// fixed to the corresponding entry of `w` (length `n - 1`, original
    /// order). Negative powers of the fiber variable are cleared by
    /// multiplying with `z_axis^m`; `m` is recorded so that root counts can
    /// discard the artificial zero root.
    pub fn fiber(&self, axis: usize, w: &[Complex64]) -> Result<FiberPolynomial> {
        assert!(axis < self.n);
        assert_eq!(w.len(), self.n - 1, "fiber point dimension mismatch");
        if self.is_zero() {
            return Err(Error::DegenerateFiber { axis });
        }
        let min_exp = self.terms.keys().map(|e| e.0[axis]).min().unwrap();
        let cleared = (-min_exp).max(0) as usize;
        let max_exp = self.terms.keys().map(|e| e.0[axis]).max().unwrap();
        let degree = (max_exp + cleared as i64) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (exp, coeff) in &self.terms {
            let mut c = *coeff;
            let mut wi = 0;
            for (j, &a) in exp.0.iter().enumerate() {
                if j == axis {
                    continue;
                }
                if a != 0 {
                    if w[wi].norm_sqr() == 0.0 {
                        if a < 0 {
                            return Err(Error::ZeroCoordinate { axis: j });
                        }
                        c = Complex64::new(0.0, 0.0);
                    } else {
                        c *= w[wi].powi(a as i32);
                    }
                }
                wi += 1;
            }
            let slot = (exp.0[axis] + cleared as i64) as usize;
            coeffs[slot] += c;
        }
        let poly = UnivariateComplexPolynomial::new(coeffs);
        if poly.is_zero() {
            return Err(Error::DegenerateFiber { axis });
        }
        Ok(FiberPolynomial { poly, cleared })
    }
}

/// A univariate restriction of a Laurent polynomial, together with the
/// multiplicity of the artificial root at zero introduced by clearing
/// negative powers.
#[derive(Debug, Clone)]
pub struct FiberPolynomial {
    pub poly: UnivariateComplexPolynomial,
    pub cleared: usize,
}
