//! Exact multivariate series arithmetic over big rationals.
//!
//! [`RationalPoly`] is a sparse Laurent polynomial with `BigRational`
//! coefficients and no truncation; it backs the geometric-series coefficient
//! oracle. [`TruncatedSeries`] restricts supports to a nonnegative box and
//! truncates every operation to it, which is exact for power-series supports:
//! exponents only grow under multiplication, so discarded terms can never
//! re-enter the box.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::laurent::{ExponentVector, LaurentPolynomial};

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPoly {
    n: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

impl RationalPoly {
    pub fn zero(n: usize) -> Self {
        RationalPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(ExponentVector::zeros(n), BigRational::one());
        p
    }

    pub fn monomial(n: usize, exp: ExponentVector, coeff: BigRational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(exp, coeff);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, exp: ExponentVector, coeff: BigRational) {
        assert_eq!(exp.dim(), self.n, "exponent length mismatch");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        assert_eq!(self.n, other.n);
        let mut out = RationalPoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, factor: &BigRational) -> RationalPoly {
        let mut out = RationalPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * factor);
        }
        out
    }

    /// Exact conversion from a complex-coefficient polynomial; every
    /// coefficient must be real (the `f64` value converts exactly as a
    /// dyadic rational).
    pub fn from_laurent(p: &LaurentPolynomial) -> Result<RationalPoly> {
        let mut out = RationalPoly::zero(p.n());
        for (exp, coeff) in p.terms() {
            if coeff.im != 0.0 {
                return Err(Error::InvalidArgument(
                    "exact arithmetic requires real coefficients".into(),
                ));
            }
            let exact = BigRational::from_float(coeff.re).ok_or_else(|| {
                Error::InvalidArgument("non-finite coefficient".into())
            })?;
            out.add_term(exp.clone(), exact);
        }
        Ok(out)
    }

    /// Lossy conversion to the floating-point representation.
    pub fn to_laurent(&self) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::new(self.n);
        for (e, c) in &self.terms {
            out.add_term(
                e.clone(),
                Complex64::new(crate::numeric::rational_to_f64(c), 0.0),
            );
        }
        out
    }
}

/// A power series truncated to the box `0 <= e_i <= bounds[i]`.
///
/// All arithmetic is exact within the box; coefficients outside it are
/// discarded, never approximated. The box is caller-supplied and never grown.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    bounds: Vec<i64>,
    poly: RationalPoly,
}

impl TruncatedSeries {
    pub fn new(n: usize, bounds: Vec<i64>) -> Self {
        assert_eq!(bounds.len(), n);
        assert!(bounds.iter().all(|&b| b >= 0), "bounds must be nonnegative");
        TruncatedSeries {
            bounds,
            poly: RationalPoly::zero(n),
        }
    }

    pub fn one(n: usize, bounds: Vec<i64>) -> Self {
        let mut s = Self::new(n, bounds);
        s.poly.add_term(ExponentVector::zeros(n), BigRational::one());
        s
    }

    /// Builds a series from integer-exponent terms, truncating to the box.
    /// Negative exponents are rejected.
    pub fn from_terms<I>(n: usize, bounds: Vec<i64>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, BigRational)>,
    {
        let mut s = Self::new(n, bounds);
        for (e, c) in terms {
            if e.coords().iter().any(|&x| x < 0) {
                return Err(Error::InvalidArgument(
                    "truncated series require nonnegative exponents".into(),
                ));
            }
            if s.in_box(&e) {
                s.poly.add_term(e, c);
            }
        }
        Ok(s)
    }

    pub fn from_rational_poly(poly: &RationalPoly, bounds: Vec<i64>) -> Result<Self> {
        Self::from_terms(
            poly.n(),
            bounds,
            poly.terms().map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn bounds(&self) -> &[i64] {
        &self.bounds
    }

    fn in_box(&self, e: &ExponentVector) -> bool {
        e.coords()
            .iter()
            .zip(&self.bounds)
            .all(|(&x, &b)| x >= 0 && x <= b)
    }

    /// Coefficient lookup; exponents outside the box are a truncation error,
    /// not a silent zero.
    pub fn coefficient(&self, exp: &ExponentVector) -> Result<BigRational> {
        if !self.in_box(exp) {
            return Err(Error::Truncation(format!(
                "exponent {exp} lies outside the truncation box"
            )));
        }
        Ok(self.poly.coefficient(exp))
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.bounds, other.bounds, "mismatched truncation boxes");
        TruncatedSeries {
            bounds: self.bounds.clone(),
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.bounds, other.bounds, "mismatched truncation boxes");
        let mut out = TruncatedSeries::new(self.n(), self.bounds.clone());
        for (ea, ca) in self.poly.terms() {
            for (eb, cb) in other.poly.terms() {
                let e = ea.add(eb);
                if out.in_box(&e) {
                    out.poly.add_term(e, ca * cb);
                }
            }
        }
        out
    }

    /// Exact `self^N` within the box, by binary powering.
    pub fn pow(&self, exponent: u64) -> TruncatedSeries {
        let mut result = TruncatedSeries::one(self.n(), self.bounds.clone());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact series division `p / q` within the box. Requires power-series
    /// supports and a nonzero constant term in `q`. This is an independent
    /// route to the expansion coefficients; the geometric-series oracle must
    /// agree with it at the Taylor vertex.
    pub fn divide(p: &RationalPoly, q: &RationalPoly, bounds: Vec<i64>) -> Result<TruncatedSeries> {
        let n = p.n();
        assert_eq!(q.n(), n);
        for (e, _) in p.terms().chain(q.terms()) {
            if e.coords().iter().any(|&x| x < 0) {
                return Err(Error::InvalidArgument(
                    "series division requires nonnegative exponents".into(),
                ));
            }
        }
        let q0 = q.coefficient(&ExponentVector::zeros(n));
        if q0.is_zero() {
            return Err(Error::InvalidArgument(
                "series division requires a nonzero constant term".into(),
            ));
        }
        let mut out = TruncatedSeries::new(n, bounds.clone());
        // Graded-lex enumeration: every divisor step only looks at strictly
        // smaller total degree, which has already been computed.
        let mut exponents = enumerate_box(&bounds);
        exponents.sort_by_key(|e| (e.coords().iter().sum::<i64>(), e.clone()));
        for e in exponents {
            let mut acc = p.coefficient(&e);
            for (f, qc) in q.terms() {
                if f.coords().iter().all(|&x| x == 0) {
                    continue;
                }
                if f.coords().iter().zip(e.coords()).all(|(&a, &b)| a <= b) {
                    let prev = e.sub(f);
                    acc -= qc * out.poly.coefficient(&prev);
                }
            }
            out.poly.add_term(e, acc / q0.clone());
        }
        Ok(out)
    }
}

fn enumerate_box(bounds: &[i64]) -> Vec<ExponentVector> {
    let mut out = vec![ExponentVector::new(Vec::new())];
    for &b in bounds {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for e in &out {
            for v in 0..=b {
                let mut coords = e.coords().to_vec();
                coords.push(v);
                next.push(ExponentVector::new(coords));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn ev(coords: &[i64]) -> ExponentVector {
        ExponentVector::new(coords.to_vec())
    }

    #[test]
    fn cube_of_quadratic_coefficient() {
        // (1 + z + z^2)^3: coefficient of z^3 is 7.
        let s = TruncatedSeries::from_terms(
            1,
            vec![6],
            [(ev(&[0]), rat(1)), (ev(&[1]), rat(1)), (ev(&[2]), rat(1))],
        )
        .unwrap();
        let cube = s.pow(3);
        assert_eq!(cube.coefficient(&ev(&[3])).unwrap(), rat(7));
    }

    #[test]
    fn zeroth_power_is_one() {
        let s = TruncatedSeries::from_terms(1, vec![4], [(ev(&[1]), rat(5))]).unwrap();
        let p0 = s.pow(0);
        assert_eq!(p0.coefficient(&ev(&[0])).unwrap(), rat(1));
        assert_eq!(p0.coefficient(&ev(&[1])).unwrap(), rat(0));
    }

    #[test]
    fn binomial_coefficient() {
        // (1 + z)^4: coefficient of z^2 is 6.
        let s = TruncatedSeries::from_terms(1, vec![4], [(ev(&[0]), rat(1)), (ev(&[1]), rat(1))])
            .unwrap();
        assert_eq!(s.pow(4).coefficient(&ev(&[2])).unwrap(), rat(6));
    }

    #[test]
    fn coefficient_outside_box_is_truncation_error() {
        let s = TruncatedSeries::from_terms(1, vec![2], [(ev(&[1]), rat(1))]).unwrap();
        assert!(matches!(
            s.coefficient(&ev(&[3])),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn power_homomorphism_within_box() {
        let s = TruncatedSeries::from_terms(
            2,
            vec![5, 5],
            [(ev(&[0, 0]), rat(1)), (ev(&[1, 0]), rat(2)), (ev(&[0, 1]), rat(3))],
        )
        .unwrap();
        let lhs = s.pow(2).mul(&s.pow(3));
        let rhs = s.pow(5);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_inverts_multiplication() {
        // q = 1 - z - z^2; p = 1. The quotient obeys the Fibonacci recurrence.
        let mut q = RationalPoly::zero(1);
        q.add_term(ev(&[0]), rat(1));
        q.add_term(ev(&[1]), rat(-1));
        q.add_term(ev(&[2]), rat(-1));
        let p = RationalPoly::one(1);
        let s = TruncatedSeries::divide(&p, &q, vec![10]).unwrap();
        let fib = [1i64, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        for (k, &f) in fib.iter().enumerate() {
            assert_eq!(s.coefficient(&ev(&[k as i64])).unwrap(), rat(f));
        }
    }

    #[test]
    fn integer_inputs_stay_integers() {
        let s = TruncatedSeries::from_terms(1, vec![8], [(ev(&[0]), rat(1)), (ev(&[1]), rat(1))])
            .unwrap();
        let p = s.pow(7);
        for k in 0..=7 {
            let c = p.coefficient(&ev(&[k])).unwrap();
            assert!(c.denom() == &BigInt::from(1));
        }
    }
}
