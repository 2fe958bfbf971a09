//! Exact Laurent coefficients of `P/Q` in the expansion attached to a
//! vertex of the Newton polyhedron of `Q`.
//!
//! At a vertex `v` with coefficient `a_v`, the reciprocal develops into the
//! geometric progression `1/Q = sum_k (-1)^k g^k / (a_v z^v)^(k+1)` with
//! `g = Q - a_v z^v`. Picking a rational direction `s` interior to the dual
//! cone at `v` makes `<s, .>` drop by at least a fixed positive amount with
//! every factor of `g / (a_v z^v)`, so only finitely many `k` can reach a
//! given exponent; the loop below is exact, not a numerical truncation.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polytope;

use super::laurent::{ExponentVector, LaurentPolynomial};
use super::series::RationalPoly;

/// Exact coefficient of `z^alpha` in the Laurent expansion of `P/Q`
/// attached to the complement component of the vertex `v`.
///
/// `budget` caps the geometric-series order; if the structurally required
/// order exceeds it, a truncation error is returned rather than an
/// approximation.
pub fn laurent_oracle(
    p: &LaurentPolynomial,
    q: &LaurentPolynomial,
    vertex: &ExponentVector,
    alpha: &ExponentVector,
    budget: usize,
) -> Result<BigRational> {
    let n = q.n();
    if p.n() != n || vertex.dim() != n || alpha.dim() != n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let exact_p = RationalPoly::from_laurent(p)?;
    let exact_q = RationalPoly::from_laurent(q)?;
    if exact_p.is_zero() {
        return Ok(BigRational::zero());
    }
    let lead = exact_q.coefficient(vertex);
    if lead.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "{vertex} is not in the support of Q"
        )));
    }

    let support: Vec<polytope::RationalPoint> = exact_q
        .terms()
        .map(|(e, _)| polytope::rational_point(e.coords()))
        .collect();
    let newton = polytope::hull(&support)?;
    let vertex_point = polytope::rational_point(vertex.coords());
    let direction = newton.interior_direction_at(&vertex_point).map_err(|_| {
        Error::InvalidArgument(format!("{vertex} is not a vertex of the Newton polyhedron"))
    })?;

    let pairing = |e: &ExponentVector| -> BigRational {
        e.coords()
            .iter()
            .zip(&direction)
            .map(|(&c, s)| BigRational::from_integer(c.into()) * s)
            .sum()
    };

    let mut g = exact_q.clone();
    g.add_term(vertex.clone(), -lead.clone());
    let s_vertex = pairing(vertex);
    if g.is_zero() {
        // Q is a single monomial: P/Q = P * z^{-v} / a_v.
        let want = alpha.add(vertex);
        return Ok(exact_p.coefficient(&want) / lead);
    }

    // Decay per factor of g / (a_v z^v): strictly positive at a vertex.
    let decay = g
        .terms()
        .map(|(e, _)| &s_vertex - pairing(e))
        .min()
        .unwrap();
    if !num_traits::Signed::is_positive(&decay) {
        return Err(Error::InvalidArgument(format!(
            "{vertex} does not strictly dominate the support of Q"
        )));
    }
    let p_max = exact_p.terms().map(|(e, _)| pairing(e)).max().unwrap();
    let s_alpha = pairing(alpha);

    // Contributions at order k need <s, alpha> + (k+1) <s, v> reachable in
    // supp(P g^k); beyond k_max nothing can reach.
    let reach = &p_max - &s_vertex - &s_alpha;
    if num_traits::Signed::is_negative(&reach) {
        return Ok(BigRational::zero());
    }
    let k_max = (&reach / &decay).floor().to_integer();
    let k_max: usize = match num_traits::ToPrimitive::to_usize(&k_max) {
        Some(v) => v,
        None => {
            return Err(Error::Truncation(
                "required geometric-series order does not fit in usize".into(),
            ))
        }
    };
    if k_max > budget {
        return Err(Error::Truncation(format!(
            "coefficient at {alpha} needs series order {k_max}, budget is {budget}"
        )));
    }

    let inv_lead = BigRational::one() / lead;
    let mut total = BigRational::zero();
    let mut partial = exact_p.clone();
    let mut scale = inv_lead.clone();
    let mut sign = BigRational::one();
    for k in 0..=k_max {
        let want = alpha.add(&vertex.scale(k as i64 + 1));
        let c = partial.coefficient(&want);
        if !c.is_zero() {
            total += &sign * &c * &scale;
        }
        if k < k_max {
            partial = partial.mul(&g);
            scale *= &inv_lead;
            sign = -sign;
        }
    }
    Ok(total)
}
