//! Newton polytopes and polyhedra over exact rationals: extreme points,
//! dual cones at vertices, interior membership, and the lattice-generation
//! test. No floating point enters this module; every verdict is exact.

mod lattice;
pub(crate) mod simplex;

pub use lattice::{affine_rank, generates_lattice};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use simplex::{feasible, maximize, LpResult};

pub type RationalPoint = Vec<BigRational>;

/// Builds a rational point from integer coordinates.
pub fn rational_point(coords: &[i64]) -> RationalPoint {
    coords
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[BigRational], b: &[BigRational]) -> RationalPoint {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg(a: &[BigRational]) -> RationalPoint {
    a.iter().map(|x| -x.clone()).collect()
}

fn is_zero_vec(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

fn cross2(a: &[BigRational], b: &[BigRational]) -> BigRational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn cross3(a: &[BigRational], b: &[BigRational]) -> RationalPoint {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Scales a nonzero rational vector to a primitive integer direction.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd).collect()
}

fn primitive_rational(v: &[BigRational]) -> RationalPoint {
    primitive(v)
        .into_iter()
        .map(BigRational::from_integer)
        .collect()
}

/// A polyhedral cone given by generating rays. Membership is decided
/// exactly by a rational LP feasibility test.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    n: usize,
    generators: Vec<RationalPoint>,
}

impl Cone {
    pub fn new(n: usize, generators: Vec<RationalPoint>) -> Self {
        let mut set: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for g in &generators {
            if !is_zero_vec(g) {
                set.insert(primitive(g));
            }
        }
        Cone {
            n,
            generators: set
                .into_iter()
                .map(|g| g.into_iter().map(BigRational::from_integer).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Generators as primitive integer directions, sorted.
    pub fn generators(&self) -> &[RationalPoint] {
        &self.generators
    }

    /// Exact test whether `s` is a nonnegative combination of the
    /// generators.
    pub fn contains(&self, s: &[BigRational]) -> bool {
        assert_eq!(s.len(), self.n);
        if is_zero_vec(s) {
            return true;
        }
        if self.generators.is_empty() {
            return false;
        }
        let a: Vec<Vec<BigRational>> = (0..self.n)
            .map(|row| self.generators.iter().map(|g| g[row].clone()).collect())
            .collect();
        feasible(&a, s).is_some()
    }
}

#[derive(Serialize, Deserialize)]
struct PolyhedronRepr {
    n: usize,
    vertices: Vec<Vec<(i64, i64)>>,
    recession: Vec<Vec<(i64, i64)>>,
}

fn point_to_repr(p: &[BigRational]) -> Vec<(i64, i64)> {
    p.iter()
        .map(|c| {
            (
                c.numer().to_i64().expect("coordinate exceeds i64"),
                c.denom().to_i64().expect("denominator exceeds i64"),
            )
        })
        .collect()
}

fn point_from_repr(p: &[(i64, i64)]) -> Result<RationalPoint> {
    p.iter()
        .map(|&(num, den)| {
            if den == 0 {
                Err(Error::InvalidArgument("zero denominator".into()))
            } else {
                Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
        })
        .collect()
}

/// A polyhedron `conv(vertices) + cone(recession)`. The stored vertices are
/// exactly the extreme points; the recession cone must be pointed (the
/// acute-support hypothesis).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolyhedronRepr", try_from = "PolyhedronRepr")]
pub struct Polyhedron {
    n: usize,
    vertices: Vec<RationalPoint>,
    recession: Vec<RationalPoint>,
}

impl From<Polyhedron> for PolyhedronRepr {
    fn from(p: Polyhedron) -> Self {
        PolyhedronRepr {
            n: p.n,
            vertices: p.vertices.iter().map(|v| point_to_repr(v)).collect(),
            recession: p.recession.iter().map(|v| point_to_repr(v)).collect(),
        }
    }
}

impl TryFrom<PolyhedronRepr> for Polyhedron {
    type Error = Error;

    fn try_from(repr: PolyhedronRepr) -> Result<Self> {
        let vertices = repr
            .vertices
            .iter()
            .map(|p| point_from_repr(p))
            .collect::<Result<Vec<_>>>()?;
        let recession = repr
            .recession
            .iter()
            .map(|p| point_from_repr(p))
            .collect::<Result<Vec<_>>>()?;
        hull_with_recession(&vertices, &recession)
    }
}

/// Convex hull of finitely many rational points: identifies the extreme
/// points exactly. Redundant (non-extreme) input points are dropped.
pub fn hull(points: &[RationalPoint]) -> Result<Polyhedron> {
    hull_with_recession(points, &[])
}

/// Convex hull plus a pointed recession cone, for polyhedra of truncated
/// infinite supports.
pub fn hull_with_recession(
    points: &[RationalPoint],
    recession: &[RationalPoint],
) -> Result<Polyhedron> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidArgument("hull of an empty point set".into()));
    };
    let n = first.len();
    if n == 0 || points.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidArgument("inconsistent point dimensions".into()));
    }
    let mut rays: Vec<RationalPoint> = Vec::new();
    {
        let mut seen = BTreeSet::new();
        for r in recession {
            if r.len() != n {
                return Err(Error::InvalidArgument("inconsistent ray dimension".into()));
            }
            if !is_zero_vec(r) && seen.insert(primitive(r)) {
                rays.push(primitive_rational(r));
            }
        }
    }
    if !rays.is_empty() && !cone_is_pointed(n, &rays) {
        return Err(Error::InvalidArgument(
            "recession cone contains a line (support is not acute)".into(),
        ));
    }

    let mut unique: Vec<RationalPoint> = Vec::new();
    {
        let mut seen = BTreeSet::new();
        for p in points {
            let key: Vec<(BigInt, BigInt)> = p
                .iter()
                .map(|c| (c.numer().clone(), c.denom().clone()))
                .collect();
            if seen.insert(key) {
                unique.push(p.clone());
            }
        }
    }

    let mut vertices: Vec<RationalPoint> = Vec::new();
    for (i, v) in unique.iter().enumerate() {
        let others: Vec<&RationalPoint> = unique
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p)
            .collect();
        if !in_hull_of(&others, &rays, v) {
            vertices.push(v.clone());
        }
    }
    vertices.sort();
    Ok(Polyhedron {
        n,
        vertices,
        recession: rays,
    })
}

/// Feasibility of `v in conv(points) + cone(rays)`.
fn in_hull_of(points: &[&RationalPoint], rays: &[RationalPoint], v: &[BigRational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = v.len();
    let cols = points.len() + rays.len();
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    for row in 0..n {
        let mut r: Vec<BigRational> = Vec::with_capacity(cols);
        r.extend(points.iter().map(|p| p[row].clone()));
        r.extend(rays.iter().map(|p| p[row].clone()));
        a.push(r);
    }
    let mut convexity = vec![BigRational::one(); points.len()];
    convexity.extend(vec![BigRational::zero(); rays.len()]);
    a.push(convexity);
    let mut b: Vec<BigRational> = v.to_vec();
    b.push(BigRational::one());
    feasible(&a, &b).is_some()
}

/// A finitely generated cone is pointed iff zero is not a nontrivial convex
/// combination of the generators.
fn cone_is_pointed(n: usize, rays: &[RationalPoint]) -> bool {
    if rays.is_empty() {
        return true;
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|row| rays.iter().map(|r| r[row].clone()).collect())
        .collect();
    a.push(vec![BigRational::one(); rays.len()]);
    let mut b = vec![BigRational::zero(); n];
    b.push(BigRational::one());
    feasible(&a, &b).is_none()
}

impl Polyhedron {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn recession(&self) -> &[RationalPoint] {
        &self.recession
    }

    /// Vertices as integer vectors, when all coordinates are integral.
    pub fn integer_vertices(&self) -> Option<Vec<Vec<i64>>> {
        self.vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| {
                        if c.denom() == &BigInt::one() {
                            c.numer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Euclidean diameter of the vertex set.
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(crate::numeric::rational_to_f64).collect())
            .collect();
        let mut best = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d: f64 = pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                best = best.max(d);
            }
        }
        best
    }

    /// Exact membership of `u` in the closed polyhedron.
    pub fn contains(&self, u: &[BigRational]) -> bool {
        assert_eq!(u.len(), self.n);
        let refs: Vec<&RationalPoint> = self.vertices.iter().collect();
        in_hull_of(&refs, &self.recession, u)
    }

    /// Exact membership of `u` in the interior: `u` lies in the polyhedron
    /// and can be moved by a positive amount along every signed coordinate
    /// direction while staying inside. The per-direction reach is an exact
    /// LP optimum, so boundary points are classified correctly.
    pub fn contains_interior(&self, u: &[BigRational]) -> bool {
        assert_eq!(u.len(), self.n);
        if !self.contains(u) {
            return false;
        }
        for axis in 0..self.n {
            for sign in [1i64, -1] {
                if !self.positive_reach(u, axis, sign) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `u + t * sign * e_axis` stays in the polyhedron for some
    /// `t > 0` (exact).
    fn positive_reach(&self, u: &[BigRational], axis: usize, sign: i64) -> bool {
        let pts = &self.vertices;
        let cols = pts.len() + self.recession.len() + 1;
        let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(self.n + 1);
        for row in 0..self.n {
            let mut r: Vec<BigRational> = Vec::with_capacity(cols);
            r.extend(pts.iter().map(|p| p[row].clone()));
            r.extend(self.recession.iter().map(|p| p[row].clone()));
            r.push(if row == axis {
                -BigRational::from_integer(BigInt::from(sign))
            } else {
                BigRational::zero()
            });
            a.push(r);
        }
        let mut convexity = vec![BigRational::one(); pts.len()];
        convexity.extend(vec![BigRational::zero(); self.recession.len() + 1]);
        a.push(convexity);
        let mut b: Vec<BigRational> = u.to_vec();
        b.push(BigRational::one());
        let mut c = vec![BigRational::zero(); cols];
        c[cols - 1] = BigRational::one();
        match maximize(&a, &b, &c) {
            LpResult::Unbounded => true,
            LpResult::Optimal { value, .. } => value.is_positive(),
            LpResult::Infeasible => false,
        }
    }

    /// Direct test `s in C_v` (the dual cone at `v`), exact in any
    /// dimension: the linear functional `s` must be maximized over the
    /// polyhedron at `v`.
    pub fn in_dual_cone(&self, v: &[BigRational], s: &[BigRational]) -> bool {
        self.vertices
            .iter()
            .all(|alpha| !dot(s, &sub(alpha, v)).is_positive())
            && self.recession.iter().all(|r| !dot(s, r).is_positive())
    }

    /// The dual cone to the polyhedron at the vertex `v`: all directions
    /// whose linear functional attains its maximum at `v`. Generator
    /// enumeration is implemented for `n <= 3`; higher dimensions use
    /// [`Polyhedron::in_dual_cone`] directly.
    pub fn dual_cone_at(&self, v: &[BigRational]) -> Result<Cone> {
        if !self.vertices.iter().any(|w| w == v) {
            return Err(Error::InvalidArgument(format!(
                "point {:?} is not a vertex",
                v.iter().map(crate::numeric::rational_to_f64).collect::<Vec<_>>()
            )));
        }
        let mut dirs: Vec<RationalPoint> = Vec::new();
        {
            let mut seen = BTreeSet::new();
            for alpha in &self.vertices {
                let d = sub(alpha, v);
                if !is_zero_vec(&d) && seen.insert(primitive(&d)) {
                    dirs.push(primitive_rational(&d));
                }
            }
            for r in &self.recession {
                if seen.insert(primitive(r)) {
                    dirs.push(r.clone());
                }
            }
        }
        if dirs.is_empty() {
            // Single-point polyhedron: the dual cone is all of R^n.
            let mut gens = Vec::new();
            for j in 0..self.n {
                for sign in [1i64, -1] {
                    let mut g = vec![BigRational::zero(); self.n];
                    g[j] = BigRational::from_integer(BigInt::from(sign));
                    gens.push(g);
                }
            }
            return Ok(Cone::new(self.n, gens));
        }
        let gens = match self.n {
            1 => {
                // All directions share one sign at a vertex of a segment.
                let s = -dirs[0][0].signum();
                vec![vec![s]]
            }
            2 => polar_cone_2d(&dirs)?,
            3 => polar_cone_3d(&dirs)?,
            _ => {
                return Err(Error::InvalidArgument(
                    "dual cone generators are enumerated only for n <= 3".into(),
                ))
            }
        };
        Ok(Cone::new(self.n, gens))
    }

    /// A rational direction in the interior of the dual cone at `v`, found
    /// by maximizing the separation margin over the unit box. Errors when
    /// `v` is not a vertex. Works in any dimension.
    pub fn interior_direction_at(&self, v: &[BigRational]) -> Result<RationalPoint> {
        let n = self.n;
        let mut constraints: Vec<RationalPoint> = Vec::new();
        for alpha in &self.vertices {
            let d = sub(v, alpha);
            if !is_zero_vec(&d) {
                constraints.push(d);
            }
        }
        for r in &self.recession {
            constraints.push(neg(r));
        }
        if constraints.is_empty() {
            let mut s = vec![BigRational::zero(); n];
            s[0] = BigRational::one();
            return Ok(s);
        }
        // Variables: s+ (n), s- (n), t, one slack per constraint, one slack
        // per box row. Maximize t subject to <s, d_i> >= t and |s_j| <= 1.
        let m = constraints.len();
        let cols = 2 * n + 1 + m + n;
        let mut a: Vec<Vec<BigRational>> = Vec::new();
        let mut b: Vec<BigRational> = Vec::new();
        for (i, d) in constraints.iter().enumerate() {
            let mut row = vec![BigRational::zero(); cols];
            for j in 0..n {
                row[j] = d[j].clone();
                row[n + j] = -d[j].clone();
            }
            row[2 * n] = -BigRational::one();
            row[2 * n + 1 + i] = -BigRational::one();
            a.push(row);
            b.push(BigRational::zero());
        }
        for j in 0..n {
            let mut row = vec![BigRational::zero(); cols];
            row[j] = BigRational::one();
            row[n + j] = BigRational::one();
            row[2 * n + 1 + m + j] = BigRational::one();
            a.push(row);
            b.push(BigRational::one());
        }
        let mut c = vec![BigRational::zero(); cols];
        c[2 * n] = BigRational::one();
        match maximize(&a, &b, &c) {
            LpResult::Optimal { value, solution } if value.is_positive() => Ok((0..n)
                .map(|j| &solution[j] - &solution[n + j])
                .collect()),
            LpResult::Optimal { .. } => Err(Error::InvalidArgument(
                "no separating direction: point is not a vertex".into(),
            )),
            other => Err(Error::InvalidArgument(format!(
                "interior direction LP failed: {other:?}"
            ))),
        }
    }
}

/// Polar cone `{s : <s, d> <= 0 for all d}` of a pointed 2-D cone.
fn polar_cone_2d(dirs: &[RationalPoint]) -> Result<Vec<RationalPoint>> {
    let all_same_ray = dirs
        .iter()
        .all(|d| cross2(&dirs[0], d).is_zero() && dot(&dirs[0], d).is_positive());
    if all_same_ray {
        let a = &dirs[0];
        let perp = vec![-a[1].clone(), a[0].clone()];
        return Ok(vec![perp.clone(), neg(&perp), neg(a)]);
    }
    let cw = dirs
        .iter()
        .find(|cand| dirs.iter().all(|d| !cross2(cand, d).is_negative()));
    let ccw = dirs
        .iter()
        .find(|cand| dirs.iter().all(|d| !cross2(cand, d).is_positive()));
    let (Some(a), Some(b)) = (cw, ccw) else {
        return Err(Error::InvalidArgument(
            "cone is not pointed: no extreme ray pair".into(),
        ));
    };
    let mut na = vec![-a[1].clone(), a[0].clone()];
    if dot(&na, b).is_positive() {
        na = neg(&na);
    }
    let mut nb = vec![-b[1].clone(), b[0].clone()];
    if dot(&nb, a).is_positive() {
        nb = neg(&nb);
    }
    Ok(vec![na, nb])
}

/// Polar cone of a pointed 3-D cone, handling lower-dimensional spans by
/// adding the orthogonal lineality.
fn polar_cone_3d(dirs: &[RationalPoint]) -> Result<Vec<RationalPoint>> {
    // Find two independent directions, if any.
    let mut pair: Option<(usize, usize)> = None;
    'outer: for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            if !is_zero_vec(&cross3(&dirs[i], &dirs[j])) {
                pair = Some((i, j));
                break 'outer;
            }
        }
    }
    let Some((i0, j0)) = pair else {
        // Rank 1: all directions on one ray; polar is a half-space.
        let a = &dirs[0];
        let e = if !a[0].is_zero() || !a[1].is_zero() {
            vec![BigRational::zero(), BigRational::zero(), BigRational::one()]
        } else {
            vec![BigRational::one(), BigRational::zero(), BigRational::zero()]
        };
        let b1 = cross3(a, &e);
        let b2 = cross3(a, &b1);
        return Ok(vec![b1.clone(), neg(&b1), b2.clone(), neg(&b2), neg(a)]);
    };
    let normal = cross3(&dirs[i0], &dirs[j0]);
    let full_rank = dirs.iter().any(|d| !dot(&normal, d).is_zero());
    if !full_rank {
        // Rank 2: polar of the in-plane cone, plus the normal lineality.
        let u1 = dirs[i0].clone();
        let u2 = cross3(&normal, &u1);
        let uu1 = dot(&u1, &u1);
        let uu2 = dot(&u2, &u2);
        let planar: Vec<RationalPoint> = dirs
            .iter()
            .map(|d| vec![dot(d, &u1) / uu1.clone(), dot(d, &u2) / uu2.clone()])
            .collect();
        let polar2 = polar_cone_2d(&planar)?;
        let mut gens: Vec<RationalPoint> = polar2
            .iter()
            .map(|s| {
                (0..3)
                    .map(|k| &s[0] * &u1[k] / uu1.clone() + &s[1] * &u2[k] / uu2.clone())
                    .collect()
            })
            .collect();
        gens.push(normal.clone());
        gens.push(neg(&normal));
        return Ok(gens);
    }
    // Full rank, pointed: facet normals of the primal cone are the extreme
    // rays of the polar.
    let mut gens: Vec<RationalPoint> = Vec::new();
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let f = cross3(&dirs[i], &dirs[j]);
            if is_zero_vec(&f) {
                continue;
            }
            for cand in [f.clone(), neg(&f)] {
                if dirs.iter().all(|d| !dot(&cand, d).is_positive()) {
                    gens.push(cand);
                }
            }
        }
    }
    if gens.is_empty() {
        return Err(Error::InvalidArgument(
            "cone is not pointed: polar has empty interior".into(),
        ));
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(coords: &[i64]) -> RationalPoint {
        rational_point(coords)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn harnack_newton_polytope() {
        let p = hull(&[rp(&[2, 1]), rp(&[1, 1]), rp(&[1, 2]), rp(&[0, 0])]).unwrap();
        assert_eq!(
            p.vertices(),
            &[rp(&[0, 0]), rp(&[1, 2]), rp(&[2, 1])]
        );
        // (1,1) is interior.
        assert!(p.contains_interior(&rp(&[1, 1])));
    }

    #[test]
    fn single_point_hull() {
        let p = hull(&[rp(&[3, -2])]).unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert!(p.recession().is_empty());
        assert!(p.contains(&rp(&[3, -2])));
        assert!(!p.contains_interior(&rp(&[3, -2])));
    }

    #[test]
    fn one_dimensional_segment() {
        let p = hull(&[rp(&[0]), rp(&[1]), rp(&[2])]).unwrap();
        assert_eq!(p.vertices(), &[rp(&[0]), rp(&[2])]);
        assert!(p.contains_interior(&[rat(1, 2)]));
        assert!(!p.contains_interior(&rp(&[2])));
        assert!(p.contains(&rp(&[2])));
    }

    #[test]
    fn segment_dual_cones() {
        let p = hull(&[rp(&[0]), rp(&[2])]).unwrap();
        let c0 = p.dual_cone_at(&rp(&[0])).unwrap();
        assert_eq!(c0.generators(), &[rp(&[-1])]);
        assert!(c0.contains(&[rat(-3, 1)]));
        assert!(!c0.contains(&[rat(1, 1)]));
        let c2 = p.dual_cone_at(&rp(&[2])).unwrap();
        assert_eq!(c2.generators(), &[rp(&[1])]);
    }

    #[test]
    fn harnack_dual_cone_at_origin() {
        let p = hull(&[rp(&[2, 1]), rp(&[1, 1]), rp(&[1, 2]), rp(&[0, 0])]).unwrap();
        let c = p.dual_cone_at(&rp(&[0, 0])).unwrap();
        // The defining inequalities are <s,(2,1)> <= 0 and <s,(1,2)> <= 0.
        for g in c.generators() {
            assert!(!dot(g, &rp(&[2, 1])).is_positive());
            assert!(!dot(g, &rp(&[1, 2])).is_positive());
        }
        assert!(c.contains(&rp(&[-1, 0])));
        assert!(c.contains(&rp(&[0, -1])));
        assert!(c.contains(&rp(&[-1, -1])));
        assert!(!c.contains(&rp(&[1, 0])));
        // Extreme rays are perpendicular to the polytope edges.
        assert!(c.contains(&rp(&[1, -2])));
        assert!(c.contains(&rp(&[-2, 1])));
    }

    #[test]
    fn unit_square_dual_cone_is_quadrant() {
        let p = hull(&[rp(&[0, 0]), rp(&[1, 0]), rp(&[0, 1]), rp(&[1, 1])]).unwrap();
        let c = p.dual_cone_at(&rp(&[1, 1])).unwrap();
        assert_eq!(c.generators(), &[rp(&[0, 1]), rp(&[1, 0])]);
    }

    #[test]
    fn unit_cube_dual_cone_is_octant() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(rp(&[x, y, z]));
                }
            }
        }
        let p = hull(&pts).unwrap();
        assert_eq!(p.vertices().len(), 8);
        let c = p.dual_cone_at(&rp(&[1, 1, 1])).unwrap();
        assert_eq!(
            c.generators(),
            &[rp(&[0, 0, 1]), rp(&[0, 1, 0]), rp(&[1, 0, 0])]
        );
        assert!(c.contains(&rp(&[1, 2, 3])));
        assert!(!c.contains(&rp(&[-1, 2, 3])));
    }

    #[test]
    fn interior_direction_separates_strictly() {
        let p = hull(&[rp(&[2, 1]), rp(&[1, 1]), rp(&[1, 2]), rp(&[0, 0])]).unwrap();
        for v in p.vertices().to_vec() {
            let s = p.interior_direction_at(&v).unwrap();
            for alpha in p.vertices() {
                if *alpha != v {
                    assert!(dot(&s, &sub(&v, alpha)).is_positive());
                }
            }
            assert!(p.in_dual_cone(&v, &s));
        }
    }

    #[test]
    fn interior_direction_rejects_non_vertices() {
        let p = hull(&[rp(&[0]), rp(&[1]), rp(&[2])]).unwrap();
        assert!(p.interior_direction_at(&rp(&[1])).is_err());
        assert!(p.dual_cone_at(&rp(&[1])).is_err());
    }

    #[test]
    fn recession_extends_membership() {
        // Planck-style: truncated {1/2 + N} with recession ray 1.
        let pts: Vec<RationalPoint> = (0..5).map(|k| vec![rat(1, 2) + rat(k, 1)]).collect();
        let p = hull_with_recession(&pts, &[rp(&[1])]).unwrap();
        assert_eq!(p.vertices(), &[vec![rat(1, 2)]]);
        assert!(p.contains_interior(&[rat(2, 1)]));
        assert!(p.contains_interior(&[rat(1_000_000, 1)]));
        assert!(!p.contains_interior(&[rat(1, 2)]));
        assert!(!p.contains(&[rat(0, 1)]));
    }

    #[test]
    fn line_in_recession_is_rejected() {
        let err = hull_with_recession(&[rp(&[0])], &[rp(&[1]), rp(&[-1])]);
        assert!(err.is_err());
    }

    #[test]
    fn convex_combination_stays_interior() {
        let p = hull(&[rp(&[0, 0]), rp(&[4, 0]), rp(&[0, 4])]).unwrap();
        let u = vec![rat(1, 1), rat(1, 1)];
        let v = vec![rat(2, 1), rat(1, 2)];
        assert!(p.contains_interior(&u));
        assert!(p.contains_interior(&v));
        let mid: RationalPoint = u
            .iter()
            .zip(&v)
            .map(|(a, b)| (a + b) * rat(1, 2))
            .collect();
        assert!(p.contains_interior(&mid));
    }

    #[test]
    fn hull_is_idempotent() {
        let p = hull(&[rp(&[2, 1]), rp(&[1, 1]), rp(&[1, 2]), rp(&[0, 0])]).unwrap();
        let again = hull(p.vertices()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn json_round_trip() {
        let p = hull(&[rp(&[0, 0]), rp(&[2, 1]), rp(&[1, 2])]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: Polyhedron = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
    }
}
