//! Property tests for the structural invariants: derivative consistency,
//! root bookkeeping, exactness and homomorphism of the series arithmetic,
//! hull idempotence and duality, and the lattice test's invariances.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use amoeba_core::algebra::{
    laurent_oracle, ExponentVector, LaurentPolynomial, RationalPoly, TruncatedSeries,
    UnivariateComplexPolynomial,
};
use amoeba_core::ensemble::{self, Spectrum};
use amoeba_core::polytope;

fn small_poly(n: usize, laurent: bool) -> impl Strategy<Value = LaurentPolynomial> {
    let lo = if laurent { -3i64 } else { 0 };
    let term = (
        proptest::collection::vec(lo..=3i64, n),
        -4i32..=4,
    );
    proptest::collection::vec(term, 1..=5).prop_filter_map("zero polynomial", move |terms| {
        let mut p = LaurentPolynomial::new(n);
        for (exp, c) in terms {
            if c != 0 {
                p.add_term(ExponentVector::new(exp), Complex64::new(c as f64, 0.0));
            }
        }
        if p.is_zero() {
            None
        } else {
            Some(p)
        }
    })
}

fn torus_point(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-0.4f64..0.4, 0.0f64..std::f64::consts::TAU), n).prop_map(|polar| {
        polar
            .into_iter()
            .map(|(log_r, theta)| Complex64::from_polar(log_r.exp(), theta))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The term-wise partial derivative matches a central finite difference
    /// of the evaluation.
    #[test]
    fn partial_matches_finite_difference(
        p in small_poly(2, true),
        z in torus_point(2),
        axis in 0usize..2,
    ) {
        let h = 1e-6;
        let exact = p.partial(axis).evaluate(&z).unwrap();
        let mut up = z.clone();
        up[axis] += Complex64::new(h, 0.0);
        let mut dn = z.clone();
        dn[axis] -= Complex64::new(h, 0.0);
        if up[axis].norm() < 1e-3 || dn[axis].norm() < 1e-3 {
            return Ok(());
        }
        let fd = (p.evaluate(&up).unwrap() - p.evaluate(&dn).unwrap()) / (2.0 * h);
        let scale = p.partial(axis).evaluation_scale(&z).max(1.0);
        prop_assert!((exact - fd).norm() <= 10.0 * h * scale,
            "exact {exact}, fd {fd}");
    }

    /// Root count equals the degree and the root product matches the
    /// coefficient ratio.
    #[test]
    fn roots_count_and_product(coeffs in proptest::collection::vec(-4i32..=4, 2..=7)) {
        let p = UnivariateComplexPolynomial::from_real(
            &coeffs.iter().map(|&c| c as f64).collect::<Vec<_>>(),
        );
        if p.is_zero() || p.degree() < 1 {
            return Ok(());
        }
        let roots = p.roots(1e-10).unwrap();
        prop_assert_eq!(roots.len(), p.degree());
        let product: Complex64 = roots.iter().product();
        let lead = p.coefficients()[p.degree()];
        let constant = p.coefficients()[0];
        let expected = constant / lead
            * if p.degree() % 2 == 0 { 1.0 } else { -1.0 };
        // Multiple roots come back as clusters with the inherent sqrt(eps)
        // conditioning, so the product check cannot be machine-tight.
        prop_assert!((product - expected).norm() <= 1e-4 * (1.0 + expected.norm()),
            "product {product}, expected {expected}");
    }

    /// Deterministic root extraction: two runs agree bit for bit.
    #[test]
    fn roots_are_deterministic(coeffs in proptest::collection::vec(-4i32..=4, 3..=6)) {
        let p = UnivariateComplexPolynomial::from_real(
            &coeffs.iter().map(|&c| c as f64).collect::<Vec<_>>(),
        );
        if p.is_zero() || p.degree() < 1 {
            return Ok(());
        }
        let a = p.roots(1e-10).unwrap();
        let b = p.roots(1e-10).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Integer series stay integer under powering, and powering is a
    /// homomorphism within a common box.
    #[test]
    fn series_power_exact_and_homomorphic(
        coeffs in proptest::collection::vec((0i64..=4, 0i64..=4, -3i64..=3), 1..=4),
        a in 0u64..=3,
        b in 1u64..=3,
    ) {
        let bounds = vec![6i64, 6];
        let series = TruncatedSeries::from_terms(
            2,
            bounds,
            coeffs.iter().map(|&(e1, e2, c)| {
                (ExponentVector::new(vec![e1, e2]), BigRational::from_integer(BigInt::from(c)))
            }),
        ).unwrap();
        let lhs = series.pow(a).mul(&series.pow(b));
        let rhs = series.pow(a + b);
        prop_assert_eq!(&lhs, &rhs);
        for e1 in 0..=6i64 {
            for e2 in 0..=6i64 {
                let c = rhs.coefficient(&ExponentVector::new(vec![e1, e2])).unwrap();
                prop_assert!(c.denom().is_one());
            }
        }
    }

    /// The geometric-series oracle agrees with direct series division at
    /// the Taylor vertex.
    #[test]
    fn oracle_agrees_with_series_division(
        p_terms in proptest::collection::vec((0i64..=2, 0i64..=2, -3i32..=3), 1..=3),
        q_terms in proptest::collection::vec((0i64..=2, 0i64..=2, -3i32..=3), 0..=3),
        q0 in prop_oneof![Just(1i32), Just(2), Just(-1), Just(3)],
    ) {
        let mut p = LaurentPolynomial::new(2);
        for &(e1, e2, c) in &p_terms {
            if c != 0 {
                p.add_term(ExponentVector::new(vec![e1, e2]), Complex64::new(c as f64, 0.0));
            }
        }
        if p.is_zero() {
            return Ok(());
        }
        let mut q = LaurentPolynomial::new(2);
        q.add_term(ExponentVector::zeros(2), Complex64::new(q0 as f64, 0.0));
        for &(e1, e2, c) in &q_terms {
            if c != 0 && (e1, e2) != (0, 0) {
                q.add_term(ExponentVector::new(vec![e1, e2]), Complex64::new(c as f64, 0.0));
            }
        }
        let pe = RationalPoly::from_laurent(&p).unwrap();
        let qe = RationalPoly::from_laurent(&q).unwrap();
        let division = TruncatedSeries::divide(&pe, &qe, vec![3, 3]).unwrap();
        for e1 in 0..=3i64 {
            for e2 in 0..=3i64 {
                let alpha = ExponentVector::new(vec![e1, e2]);
                let via_oracle = laurent_oracle(&p, &q, &ExponentVector::zeros(2), &alpha, 512)
                    .unwrap();
                prop_assert_eq!(via_oracle, division.coefficient(&alpha).unwrap());
            }
        }
    }

    /// Hull of the hull's vertices is the hull.
    #[test]
    fn hull_is_idempotent(
        pts in proptest::collection::vec((-5i64..=5, -5i64..=5), 1..=8),
    ) {
        let points: Vec<polytope::RationalPoint> = pts
            .iter()
            .map(|&(a, b)| polytope::rational_point(&[a, b]))
            .collect();
        let hull = polytope::hull(&points).unwrap();
        let again = polytope::hull(hull.vertices()).unwrap();
        prop_assert_eq!(hull, again);
    }

    /// Every dual-cone generator certifies the defining inequalities, and
    /// nonnegative combinations stay in the cone.
    #[test]
    fn dual_cone_duality(
        pts in proptest::collection::vec((-4i64..=4, -4i64..=4), 2..=7),
        weights in proptest::collection::vec(0u8..=3, 4),
    ) {
        let points: Vec<polytope::RationalPoint> = pts
            .iter()
            .map(|&(a, b)| polytope::rational_point(&[a, b]))
            .collect();
        let hull = polytope::hull(&points).unwrap();
        for v in hull.vertices().to_vec() {
            let cone = hull.dual_cone_at(&v).unwrap();
            // Sampled nonnegative combination of the generators.
            let mut s = vec![BigRational::zero(); 2];
            for (g, w) in cone.generators().iter().zip(&weights) {
                for j in 0..2 {
                    s[j] += &g[j] * BigRational::from_integer(BigInt::from(*w));
                }
            }
            prop_assert!(hull.in_dual_cone(&v, &s));
            for alpha in hull.vertices() {
                let lhs: BigRational = s.iter().zip(&v).map(|(a, b)| a * b).sum();
                let rhs: BigRational = s.iter().zip(alpha).map(|(a, b)| a * b).sum();
                prop_assert!(lhs >= rhs);
            }
        }
    }

    /// Interior membership is preserved under rational convex combination.
    #[test]
    fn interior_is_convex(
        tri in proptest::collection::vec((-4i64..=4, -4i64..=4), 3..=6),
        t_num in 1i64..=7,
    ) {
        let points: Vec<polytope::RationalPoint> = tri
            .iter()
            .map(|&(a, b)| polytope::rational_point(&[a, b]))
            .collect();
        let hull = polytope::hull(&points).unwrap();
        // Centroid-ish interior candidates.
        let k = BigRational::from_integer(BigInt::from(points.len() as i64));
        let centroid: Vec<BigRational> = (0..2)
            .map(|j| points.iter().map(|p| p[j].clone()).sum::<BigRational>() / k.clone())
            .collect();
        if !hull.contains_interior(&centroid) {
            return Ok(());
        }
        let vertex = hull.vertices()[0].clone();
        let t = BigRational::new(BigInt::from(t_num), BigInt::from(8));
        let mix: Vec<BigRational> = centroid
            .iter()
            .zip(&vertex)
            .map(|(c, v)| c * (BigRational::one() - t.clone()) + v * t.clone())
            .collect();
        // Strictly between an interior point and any hull point: interior.
        prop_assert!(hull.contains_interior(&mix));
    }

    /// Lattice generation is invariant under translation and unimodular
    /// change of coordinates.
    #[test]
    fn lattice_test_invariance(
        pts in proptest::collection::vec((-4i64..=4, -4i64..=4), 2..=6),
        shift in (-7i64..=7, -7i64..=7),
    ) {
        let points: Vec<Vec<i64>> = pts.iter().map(|&(a, b)| vec![a, b]).collect();
        let base = polytope::generates_lattice(&points);
        let translated: Vec<Vec<i64>> = points
            .iter()
            .map(|p| vec![p[0] + shift.0, p[1] + shift.1])
            .collect();
        prop_assert_eq!(base, polytope::generates_lattice(&translated));
        // Unimodular map (x, y) -> (x + y, y), then swap.
        let sheared: Vec<Vec<i64>> = points.iter().map(|p| vec![p[0] + p[1], p[1]]).collect();
        prop_assert_eq!(base, polytope::generates_lattice(&sheared));
        let swapped: Vec<Vec<i64>> = points.iter().map(|p| vec![p[1], p[0]]).collect();
        prop_assert_eq!(base, polytope::generates_lattice(&swapped));
    }

    /// Exact ensemble statistics close their defining constraints.
    #[test]
    fn exact_stats_constraints(
        levels in proptest::collection::vec(0i64..=5, 2..=4),
        n_systems in 1u64..=6,
        energy_seed in 0u64..=30,
    ) {
        let mut sorted = levels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() < 2 {
            return Ok(());
        }
        let spectrum = Spectrum::scalar(&sorted).unwrap();
        let top = *sorted.last().unwrap();
        let energy = (energy_seed % (top as u64 * n_systems + 1)) as i64;
        let stats = match ensemble::exact_stats(&spectrum, n_systems, &[energy]) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let total: BigRational = stats.averages.iter().sum();
        prop_assert_eq!(total, BigRational::from_integer(BigInt::from(n_systems)));
        let weighted: BigRational = stats
            .averages
            .iter()
            .zip(spectrum.points())
            .map(|(a, p)| a * BigRational::from_integer(BigInt::from(p[0])))
            .sum();
        prop_assert_eq!(weighted, BigRational::from_integer(BigInt::from(energy)));
        prop_assert!(stats.total_states.is_positive());
    }
}

/// The contour contains the amoeba boundary: every rendered-grid cell
/// where membership flips sits within grid resolution of a contour point.
#[test]
fn contour_contains_rendered_boundary() {
    use amoeba_core::{amoeba, gauss};

    let q = LaurentPolynomial::from_real_terms(
        2,
        &[(&[0, 0], 1.0), (&[1, 0], -1.0), (&[0, 1], -1.0)],
    );
    let steps = 33usize;
    let (lo, hi) = (-2.5f64, 1.5f64);
    let delta = (hi - lo) / (steps - 1) as f64;
    let mut verdicts = vec![vec![amoeba::Verdict::Uncertain; steps]; steps];
    for i in 0..steps {
        for j in 0..steps {
            let x = [lo + delta * i as f64, lo + delta * j as f64];
            verdicts[i][j] = amoeba::membership(&q, &x, 16, 0.04).unwrap().verdict;
        }
    }

    let directions: Vec<Vec<f64>> = (0..256)
        .map(|k| {
            let phi = std::f64::consts::PI * (k as f64 + 0.5) / 256.0;
            vec![phi.cos(), phi.sin()]
        })
        .collect();
    let contour = gauss::contour(&q, &directions, &gauss::default_seeds(2, 6));
    assert!(contour.len() > 100);

    let mut boundary_cells = 0;
    for i in 0..steps {
        for j in 0..steps {
            if verdicts[i][j] != amoeba::Verdict::Outside {
                continue;
            }
            let near_flip = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)].iter().any(|&(di, dj)| {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                ni >= 0
                    && nj >= 0
                    && (ni as usize) < steps
                    && (nj as usize) < steps
                    && verdicts[ni as usize][nj as usize] == amoeba::Verdict::Inside
            });
            if !near_flip {
                continue;
            }
            boundary_cells += 1;
            let x = [lo + delta * i as f64, lo + delta * j as f64];
            let nearest = contour
                .iter()
                .map(|p| {
                    ((p.x[0] - x[0]).powi(2) + (p.x[1] - x[1]).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(
                nearest <= 2.0 * delta,
                "boundary cell {x:?} is {nearest} from the contour (grid step {delta})"
            );
        }
    }
    assert!(boundary_cells > 20, "too few boundary cells: {boundary_cells}");
}

/// The amoeba of the graph of 1 - 2z - 3z^2 carries a component for the
/// non-vertex lattice point (1,0): the strip squeezed between the
/// log-images of the two zeros of f. Non-vertex components depend on the
/// coefficients, so this is a detection question, not a hull question.
#[test]
fn graph_amoeba_has_non_vertex_component() {
    use amoeba_core::amoeba::{self, GridSpec};

    let graph = LaurentPolynomial::from_real_terms(
        2,
        &[(&[0, 1], 1.0), (&[0, 0], -1.0), (&[1, 0], 2.0), (&[2, 0], 3.0)],
    );
    let cloud = amoeba::render2d(&graph, -3.0, 1.0, 81, 64).unwrap();
    assert!(cloud.points.len() > 1000);

    let newton = amoeba::newton_polytope(&graph).unwrap();
    let vertices = newton.integer_vertices().unwrap();
    assert_eq!(vertices, vec![vec![0, 0], vec![0, 1], vec![2, 0]]);

    let report = amoeba::detect_components(
        &graph,
        &GridSpec {
            mins: vec![-4.0, -3.0],
            maxs: vec![2.0, 3.0],
            steps: vec![40, 40],
        },
        16,
        0.06,
    )
    .unwrap();
    let orders: Vec<ExponentVector> = report.components.iter().map(|c| c.order.clone()).collect();
    for v in vertices {
        assert!(orders.contains(&ExponentVector::new(v.clone())), "missing vertex order {v:?}");
    }
    assert!(
        orders.contains(&ExponentVector::new(vec![1, 0])),
        "non-vertex component (1,0) not detected: {orders:?}"
    );
    // The strip sits between the log-moduli of the two zeros of f.
    let strip = report
        .components
        .iter()
        .find(|c| c.order == ExponentVector::new(vec![1, 0]))
        .unwrap();
    let x1 = strip.representative[0];
    assert!(x1 > (1.0f64 / 3.0).ln() && x1 < 0.0, "strip representative at {x1}");
}

/// Entropy of the solved ensemble matches the growth rate of the exact
/// state count, with the expected O(log N / N) gap shrinking in N.
#[test]
fn entropy_matches_state_count_growth() {
    let fermi = Spectrum::scalar(&[0, 1]).unwrap();
    let solution = ensemble::solve_mean_energy(&fermi, &[0.5]).unwrap();
    let mut previous_gap = f64::INFINITY;
    for n_systems in [8u64, 16, 32, 64] {
        let stats = ensemble::exact_stats(&fermi, n_systems, &[n_systems as i64 / 2]).unwrap();
        let log_total = amoeba_core::numeric::rational_ln_abs(&BigRational::from_integer(
            stats.total_states,
        ));
        let gap = (solution.entropy - log_total / n_systems as f64).abs();
        assert!(gap < previous_gap, "gap not shrinking at N={n_systems}");
        previous_gap = gap;
    }
    assert!(previous_gap < 0.04);
}
