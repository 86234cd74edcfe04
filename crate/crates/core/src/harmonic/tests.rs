use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::complexes::{bouquet, octahedron, simplicial, tetrahedron, torus, trivial};
use super::*;
use crate::cat0::{translation_length, Isometry, ModelSpace, Point};
use crate::linalg::Mat;

fn e(v: &[f64]) -> Point {
    Point::Euclidean(v.to_vec())
}

fn path3() -> VoltageComplex {
    // 1 — 0 — 2
    let s = ModelSpace::Euclidean(2);
    let id = s.identity_isometry();
    let edges = vec![
        Edge { from: 0, to: 1, voltage: id.clone() },
        Edge { from: 0, to: 2, voltage: id },
    ];
    VoltageComplex::new(s, vec![VertexClass::Generic; 3], edges, Vec::new(), None).unwrap()
}

/// Minimizes `x ↦ Σ_g d(x, g·x)²` over the hyperbolic plane by a zooming
/// grid search in spatial coordinates.
fn grid_minimizer_h2(gens: &[Isometry]) -> Point {
    let s = ModelSpace::Hyperbolic(2);
    let f = |x: f64, y: f64| s.displacement(gens, &Point::hyperbolic_from_spatial(&[x, y])).unwrap();
    let (mut cx, mut cy, mut half) = (0.0, 0.0, 4.0);
    for _ in 0..40 {
        let mut best = (f64::INFINITY, cx, cy);
        for i in -20..=20 {
            for j in -20..=20 {
                let (x, y) = (cx + half * i as f64 / 20.0, cy + half * j as f64 / 20.0);
                let v = f(x, y);
                if v < best.0 {
                    best = (v, x, y);
                }
            }
        }
        (cx, cy) = (best.1, best.2);
        half *= 0.25;
    }
    Point::hyperbolic_from_spatial(&[cx, cy])
}

fn rotation_about(center: &Isometry, theta: f64) -> Isometry {
    Isometry::hyperbolic_rotation(2, 0, 1, theta).conjugate_by(center).unwrap()
}

#[test]
fn load_examples() {
    let s = ModelSpace::Hyperbolic(2);
    assert_eq!(trivial(s.clone()).unwrap().vertex_count(), 1);
    let g = Isometry::hyperbolic_boost(2, 0, 0.8);
    let h = Isometry::hyperbolic_rotation(2, 0, 1, 0.3);
    let c = bouquet(s.clone(), std::slice::from_ref(&g)).unwrap();
    assert_eq!(c.darts_at(0).len(), 2);

    // a closed walk g, h, (gh)⁻¹ around one vertex
    let gh = g.compose(&h).unwrap();
    let loops = |third: Isometry| {
        let edges = vec![
            Edge { from: 0, to: 0, voltage: g.clone() },
            Edge { from: 0, to: 0, voltage: h.clone() },
            Edge { from: 0, to: 0, voltage: third },
        ];
        let tri = [Dart::forward(0), Dart::forward(1), Dart::forward(2)];
        VoltageComplex::new(s.clone(), vec![VertexClass::Generic], edges, vec![tri], None)
    };
    assert!(loops(gh.inverse().unwrap()).is_ok());
    assert!(matches!(loops(gh.clone()), Err(HarmonicError::BadHolonomy { triangle: 0, .. })));
    // the other order is a different word unless g and h commute
    let hg = h.compose(&g).unwrap();
    assert!(matches!(loops(hg.inverse().unwrap()), Err(HarmonicError::BadHolonomy { .. })));
}

#[test]
fn load_rejects_bad_input() {
    let s = ModelSpace::Euclidean(1);
    let id = s.identity_isometry();
    let edge = |a, b| Edge { from: a, to: b, voltage: id.clone() };
    let ns = vec![VertexClass::NonSpecial, VertexClass::NonSpecial, VertexClass::Special];
    assert_eq!(
        VoltageComplex::new(s.clone(), ns.clone(), vec![edge(0, 2), edge(0, 1)], vec![], None),
        Err(HarmonicError::ClassViolation { edge: 1 })
    );
    assert!(VoltageComplex::new(s.clone(), ns.clone(), vec![edge(0, 2), edge(1, 2)], vec![], None).is_ok());
    assert!(matches!(
        VoltageComplex::new(s.clone(), vec![VertexClass::Generic], vec![edge(0, 1)], vec![], None),
        Err(HarmonicError::MalformedInput(_))
    ));
    // darts that do not chain
    let classes = vec![VertexClass::Generic; 3];
    let open = [Dart::forward(0), Dart::forward(1), Dart::forward(2)];
    assert!(matches!(
        VoltageComplex::new(s.clone(), classes.clone(), vec![edge(0, 1), edge(1, 2), edge(0, 2)], vec![open], None),
        Err(HarmonicError::MalformedInput(_))
    ));
    let closed = [Dart::forward(0), Dart::forward(1), Dart::backward(2)];
    assert!(VoltageComplex::new(s.clone(), classes, vec![edge(0, 1), edge(1, 2), edge(0, 2)], vec![closed], None).is_ok());
    // voltage of the wrong space
    let bad = Edge { from: 0, to: 0, voltage: Isometry::hyperbolic_boost(1, 0, 1.0) };
    assert!(matches!(
        VoltageComplex::new(s, vec![VertexClass::Generic], vec![bad], vec![], None),
        Err(HarmonicError::MalformedInput(_))
    ));
}

#[test]
fn energy_examples() {
    let h = ModelSpace::Hyperbolic(2);
    let c = bouquet(h.clone(), &[Isometry::hyperbolic_rotation(2, 0, 1, 1.0), Isometry::hyperbolic_rotation(2, 0, 1, 2.0)]).unwrap();
    let f = EquivariantMap::constant(h.clone(), 1, h.origin()).unwrap();
    assert_eq!(c.energy(&f).unwrap(), 0.0);

    let s = ModelSpace::Euclidean(2);
    let c = bouquet(s.clone(), &[Isometry::euclidean_translation(&[3.0, -4.0])]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let f = EquivariantMap::random(s.clone(), 1, &mut rng, 5.0);
        assert!((c.energy(&f).unwrap() - 25.0).abs() < 1e-12);
    }

    let id = s.identity_isometry();
    let c = VoltageComplex::new(
        s.clone(),
        vec![VertexClass::Generic; 2],
        vec![Edge { from: 0, to: 1, voltage: id }],
        vec![],
        None,
    )
    .unwrap();
    let f = EquivariantMap::new(s, vec![e(&[1.0, 2.0]), e(&[4.0, 6.0])]).unwrap();
    assert!((c.energy(&f).unwrap() - 25.0).abs() < 1e-12);
}

#[test]
fn differential_examples() {
    let h = ModelSpace::Hyperbolic(3);
    let c = bouquet(h.clone(), &[Isometry::hyperbolic_rotation(3, 1, 2, 0.4)]).unwrap();
    let f = EquivariantMap::constant(h.clone(), 1, h.origin()).unwrap();
    for t in c.differential(&f, 0).unwrap() {
        assert!(h.tangent_norm(&h.origin(), &t).unwrap() < 1e-15);
    }

    let c = path3();
    let f = EquivariantMap::new(c.space().clone(), vec![e(&[0.0, 0.0]), e(&[1.0, 0.0]), e(&[0.0, 3.0])]).unwrap();
    let df = c.differential(&f, 0).unwrap();
    assert_eq!(df[0], Tangent::Euclidean(vec![1.0, 0.0]));
    assert_eq!(df[1], Tangent::Euclidean(vec![0.0, 3.0]));

    // ‖Df|_v(u)‖ = d(f(v), g·f(u)), loops giving two darts
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = Isometry::hyperbolic_boost(3, 1, 0.9).compose(&Isometry::hyperbolic_rotation(3, 0, 2, 0.5)).unwrap();
    let c = bouquet(h.clone(), std::slice::from_ref(&g)).unwrap();
    let gi = g.inverse().unwrap();
    for _ in 0..20 {
        let f = EquivariantMap::random(h.clone(), 1, &mut rng, 1.0);
        let x = f.value(0);
        let df = c.differential(&f, 0).unwrap();
        assert_eq!(df.len(), 2);
        for (t, iso) in df.iter().zip([&g, &gi]) {
            let want = h.distance(x, &h.apply(iso, x).unwrap()).unwrap();
            assert!((h.tangent_norm(x, t).unwrap() - want).abs() < 1e-10);
        }
    }
}

#[test]
fn gradient_residual_examples() {
    let h = ModelSpace::Hyperbolic(2);
    let c = bouquet(h.clone(), &[Isometry::hyperbolic_rotation(2, 0, 1, 1.0)]).unwrap();
    let f = EquivariantMap::constant(h.clone(), 1, h.origin()).unwrap();
    assert_eq!(c.gradient_residual(&f).unwrap(), 0.0);

    let c = path3();
    let at = |x: f64| EquivariantMap::new(c.space().clone(), vec![e(&[x, 0.0]), e(&[1.0, 0.0]), e(&[-1.0, 0.0])]).unwrap();
    assert!(c.vertex_residual(&at(0.0), 0).unwrap() < 1e-15);
    assert!((c.vertex_residual(&at(0.3), 0).unwrap() - 0.6).abs() < 1e-12);
}

#[test]
fn descent_identity_holonomy_reaches_a_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in [ModelSpace::Euclidean(3), ModelSpace::Hyperbolic(2), ModelSpace::Spd(2)] {
        for c in [tetrahedron(s.clone()).unwrap(), octahedron(s.clone()).unwrap()] {
            let f0 = EquivariantMap::random(s.clone(), c.vertex_count(), &mut rng, 1.0);
            let r = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
            assert_eq!(r.status, DescentStatus::Converged, "{}", s.name());
            assert!(r.energy() < 1e-12, "{} {}", s.name(), r.energy());
            assert_monotone(&r.trace);
        }
    }
}

fn assert_monotone(trace: &[f64]) {
    for w in trace.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{} then {}", w[0], w[1]);
    }
}

#[test]
fn descent_finds_common_fixed_point_of_rotations() {
    let h = ModelSpace::Hyperbolic(2);
    let gens = [Isometry::hyperbolic_rotation(2, 0, 1, 0.7), Isometry::hyperbolic_rotation(2, 0, 1, 2.1)];
    let c = bouquet(h.clone(), &gens).unwrap();
    let f0 = EquivariantMap::new(h.clone(), vec![Point::hyperbolic_from_spatial(&[0.8, -0.5])]).unwrap();
    let r = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
    assert_eq!(r.status, DescentStatus::Converged);
    assert_monotone(&r.trace);
    assert!(h.distance(r.map.value(0), &h.origin()).unwrap() < 1e-6);
    let oracle = grid_minimizer_h2(&gens);
    assert!(h.distance(&oracle, &h.origin()).unwrap() < 1e-6);

    // the same around an off-origin center
    let center = Isometry::hyperbolic_boost(2, 0, 0.6).compose(&Isometry::hyperbolic_rotation(2, 0, 1, 1.1)).unwrap();
    let gens = [rotation_about(&center, 0.9), rotation_about(&center, -2.5)];
    let c = bouquet(h.clone(), &gens).unwrap();
    let f0 = EquivariantMap::constant(h.clone(), 1, h.origin()).unwrap();
    let r = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
    assert_eq!(r.status, DescentStatus::Converged);
    assert!(r.residual <= 1e-6);
    let oracle = grid_minimizer_h2(&gens);
    let fixed = h.apply(&center, &h.origin()).unwrap();
    assert!(h.distance(&oracle, &fixed).unwrap() < 1e-6);
    assert!(h.distance(r.map.value(0), &oracle).unwrap() < 1e-6);
}

#[test]
fn hyperbolic_translation_loop_settles_on_the_axis() {
    let h = ModelSpace::Hyperbolic(2);
    let len = 1.3;
    let g = Isometry::hyperbolic_boost(2, 0, len);
    let c = bouquet(h.clone(), &[g]).unwrap();
    let f0 = EquivariantMap::new(h.clone(), vec![Point::hyperbolic_from_spatial(&[0.4, 1.5])]).unwrap();
    let r = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
    assert_eq!(r.status, DescentStatus::Converged);
    assert!((r.energy() - len * len).abs() < 1e-9);
    assert_monotone(&r.trace);
}

#[test]
fn parabolic_loop_drifts_to_infinity() {
    // translation in a flat factor times a parabolic: the infimum ℓ² is
    // approached only at the parabolic fixed point at infinity
    let s = ModelSpace::product(vec![ModelSpace::Euclidean(1), ModelSpace::Hyperbolic(2)]).unwrap();
    let len = 0.8;
    let g = Isometry::Product(vec![Isometry::euclidean_translation(&[len]), Isometry::hyperbolic_parabolic(2, 0, 1, 1.0)]);
    let Isometry::Product(parts) = &g else { unreachable!() };
    let Isometry::Hyperbolic(m) = &parts[1] else { unreachable!() };
    assert!(translation_length(m).unwrap() < 1e-7);
    let c = bouquet(s.clone(), &[g]).unwrap();
    let f0 = EquivariantMap::constant(s.clone(), 1, s.origin()).unwrap();
    let opts = DescentOptions { divergence_radius: 4.0, ..DescentOptions::default() };
    let r = harmonic_descent(&c, &f0, &opts).unwrap();
    assert_eq!(r.status, DescentStatus::Diverging);
    assert_monotone(&r.trace);
    assert!(r.energy() > len * len);
    assert!(r.energy() - len * len < 1e-3, "{}", r.energy());
}

#[test]
fn jacobi_updates_also_descend() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = ModelSpace::Hyperbolic(2);
    let c = octahedron(s.clone()).unwrap();
    let f0 = EquivariantMap::random(s.clone(), c.vertex_count(), &mut rng, 1.5);
    let opts = DescentOptions { simultaneous: true, ..DescentOptions::default() };
    let r = harmonic_descent(&c, &f0, &opts).unwrap();
    assert_eq!(r.status, DescentStatus::Converged);
    assert!(r.energy() < 1e-12);
    assert_monotone(&r.trace);
}

#[test]
fn energy_zero_iff_edges_collapse() {
    let s = ModelSpace::Euclidean(2);
    let c = tetrahedron(s.clone()).unwrap();
    let f = EquivariantMap::constant(s.clone(), 4, e(&[1.0, 1.0])).unwrap();
    assert_eq!(c.energy(&f).unwrap(), 0.0);
    let mut values = f.values().to_vec();
    values[2] = e(&[1.0, 1.0 + 1e-6]);
    let f = EquivariantMap::new(s, values).unwrap();
    assert!(c.energy(&f).unwrap() > 0.0);
}

#[test]
fn every_edge_lies_in_q_plus_one_triangles() {
    let s = ModelSpace::Euclidean(1);
    for c in [tetrahedron(s.clone()).unwrap(), octahedron(s.clone()).unwrap()] {
        assert!(c.triangle_counts().iter().all(|&n| n == 2));
    }
    let t = torus(s.clone(), &Isometry::euclidean_translation(&[1.0]), &Isometry::euclidean_translation(&[0.5])).unwrap();
    assert_eq!(t.triangle_counts(), vec![2, 2, 2]);
}

#[test]
fn links_have_the_expected_shape() {
    let s = ModelSpace::Euclidean(2);
    let a = Isometry::euclidean_translation(&[1.0, 0.0]);
    let b = Isometry::euclidean_translation(&[0.5, 3f64.sqrt() / 2.0]);
    let t = torus(s.clone(), &a, &b).unwrap();
    let f = EquivariantMap::constant(s.clone(), 1, s.origin()).unwrap();
    let r = wang_chain_report(&t, &f, &LambdaTable::uniform(1.0)).unwrap();
    // hexagon: λ₁ = 2 − 2cos(π/3)
    assert_eq!((r.vertices[0].link_vertices, r.vertices[0].link_edges), (6, 6));
    assert!((r.vertices[0].link_lambda - 1.0).abs() < 1e-12);

    let c = tetrahedron(s.clone()).unwrap();
    let f = EquivariantMap::constant(s.clone(), 4, s.origin()).unwrap();
    let r = wang_chain_report(&c, &f, &LambdaTable::uniform(3.0)).unwrap();
    assert!(r.vertices.iter().all(|v| (v.link_lambda - 3.0).abs() < 1e-12));

    let c = octahedron(s.clone()).unwrap();
    let f = EquivariantMap::constant(s.clone(), 6, s.origin()).unwrap();
    let r = wang_chain_report(&c, &f, &LambdaTable::uniform(2.0)).unwrap();
    assert!(r.vertices.iter().all(|v| (v.link_lambda - 2.0).abs() < 1e-12 && v.link_edges == 4));
}

#[test]
fn chain_on_a_constant_map_is_all_zero() {
    let h = ModelSpace::Hyperbolic(2);
    let c = tetrahedron(h.clone()).unwrap();
    let f = EquivariantMap::constant(h.clone(), 4, Point::hyperbolic_from_spatial(&[0.3, 0.1])).unwrap();
    let r = wang_chain_report(&c, &f, &LambdaTable::uniform(3.0)).unwrap();
    assert_eq!(r.q, 1);
    assert_eq!((r.energy, r.differential_total, r.comparison_total, r.gap_bound), (0.0, 0.0, 0.0, 0.0));
    assert!(r.passes());
    assert_eq!(r.gap_holds, Some(true));
}

/// `Σ_faces Σ_sides d²`, computed from the faces directly.
fn face_sum(c: &VoltageComplex, f: &EquivariantMap) -> f64 {
    let mut total = 0.0;
    for tri in c.triangles() {
        for d in tri {
            total += c.edge_energy(f, d.edge).unwrap();
        }
    }
    total
}

#[test]
fn comparison_and_counting_on_random_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let spaces = [ModelSpace::Euclidean(3), ModelSpace::Hyperbolic(3), ModelSpace::Spd(2)];
    for s in spaces {
        for (c, lambda) in [(tetrahedron(s.clone()).unwrap(), 3.0), (octahedron(s.clone()).unwrap(), 2.0)] {
            for _ in 0..20 {
                let f = EquivariantMap::random(s.clone(), c.vertex_count(), &mut rng, 1.0);
                let r = wang_chain_report(&c, &f, &LambdaTable::uniform(lambda)).unwrap();
                assert!(r.comparison_holds);
                assert!(r.vertices.iter().all(|v| v.slack >= -CHAIN_SLACK));
                assert!(r.counting_holds);
                assert!((r.comparison_total - 2.0 * r.energy).abs() <= 1e-10 * r.energy.max(1.0));
                assert!((r.comparison_total - face_sum(&c, &f)).abs() <= 1e-10 * r.energy.max(1.0));
                if let Some(split) = &r.split {
                    assert!(split.upper_holds);
                    assert!((split.e1 + split.e2 - r.energy).abs() < 1e-10 * r.energy.max(1.0));
                }
            }
        }
    }
}

#[test]
fn flat_torus_attains_equality() {
    let s = ModelSpace::Euclidean(2);
    let a = Isometry::euclidean_translation(&[1.0, 0.0]);
    let b = Isometry::euclidean_translation(&[0.5, 3f64.sqrt() / 2.0]);
    let c = torus(s.clone(), &a, &b).unwrap();
    let f = EquivariantMap::constant(s.clone(), 1, e(&[0.2, -0.7])).unwrap();
    let r = wang_chain_report(&c, &f, &LambdaTable::uniform(1.0)).unwrap();
    assert!((r.energy - 3.0).abs() < 1e-12);
    assert!(r.gap_asserted);
    assert!(r.gradient_residual < 1e-12);
    // Σ‖d(Df)‖² = (q+1)E = 2λE
    assert!((r.differential_total - 6.0).abs() < 1e-12);
    assert!((r.comparison_total - 6.0).abs() < 1e-12);
    assert!((r.gap_bound - 6.0).abs() < 1e-12);
    assert!(r.passes());
}

#[test]
fn gap_bound_on_harmonic_hyperbolic_torus() {
    // a boost and a rotation about its axis commute
    let h = ModelSpace::Hyperbolic(3);
    let a = Isometry::hyperbolic_boost(3, 0, 0.9);
    let b = Isometry::hyperbolic_rotation(3, 1, 2, 1.2).compose(&Isometry::hyperbolic_boost(3, 0, 0.4)).unwrap();
    let c = torus(h.clone(), &a, &b).unwrap();
    let f0 = EquivariantMap::new(h.clone(), vec![Point::hyperbolic_from_spatial(&[0.2, 0.5, -0.3])]).unwrap();
    let r = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
    assert_eq!(r.status, DescentStatus::Converged);
    assert!(r.residual <= 1e-6);
    let report = wang_chain_report(&c, &r.map, &LambdaTable::uniform(1.0)).unwrap();
    assert!(report.gap_asserted);
    assert_eq!(report.gap_holds, Some(true));
    assert!(report.gap_slack >= -EQ3_TOL);
    assert!((report.gap_bound - 2.0 * report.energy).abs() < 1e-9);
    assert!(report.passes());
}

#[test]
fn gap_bound_not_asserted_away_from_harmonic_maps() {
    let s = ModelSpace::Euclidean(2);
    let c = tetrahedron(s.clone()).unwrap();
    let f = EquivariantMap::new(s, vec![e(&[0.0, 0.0]), e(&[1.0, 0.0]), e(&[0.0, 1.0]), e(&[4.0, 4.0])]).unwrap();
    let r = wang_chain_report(&c, &f, &LambdaTable::uniform(3.0)).unwrap();
    assert!(!r.gap_asserted);
    assert_eq!(r.gap_holds, None);
}

#[test]
fn chain_errors() {
    let s = ModelSpace::Euclidean(1);
    let c = octahedron(s.clone()).unwrap();
    let f = EquivariantMap::constant(s.clone(), 6, s.origin()).unwrap();
    let partial = LambdaTable { special: Some(2.0), ..LambdaTable::default() };
    assert_eq!(wang_chain_report(&c, &f, &partial), Err(HarmonicError::MissingLambda(VertexClass::NonSpecial)));

    let loop_only = bouquet(s.clone(), &[Isometry::euclidean_translation(&[1.0])]).unwrap();
    let f = EquivariantMap::constant(s.clone(), 1, s.origin()).unwrap();
    assert!(matches!(
        wang_chain_report(&loop_only, &f, &LambdaTable::uniform(1.0)),
        Err(HarmonicError::LinkMismatch { .. })
    ));

    // a declared q that disagrees with the faces
    let faces = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let c = simplicial(s.clone(), vec![VertexClass::Generic; 4], &faces, Some(2)).unwrap();
    let f = EquivariantMap::constant(s.clone(), 4, s.origin()).unwrap();
    assert!(matches!(
        wang_chain_report(&c, &f, &LambdaTable::uniform(3.0)),
        Err(HarmonicError::LinkMismatch { count: 2, expected: 3, .. })
    ));
}

#[test]
fn map_shape_is_checked() {
    let s = ModelSpace::Euclidean(1);
    let c = tetrahedron(s.clone()).unwrap();
    let f = EquivariantMap::constant(s.clone(), 3, s.origin()).unwrap();
    assert!(matches!(c.energy(&f), Err(HarmonicError::MalformedInput(_))));
    let g = EquivariantMap::constant(ModelSpace::Euclidean(2), 4, ModelSpace::Euclidean(2).origin()).unwrap();
    assert!(matches!(c.energy(&g), Err(HarmonicError::MalformedInput(_))));
    assert!(EquivariantMap::new(ModelSpace::Spd(2), vec![Point::Spd(Mat::zeros(2, 2))]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_invariant_under_global_isometries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = ModelSpace::Hyperbolic(3);
        let a = Isometry::hyperbolic_boost(3, 0, 0.7);
        let b = Isometry::hyperbolic_rotation(3, 1, 2, 0.8);
        let c = torus(h.clone(), &a, &b).unwrap();
        let f = EquivariantMap::random(h.clone(), 1, &mut rng, 1.0);
        let g = Isometry::hyperbolic_boost(3, 2, 0.5).compose(&Isometry::hyperbolic_rotation(3, 0, 1, 1.3)).unwrap();
        let moved = c.conjugated(&g).unwrap();
        let e0 = c.energy(&f).unwrap();
        let e1 = moved.energy(&f.transformed(&g).unwrap()).unwrap();
        prop_assert!((e0 - e1).abs() < 1e-9);
    }

    #[test]
    fn comparison_holds_for_arbitrary_maps(seed in any::<u64>(), scale in 0.1f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = ModelSpace::Hyperbolic(2);
        let c = octahedron(h.clone()).unwrap();
        let f = EquivariantMap::random(h.clone(), 6, &mut rng, scale);
        let r = wang_chain_report(&c, &f, &LambdaTable::uniform(2.0)).unwrap();
        prop_assert!(r.comparison_holds);
        prop_assert!(r.counting_holds);
        prop_assert!(r.split.unwrap().upper_holds);
    }

    #[test]
    fn descent_never_raises_the_energy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = ModelSpace::Spd(2);
        let c = tetrahedron(s.clone()).unwrap();
        let f0 = EquivariantMap::random(s.clone(), 4, &mut rng, 1.0);
        let opts = DescentOptions { max_iter: 50, ..DescentOptions::default() };
        let r = harmonic_descent(&c, &f0, &opts).unwrap();
        for w in r.trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        if r.status == DescentStatus::Converged {
            prop_assert!(r.residual <= 1e-6);
        }
    }
}
