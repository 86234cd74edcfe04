use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidlab_core::harmonic::complexes::{bouquet, octahedron, tetrahedron};
use rigidlab_core::harmonic::{harmonic_descent, wang_chain_report, DescentOptions, DescentStatus, LambdaTable};
use rigidlab_core::{EquivariantMap, Isometry, ModelSpace, Point};

fn coords(p: &Point) -> Vec<f64> {
    match p {
        Point::Euclidean(x) => x.clone(),
        _ => unreachable!(),
    }
}

/// Minimizer of `Σ|g x - x|²` for affine `g`, by linear least squares.
fn least_squares_fixed_point(space: &ModelSpace, gens: &[Isometry], n: usize) -> Vec<f64> {
    let mut rows = DMatrix::<f64>::zeros(n * gens.len(), n);
    let mut rhs = DVector::<f64>::zeros(n * gens.len());
    for (k, g) in gens.iter().enumerate() {
        let b = coords(&space.apply(g, &Point::Euclidean(vec![0.0; n])).unwrap());
        for j in 0..n {
            let mut ej = vec![0.0; n];
            ej[j] = 1.0;
            let col = coords(&space.apply(g, &Point::Euclidean(ej)).unwrap());
            for i in 0..n {
                rows[(k * n + i, j)] = col[i] - b[i] - if i == j { 1.0 } else { 0.0 };
            }
        }
        for i in 0..n {
            rhs[k * n + i] = -b[i];
        }
    }
    let sol = rows.svd(true, true).solve(&rhs, 1e-14).unwrap();
    sol.iter().copied().collect()
}

#[test]
fn euclidean_bouquet_reaches_least_squares_point() {
    let s = ModelSpace::Euclidean(2);
    let gens: Vec<Isometry> = [(0.7, [1.0, 0.0]), (-1.1, [0.0, 2.0]), (2.0, [-0.5, 0.3])]
        .iter()
        .map(|&(theta, t)| Isometry::euclidean_translation(&t).compose(&Isometry::euclidean_rotation(2, 0, 1, theta)).unwrap())
        .collect();
    let c = bouquet(s.clone(), &gens).unwrap();
    let f0 = EquivariantMap::constant(s.clone(), 1, Point::Euclidean(vec![3.0, -4.0])).unwrap();
    let r = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
    assert_eq!(r.status, DescentStatus::Converged);
    let want = least_squares_fixed_point(&s, &gens, 2);
    let got = coords(r.map.value(0));
    assert!(got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-6), "{got:?} vs {want:?}");
    let e_oracle = s.displacement(&gens, &Point::Euclidean(want)).unwrap();
    assert!((r.energy() - e_oracle).abs() < 1e-9);
}

#[test]
fn descent_then_chain_on_product_space() {
    let space = ModelSpace::product(vec![ModelSpace::Hyperbolic(2), ModelSpace::Spd(2), ModelSpace::Euclidean(1)]).unwrap();
    let c = octahedron(space.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f0 = EquivariantMap::random(space.clone(), c.vertex_count(), &mut rng, 1.5);
    let r = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
    assert_eq!(r.status, DescentStatus::Converged);
    assert!(r.trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(r.energy() < 1e-10);

    let lambdas = LambdaTable { generic: None, special: Some(2.0), nonspecial: Some(2.0) };
    let before = wang_chain_report(&c, &f0, &lambdas).unwrap();
    assert!(before.comparison_holds && before.counting_holds);
    assert!(!before.gap_asserted);
    let after = wang_chain_report(&c, &r.map, &lambdas).unwrap();
    assert!(after.passes());
}

#[test]
fn conjugate_voltages_move_the_minimizer() {
    let s = ModelSpace::Hyperbolic(2);
    let c = tetrahedron(s.clone()).unwrap();
    let h = Isometry::hyperbolic_boost(2, 1, 0.6);
    let conj = c.conjugated(&h).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f0 = EquivariantMap::random(s.clone(), 4, &mut rng, 1.0);
    let a = harmonic_descent(&c, &f0, &DescentOptions::default()).unwrap();
    let b = harmonic_descent(&conj, &f0.transformed(&h).unwrap(), &DescentOptions::default()).unwrap();
    assert!((a.energy() - b.energy()).abs() < 1e-9);
    assert!(a.map.transformed(&h).unwrap().max_distance(&b.map).unwrap() < 1e-6);
}
