//! Cross-checks between the invariant-measure LP and Karp's minimum mean
//! cycle, plus the structural properties of optimal faces on graphs.

use minmeasure::graph::{
    alpha_function, decompose_into_cycles, karp_with_tilt, minimizing_measures_lp,
    random_cost_graph, rotation_vector,
};
use minmeasure::linalg;
use minmeasure::measure::DiscreteMeasure;
use minmeasure::rng;
use rand::Rng;

#[test]
fn lp_value_equals_karp_value_on_random_graphs() {
    for seed in 0..100u64 {
        let g = random_cost_graph(seed, 40, 200, 1);
        let mut rng = rng::stream(seed, 99);
        for _ in 0..5 {
            let c = vec![rng.random_range(-1.0..1.0)];
            let (karp_mean, cycle) = karp_with_tilt(&g, &c).unwrap();
            let costs = g.tilted_costs(&c).unwrap();
            assert!(
                (cycle.mean_cost(&costs) - karp_mean).abs() <= 1e-8,
                "seed {seed}: extracted cycle mean disagrees with Karp value"
            );
            let face = minimizing_measures_lp(&g, &c, None, 16, seed).unwrap();
            assert!(
                (face.value - karp_mean).abs() <= 1e-8,
                "seed {seed}: LP {} vs Karp {}",
                face.value,
                karp_mean
            );
        }
    }
}

#[test]
fn face_vertices_decompose_into_optimal_cycles() {
    for seed in 0..25u64 {
        let g = random_cost_graph(seed, 12, 40, 1);
        let face = minimizing_measures_lp(&g, &[0.0], None, 64, seed).unwrap();
        let costs = g.tilted_costs(&[0.0]).unwrap();
        for vertex in &face.vertices {
            let mu = DiscreteMeasure::from_lp_point(vertex).unwrap();
            let parts = decompose_into_cycles(&g, &mu, 1e-9).unwrap();
            assert!(!parts.is_empty());
            for (cycle, weight) in parts {
                if weight > 1e-7 {
                    assert!(
                        (cycle.mean_cost(&costs) - face.value).abs() <= 1e-7,
                        "seed {seed}: support cycle mean {} vs optimum {}",
                        cycle.mean_cost(&costs),
                        face.value
                    );
                }
            }
        }
    }
}

#[test]
fn alpha_is_convex_along_midpoints() {
    for seed in 0..10u64 {
        let g = random_cost_graph(seed, 10, 30, 2);
        let mut rng = rng::stream(seed, 5);
        for _ in 0..10 {
            let a = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let b = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let curve = alpha_function(&g, &[a, b, mid]).unwrap();
            let (fa, fb, fm) = (
                curve.samples[0].alpha,
                curve.samples[1].alpha,
                curve.samples[2].alpha,
            );
            assert!(fm <= 0.5 * (fa + fb) + 1e-9);
        }
    }
}

#[test]
fn alpha_subdifferential_contains_rotation_vectors() {
    let g = random_cost_graph(3, 8, 24, 1);
    let grid: Vec<Vec<f64>> = (-5..=5).map(|i| vec![i as f64 / 5.0]).collect();
    let curve = alpha_function(&g, &grid).unwrap();
    // supporting inequality alpha(c') >= rho . c' - untilted holds at every
    // sampled pair, with equality at the sample's own tilt
    for s in &curve.samples {
        let untilted = linalg::dot(&s.rotation, &s.c) - s.alpha;
        for t in &curve.samples {
            let support = linalg::dot(&s.rotation, &t.c) - untilted;
            assert!(t.alpha >= support - 1e-9);
        }
    }
}

#[test]
fn tilt_covariance_pre_tilted_costs_give_same_face() {
    for seed in 0..10u64 {
        let g = random_cost_graph(seed, 10, 30, 1);
        let c = vec![0.3];
        let face_tilted = minimizing_measures_lp(&g, &c, None, 64, 7).unwrap();
        let mut pre = g.clone();
        let costs = g.tilted_costs(&c).unwrap();
        for (e, tc) in pre.edges.iter_mut().zip(costs) {
            e.cost = tc;
            e.homology = vec![0];
        }
        let face_pre = minimizing_measures_lp(&pre, &[0.0], None, 64, 7).unwrap();
        assert!((face_tilted.value - face_pre.value).abs() <= 1e-8);
        assert_eq!(face_tilted.dimension, face_pre.dimension);
        // vertex sets coincide as sets
        for v in &face_tilted.vertices {
            let matched = face_pre
                .vertices
                .iter()
                .any(|u| u.iter().zip(v).all(|(a, b)| (a - b).abs() <= 1e-8));
            assert!(matched, "seed {seed}: vertex not found in pre-tilted face");
        }
    }
}

#[test]
fn rotation_is_affine_in_the_measure() {
    let g = random_cost_graph(11, 8, 20, 2);
    let ne = g.edges.len();
    let mut rng = rng::stream(11, 1);
    let a = DiscreteMeasure::new(rng::simplex_point(&mut rng, ne)).unwrap();
    let b = DiscreteMeasure::new(rng::simplex_point(&mut rng, ne)).unwrap();
    let t: f64 = rng.random();
    let mix = DiscreteMeasure::new(
        a.weights
            .iter()
            .zip(&b.weights)
            .map(|(x, y)| t * x + (1.0 - t) * y)
            .collect(),
    )
    .unwrap();
    let ra = rotation_vector(&a, &g).unwrap();
    let rb = rotation_vector(&b, &g).unwrap();
    let rm = rotation_vector(&mix, &g).unwrap();
    for i in 0..2 {
        assert!((rm[i] - (t * ra[i] + (1.0 - t) * rb[i])).abs() <= 1e-12);
    }
}
