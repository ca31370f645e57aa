mod common;

use receptor_capacity::capacity_solver::SolverConfig;
use receptor_capacity::{
    binomial_row, build_channel, ideal_capacity, markov_capacity, mutual_information, ProbabilityGrid,
};

#[test]
fn binomial_row_matches_exact_rational_product() {
    let row = binomial_row(0.3, 100).unwrap();
    let exact = common::exact_binomial_pmf(30, 100, 0.3);
    assert!(((row[30] - exact) / exact).abs() < 1e-12, "{} vs {exact}", row[30]);
}

#[test]
fn binomial_row_matches_exact_for_large_n() {
    // far tails and the bulk of a large row
    for (p, n) in [(0.01, 2000u32), (0.5, 1500), (0.999, 600)] {
        let row = binomial_row(p, n as usize).unwrap();
        for k in [0, 1, n / 3, n / 2, n - 1, n] {
            let exact = common::exact_binomial_pmf(k, n, p);
            if exact < 1e-300 {
                continue;
            }
            let rel = ((row[k as usize] - exact) / exact).abs();
            assert!(rel < 1e-11, "p={p} n={n} k={k}: rel err {rel:e}");
        }
    }
}

#[test]
fn mutual_information_matches_double_sum() {
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let grid = common::random_grid(&mut rng, 30);
        for n in [1, 3, 17, 32] {
            let channel = build_channel(&grid, n).unwrap();
            let got = mutual_information(&grid, &channel).unwrap();
            let want = common::double_sum_mi(grid.points(), grid.masses(), n);
            assert!((got - want).abs() < 1e-9, "n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn frozen_capacities() {
    // from an independent log-domain Blahut-Arimoto run, 1025-point grid
    let cfg = SolverConfig::default();
    for (n, want) in [(2, 1.0874628412503395), (16, 2.0202871332336616), (64, 2.8233908458790786)] {
        let c = ideal_capacity(n, 1025, &cfg).unwrap().capacity_bits;
        assert!((c - want).abs() < 2e-6, "N={n}: {c} vs {want}");
    }
    let c = markov_capacity(32, 0.5, 1025, &cfg).unwrap().capacity_bits;
    assert!((c - 1.8490868414547932).abs() < 2e-6, "{c}");
}

#[test]
fn two_point_brute_force_bounds_capacity() {
    // Any two-point input on the grid is feasible, so the brute-force optimum is a
    // lower bound. It is exactly 1 bit ({0, 1} is noiseless), and for N = 5 the
    // optimum needs more than two mass points.
    let r = ideal_capacity(5, 101, &SolverConfig::default()).unwrap();
    let best = common::brute_force_two_point(5, 1.0, 101);
    assert!((best - 1.0).abs() < 1e-9, "{best}");
    assert!(r.capacity_bits > best + 0.3, "{}", r.capacity_bits);
    assert!(r.optimal_input.masses().iter().filter(|&&m| m > 1e-6).count() > 2);
}

#[test]
fn markov_single_receptor_q1() {
    // N = 1, q = 1: inputs in [0, 1/2], a Z-like binary channel; best input
    // {0, 1/2} with weights (3/5, 2/5) gives log2(5/4).
    let r = markov_capacity(1, 1.0, 201, &SolverConfig::default()).unwrap();
    assert!((r.capacity_bits - (1.25f64).log2()).abs() < 1e-6, "{}", r.capacity_bits);
    let brute = common::brute_force_two_point(1, 0.5, 51);
    assert!((brute - (1.25f64).log2()).abs() < 1e-4, "{brute}");
}

#[test]
fn point_mass_carries_no_information() {
    let g = ProbabilityGrid::point_mass(0.37).unwrap();
    let ch = build_channel(&g, 20).unwrap();
    assert_eq!(mutual_information(&g, &ch).unwrap(), 0.0);
}

#[test]
fn two_receptors_agree_with_plain_iteration_on_finer_grid() {
    let r = ideal_capacity(2, 101, &SolverConfig::default()).unwrap();
    let fine: Vec<f64> = (0..1001).map(|k| k as f64 / 1000.0).collect();
    let reference = common::plain_blahut_arimoto(&fine, 2, 20_000);
    assert!((r.capacity_bits - reference).abs() < 1e-5, "{} vs {reference}", r.capacity_bits);
}

#[test]
fn grid_refinement_is_stable() {
    let cfg = SolverConfig::default();
    for n in [1, 8, 32, 128] {
        let coarse = ideal_capacity(n, 513, &cfg).unwrap();
        let fine = ideal_capacity(n, 1025, &cfg).unwrap();
        assert!((fine.capacity_bits - coarse.capacity_bits).abs() < 1e-3, "N={n}");
        assert!(fine.capacity_bits <= ((n + 1) as f64).log2());
        let total: f64 = fine.optimal_input.masses().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
#[ignore = "known unattainable: the arcsine prior trails capacity by about 0.12 bits at N = 64"]
fn arcsine_prior_within_005_bits_for_large_n() {
    use receptor_capacity::input_priors::arcsine_on_points;
    for n in [64, 128] {
        let r = ideal_capacity(n, 1025, &SolverConfig::default()).unwrap();
        let prior = arcsine_on_points(r.optimal_input.points()).unwrap();
        let i = mutual_information(&prior, &build_channel(&prior, n).unwrap()).unwrap();
        assert!(r.capacity_bits - i <= 0.05, "N={n}: {} - {i}", r.capacity_bits);
    }
}
