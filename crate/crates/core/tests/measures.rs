use catscale::dynamics::{evolve, evolve_classical, CatMapSpec, NoiseSpec, RunConfig};
use catscale::measures::{k1_distance_grid, k_epsilon, measure_lambda2, track_extrema, LAMBDA2_SIGMA_SQ};
use catscale::phase_space::{gaussian_density, RealGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_density(size: usize, rng: &mut ChaCha8Rng) -> RealGrid<f64> {
    let raw: Vec<f64> = (0..size * size).map(|_| rng.random_range(0.2..2.0)).collect();
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    RealGrid::from_vec(size, raw.iter().map(|v| v / mean).collect()).unwrap()
}

/// `Tr[P ln(Q/P)] + Tr[Q ln(P/Q)]` with the trace as a grid mean.
fn symmetrized_kl(p: &RealGrid<f64>, q: &RealGrid<f64>) -> f64 {
    let n = p.values().len() as f64;
    p.values()
        .iter()
        .zip(q.values())
        .map(|(&a, &b)| a * (b / a).ln() + b * (a / b).ln())
        .sum::<f64>()
        / n
}

#[test]
fn small_epsilon_approaches_symmetrized_kl() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let p = random_density(16, &mut rng);
        let q = random_density(16, &mut rng);
        let k = k_epsilon(&p, &q, 1e-4).unwrap();
        let oracle = symmetrized_kl(&p, &q);
        assert!((k - oracle).abs() <= 1e-3, "{k} vs {oracle}");
    }
}

#[test]
fn small_epsilon_error_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = random_density(12, &mut rng);
    let q = random_density(12, &mut rng);
    let oracle = symmetrized_kl(&p, &q);
    let err = |e: f64| (k_epsilon(&p, &q, e).unwrap() - oracle).abs();
    for e in [1e-2, 4e-3, 1e-3] {
        let ratio = err(e) / err(e / 2.0);
        assert!((1.8..=2.2).contains(&ratio), "epsilon {e}: ratio {ratio}");
    }
}

#[test]
fn unit_epsilon_is_negated_k1() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let p = random_density(10, &mut rng);
        let q = random_density(10, &mut rng);
        let k = k_epsilon(&p, &q, 1.0).unwrap();
        let d = k1_distance_grid(&p, &q).unwrap();
        assert!((k + d).abs() <= 1e-12, "{k} vs {d}");
        assert!(k <= 0.0);
    }
}

#[test]
fn lambda2_near_twice_lyapunov() {
    let map = CatMapSpec::<f64>::default_map();
    let l = measure_lambda2(&map, 256, 12).unwrap();
    let anchor = 2.0 * map.lyapunov();
    assert!((l / anchor - 1.0).abs() <= 0.15, "{l} vs {anchor}");
}

#[test]
fn lambda2_stable_under_window_doubling() {
    let map = CatMapSpec::<f64>::default_map();
    let a = measure_lambda2(&map, 256, 12).unwrap();
    let b = measure_lambda2(&map, 512, 12).unwrap();
    assert!((a / b - 1.0).abs() < 0.05, "{a} vs {b}");
}

#[test]
fn noiseless_growth_matches_rate() {
    let map = CatMapSpec::<f64>::default_map();
    let rate = measure_lambda2(&map, 256, 12).unwrap();
    let rho = gaussian_density((0.5, 0.5), LAMBDA2_SIGMA_SQ, 256).unwrap();
    let chi = evolve_classical(&rho, &map, &NoiseSpec::new(0.0).unwrap(), 3).unwrap();
    let step = (chi[3] / chi[2]).ln();
    assert!((step / rate - 1.0).abs() < 0.15, "{step} vs {rate}");
}

#[test]
fn initial_distance_small_on_default_dimensions() {
    let map = CatMapSpec::<f64>::default_map();
    for n in [16, 23, 32, 45, 64, 91, 128] {
        let mut c = RunConfig::new(n, 1e-3, map).unwrap();
        c.t_m = 3;
        let trace = evolve(&c).unwrap();
        assert!(trace.k1_distance()[0] < 1e-3, "N = {n}: {}", trace.k1_distance()[0]);
    }
}

#[test]
fn strong_noise_relaxes_both_sides() {
    let map = CatMapSpec::<f64>::default_map();
    let c = RunConfig::new(32, 0.1, map).unwrap();
    let trace = evolve(&c).unwrap();
    assert!(*trace.k1_distance().last().unwrap() < 1e-4);
    let e = track_extrema(&trace, c.t_burn).unwrap();
    assert!(e.k1_max < 1e-3, "{}", e.k1_max);
}

#[test]
fn trace_bookkeeping() {
    let map = CatMapSpec::<f64>::default_map();
    let c = RunConfig::new(64, 1e-3, map).unwrap();
    let trace = evolve(&c).unwrap();
    assert_eq!(trace.steps(), 40);
    for series in [
        trace.k1_distance(),
        trace.chi2_classical(),
        trace.chi2_quantum(),
        trace.d_chi2_quantum(),
    ] {
        assert_eq!(series.len(), 41);
    }
    for (dq, q) in trace.d_chi2_quantum().iter().zip(trace.chi2_quantum()) {
        assert_eq!(*dq, 1e-3 * q);
    }
}
