use sep_core::exact::{generator_matrix, transient_distribution, StateIndex};
use sep_core::model::binomial_pmf;
use sep_core::{dynkin_martingale, rng, sample_initial, Configuration, ModelParams, Profile, SimulationState, TrajectoryOptions};

fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[test]
fn empirical_law_matches_matrix_exponential() {
    let runs = 40_000;
    let t = 0.1;
    for (alpha, n, theta) in [(1u32, 4usize, 0.0), (2, 4, 1.0), (2, 3, -0.5), (1, 2, 2.0)] {
        let p = ModelParams::new(alpha, n, theta, 0.8, 0.2, 0.6, 0.4).unwrap();
        let g = generator_matrix(&p).unwrap();
        let idx = StateIndex::new(alpha, n - 1, 256).unwrap();
        let start = Configuration::empty(alpha, n - 1);
        let mut mu = vec![0.0; idx.len()];
        mu[idx.encode(&start).unwrap()] = 1.0;
        // The chain runs on the diffusive clock: macroscopic t is tN² of 𝓛_N.
        let micro = t * (n * n) as f64;
        let exact = transient_distribution(&g, &mu, micro).unwrap();
        let mut counts = vec![0.0; idx.len()];
        for r in 0..runs {
            let mut s = SimulationState::with_rng(p, start.clone(), rng::stream(17, 2, r), 17).unwrap();
            s.run_until(t).unwrap();
            counts[idx.encode(s.config()).unwrap()] += 1.0 / runs as f64;
        }
        let tv = total_variation(&counts, &exact);
        assert!(tv <= 0.02, "alpha={alpha} n={n} theta={theta} tv={tv}");
    }
}

#[test]
fn equilibrium_marginals_are_preserved() {
    let (alpha, n, varrho) = (2u32, 12usize, 0.3);
    let runs = 2_000;
    for theta in [0.0, 1.0, 2.0] {
        let p = ModelParams::equilibrium(alpha, n, theta, varrho).unwrap();
        let g = Profile::constant(alpha as f64 * varrho);
        let sites = [1usize, 6, 11];
        let mut counts = vec![[0.0f64; 3]; sites.len()];
        for r in 0..runs {
            let init = sample_initial(&p, &g, &mut rng::stream(5, 1, r)).unwrap();
            let mut s = SimulationState::with_rng(p, init, rng::stream(5, 2, r), 5).unwrap();
            s.run_until(0.05).unwrap();
            for (k, &x) in sites.iter().enumerate() {
                counts[k][s.config().get(x) as usize] += 1.0;
            }
        }
        for (k, &x) in sites.iter().enumerate() {
            for j in 0..=alpha {
                let q = binomial_pmf(alpha, j, varrho);
                let freq = counts[k][j as usize] / runs as f64;
                let se = (q * (1.0 - q) / runs as f64).sqrt();
                assert!((freq - q).abs() <= 3.0 * se, "theta={theta} x={x} k={j}: {freq} vs {q}");
            }
        }
    }
}

#[test]
fn dynkin_martingale_has_zero_mean_and_predicted_variance() {
    let runs = 500;
    let times = [0.005, 0.01, 0.02];
    let g = |u: f64| (std::f64::consts::PI * u).sin() + 0.5 * u;
    for theta in [0.0, 1.0, 1.5] {
        let p = ModelParams::new(2, 40, theta, 0.8, 0.2, 0.8, 0.2).unwrap();
        let profile = Profile::linear(1.5, 0.4);
        let mut values = vec![Vec::with_capacity(runs); times.len()];
        let mut excess = vec![Vec::with_capacity(runs); times.len()];
        for r in 0..runs as u64 {
            let init = sample_initial(&p, &profile, &mut rng::stream(23, 1, r)).unwrap();
            let mut s = SimulationState::with_rng(p, init, rng::stream(23, 2, r), 23).unwrap();
            let opts = TrajectoryOptions { keep_configs: false, keep_event_log: true };
            let rec = s.record_trajectory(&[*times.last().unwrap()], 4, opts).unwrap();
            let m = dynkin_martingale(&rec, &p, g, &times).unwrap();
            for k in 0..times.len() {
                values[k].push(m.values[k]);
                excess[k].push(m.values[k] * m.values[k] - m.quadratic_variation[k]);
            }
        }
        let stats = |v: &[f64]| {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (v.len() - 1) as f64;
            (mean, (var / v.len() as f64).sqrt())
        };
        for k in 0..times.len() {
            let (mean, se) = stats(&values[k]);
            assert!(mean.abs() <= 3.0 * se, "theta={theta} t={}: mean {mean} se {se}", times[k]);
            let (mean, se) = stats(&excess[k]);
            assert!(mean.abs() <= 3.0 * se, "theta={theta} t={}: E[M²−⟨M⟩] {mean} se {se}", times[k]);
        }
    }
}
