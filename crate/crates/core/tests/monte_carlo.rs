use curie_core::chain::{two_coord_generator, ModelParams, TwoCoordState};
use curie_core::exact::{transient, tv_distance, TransientSpec};
use curie_core::limit::psi_lambda;
use curie_core::mc::{
    designated_start, holding_time_check, kappa_statistic_gap, kappa_statistic_gap_mc,
    ou_moment_check, simulate_full_with_sites, simulate_two_coord, SimSpec,
};
use curie_core::scalar::Beta;
use curie_core::ProbVector;

fn params(n: u64, b: f64, a: u64) -> ModelParams<f64> {
    ModelParams::new(n, Beta::new(b).unwrap(), a).unwrap()
}

#[test]
fn symmetric_law_after_long_time() {
    let p = params(64, 0.0, 40);
    let spec = SimSpec::at_times(20_000, 1, &[30.0]).unwrap();
    let d = &simulate_two_coord(&p, p.start_state(), &spec).unwrap()[0];
    let sp = d.space();
    let mean = d.mean(|k| sp.two_coord_state(k).u as f64);
    let var = d.mean(|k| (sp.two_coord_state(k).u as f64 - mean).powi(2));
    let se = (var / d.total() as f64).sqrt();
    assert!(mean.abs() < 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn independent_spins_at_beta_zero() {
    let p = params(12, 0.0, 5);
    let times = [0.3, 1.5];
    let trajectories = 40_000u64;
    let spec = SimSpec::at_times(trajectories, 2, &times).unwrap();
    let out = simulate_full_with_sites(&p, &designated_start(&p), &spec).unwrap();
    for (r, &t) in times.iter().enumerate() {
        let q = (1.0 + (-t as f64).exp()) / 2.0;
        let se = (q * (1.0 - q) / trajectories as f64).sqrt();
        for (i, &c) in out.agreement[r].iter().enumerate() {
            let phat = c as f64 / trajectories as f64;
            assert!((phat - q).abs() < 3.0 * se, "t={t} site={i}: {phat} vs {q}");
        }
    }
}

#[test]
fn empirical_law_within_predicted_histogram_bias() {
    // Two-coordinate chain with a nontrivial complement: the raw-histogram
    // TV is dominated by sampling noise, E ≈ ½ Σ √(2p(1-p)/(πN)).
    let p = ModelParams::with_fraction(256, Beta::new(0.5).unwrap(), 0.75).unwrap();
    let samples = 100_000u64;
    let spec = SimSpec::at_times(samples, 21, &[1.0]).unwrap();
    let emp = &simulate_two_coord(&p, p.start_state(), &spec).unwrap()[0];
    let g = two_coord_generator(&p);
    let idx = g.space().two_coord_index(p.start_state()).unwrap();
    let exact = transient(&g, &ProbVector::point_mass(g.space(), idx).unwrap(), 1.0, &TransientSpec::default())
        .unwrap();
    let predicted: f64 = 0.5
        * exact
            .values()
            .iter()
            .map(|&x| (2.0 * x * (1.0 - x) / (std::f64::consts::PI * samples as f64)).sqrt())
            .sum::<f64>();
    let tv = emp.tv_to(&exact).unwrap();
    assert!(tv <= 1.25 * predicted, "tv {tv} predicted {predicted}");
    assert!(tv >= 0.75 * predicted, "tv {tv} predicted {predicted}");
}

#[test]
fn identical_across_thread_counts() {
    let p = params(80, 0.4, 50);
    let spec = SimSpec::at_times(3_000, 77, &[0.5, 2.0]).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    simulate_two_coord(&p, p.start_state(), &spec).unwrap(),
                    simulate_full_with_sites(&p, &designated_start(&p), &spec).unwrap(),
                )
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn holding_times() {
    let p = params(100, 0.9, 60);
    let r = holding_time_check(&p, TwoCoordState { u: 20, v: 0 }, 50_000, 3).unwrap();
    assert!(r.z_score().abs() < 3.0, "{r:?}");
}

#[test]
fn ou_mean_at_beta_zero() {
    let n = 4096u64;
    let p = ModelParams::with_fraction(n, Beta::new(0.0).unwrap(), 0.5).unwrap();
    let start = TwoCoordState { u: 64, v: -32 };
    let spec = SimSpec::at_times(100_000, 31, &[1.0]).unwrap();
    let row = &ou_moment_check(&p, start, &spec).unwrap()[0];
    let e = (-1.0f64).exp();
    assert!((row.mean[0].target - e).abs() < 1e-15);
    assert!((row.mean[1].target + 0.5 * e).abs() < 1e-15);
    assert!(row.mean.iter().all(|m| m.within(4.0)), "{row:?}");
}

#[test]
fn ou_covariance_near_stationarity() {
    let p = ModelParams::with_fraction(1024, Beta::new(0.4).unwrap(), 0.75).unwrap();
    let start = TwoCoordState { u: 32, v: 0 };
    let spec = SimSpec::at_times(20_000, 32, &[8.0]).unwrap();
    let row = &ou_moment_check(&p, start, &spec).unwrap()[0];
    assert!(row.cov.iter().all(|c| c.within(4.0)), "{row:?}");
}

#[test]
fn half_space_gap_properties() {
    let spec = TransientSpec::default();
    let b = Beta::new(0.3).unwrap();
    let p = ModelParams::with_fraction(1024, b, 0.75).unwrap();
    let k = kappa_statistic_gap(&p, 0.0, &spec).unwrap();
    let psi = psi_lambda(0.75, b, 0.0).unwrap();
    assert!((k.gap - psi).abs() < 0.05, "gap {} psi {psi}", k.gap);
    assert!(k.gap <= k.magnetization_tv + 1e-12);
    let late = kappa_statistic_gap(&p, 12.0, &spec).unwrap();
    assert!(late.gap.abs() < 1e-3);
    // The magnetization law never exceeds the two-coordinate distance.
    let g = two_coord_generator(&p);
    let idx = g.space().two_coord_index(p.start_state()).unwrap();
    let law = transient(&g, &ProbVector::point_mass(g.space(), idx).unwrap(), k.t, &spec).unwrap();
    let two_tv = tv_distance(&law, &curie_core::chain::two_coord_stationary(&p)).unwrap();
    assert!(k.gap <= two_tv);
}

#[test]
fn simulated_gap_agrees_with_exact() {
    let p = ModelParams::with_fraction(256, Beta::new(0.3).unwrap(), 0.75).unwrap();
    let exact = kappa_statistic_gap(&p, 0.5, &TransientSpec::default()).unwrap().gap;
    let trajectories = 40_000u64;
    let mc = kappa_statistic_gap_mc(&p, 0.5, trajectories, 8).unwrap();
    let se = (0.25 / trajectories as f64).sqrt();
    assert!((mc - exact).abs() < 4.0 * se, "{mc} vs {exact}");
}
