use curie_core::chain::{
    mag_generator, mag_stationary, time_to_theta, two_coord_generator, ModelParams,
};
use curie_core::exact::{
    distance_curve, expectation, moment_decay_point, moment_decay_suite, reduction_equality_check,
    transient, tv_distance, TransientMethod, TransientSpec,
};
use curie_core::limit::psi_profile;
use curie_core::quadrature::QuadratureSpec;
use curie_core::scalar::{f_n_table, Beta};
use curie_core::{Error, ProbVector};

fn params(n: u64, b: f64, a: u64) -> ModelParams<f64> {
    ModelParams::new(n, Beta::new(b).unwrap(), a).unwrap()
}

#[test]
fn uniformization_and_rk_agree_on_n64() {
    let p = params(64, 0.5, 64);
    let gen = mag_generator(&p);
    let start = ProbVector::point_mass(gen.space(), 64).unwrap();
    let spec = TransientSpec::default();
    let u = transient(&gen, &start, 2.0, &spec).unwrap();
    let r = transient(&gen, &start, 2.0, &spec.with_method(TransientMethod::RkOde)).unwrap();
    assert!(tv_distance(&u, &r).unwrap() < 1e-8);
}

#[test]
fn beta_zero_is_binomial() {
    // Independent spins: each is +1 at time t w.p. (1 + e^{-t})/2.
    let n = 40u64;
    let p = params(n, 0.0, n);
    let gen = mag_generator(&p);
    let start = ProbVector::point_mass(gen.space(), n as usize).unwrap();
    let t = 0.7;
    let out = transient(&gen, &start, t, &TransientSpec::default()).unwrap();
    let q: f64 = (1.0 + (-t as f64).exp()) / 2.0;
    let mut ln_choose = 0.0;
    for j in 0..=n {
        if j > 0 {
            ln_choose += ((n - j + 1) as f64).ln() - (j as f64).ln();
        }
        let want = (ln_choose + j as f64 * q.ln() + (n - j) as f64 * (1.0 - q).ln()).exp();
        assert!((out.values()[j as usize] - want).abs() < 1e-12, "j={j}");
    }
}

#[test]
fn reduction_named_case() {
    let p = params(6, 0.8, 4);
    assert!(reduction_equality_check(&p, 1.3, &TransientSpec::default()).unwrap() <= 1e-9);
    let q = params(5, 0.0, 2);
    assert!(reduction_equality_check(&q, 0.0, &TransientSpec::default()).unwrap() <= 1e-12);
}

#[test]
fn curve_is_monotone_and_near_profile() {
    let p = params(2048, 0.0, 2048);
    let thetas: Vec<f64> = (-8..=12).map(|k| k as f64 * 0.25).collect();
    let curve = distance_curve(&p, &thetas, &TransientSpec::default()).unwrap();
    for w in curve.windows(2) {
        assert!(w[1].1.tv <= w[0].1.tv + 1e-12);
    }
    for (th, r) in &curve {
        assert!((0.0..=1.0).contains(&r.tv));
        let psi = psi_profile(Beta::new(0.0).unwrap(), *th).unwrap();
        assert!((r.tv - psi).abs() < 0.01, "theta={th}");
        assert!((r.t - time_to_theta(2048.0, p.beta(), *th)).abs() < 1e-12);
    }
}

#[test]
fn curve_keeps_input_order() {
    let p = params(100, 0.3, 70);
    let spec = TransientSpec::default();
    let a = distance_curve(&p, &[1.0, -1.0, 0.0], &spec).unwrap();
    let b = distance_curve(&p, &[-1.0, 0.0, 1.0], &spec).unwrap();
    assert_eq!(a[0].0, 1.0);
    assert!((a[0].1.tv - b[2].1.tv).abs() < 1e-12);
    assert!((a[1].1.tv - b[0].1.tv).abs() < 1e-12);
}

#[test]
fn f_mean_vanishes_under_symmetric_stationary_law() {
    let p = params(50, 0.0, 50);
    let f = f_n_table(50, p.beta(), &QuadratureSpec::default()).unwrap();
    assert!(expectation(&mag_stationary(&p), |i| f[i]).abs() < 1e-15);
}

#[test]
fn beta_zero_first_moment_decays_exponentially() {
    // At β = 0, f_n(k) = k/n and E[Y_t] = e^{-t} k₀ exactly.
    let n = 512u64;
    let p = ModelParams::with_fraction(n, Beta::new(0.0).unwrap(), 0.75).unwrap();
    let row = moment_decay_point(&p, 2.0, &TransientSpec::default()).unwrap();
    let k0 = p.start_magnetization() as f64;
    assert!((row.first_moment - (-row.t).exp() * k0 / n as f64).abs() < 1e-12);
    assert!(row.scaled_first_deviation() < 1e-9);
}

#[test]
fn h_mean_stays_order_one_over_n() {
    let r = moment_decay_suite(
        Beta::new(0.3).unwrap(),
        0.75,
        &[256, 512, 1024],
        2.0,
        &TransientSpec::default(),
    )
    .unwrap();
    let scaled: Vec<f64> = r.rows.iter().map(|x| x.scaled_h()).collect();
    assert!(scaled.iter().all(|&x| x > 0.0 && x < 50.0), "{scaled:?}");
    assert!(r.h_spread() < 2.0);
}

#[test]
fn variance_ratio_decreases_in_offset() {
    let p = ModelParams::with_fraction(1024, Beta::new(0.3).unwrap(), 0.75).unwrap();
    let spec = TransientSpec::default();
    let ratios: Vec<f64> = [0.5, 1.0, 2.0, 3.0]
        .iter()
        .map(|&c| moment_decay_point(&p, c, &spec).unwrap().variance_ratio())
        .collect();
    for w in ratios.windows(2) {
        assert!(w[1] < w[0], "{ratios:?}");
    }
}

#[test]
fn moment_checks_reject_degenerate_sets() {
    let p = params(64, 0.3, 64);
    assert!(matches!(
        moment_decay_point(&p, 2.0, &TransientSpec::default()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn large_chain_long_time_is_stationary() {
    let p = ModelParams::with_fraction(60, Beta::new(0.5).unwrap(), 0.75).unwrap();
    let gen = two_coord_generator(&p);
    let idx = gen.space().two_coord_index(p.start_state()).unwrap();
    let start = ProbVector::point_mass(gen.space(), idx).unwrap();
    let out = transient(&gen, &start, 60.0, &TransientSpec::default()).unwrap();
    let pi = curie_core::chain::two_coord_stationary(&p);
    assert!(tv_distance(&out, &pi).unwrap() < 1e-8);
}
