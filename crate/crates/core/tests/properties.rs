use approx::assert_abs_diff_eq;
use curie_core::chain::{
    detailed_balance_residual, h_n_statistic, mag_generator, mag_log_weights,
    stationarity_residual, two_coord_generator, two_coord_log_weights, two_coord_stationary,
    ModelParams, StateSpace,
};
use curie_core::exact::{reduction_equality_check, transient, tv_distance, TransientSpec};
use curie_core::limit::{gaussian_kl, gaussian_tv_same_cov, pinsker_bound, Gaussian2, Mat2, OULimit};
use curie_core::mc::EmpiricalDist;
use curie_core::quadrature::QuadratureSpec;
use curie_core::scalar::{g, Beta};
use curie_core::ProbVector;
use proptest::prelude::*;

fn params(n: u64, b: f64, a: u64) -> ModelParams<f64> {
    ModelParams::new(n, Beta::new(b).unwrap(), a).unwrap()
}

fn small_chain() -> impl Strategy<Value = (u64, f64, u64)> {
    (2u64..24, 0.0f64..0.97).prop_flat_map(|(n, b)| (Just(n), Just(b), 0..=n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_is_odd_monotone_and_dominates(x in 0.0f64..1.0, dx in 1e-3f64..0.2, b in 0.0f64..0.95) {
        let beta = Beta::new(b).unwrap();
        let spec = QuadratureSpec::default();
        let gx = g(x, beta, &spec).unwrap();
        prop_assert_eq!(g(-x, beta, &spec).unwrap(), -gx);
        prop_assert!(gx >= x - 1e-15);
        let y = (x + dx).min(1.0);
        if y > x {
            prop_assert!(g(y, beta, &spec).unwrap() > gx);
        }
    }

    #[test]
    fn transient_conserves_probability((n, b, a) in small_chain(), t in 0.0f64..6.0, seed in 0usize..1000) {
        let p = params(n, b, a);
        let gen = two_coord_generator(&p);
        let start = ProbVector::point_mass(gen.space(), seed % gen.len()).unwrap();
        let out = transient(&gen, &start, t, &TransientSpec::default()).unwrap();
        let total: f64 = out.values().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(out.values().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn semigroup_property((n, b, a) in small_chain(), t1 in 0.0f64..3.0, t2 in 0.0f64..3.0) {
        let p = params(n, b, a);
        let gen = two_coord_generator(&p);
        let idx = gen.space().two_coord_index(p.start_state()).unwrap();
        let start = ProbVector::point_mass(gen.space(), idx).unwrap();
        let spec = TransientSpec::default();
        let direct = transient(&gen, &start, t1 + t2, &spec).unwrap();
        let mid = transient(&gen, &start, t1, &spec).unwrap();
        let two_step = transient(&gen, &mid, t2, &spec).unwrap();
        prop_assert!(tv_distance(&direct, &two_step).unwrap() < 1e-8);
    }

    #[test]
    fn tv_to_stationarity_non_increasing((n, b, a) in small_chain(), dt in 0.05f64..1.0) {
        let p = params(n, b, a);
        let gen = two_coord_generator(&p);
        let pi = two_coord_stationary(&p);
        let idx = gen.space().two_coord_index(p.start_state()).unwrap();
        let mut law = ProbVector::point_mass(gen.space(), idx).unwrap();
        let mut prev = tv_distance(&law, &pi).unwrap();
        for _ in 0..8 {
            law = transient(&gen, &law, dt, &TransientSpec::default()).unwrap();
            let d = tv_distance(&law, &pi).unwrap();
            prop_assert!(d <= prev + 1e-12);
            prev = d;
        }
    }

    #[test]
    fn uniformization_matches_rk((n, b, a) in small_chain(), t in 0.1f64..4.0) {
        let p = params(n, b, a);
        let gen = two_coord_generator(&p);
        let idx = gen.space().two_coord_index(p.start_state()).unwrap();
        let start = ProbVector::point_mass(gen.space(), idx).unwrap();
        let spec = TransientSpec::default();
        let u = transient(&gen, &start, t, &spec).unwrap();
        let r = transient(&gen, &start, t, &spec.with_method(curie_core::TransientMethod::RkOde)).unwrap();
        prop_assert!(tv_distance(&u, &r).unwrap() < 1e-8);
    }

    #[test]
    fn reduced_chains_are_reversible((n, b, a) in small_chain()) {
        let p = params(n, b, a);
        let m = mag_generator(&p);
        prop_assert!(detailed_balance_residual(&m, &mag_log_weights(&p)) < 1e-12);
        let two = two_coord_generator(&p);
        prop_assert!(detailed_balance_residual(&two, &two_coord_log_weights(&p)) < 1e-12);
        prop_assert!(stationarity_residual(&two, &two_coord_stationary(&p)) < 1e-12);
    }

    #[test]
    fn lumping_preserves_tv(n in 2u64..9, b in 0.0f64..0.97, t in 0.0f64..5.0, frac in 0.0f64..=1.0) {
        let a = (frac * n as f64).round() as u64;
        let d = reduction_equality_check(&params(n, b, a), t, &TransientSpec::default()).unwrap();
        prop_assert!(d < 1e-9);
    }

    #[test]
    fn h_statistic_is_nonnegative(n in 8u64..200, b in 0.0f64..0.9, frac in 0.55f64..0.95) {
        let p = ModelParams::with_fraction(n, Beta::new(b).unwrap(), frac).unwrap();
        prop_assume!(p.complement_size() > 0);
        let sp = StateSpace::TwoCoord { a: p.a_size(), b: p.complement_size() };
        for i in 0..sp.len() {
            let h = h_n_statistic(sp.two_coord_state(i), &p).unwrap();
            prop_assert!(h >= 0.0);
        }
    }

    #[test]
    fn lyapunov_holds_on_random_parameters(l in 0.5f64..0.999, b in 0.0f64..0.99) {
        let ou = OULimit::new(l, Beta::new(b).unwrap()).unwrap();
        let scale = ou.sigma_infinity().max_abs();
        prop_assert!(ou.lyapunov_residual() <= 1e-14 * scale.max(1.0));
    }

    #[test]
    fn matexp_is_a_semigroup(l in 0.5f64..=1.0, b in 0.0f64..0.99, s in 0.0f64..4.0, t in 0.0f64..4.0) {
        let ou = OULimit::new(l, Beta::new(b).unwrap()).unwrap();
        let lhs = ou.matexp(s + t).unwrap();
        let rhs = ou.matexp(s).unwrap() * ou.matexp(t).unwrap();
        prop_assert!((lhs - rhs).max_abs() <= 1e-12 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn gaussian_tv_within_pinsker(m0 in -2.0f64..2.0, m1 in -2.0f64..2.0, v0 in 0.2f64..3.0, v1 in 0.2f64..3.0, r in -0.9f64..0.9) {
        let off = r * (v0 * v1).sqrt();
        let cov = Mat2::new(v0, off, off, v1);
        let tv = gaussian_tv_same_cov([m0, m1], &cov).unwrap();
        let p = Gaussian2::new([0.0, 0.0], cov).unwrap();
        let q = Gaussian2::new([m0, m1], cov).unwrap();
        let bound = pinsker_bound(gaussian_kl(&p, &q).unwrap());
        prop_assert!((0.0..=1.0).contains(&tv));
        prop_assert!(tv <= bound + 1e-12);
    }

    #[test]
    fn empirical_merge_is_associative_and_commutative(xs in prop::collection::vec(0usize..7, 0..40), ys in prop::collection::vec(0usize..7, 0..40), zs in prop::collection::vec(0usize..7, 0..40)) {
        let sp = StateSpace::Magnetization { n: 6 };
        let build = |v: &[usize]| {
            let mut d = EmpiricalDist::new(sp);
            v.iter().for_each(|&i| d.record(i));
            d
        };
        let (x, y, z) = (build(&xs), build(&ys), build(&zs));
        let mut left = x.clone();
        left.merge(&y).unwrap();
        left.merge(&z).unwrap();
        let mut yz = y.clone();
        yz.merge(&z).unwrap();
        let mut right = yz.clone();
        right.merge(&x).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.total(), left.counts().map(|(_, c)| c).sum::<u64>());
    }
}

#[test]
fn psi_decreases_in_theta_and_lambda() {
    let beta = Beta::new(0.4).unwrap();
    let mut prev = f64::INFINITY;
    for k in -20..=20 {
        let v = curie_core::limit::psi_profile(beta, k as f64 * 0.25).unwrap();
        assert!(v < prev);
        prev = v;
    }
    let full = curie_core::limit::psi_lambda(1.0, beta, 0.0).unwrap();
    let part = curie_core::limit::psi_lambda(0.75, beta, 0.0).unwrap();
    assert!(part < full);
    assert_abs_diff_eq!(curie_core::limit::psi_lambda(0.5, beta, 0.0).unwrap(), 0.0, epsilon = 1e-15);
}
