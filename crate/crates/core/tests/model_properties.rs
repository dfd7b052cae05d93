use pmelab_core::elliptic::{energy_residual, find_l0, poincare_bound, solve_bvp, time_map};
use pmelab_core::reaction::quadratic_sup_ratio;
use pmelab_core::waves::{
    limit_speed_ell, local_slope, shoot_q, wave_profile_x, wave_speed_m, OutcomeKind, EPS_REL,
};
use pmelab_core::ReactionModel;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn primitive_differentiates_to_rate(alpha in 0.0f64..0.99, p in 0.01f64..0.99) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let h = 1e-5;
        let fd = (model.primitive(p + h) - model.primitive(p - h)) / (2.0 * h);
        prop_assert!((fd - model.rate(p)).abs() < 1e-8);
        prop_assert_eq!(model.primitive(0.0), 0.0);
    }

    #[test]
    fn sup_ratio_dominates_samples(alpha in 0.0f64..0.99) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let k = quadratic_sup_ratio(alpha);
        for i in 1..=2000 {
            let p = i as f64 / 1000.0;
            prop_assert!(model.rate(p) / p <= k + 1e-12);
        }
    }

    #[test]
    fn bistable_sign_pattern(alpha in 0.01f64..0.99, t in 0.001f64..0.999) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        prop_assert!(model.rate(alpha * t) < 0.0);
        prop_assert!(model.rate(alpha + (1.0 - alpha) * t) > 0.0);
    }

    #[test]
    fn time_map_exceeds_poincare_bound(alpha in 0.0f64..0.3, frac in 0.02f64..0.98) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let gamma = frac * model.limit_speed().unwrap();
        let sample = time_map(&model, gamma).unwrap();
        prop_assert!(sample.length >= poincare_bound(&model) * (1.0 - 1e-9));
        prop_assert!((0.5 * gamma * gamma - model.primitive(sample.s0)).abs() < 1e-10);
    }

    #[test]
    fn local_slope_solves_characteristic_quadratic(
        alpha in 0.0f64..0.9,
        m in 1.5f64..300.0,
        c in -50.0f64..50.0,
    ) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let lam = local_slope(&model, m, c).unwrap();
        let a = -model.rate_derivative(1.0);
        let k = m - 1.0;
        prop_assert!(lam > 0.0);
        prop_assert!((lam * lam + c / k * lam - a).abs() <= 1e-12 * (1.0 + a + (c / k * lam).abs()));
    }

    #[test]
    fn density_jump_speeds_increase(ell1 in 0.0f64..0.99, ell2 in 0.0f64..0.99) {
        let model = ReactionModel::bistable_quadratic(0.0).unwrap();
        let (lo, hi) = if ell1 < ell2 { (ell1, ell2) } else { (ell2, ell1) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(limit_speed_ell(&model, lo).unwrap() < limit_speed_ell(&model, hi).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn advancing_speed_has_sharp_front(alpha in 0.0f64..0.3, log_m in 2.0f64..7.0) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let m = log_m.exp2();
        let w = wave_speed_m(&model, m).unwrap();
        prop_assert!(w.speed > 0.0);
        prop_assert!(w.sharp_front);
        prop_assert!(w.eps_robust);
        match shoot_q(&model, m, w.speed, EPS_REL).unwrap().kind {
            OutcomeKind::ReachedOrigin { q0 } => prop_assert!((q0 - w.speed).abs() <= 1e-6),
            other => prop_assert!(false, "unexpected {other:?}"),
        }
    }

    #[test]
    fn wave_profile_is_monotone_and_bounded(alpha in 0.0f64..0.3, log_m in 2.0f64..7.0) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let m = log_m.exp2();
        let c = wave_speed_m(&model, m).unwrap().speed;
        let prof = wave_profile_x(&model, m, c).unwrap();
        prop_assert!(prof.xs.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(prof.ps.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(prof.ps.iter().all(|&p| p > 0.0 && p <= model.p_max()));
    }

    #[test]
    fn profile_anchoring_is_a_translation(alpha in 0.05f64..0.3, level in 0.1f64..0.9) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let c = wave_speed_m(&model, 16.0).unwrap().speed;
        let prof = wave_profile_x(&model, 16.0, c).unwrap();
        let moved = prof.anchored_at(level).unwrap();
        let shift = prof.position_of(level).unwrap();
        for (x, xm) in prof.xs.iter().zip(&moved.xs) {
            prop_assert!((x - shift - xm).abs() <= 1e-8 * (1.0 + x.abs()));
        }
        prop_assert!(moved.position_of(level).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn critical_length_and_profiles(alpha in 0.0f64..0.3, stretch in 1.01f64..1.5) {
        let model = ReactionModel::bistable_quadratic(alpha).unwrap();
        let l0 = find_l0(&model).unwrap().l0;
        prop_assert!(l0 >= poincare_bound(&model) * (1.0 - 1e-9));
        prop_assert!(solve_bvp(&model, 0.99 * l0, 101).unwrap().is_empty());
        for prof in solve_bvp(&model, stretch * l0, 401).unwrap() {
            prop_assert!(prof.us.iter().all(|&u| u >= -1e-12 && u < model.p_max()));
            prop_assert!(energy_residual(&model, &prof).unwrap() < 1e-3);
        }
    }
}
