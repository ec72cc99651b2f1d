use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use gnu_msd::analytic::{codespace_projection, wrap_angle, InputEnsemble};
use gnu_msd::closed_form::abc_closed;
use gnu_msd::datasets::{figure, FigureId};
use gnu_msd::gnu::GnuParams;
use gnu_msd::oracle::{build_rho_n, project_and_decode};
use gnu_msd::protocols::{find_threshold, Composition, ErrorCurve, HFormula, MagicTarget};
use gnu_msd::solver::{output_magic, solve_for_magic};
use gnu_msd::Execution;
use proptest::prelude::*;

fn small_code() -> impl Strategy<Value = GnuParams> {
    (1u32..=3, 1u32..=3, 1u32..=4).prop_filter_map("fits the oracle", |(g, n, u)| {
        let qubits = g * n * u;
        (2..=8)
            .contains(&qubits)
            .then(|| GnuParams::with_qubits(g, n, qubits).unwrap())
    })
}

fn any_code() -> impl Strategy<Value = GnuParams> {
    (1u32..=4, 1u32..=4, 1u32..=5).prop_filter_map("at most 60 qubits", |(g, n, u)| {
        GnuParams::with_qubits(g, n, g * n * u).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analytic_matches_dense_oracle(
        code in small_code(),
        v in 0.0..=FRAC_PI_2,
        theta in -PI..PI,
        eps in 0.0f64..=1.0,
    ) {
        let input = InputEnsemble::new(v, theta, eps).unwrap();
        let dense = project_and_decode(&build_rho_n(&input, code.qubits()).unwrap(), &code).unwrap();
        prop_assert!(codespace_projection(&code, &input).max_deviation(&dense) < 1e-10);
    }

    #[test]
    fn noiseless_projection_is_rank_one(code in any_code(), v in 0.0..=FRAC_PI_2, theta in -PI..PI) {
        let p = codespace_projection(&code, &InputEnsemble::new(v, theta, 0.0).unwrap());
        prop_assert!((p.c.norm_sqr() - p.a * p.b).abs() < 1e-10);
    }

    #[test]
    fn success_probability_is_a_probability(
        code in any_code(),
        v in 0.0..=FRAC_PI_2,
        theta in -PI..PI,
        eps in 0.0f64..=1.0,
    ) {
        let p = codespace_projection(&code, &InputEnsemble::new(v, theta, eps).unwrap());
        prop_assert!(p.a >= -1e-15 && p.b >= -1e-15);
        prop_assert!(p.a + p.b <= 1.0 + 1e-12);
    }

    #[test]
    fn theta_shift_rotates_coherence(
        g in 1u32..=2,
        u in 2u32..=5,
        v in 0.05..1.5f64,
        theta in -PI..PI,
        delta in -PI..PI,
        eps in 0.0f64..0.5,
    ) {
        let code = GnuParams::with_qubits(g, 1, g * u).unwrap();
        let p0 = codespace_projection(&code, &InputEnsemble::new(v, theta, eps).unwrap());
        let p1 = codespace_projection(&code, &InputEnsemble::new(v, theta + delta, eps).unwrap());
        prop_assert!((p0.a - p1.a).abs() < 1e-12 && (p0.b - p1.b).abs() < 1e-12);
        prop_assert!((p0.c.norm() - p1.c.norm()).abs() < 1e-12);
        prop_assume!(p0.c.norm() > 1e-6);
        let shift = wrap_angle(p1.c.arg() - p0.c.arg() + g as f64 * delta);
        prop_assert!(shift.abs() < 1e-9);
    }

    #[test]
    fn closed_forms_match(u in 2u32..=4, v in 0.0..=FRAC_PI_2, theta in -PI..PI, eps in 0.0f64..=1.0) {
        let input = InputEnsemble::new(v, theta, eps).unwrap();
        let code = GnuParams::with_qubits(1, 1, u).unwrap();
        prop_assert!(abc_closed(u, &input).unwrap().max_deviation(&codespace_projection(&code, &input)) < 1e-12);
    }

    #[test]
    fn solve_for_magic_inverts_magic(frac in 0.0f64..=1.0, u in 2u32..=4) {
        let code = GnuParams::with_qubits(1, 1, u).unwrap();
        // the u=2 curve peaks at M2(T); stay just inside
        let m = frac * 0.58;
        let v = solve_for_magic(&code, FRAC_PI_4, m).unwrap();
        prop_assert!((output_magic(&code, FRAC_PI_4, v).unwrap() - m).abs() < 1e-6);
    }
}

#[test]
fn bk_fixed_points_are_tight() {
    for curve in [
        ErrorCurve::bk_t(),
        ErrorCurve::bk_h(HFormula::Printed),
        ErrorCurve::bk_h(HFormula::Original),
    ] {
        let r = find_threshold(&curve).unwrap();
        assert!(
            (curve.eval(r.threshold).unwrap() - r.threshold).abs() < 1e-8,
            "{}",
            curve.label()
        );
    }
}

#[test]
fn bk_maps_are_finite_on_fine_grid() {
    for k in 0..=5000 {
        let e = k as f64 * 1e-4;
        assert!(gnu_msd::protocols::bk_t_error(e).unwrap().is_finite());
        assert!(gnu_msd::protocols::bk_h_error(e).unwrap().is_finite());
    }
}

#[test]
fn composition_beats_single_bk_round() {
    let bk_t = find_threshold(&ErrorCurve::bk_t()).unwrap().threshold;
    let bk_h = find_threshold(&ErrorCurve::bk_h(HFormula::Original))
        .unwrap()
        .threshold;
    let t = find_threshold(&Composition::new(MagicTarget::T).unwrap().curve())
        .unwrap()
        .threshold;
    let h = find_threshold(&Composition::new(MagicTarget::H).unwrap().curve())
        .unwrap()
        .threshold;
    assert!(t > bk_t && h > bk_h);
}

#[test]
fn figures_do_not_depend_on_execution_mode() {
    for id in [FigureId::MagicVsV, FigureId::ErrorT, FigureId::Repetition] {
        assert_eq!(
            figure(id, Execution::Sequential).unwrap(),
            figure(id, Execution::Parallel).unwrap()
        );
    }
}
