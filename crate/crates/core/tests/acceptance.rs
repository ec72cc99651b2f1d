//! Acceptance criteria, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the PASS/FAIL lines are
//! always printed; exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::process::ExitCode;
use std::time::Instant;

use gnu_msd::analytic::{max_error, output_state, wrap_angle, InputEnsemble};
use gnu_msd::closed_form::SIGN_CORRECTIONS;
use gnu_msd::gnu::GnuParams;
use gnu_msd::protocols::{
    find_crossover, find_threshold, repetition_curve, repetition_parameters, Composition,
    ErrorCurve, HFormula, MagicTarget, ThresholdKind,
};
use gnu_msd::qmath::{m2_pure, t_state_beta, trace_distance, PureQubit};
use gnu_msd::solver::{
    canonical_solution, magic_curve, solve_input_params, v_grid, TargetSpec, MAGIC_GRID_DIVISIONS,
};
use gnu_msd::verify::{circuit_suite, closed_form_suite, oracle_suite};
use gnu_msd::{Execution, Result};
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn code(g: u32, n: u32, qubits: u32) -> GnuParams {
    GnuParams::with_qubits(g, n, qubits).expect("valid code")
}

fn criterion_01() -> Result<Outcome> {
    let start = Instant::now();
    let r = oracle_suite(Execution::Parallel)?;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        r.passed() && r.checks == 4 * 45 && secs < 10.0,
        format!(
            "oracle vs analytic, {} points, max |Δ| = {:.2e}, {secs:.2} s",
            r.checks, r.max_deviation
        ),
    )
}

fn criterion_02() -> Result<Outcome> {
    let r = circuit_suite(Execution::Parallel)?;
    outcome(
        r.passed(),
        format!(
            "circuit vs analytic (1,1,2), {} checks incl. 7-CNOT count, max |Δ| = {:.2e}",
            r.checks, r.max_deviation
        ),
    )
}

fn criterion_03() -> Result<Outcome> {
    let r = closed_form_suite(Execution::Parallel)?;
    let documented = !SIGN_CORRECTIONS.is_empty()
        && SIGN_CORRECTIONS
            .iter()
            .all(|c| c.original != c.corrected && !c.reason.is_empty());
    let changed: Vec<String> = SIGN_CORRECTIONS
        .iter()
        .map(|c| format!("u{} {}", c.qubits, c.coefficient))
        .collect();
    outcome(
        r.passed() && documented,
        format!(
            "closed forms u=2,3,4, max |Δ| = {:.2e}; signs changed: {}",
            r.max_deviation,
            changed.join(", ")
        ),
    )
}

fn criterion_04() -> Result<Outcome> {
    let m_t = m2_pure(&PureQubit::t_state());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let stabilizer_states = [
        PureQubit::zero(),
        PureQubit::one(),
        PureQubit::new(c(s, 0.0), c(s, 0.0))?,
        PureQubit::new(c(s, 0.0), c(-s, 0.0))?,
        PureQubit::new(c(s, 0.0), c(0.0, s))?,
        PureQubit::new(c(s, 0.0), c(0.0, -s))?,
    ];
    let worst = stabilizer_states
        .iter()
        .map(|p| m2_pure(p).abs())
        .fold(0.0, f64::max);
    outcome(
        (m_t - 0.585).abs() <= 0.001 && worst <= 1e-10,
        format!("M2(T) = {m_t:.6}, max |M2| over stabilizer states = {worst:.1e}"),
    )
}

fn criterion_05() -> Result<Outcome> {
    let c = code(1, 1, 2);
    let mut details = Vec::new();
    let mut pass = true;
    for target in [TargetSpec::XT, TargetSpec::XH] {
        let s = canonical_solution(&c, &target)?;
        let rho = target.density();
        let mut min_margin = f64::INFINITY;
        for k in 1..=99 {
            let eps = 0.005 * k as f64;
            min_margin = min_margin.min(eps - max_error(&c, s.v, s.theta, eps, &rho)?);
        }
        let th = find_threshold(&ErrorCurve::distillation(c, s.v, s.theta, &target))?;
        pass &= min_margin > 1e-6 && th.kind == ThresholdKind::GridCertified && th.threshold == 0.5;
        details.push(format!(
            "{target}: min(ε − E) = {min_margin:.3e}, threshold {} ({:?})",
            th.threshold, th.kind
        ));
    }
    outcome(pass, details.join("; "))
}

fn criterion_06() -> Result<Outcome> {
    let c = code(1, 1, 2);
    let t = find_crossover(
        &ErrorCurve::solved(c, &TargetSpec::XT)?,
        &ErrorCurve::bk_t(),
    )?;
    let h = find_crossover(
        &ErrorCurve::solved(c, &TargetSpec::XH)?,
        &ErrorCurve::bk_h(HFormula::Printed),
    )?;
    outcome(
        (t - 0.114).abs() <= 0.002 && (h - 0.112).abs() <= 0.002,
        format!("crossover vs BK: T {t:.6} (0.114 ± 0.002), H {h:.6} (0.112 ± 0.002)"),
    )
}

fn criterion_07() -> Result<Outcome> {
    let t = find_threshold(&ErrorCurve::bk_t())?;
    let h = find_threshold(&ErrorCurve::bk_h(HFormula::Original))?;
    let h_printed = find_threshold(&ErrorCurve::bk_h(HFormula::Printed))?;
    outcome(
        (t.threshold - 0.173).abs() <= 0.001 && (h.threshold - 0.141).abs() <= 0.001,
        format!(
            "BK fixed points: T {:.6} (0.173 ± 0.001), H {:.6} (0.141 ± 0.001, 1+15q⁸ denominator); \
             with the 1+12q⁸ denominator H would be {:.6}",
            t.threshold, h.threshold, h_printed.threshold
        ),
    )
}

fn criterion_08() -> Result<Outcome> {
    let t = find_threshold(&Composition::new(MagicTarget::T)?.curve())?;
    let h = find_threshold(&Composition::new(MagicTarget::H)?.curve())?;
    outcome(
        (t.threshold - 0.279).abs() <= 0.003 && (h.threshold - 0.198).abs() <= 0.003,
        format!(
            "combined thresholds: T {:.6} (0.279 ± 0.003), H {:.6} (0.198 ± 0.003)",
            t.threshold, h.threshold
        ),
    )
}

fn criterion_09() -> Result<Outcome> {
    let rep = code(2, 1, 2);
    let mut details = Vec::new();
    let mut pass = true;
    for (target, spec) in [
        (MagicTarget::T, TargetSpec::T),
        (MagicTarget::H, TargetSpec::H),
    ] {
        let (v, theta) = repetition_parameters(target);
        let d0 = trace_distance(
            &output_state(&rep, &InputEnsemble::new(v, theta, 0.0)?)?,
            &spec.density(),
        );
        let curve = repetition_curve(target);
        let mut worst = f64::INFINITY;
        for k in 1..=500 {
            let eps = k as f64 / 1000.0;
            worst = worst.min(curve.eval(eps)? - eps);
        }
        pass &= d0 <= 1e-10 && worst >= -1e-10;
        details.push(format!(
            "{target}: D(ε=0) = {d0:.1e}, min(E − ε) = {worst:.3e}"
        ));
    }
    outcome(pass, details.join("; "))
}

fn criterion_10() -> Result<Outcome> {
    let curve = magic_curve(&code(1, 1, 2), FRAC_PI_4, &v_grid(MAGIC_GRID_DIVISIONS))?;
    let max_jump = curve
        .points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).abs())
        .fold(0.0, f64::max);
    let (lo, hi) = (curve.min(), curve.max());
    outcome(
        lo == 0.0 && hi >= 0.584 && max_jump < 0.02,
        format!(
            "magic curve: min {lo}, max {hi:.6}, max jump {max_jump:.4}, {} skipped point(s)",
            curve.skipped.len()
        ),
    )
}

fn criterion_11() -> Result<Outcome> {
    let mut pass = true;
    let mut checked = 0;
    let mut details = Vec::new();
    let mut cases = Vec::new();
    for qubits in 2..=4 {
        for target in [TargetSpec::T, TargetSpec::H, TargetSpec::XT, TargetSpec::XH] {
            cases.push((code(1, 1, qubits), target));
        }
    }
    cases.push((code(2, 1, 2), TargetSpec::T));
    cases.push((code(2, 1, 2), TargetSpec::H));
    for (c, target) in cases {
        let sols = solve_input_params(&c, &target, 1e-10)?;
        for s in &sols {
            let rho = output_state(&c, &InputEnsemble::new(s.v, s.theta, 0.0)?)?;
            pass &= trace_distance(&rho, &target.density()) <= 1e-10;
            checked += 1;
        }
        if c.g() == 1 {
            let gap = target.magic() - sols[0].input_magic;
            pass &= gap > 0.0;
            details.push(format!("u{} {target} ΔM2 = {gap:.4}", c.qubits()));
        }
    }
    outcome(
        pass,
        format!("{checked} solutions round-trip; {}", details.join(", ")),
    )
}

// Canonical solutions, locked after they were checked against the
// closed-form inverse for u = 2 and the round-trip test for every code.
const LOCKED: &[(u32, &str, f64, f64)] = &[
    (2, "T", 0.350879410872, -FRAC_PI_4),
    (2, "H", 0.284924126622, 0.0),
    (2, "XT", 0.938882014420, FRAC_PI_4),
    (2, "XH", 1.040893537046, 0.0),
    (3, "T", 0.290409209516, -FRAC_PI_4),
    (3, "H", 0.234737630597, 0.0),
    (4, "T", 0.253261563459, -FRAC_PI_4),
    (4, "H", 0.204219570928, 0.0),
];

fn target_from(label: &str) -> TargetSpec {
    match label {
        "T" => TargetSpec::T,
        "H" => TargetSpec::H,
        "XT" => TargetSpec::XT,
        _ => TargetSpec::XH,
    }
}

fn criterion_12() -> Result<Outcome> {
    let beta = t_state_beta();
    let r2 = 2f64.sqrt();
    // (1,1,2) output ∝ cos v|0⟩ + √2 e^{iθ} sin v|1⟩
    let closed = [
        ("T", (beta.tan() / r2).atan(), -FRAC_PI_4),
        ("H", (FRAC_PI_8.tan() / r2).atan(), 0.0),
        ("XT", (1.0 / (beta.tan() * r2)).atan(), FRAC_PI_4),
        ("XH", (1.0 / (FRAC_PI_8.tan() * r2)).atan(), 0.0),
    ];
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for &(qubits, label, v, theta) in LOCKED {
        let s = canonical_solution(&code(1, 1, qubits), &target_from(label))?;
        let dev = (s.v - v).abs().max(wrap_angle(s.theta - theta).abs());
        worst = worst.max(dev);
        pass &= dev < 1e-9;
        if qubits == 2 {
            let (_, cv, ct) = closed
                .iter()
                .find(|c| c.0 == label)
                .copied()
                .expect("closed form");
            pass &= (s.v - cv).abs() < 1e-9 && wrap_angle(s.theta - ct).abs() < 1e-9;
        }
    }
    outcome(
        pass,
        format!("{} canonical solutions match locked values, max |Δ| = {worst:.1e}; figure-only data not checked", LOCKED.len()),
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("oracle equivalence", criterion_01),
        ("circuit equivalence", criterion_02),
        ("closed-form reconciliation", criterion_03),
        ("magic constants", criterion_04),
        ("two-qubit thresholds", criterion_05),
        ("crossovers vs BK", criterion_06),
        ("BK thresholds", criterion_07),
        ("combined thresholds", criterion_08),
        ("repetition code", criterion_09),
        ("magic-curve range", criterion_10),
        ("solver soundness", criterion_11),
        ("regression lock", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:02} {} {name}: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
