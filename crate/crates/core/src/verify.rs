//! Self-checks: analytic engine against the dense oracle, the gate-level
//! circuit, and the closed forms.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::analytic::{abc_general, codespace_projection, final_state, InputEnsemble};
use crate::closed_form::abc_closed;
use crate::gnu::GnuParams;
use crate::oracle::{build_rho_n, circuit_projection, project_and_decode, GateList};
use crate::qmath::trace_distance;
use crate::{Execution, Result};

pub const ORACLE_TOL: f64 = 1e-10;
pub const CIRCUIT_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-12;

/// Codes covered by the oracle suite, as `(g, n, N)`.
pub const ORACLE_CODES: [(u32, u32, u32); 4] = [(1, 1, 2), (1, 1, 3), (1, 1, 4), (2, 1, 2)];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            checks: 0,
            max_deviation: 0.0,
            tolerance,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, deviation: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if deviation.is_nan() || deviation > self.max_deviation {
            self.max_deviation = if deviation.is_nan() {
                f64::INFINITY
            } else {
                deviation
            };
        }
        if !(deviation < self.tolerance) {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} checks, max deviation {:.3e} (tol {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checks,
            self.max_deviation,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn product<'a>(vs: &'a [f64], ts: &'a [f64], es: &'a [f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(vs.len() * ts.len() * es.len());
    for &v in vs {
        for &t in ts {
            for &e in es {
                out.push((v, t, e));
            }
        }
    }
    out
}

/// `(a, b, c)` from the dense `2^N` oracle against the analytic formula on a
/// 5×3×3 grid of `(v, θ, ε)` per code.
pub fn oracle_suite(execution: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("oracle-equivalence", ORACLE_TOL);
    let points = product(
        &grid(0.0, FRAC_PI_2, 5),
        &[0.0, PI / 4.0, 7.0 * PI / 8.0],
        &[0.0, 0.1, 0.3],
    );
    for (g, n, qubits) in ORACLE_CODES {
        let code = GnuParams::with_qubits(g, n, qubits)?;
        let devs = execution.map(&points, |&(v, t, e)| -> Result<f64> {
            let input = InputEnsemble::new(v, t, e)?;
            let dense = project_and_decode(&build_rho_n(&input, qubits)?, &code)?;
            Ok(codespace_projection(&code, &input).max_deviation(&dense))
        });
        for (&(v, t, e), dev) in points.iter().zip(devs) {
            report.record(dev?, || format!("{code} v={v} theta={t} eps={e}"));
        }
    }
    Ok(report)
}

/// Three-qubit circuit with post-selection against the `(1,1,2)` analytic
/// pipeline on a 5×5×5 grid: unnormalised `(a, b, c)`, acceptance
/// probability and (where it is positive) the output state. Also checks the
/// seven-CNOT expansion.
pub fn circuit_suite(execution: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("circuit-equivalence", CIRCUIT_TOL);
    let code = GnuParams::with_qubits(1, 1, 2)?;
    let circuits = [
        GateList::two_qubit_protocol(),
        GateList::two_qubit_protocol().expand_controlled_h(),
    ];
    let cnots = circuits[1].cnot_count();
    if cnots != 7 {
        report.fail(format!("expanded circuit has {cnots} CNOTs, expected 7"));
    } else {
        report.checks += 1;
    }
    let points = product(
        &grid(0.0, FRAC_PI_2, 5),
        &grid(-PI, 0.8 * PI, 5),
        &grid(0.0, 0.5, 5),
    );
    for circuit in &circuits {
        let devs = execution.map(&points, |&(v, t, e)| -> Result<f64> {
            let input = InputEnsemble::new(v, t, e)?;
            let sim = circuit_projection(&input, circuit)?;
            let exact = codespace_projection(&code, &input);
            let mut dev = sim.max_deviation(&exact);
            if exact.a + exact.b > 1e-6 {
                let rho_sim = final_state(&sim)?;
                let rho_exact = final_state(&abc_general(&code, &input)?)?;
                dev = dev.max(trace_distance(&rho_sim, &rho_exact));
            }
            Ok(dev)
        });
        for (&(v, t, e), dev) in points.iter().zip(devs) {
            report.record(dev?, || {
                format!(
                    "circuit ({} CNOTs) v={v} theta={t} eps={e}",
                    circuit.cnot_count()
                )
            });
        }
    }
    Ok(report)
}

/// Closed forms for `u = 2, 3, 4` against the general formula on a 9×6×6 grid.
pub fn closed_form_suite(execution: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("closed-form-reconciliation", CLOSED_FORM_TOL);
    let points = product(
        &grid(0.0, FRAC_PI_2, 9),
        &grid(-PI, 0.9 * PI, 6),
        &grid(0.0, 1.0, 6),
    );
    for qubits in 2..=4 {
        let code = GnuParams::with_qubits(1, 1, qubits)?;
        let devs = execution.map(&points, |&(v, t, e)| -> Result<f64> {
            let input = InputEnsemble::new(v, t, e)?;
            let closed = abc_closed(qubits, &input).expect("closed form exists for u = 2, 3, 4");
            Ok(closed.max_deviation(&codespace_projection(&code, &input)))
        });
        for (&(v, t, e), dev) in points.iter().zip(devs) {
            report.record(dev?, || format!("u={qubits} v={v} theta={t} eps={e}"));
        }
    }
    Ok(report)
}

pub fn run_all(execution: Execution) -> Result<VerifyReport> {
    Ok(VerifyReport {
        suites: vec![
            oracle_suite(execution)?,
            circuit_suite(execution)?,
            closed_form_suite(execution)?,
        ],
    })
}
