//! Inverting the protocol: which noiseless inputs `(v, θ)` distil a target,
//! and which `v` gives a requested amount of output magic.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::analytic::{output_state, wrap_angle, InputEnsemble};
use crate::gnu::GnuParams;
use crate::qmath::{m2_density, m2_pure, pauli_x, trace_distance, DensityMatrix1Q, PureQubit};
use crate::{Error, Execution, Result};

/// Grid minima above this are treated as unreachable targets.
pub const REACHABLE_RESIDUAL: f64 = 0.1;

/// Solutions closer than this in both `v` and `θ` are the same solution.
pub const DEDUP_TOL: f64 = 1e-6;

/// Number of `π/1000` steps across `[0, π/2]`.
pub const MAGIC_GRID_DIVISIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetSpec {
    T,
    H,
    /// `X|T⟩`.
    XT,
    /// `X|H⟩`.
    XH,
    Custom(PureQubit),
}

impl TargetSpec {
    pub fn state(&self) -> PureQubit {
        match self {
            TargetSpec::T => PureQubit::t_state(),
            TargetSpec::H => PureQubit::h_state(),
            TargetSpec::XT => PureQubit::t_state().apply(&pauli_x()),
            TargetSpec::XH => PureQubit::h_state().apply(&pauli_x()),
            TargetSpec::Custom(psi) => *psi,
        }
    }

    pub fn density(&self) -> DensityMatrix1Q {
        self.state().density()
    }

    pub fn magic(&self) -> f64 {
        m2_pure(&self.state())
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::T => f.write_str("T"),
            TargetSpec::H => f.write_str("H"),
            TargetSpec::XT => f.write_str("XT"),
            TargetSpec::XH => f.write_str("XH"),
            TargetSpec::Custom(_) => f.write_str("custom"),
        }
    }
}

/// Noiseless input parameters that reach a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolvedInput {
    pub v: f64,
    pub theta: f64,
    /// Trace distance between the distilled state and the target.
    pub residual: f64,
    /// `M₂(|φ0⟩)` of the input.
    pub input_magic: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    /// Grid steps across `[0, π/2]` in `v`; `θ` uses the same step size.
    pub divisions: usize,
    pub execution: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            divisions: 100,
            execution: Execution::default(),
        }
    }
}

fn residual(code: &GnuParams, target: &DensityMatrix1Q, v: f64, theta: f64) -> f64 {
    InputEnsemble::new(v, theta, 0.0)
        .and_then(|inp| output_state(code, &inp))
        .map(|rho| trace_distance(&rho, target))
        .unwrap_or(f64::INFINITY)
}

/// Compass search from `(v, θ)` with halving step, `v` clamped to `[0, π/2]`.
fn refine(
    code: &GnuParams,
    target: &DensityMatrix1Q,
    v0: f64,
    theta0: f64,
    step0: f64,
) -> (f64, f64, f64) {
    let (mut v, mut theta) = (v0, theta0);
    let mut best = residual(code, target, v, theta);
    let mut step = step0;
    while step > 1e-15 && best > 0.0 {
        let mut improved = false;
        for (dv, dt) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let cv = (v + dv * step).clamp(0.0, FRAC_PI_2);
            let ct = wrap_angle(theta + dt * step);
            let r = residual(code, target, cv, ct);
            if r < best {
                (v, theta, best) = (cv, ct, r);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (v, theta, best)
}

fn angle_gap(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Every distinct noiseless input `(v, θ)` whose distilled state lies within
/// `tol` of `target`, sorted by input magic (the first entry is canonical).
pub fn solve_input_params(
    code: &GnuParams,
    target: &TargetSpec,
    tol: f64,
) -> Result<Vec<SolvedInput>> {
    solve_input_params_with(
        code,
        target,
        &SolveOptions {
            tol,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_input_params_with(
    code: &GnuParams,
    target: &TargetSpec,
    opts: &SolveOptions,
) -> Result<Vec<SolvedInput>> {
    if !(opts.tol >= 1e-10) {
        return Err(Error::InvalidParameter(format!(
            "tol = {} must be >= 1e-10",
            opts.tol
        )));
    }
    let rows = opts.divisions;
    let cols = 4 * opts.divisions;
    let step = FRAC_PI_2 / rows as f64;
    let target_rho = target.density();
    let vs: Vec<f64> = (0..=rows)
        .map(|i| FRAC_PI_2 * (i as f64 / rows as f64))
        .collect();
    let thetas: Vec<f64> = (0..cols)
        .map(|k| -PI + 2.0 * PI * (k as f64 / cols as f64))
        .collect();

    let grid: Vec<Vec<f64>> = opts.execution.map(&vs, |&v| {
        thetas
            .iter()
            .map(|&t| residual(code, &target_rho, v, t))
            .collect()
    });

    let grid_min = grid.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    if !(grid_min <= REACHABLE_RESIDUAL) {
        return Err(Error::NoSolution(format!(
            "closest grid point to {target} is at trace distance {grid_min:.3} for code {code}"
        )));
    }

    let mut seeds = Vec::new();
    for i in 0..=rows {
        for k in 0..cols {
            let r = grid[i][k];
            if r > REACHABLE_RESIDUAL {
                continue;
            }
            let is_min = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dk| {
                    let ni = i as i64 + di;
                    if ni < 0 || ni > rows as i64 {
                        return true;
                    }
                    let nk = (k as i64 + dk).rem_euclid(cols as i64) as usize;
                    r <= grid[ni as usize][nk]
                })
            });
            if is_min {
                seeds.push((vs[i], thetas[k]));
            }
        }
    }

    let refined = opts
        .execution
        .map(&seeds, |&(v, t)| refine(code, &target_rho, v, t, step));

    let mut found: Vec<SolvedInput> = Vec::new();
    for (v, theta, res) in refined {
        if res > opts.tol {
            continue;
        }
        // at the poles θ is a global phase
        let theta = if v == 0.0 || v == FRAC_PI_2 {
            0.0
        } else {
            theta
        };
        let candidate = SolvedInput {
            v,
            theta,
            residual: res,
            input_magic: m2_pure(&PureQubit::from_angles(v, theta)),
        };
        match found
            .iter_mut()
            .find(|s| (s.v - v).abs() < DEDUP_TOL && angle_gap(s.theta, theta) < DEDUP_TOL)
        {
            Some(existing) if existing.residual > res => *existing = candidate,
            Some(_) => {}
            None => found.push(candidate),
        }
    }
    if found.is_empty() {
        return Err(Error::NoSolution(format!(
            "no candidate for {target} on code {code} converged below {}",
            opts.tol
        )));
    }
    found.sort_by(|a, b| {
        a.input_magic
            .total_cmp(&b.input_magic)
            .then(a.v.total_cmp(&b.v))
            .then(a.theta.total_cmp(&b.theta))
    });
    Ok(found)
}

/// Canonical (lowest input magic) solution.
pub fn canonical_solution(code: &GnuParams, target: &TargetSpec) -> Result<SolvedInput> {
    Ok(solve_input_params(code, target, 1e-10)?[0])
}

/// Noiseless output magic sampled along `v`, with points where the
/// protocol never succeeds listed separately.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicCurve {
    pub points: Vec<(f64, f64)>,
    pub skipped: Vec<f64>,
}

impl MagicCurve {
    pub fn max(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.1)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `divisions + 1` equally spaced points on `[0, π/2]`, endpoints exact.
pub fn v_grid(divisions: usize) -> Vec<f64> {
    (0..=divisions)
        .map(|k| FRAC_PI_2 * (k as f64 / divisions as f64))
        .collect()
}

/// Output magic at `ε = 0`, which is a pure state here.
pub fn output_magic(code: &GnuParams, theta: f64, v: f64) -> Result<f64> {
    let rho = output_state(code, &InputEnsemble::new(v, theta, 0.0)?)?;
    Ok(m2_density(&rho))
}

pub fn magic_curve(code: &GnuParams, theta: f64, v_grid: &[f64]) -> Result<MagicCurve> {
    magic_curve_with(code, theta, v_grid, Execution::default())
}

pub fn magic_curve_with(
    code: &GnuParams,
    theta: f64,
    v_grid: &[f64],
    execution: Execution,
) -> Result<MagicCurve> {
    if let Some(v) = v_grid.iter().find(|v| !(0.0..=FRAC_PI_2).contains(*v)) {
        return Err(Error::OutOfRange(format!("v = {v} outside [0, pi/2]")));
    }
    let values = execution.map(v_grid, |&v| output_magic(code, theta, v));
    let mut curve = MagicCurve {
        points: Vec::new(),
        skipped: Vec::new(),
    };
    for (&v, value) in v_grid.iter().zip(values) {
        match value {
            Ok(m) => curve.points.push((v, m)),
            Err(Error::NonPositiveSuccessProbability(_)) => curve.skipped.push(v),
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}

/// A `v` whose noiseless output has magic `m`, on the first sampled segment
/// of the `π/1000` curve that brackets `m`.
pub fn solve_for_magic(code: &GnuParams, theta: f64, m: f64) -> Result<f64> {
    let curve = magic_curve(code, theta, &v_grid(MAGIC_GRID_DIVISIONS))?;
    let max = curve.max();
    if !(m >= 0.0 && m <= max) {
        return Err(Error::OutOfRange(format!(
            "magic {m} outside the reachable range [0, {max:.6}]"
        )));
    }
    let f = |v: f64| output_magic(code, theta, v).map(|x| x - m);
    for pair in curve.points.windows(2) {
        let ((v0, m0), (v1, m1)) = (pair[0], pair[1]);
        if m0 == m {
            return Ok(v0);
        }
        if (m0 - m) * (m1 - m) > 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (v0, v1);
        let lo_sign = (m0 - m).signum();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let g = f(mid)?;
            if g == 0.0 {
                return Ok(mid);
            }
            if g.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        return Ok(0.5 * (lo + hi));
    }
    match curve.points.last() {
        Some(&(v, last)) if last == m => Ok(v),
        _ => Err(Error::NoSolution(format!(
            "magic {m} not bracketed by the sampled curve"
        ))),
    }
}
