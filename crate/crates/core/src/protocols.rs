//! Error curves, thresholds and crossovers, the Bravyi–Kitaev reference
//! maps, and the two-stage composition "this protocol, then BK".

use std::fmt;
use std::sync::Arc;

use crate::analytic::max_error;
use crate::gnu::GnuParams;
use crate::solver::{canonical_solution, SolvedInput, TargetSpec};
use crate::{Error, Result};

/// Spacing of the bracketing grid used by [`find_threshold`] and [`find_crossover`].
pub const SEARCH_GRID_STEP: f64 = 1e-3;

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-8;

const GRID_POINTS: usize = 499;

fn search_grid() -> impl Iterator<Item = f64> {
    (1..=GRID_POINTS).map(|k| k as f64 / 1000.0)
}

/// 5-to-1 |T⟩ distillation output error, `t = ε/(1−ε)`.
pub fn bk_t_error(eps: f64) -> Result<f64> {
    check_unit(eps, "bk_t_error")?;
    if eps == 1.0 {
        return Err(Error::OutOfRange(
            "bk_t_error is undefined at eps = 1".into(),
        ));
    }
    let t = eps / (1.0 - eps);
    Ok((t.powi(5) + 5.0 * t * t) / (1.0 + 5.0 * t * t + 5.0 * t.powi(3) + t.powi(5)))
}

pub fn bk_t_ps(eps: f64) -> Result<f64> {
    check_unit(eps, "bk_t_ps")?;
    if eps == 1.0 {
        return Err(Error::OutOfRange("bk_t_ps is undefined at eps = 1".into()));
    }
    let f = 1.0 - eps;
    Ok((eps.powi(5) + 5.0 * eps * eps * f.powi(3) + 5.0 * eps.powi(3) * f * f + f.powi(5)) / 6.0)
}

/// Which denominator to use in the 15-to-1 |H⟩ error map.
///
/// `Printed` has `1 + 12 q⁸`; `Original` has `1 + 15 q⁸`, which is the form
/// whose fixed point sits at `0.141`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HFormula {
    #[default]
    Printed,
    Original,
}

impl HFormula {
    fn denominator_weight(self) -> f64 {
        match self {
            HFormula::Printed => 12.0,
            HFormula::Original => 15.0,
        }
    }
}

/// 15-to-1 |H⟩ distillation output error, `q = 1 − 2ε`.
pub fn bk_h_error(eps: f64) -> Result<f64> {
    bk_h_error_with(eps, HFormula::Printed)
}

pub fn bk_h_error_with(eps: f64, formula: HFormula) -> Result<f64> {
    check_unit(eps, "bk_h_error")?;
    let q = 1.0 - 2.0 * eps;
    let num = 1.0 - 15.0 * q.powi(7) + 15.0 * q.powi(8) - q.powi(15);
    Ok(num / (2.0 * (1.0 + formula.denominator_weight() * q.powi(8))))
}

pub fn bk_h_ps(eps: f64) -> Result<f64> {
    check_unit(eps, "bk_h_ps")?;
    Ok((1.0 + 15.0 * (1.0 - 2.0 * eps).powi(8)) / 16.0)
}

fn check_unit(eps: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{what}: eps = {eps} outside [0, 1]"
        )))
    }
}

type CurveFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A map `ε ↦ output error` with its valid domain.
#[derive(Clone)]
pub struct ErrorCurve {
    label: String,
    domain: (f64, f64),
    f: Arc<CurveFn>,
}

impl fmt::Debug for ErrorCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErrorCurve")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl ErrorCurve {
    pub fn new<F>(label: impl Into<String>, domain: (f64, f64), f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            domain,
            f: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn eval(&self, eps: f64) -> Result<f64> {
        let (lo, hi) = self.domain;
        if !(lo..=hi).contains(&eps) {
            return Err(Error::OutOfRange(format!(
                "{}: eps = {eps} outside [{lo}, {hi}]",
                self.label
            )));
        }
        let out = (self.f)(eps)?;
        if !out.is_finite() {
            return Err(Error::OutOfRange(format!(
                "{}: non-finite output at eps = {eps}",
                self.label
            )));
        }
        Ok(out)
    }

    pub fn identity() -> Self {
        Self::new("identity", (0.0, 1.0), Ok)
    }

    pub fn bk_t() -> Self {
        Self::new("bk_T", (0.0, 0.999), bk_t_error)
    }

    pub fn bk_h(formula: HFormula) -> Self {
        let label = match formula {
            HFormula::Printed => "bk_H",
            HFormula::Original => "bk_H_original",
        };
        Self::new(label, (0.0, 1.0), move |e| bk_h_error_with(e, formula))
    }

    /// `E(ε)` for `code` with noiseless input parameters `(v, θ)`.
    pub fn distillation(code: GnuParams, v: f64, theta: f64, target: &TargetSpec) -> Self {
        let rho = target.density();
        Self::new(format!("{code} {target}"), (0.0, 1.0), move |e| {
            max_error(&code, v, theta, e, &rho)
        })
    }

    /// `E(ε)` on `code` using the canonical solved input for `target`.
    pub fn solved(code: GnuParams, target: &TargetSpec) -> Result<Self> {
        let s = canonical_solution(&code, target)?;
        Ok(Self::distillation(code, s.v, s.theta, target))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    /// A sign change of `E(ε) − ε` was bracketed and bisected.
    Crossing,
    /// `E(ε) < ε` at every grid point; the threshold is reported as 0.5.
    GridCertified,
    /// `E(ε) ≥ ε` already at the first grid point, so no suppression
    /// region exists; the first grid point is returned.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub threshold: f64,
    pub kind: ThresholdKind,
    pub bracket_width: f64,
    pub evaluations: usize,
}

fn bisect<F>(mut lo: f64, mut hi: f64, mut below: F, evaluations: &mut usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<bool>,
{
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        *evaluations += 1;
        if below(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), hi - lo))
}

/// Smallest fixed point `E(ε*) = ε*` on `(0, 0.5]`.
pub fn find_threshold(curve: &ErrorCurve) -> Result<ThresholdResult> {
    let mut evaluations = 0;
    let mut prev = None;
    for eps in search_grid() {
        evaluations += 1;
        let d = curve.eval(eps)? - eps;
        if d >= 0.0 {
            let Some(lo) = prev else {
                return Ok(ThresholdResult {
                    threshold: eps,
                    kind: ThresholdKind::Degenerate,
                    bracket_width: 0.0,
                    evaluations,
                });
            };
            if d == 0.0 {
                return Ok(ThresholdResult {
                    threshold: eps,
                    kind: ThresholdKind::Crossing,
                    bracket_width: 0.0,
                    evaluations,
                });
            }
            let (threshold, bracket_width) =
                bisect(lo, eps, |x| Ok(curve.eval(x)? < x), &mut evaluations)?;
            return Ok(ThresholdResult {
                threshold,
                kind: ThresholdKind::Crossing,
                bracket_width,
                evaluations,
            });
        }
        prev = Some(eps);
    }
    Ok(ThresholdResult {
        threshold: 0.5,
        kind: ThresholdKind::GridCertified,
        bracket_width: SEARCH_GRID_STEP,
        evaluations,
    })
}

/// Smallest `ε` where `f − g` changes sign on the search grid, refined by bisection.
pub fn find_crossover(f: &ErrorCurve, g: &ErrorCurve) -> Result<f64> {
    let diff = |e: f64| -> Result<f64> { Ok(f.eval(e)? - g.eval(e)?) };
    let mut prev: Option<(f64, f64)> = None;
    let mut evaluations = 0;
    for eps in search_grid() {
        let d = diff(eps)?;
        if let Some((lo, dlo)) = prev {
            if dlo != 0.0 && d.signum() != dlo.signum() {
                if d == 0.0 {
                    return Ok(eps);
                }
                let sign = dlo.signum();
                let (x, _) = bisect(lo, eps, |x| Ok(diff(x)?.signum() == sign), &mut evaluations)?;
                return Ok(x);
            }
        }
        prev = Some((eps, d));
    }
    Err(Error::NoCrossover)
}

/// Magic state distilled by the two-stage scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagicTarget {
    T,
    H,
}

impl MagicTarget {
    /// Target of the first stage, which outputs the X-flipped state.
    pub fn stage_a_target(self) -> TargetSpec {
        match self {
            MagicTarget::T => TargetSpec::XT,
            MagicTarget::H => TargetSpec::XH,
        }
    }
}

impl fmt::Display for MagicTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MagicTarget::T => "T",
            MagicTarget::H => "H",
        })
    }
}

/// The two-qubit `(1,1,2)` protocol feeding its output error into the
/// matching BK map.
#[derive(Debug, Clone)]
pub struct Composition {
    pub target: MagicTarget,
    pub input: SolvedInput,
    pub h_formula: HFormula,
    stage_a: ErrorCurve,
}

impl Composition {
    pub fn new(target: MagicTarget) -> Result<Self> {
        Self::with_h_formula(target, HFormula::Printed)
    }

    pub fn with_h_formula(target: MagicTarget, h_formula: HFormula) -> Result<Self> {
        let code = GnuParams::with_qubits(1, 1, 2)?;
        let spec = target.stage_a_target();
        let input = canonical_solution(&code, &spec)?;
        let stage_a = ErrorCurve::distillation(code, input.v, input.theta, &spec);
        Ok(Self {
            target,
            input,
            h_formula,
            stage_a,
        })
    }

    pub fn stage_a_error(&self, eps: f64) -> Result<f64> {
        self.stage_a.eval(eps)
    }

    pub fn stage_b_error(&self, eps: f64) -> Result<f64> {
        match self.target {
            MagicTarget::T => bk_t_error(eps),
            MagicTarget::H => bk_h_error_with(eps, self.h_formula),
        }
    }

    pub fn total_error(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::OutOfRange(format!("eps = {eps} outside (0, 0.5]")));
        }
        self.stage_b_error(self.stage_a_error(eps)?)
    }

    pub fn curve(&self) -> ErrorCurve {
        let me = self.clone();
        ErrorCurve::new(
            format!("combined_{}", self.target),
            (f64::MIN_POSITIVE, 0.5),
            move |e| me.total_error(e),
        )
    }
}

pub fn compose_total_error(eps: f64, target: MagicTarget) -> Result<f64> {
    Composition::new(target)?.total_error(eps)
}

/// Closed-form inputs for the repetition code `(2,1,1)` that distil `target`
/// exactly at `ε = 0`.
pub fn repetition_parameters(target: MagicTarget) -> (f64, f64) {
    match target {
        MagicTarget::T => {
            let v = ((1.0 + 2f64.sqrt() - 3f64.sqrt()) / 2.0).sqrt().asin();
            (v, 7.0 * std::f64::consts::PI / 8.0)
        }
        MagicTarget::H => ((1.0 / (1.0 + 2f64.sqrt()).sqrt()).atan(), 0.0),
    }
}

pub fn repetition_curve(target: MagicTarget) -> ErrorCurve {
    let (v, theta) = repetition_parameters(target);
    let spec = match target {
        MagicTarget::T => TargetSpec::T,
        MagicTarget::H => TargetSpec::H,
    };
    ErrorCurve::distillation(
        GnuParams::with_qubits(2, 1, 2).expect("valid code"),
        v,
        theta,
        &spec,
    )
}
