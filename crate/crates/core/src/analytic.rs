//! Analytic output state of the distillation protocol.
//!
//! Each of the `N` inputs is `(1-ε)|φ0⟩⟨φ0| + ε|φ1⟩⟨φ1|` with
//! `|φ0⟩ = cos v|0⟩ + e^{iθ} sin v|1⟩` and `|φ1⟩ = sin v|0⟩ − e^{iθ} cos v|1⟩`.
//! For a product `|φ_x⟩` the overlap with a Dicke state depends on `x` only
//! through its Hamming weight `ω`, so projecting onto the codespace reduces to
//! `N + 1` weighted terms, each a short double sum. The whole evaluation is
//! `O(N³)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::gnu::GnuParams;
use crate::qmath::{binomial_f64, cos_sin, trace_distance, DensityMatrix1Q, PureQubit, STATE_TOL};
use crate::{Error, Result};

/// Success probabilities at or below this are treated as zero.
pub const MIN_SUCCESS_PROBABILITY: f64 = 1e-300;

/// Noisy input model `(v, θ, ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputEnsemble {
    v: f64,
    theta: f64,
    eps: f64,
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta - 2.0 * PI * ((theta + PI) / (2.0 * PI)).floor();
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl InputEnsemble {
    /// `v ∈ [0, π/2]`, `ε ∈ [0, 1]`; `θ` is wrapped into `[-π, π)`.
    pub fn new(v: f64, theta: f64, eps: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&v) {
            return Err(Error::OutOfRange(format!("v = {v} outside [0, pi/2]")));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("theta = {theta}")));
        }
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::OutOfRange(format!("eps = {eps} outside [0, 1]")));
        }
        Ok(Self {
            v,
            theta: wrap_angle(theta),
            eps,
        })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Same `(v, θ)` with a different error rate.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.v, self.theta, eps)
    }

    pub fn phi0(&self) -> PureQubit {
        PureQubit::from_angles(self.v, self.theta)
    }

    pub fn phi1(&self) -> PureQubit {
        let (c, s) = cos_sin(self.v);
        let phase = Complex64::from_polar(1.0, self.theta);
        PureQubit::new(Complex64::new(s, 0.0), -phase * c).expect("unit norm by construction")
    }

    /// `(1-ε)|φ0⟩⟨φ0| + ε|φ1⟩⟨φ1|`.
    pub fn single_copy(&self) -> DensityMatrix1Q {
        let (p0, p1) = (self.phi0().density(), self.phi1().density());
        let e = self.eps;
        DensityMatrix1Q::new(
            (1.0 - e) * p0.m00() + e * p1.m00(),
            (1.0 - e) * p0.m11() + e * p1.m11(),
            p0.m01() * (1.0 - e) + p1.m01() * e,
        )
        .expect("convex combination of states")
    }
}

/// Unnormalised codespace projection: `a = ⟨0_L|ρ|0_L⟩`, `b = ⟨1_L|ρ|1_L⟩`,
/// `c = ⟨0_L|ρ|1_L⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodespaceProjection {
    pub a: f64,
    pub b: f64,
    pub c: Complex64,
}

impl CodespaceProjection {
    /// Largest componentwise deviation from `other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).norm())
    }
}

fn check_index(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::OutOfRange(what()))
    }
}

/// Per-`v` quantities reused across the `(ω, j, t)` loops.
#[derive(Clone, Copy)]
struct Kernel {
    cos: f64,
    sin: f64,
    theta: f64,
    qubits: u32,
}

impl Kernel {
    fn new(v: f64, theta: f64, qubits: u32) -> Self {
        let (cos, sin) = cos_sin(v);
        Self {
            cos,
            sin,
            theta,
            qubits,
        }
    }

    /// `(-1)^t e^{isθ} cos^{N-k} sin^k` with `k = s + ω − 2t`. Only `k ≤ N`
    /// occurs inside the overlap sums.
    fn alpha(&self, s: u32, t: u32, omega: u32) -> Complex64 {
        let k = (s + omega) as i32 - 2 * t as i32;
        let n = self.qubits as i32;
        let mag = if k <= n {
            self.cos.powi(n - k) * self.sin.powi(k)
        } else {
            self.cos.powi(n) * (self.sin / self.cos).powi(k)
        };
        let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
        Complex64::from_polar(sign * mag, s as f64 * self.theta)
    }

    /// `Σ_t α_{s,t} C(ω,t) C(N−ω, s−t)` without the `1/√C(N,s)` factor.
    fn overlap_sum(&self, s: u32, omega: u32) -> Complex64 {
        let n = self.qubits;
        let lo = (s + omega).saturating_sub(n);
        let hi = s.min(omega);
        (lo..=hi)
            .map(|t| {
                self.alpha(s, t, omega)
                    * (binomial_f64(omega, t as i64) * binomial_f64(n - omega, (s - t) as i64))
            })
            .sum()
    }

    fn dicke_overlap(&self, s: u32, omega: u32) -> Complex64 {
        self.overlap_sum(s, omega) / binomial_f64(self.qubits, s as i64).sqrt()
    }
}

/// `α_{s,t} = (-1)^t e^{isθ} (cos v)^N (tan v)^{s+ω−2t}`, evaluated as
/// `(cos v)^{N−k}(sin v)^k` wherever `k = s+ω−2t ≤ N` so `v = π/2` is finite.
pub fn alpha(s: u32, t: u32, omega: u32, v: f64, theta: f64, qubits: u32) -> Result<Complex64> {
    check_index(qubits <= crate::gnu::MAX_ANALYTIC_QUBITS, || {
        format!("N = {qubits}")
    })?;
    check_index(s <= qubits && omega <= qubits, || {
        format!("s = {s}, omega = {omega} must be <= N = {qubits}")
    })?;
    check_index(t <= s.min(omega), || {
        format!("t = {t} exceeds min(s, omega)")
    })?;
    let value = Kernel::new(v, theta, qubits).alpha(s, t, omega);
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "alpha({s},{t},{omega}) diverges at v = {v}"
        )));
    }
    Ok(value)
}

/// `⟨D^N_s|φ_x⟩` for any `x` of Hamming weight `ω`.
pub fn dicke_overlap(s: u32, omega: u32, v: f64, theta: f64, qubits: u32) -> Result<Complex64> {
    check_index(qubits <= crate::gnu::MAX_ANALYTIC_QUBITS, || {
        format!("N = {qubits}")
    })?;
    check_index(s <= qubits && omega <= qubits, || {
        format!("s = {s}, omega = {omega} must be <= N = {qubits}")
    })?;
    Ok(Kernel::new(v, theta, qubits).dicke_overlap(s, omega))
}

/// `β_j = √C(n,j) ⟨D^N_{gj}|φ_x⟩` for `|x| = ω`.
pub fn beta_j(j: u32, omega: u32, code: &GnuParams, v: f64, theta: f64) -> Result<Complex64> {
    check_index(j <= code.n(), || {
        format!("j = {j} exceeds n = {}", code.n())
    })?;
    check_index(omega <= code.qubits(), || {
        format!("omega = {omega} exceeds N = {}", code.qubits())
    })?;
    let kernel = Kernel::new(v, theta, code.qubits());
    Ok(kernel.dicke_overlap(code.g() * j, omega) * binomial_f64(code.n(), j as i64).sqrt())
}

/// Codespace projection of `ρ_{N,ε}` without the success-probability check.
///
/// Returns the exact (possibly zero) projection, which is what oracle
/// comparisons need.
pub fn codespace_projection(code: &GnuParams, input: &InputEnsemble) -> CodespaceProjection {
    let nq = code.qubits();
    let kernel = Kernel::new(input.v, input.theta, nq);
    let eps = input.eps;
    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = Complex64::new(0.0, 0.0);
    for omega in 0..=nq {
        let weight = binomial_f64(nq, omega as i64)
            * eps.powi(omega as i32)
            * (1.0 - eps).powi((nq - omega) as i32);
        if weight == 0.0 {
            continue;
        }
        let mut even = Complex64::new(0.0, 0.0);
        let mut odd = Complex64::new(0.0, 0.0);
        for j in 0..=code.n() {
            let beta =
                kernel.dicke_overlap(code.g() * j, omega) * binomial_f64(code.n(), j as i64).sqrt();
            if j % 2 == 0 {
                even += beta;
            } else {
                odd += beta;
            }
        }
        a += weight * even.norm_sqr();
        b += weight * odd.norm_sqr();
        c += even * odd.conj() * weight;
    }
    let prefactor = 2f64.powi(1 - code.n() as i32);
    CodespaceProjection {
        a: prefactor * a,
        b: prefactor * b,
        c: c * prefactor,
    }
}

/// Codespace projection `(a, b, c)`; fails when `a + b` vanishes.
pub fn abc_general(code: &GnuParams, input: &InputEnsemble) -> Result<CodespaceProjection> {
    let p = codespace_projection(code, input);
    if !(p.a + p.b > MIN_SUCCESS_PROBABILITY) {
        return Err(Error::NonPositiveSuccessProbability(p.a + p.b));
    }
    Ok(p)
}

/// Normalised output `[[a, c], [c*, b]] / (a + b)` in the decoded basis.
pub fn final_state(p: &CodespaceProjection) -> Result<DensityMatrix1Q> {
    let total = p.a + p.b;
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::NonPositiveSuccessProbability(total));
    }
    // a, b are sums of non-negative terms; clamp rounding residue only
    let a = if p.a < 0.0 && p.a > -STATE_TOL {
        0.0
    } else {
        p.a
    };
    let b = if p.b < 0.0 && p.b > -STATE_TOL {
        0.0
    } else {
        p.b
    };
    DensityMatrix1Q::new(a / total, b / total, p.c / total)
}

pub fn success_probability(p: &CodespaceProjection) -> f64 {
    p.a + p.b
}

/// Distilled single-qubit state for `code` and `input`.
pub fn output_state(code: &GnuParams, input: &InputEnsemble) -> Result<DensityMatrix1Q> {
    final_state(&abc_general(code, input)?)
}

/// `max_{e ∈ {0, ε}} D(ρ_final(e), target)`. Exactly two evaluations.
pub fn max_error(
    code: &GnuParams,
    v: f64,
    theta: f64,
    eps: f64,
    target: &DensityMatrix1Q,
) -> Result<f64> {
    let noiseless = output_state(code, &InputEnsemble::new(v, theta, 0.0)?)?;
    let noisy = output_state(code, &InputEnsemble::new(v, theta, eps)?)?;
    Ok(trace_distance(&noiseless, target).max(trace_distance(&noisy, target)))
}
