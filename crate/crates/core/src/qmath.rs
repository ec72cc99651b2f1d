//! Exact combinatorics and single-qubit linear algebra.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

pub type ComplexAmplitude = Complex64;

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

/// Largest `n` accepted by [`binomial`]. `C(60, 30)` still fits in a `u64`.
pub const MAX_BINOMIAL_N: u32 = 60;

/// Slack allowed on normalisation and positivity checks.
pub const STATE_TOL: f64 = 1e-12;

fn pascal() -> &'static [[u64; 61]; 61] {
    static TABLE: OnceLock<[[u64; 61]; 61]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u64; 61]; 61];
        for n in 0..=60 {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            }
        }
        t
    })
}

/// Exact binomial coefficient `C(n, k)` for `k ≤ n ≤ 60`.
pub fn binomial(n: u32, k: u32) -> Result<u64> {
    if n > MAX_BINOMIAL_N || k > n {
        return Err(Error::OutOfRange(format!(
            "binomial({n}, {k}) needs k <= n <= {MAX_BINOMIAL_N}"
        )));
    }
    Ok(pascal()[n as usize][k as usize])
}

/// `C(n, k)` as `f64`, zero outside `0 ≤ k ≤ n`. Callers guarantee `n ≤ 60`.
pub(crate) fn binomial_f64(n: u32, k: i64) -> f64 {
    if k < 0 || k > n as i64 {
        return 0.0;
    }
    pascal()[n as usize][k as usize] as f64
}

/// `(cos x, sin x)` with the endpoints of `[0, π/2]` returned exactly.
///
/// `FRAC_PI_2.cos()` is `6e-17`, which would leave a spurious non-zero
/// amplitude on states that are exactly `|1⟩`.
pub fn cos_sin(x: f64) -> (f64, f64) {
    if x == 0.0 {
        (1.0, 0.0)
    } else if x == FRAC_PI_2 {
        (0.0, 1.0)
    } else {
        (x.cos(), x.sin())
    }
}

/// The angle `β` of the T-type magic state, `cos 2β = 1/√3`.
pub fn t_state_beta() -> f64 {
    0.5 * (1.0 / 3f64.sqrt()).acos()
}

pub fn pauli_x() -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[o, l], [l, o]]
}

pub fn pauli_y() -> Mat2 {
    let o = Complex64::new(0.0, 0.0);
    [[o, -Complex64::i()], [Complex64::i(), o]]
}

pub fn pauli_z() -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[l, o], [o, -l]]
}

pub fn hadamard() -> Mat2 {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn phase_s() -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[l, o], [o, Complex64::i()]]
}

/// `exp(-i φ Y / 2)`.
pub fn ry(phi: f64) -> Mat2 {
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// `exp(-i φ Z / 2)`.
pub fn rz(phi: f64) -> Mat2 {
    let o = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -phi / 2.0), o],
        [o, Complex64::from_polar(1.0, phi / 2.0)],
    ]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Normalised single-qubit pure state `c0|0⟩ + c1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    c0: Complex64,
    c1: Complex64,
}

impl PureQubit {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm = c0.norm_sqr() + c1.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidParameter(format!(
                "pure state norm is {norm}, expected 1"
            )));
        }
        Ok(Self { c0, c1 })
    }

    /// Normalises an arbitrary non-zero pair of amplitudes.
    pub fn normalized(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter(
                "zero or non-finite amplitudes".into(),
            ));
        }
        Ok(Self {
            c0: c0 / norm,
            c1: c1 / norm,
        })
    }

    /// `cos v |0⟩ + e^{iθ} sin v |1⟩`.
    pub fn from_angles(v: f64, theta: f64) -> Self {
        let (c, s) = cos_sin(v);
        Self {
            c0: Complex64::new(c, 0.0),
            c1: Complex64::from_polar(s, theta),
        }
    }

    pub fn zero() -> Self {
        Self::from_angles(0.0, 0.0)
    }

    pub fn one() -> Self {
        Self::from_angles(FRAC_PI_2, 0.0)
    }

    pub fn plus() -> Self {
        Self::from_angles(FRAC_PI_4, 0.0)
    }

    /// T-type magic state `cos β |0⟩ + e^{-iπ/4} sin β |1⟩` with
    /// `cos 2β = 1/√3`; Bloch vector `(1, -1, 1)/√3`.
    ///
    /// The phase is `e^{-iπ/4}`, the conjugate of the more common convention.
    /// With inputs `cos v|0⟩ + e^{iθ} sin v|1⟩`, the two-qubit repetition code
    /// at `θ = 7π/8` produces exactly this state.
    pub fn t_state() -> Self {
        Self::from_angles(t_state_beta(), -FRAC_PI_4)
    }

    /// H-type magic state `cos(π/8)|0⟩ + sin(π/8)|1⟩`.
    pub fn h_state() -> Self {
        Self::from_angles(FRAC_PI_8, 0.0)
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn apply(&self, u: &Mat2) -> Self {
        Self {
            c0: u[0][0] * self.c0 + u[0][1] * self.c1,
            c1: u[1][0] * self.c0 + u[1][1] * self.c1,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            c0: self.c0.conj(),
            c1: self.c1.conj(),
        }
    }

    pub fn density(&self) -> DensityMatrix1Q {
        DensityMatrix1Q {
            m00: self.c0.norm_sqr(),
            m11: self.c1.norm_sqr(),
            m01: self.c0 * self.c1.conj(),
        }
    }

    /// `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)`.
    pub fn bloch(&self) -> [f64; 3] {
        let r = self.c0 * self.c1.conj();
        [
            2.0 * r.re,
            -2.0 * r.im,
            self.c0.norm_sqr() - self.c1.norm_sqr(),
        ]
    }
}

/// Single-qubit density matrix `[[m00, m01], [m01*, m11]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix1Q {
    m00: f64,
    m11: f64,
    m01: Complex64,
}

impl DensityMatrix1Q {
    /// Validates trace, positivity and coherence bounds. Diagonal entries in
    /// `[-1e-12, 0)` are clamped to zero.
    pub fn new(m00: f64, m11: f64, m01: Complex64) -> Result<Self> {
        if !(m00.is_finite() && m11.is_finite() && m01.re.is_finite() && m01.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite density matrix entry".into(),
            ));
        }
        if (m00 + m11 - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidParameter(format!(
                "density matrix trace is {}",
                m00 + m11
            )));
        }
        if m00 < -STATE_TOL || m11 < -STATE_TOL {
            return Err(Error::InvalidParameter(format!(
                "negative diagonal ({m00}, {m11})"
            )));
        }
        let (m00, m11) = (m00.max(0.0), m11.max(0.0));
        if m01.norm_sqr() > m00 * m11 + STATE_TOL {
            return Err(Error::InvalidParameter(format!(
                "coherence |m01|^2 = {} exceeds m00*m11 = {}",
                m01.norm_sqr(),
                m00 * m11
            )));
        }
        Ok(Self { m00, m11, m01 })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m00: 0.5,
            m11: 0.5,
            m01: Complex64::new(0.0, 0.0),
        }
    }

    /// `(I + xX + yY + zZ)/2`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        if x * x + y * y + z * z > 1.0 + 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "Bloch vector ({x}, {y}, {z}) outside the unit ball"
            )));
        }
        Self::new(
            (1.0 + z) / 2.0,
            (1.0 - z) / 2.0,
            Complex64::new(x / 2.0, -y / 2.0),
        )
    }

    pub fn m00(&self) -> f64 {
        self.m00
    }

    pub fn m11(&self) -> f64 {
        self.m11
    }

    pub fn m01(&self) -> Complex64 {
        self.m01
    }

    pub fn m10(&self) -> Complex64 {
        self.m01.conj()
    }

    pub fn matrix(&self) -> Mat2 {
        [
            [Complex64::new(self.m00, 0.0), self.m01],
            [self.m01.conj(), Complex64::new(self.m11, 0.0)],
        ]
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &Mat2) -> Self {
        let m = mat2_mul(&mat2_mul(u, &self.matrix()), &mat2_adjoint(u));
        Self {
            m00: m[0][0].re,
            m11: m[1][1].re,
            m01: m[0][1],
        }
    }

    pub fn determinant(&self) -> f64 {
        self.m00 * self.m11 - self.m01.norm_sqr()
    }
}

/// `½ Σ|λ|` over the eigenvalues of `ρ − σ`.
pub fn trace_distance(rho: &DensityMatrix1Q, sigma: &DensityMatrix1Q) -> f64 {
    let d00 = rho.m00 - sigma.m00;
    let d11 = rho.m11 - sigma.m11;
    let d01 = rho.m01 - sigma.m01;
    let mean = 0.5 * (d00 + d11);
    let radius = (0.25 * (d00 - d11).powi(2) + d01.norm_sqr()).sqrt();
    let dist = 0.5 * ((mean + radius).abs() + (mean - radius).abs());
    dist.min(1.0)
}

/// Pauli expectations `(Tr ρ, Tr Xρ, Tr Yρ, Tr Zρ)`.
pub fn pauli_expectations(rho: &DensityMatrix1Q) -> [f64; 4] {
    [
        rho.m00 + rho.m11,
        2.0 * rho.m01.re,
        -2.0 * rho.m01.im,
        rho.m00 - rho.m11,
    ]
}

fn renyi2_from_expectations(e: [f64; 4]) -> f64 {
    let sum: f64 = e.iter().map(|x| x.powi(4)).sum();
    -(sum / 4.0).log2() - 1.0
}

/// Stabiliser 2-Rényi entropy of a pure state.
pub fn m2_pure(psi: &PureQubit) -> f64 {
    let [x, y, z] = psi.bloch();
    renyi2_from_expectations([1.0, x, y, z])
}

/// Stabiliser 2-Rényi entropy of a density matrix, using the same expression
/// as the pure-state case with `Tr(Pρ)` in place of `⟨ψ|P|ψ⟩`.
///
/// This is not a magic monotone on mixed states: `I/2` evaluates to 1, above
/// any pure single-qubit state.
pub fn m2_density(rho: &DensityMatrix1Q) -> f64 {
    renyi2_from_expectations(pauli_expectations(rho))
}
