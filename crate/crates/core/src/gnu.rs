//! gnu codes: parameters and logical states.
//!
//! The logical states of a gnu code on `N = g·n·u` qubits are
//!
//! ```text
//! |0_L⟩ = √(2^-(n-1)) Σ_{j even} √C(n,j) |D^N_{gj}⟩
//! |1_L⟩ = √(2^-(n-1)) Σ_{j odd}  √C(n,j) |D^N_{gj}⟩
//! ```
//!
//! where `|D^N_w⟩` is the uniform superposition of all weight-`w` bitstrings.
//! The analytic path works with the sparse Dicke-weight form only; dense
//! `2^N` vectors exist for the oracle.
//!
//! Dense vectors index qubit `k` by bit `k` of the basis index, so the first
//! qubit is the least significant bit.

use std::collections::BTreeMap;
use std::fmt;

use crate::qmath::{binomial_f64, MAX_BINOMIAL_N};
use crate::{Error, Result};

/// Largest code size evaluated analytically.
pub const MAX_ANALYTIC_QUBITS: u32 = MAX_BINOMIAL_N;

/// Largest code size for which dense `2^N` objects are built.
pub const MAX_ORACLE_QUBITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicalBit {
    Zero,
    One,
}

impl LogicalBit {
    fn parity(self) -> u32 {
        match self {
            LogicalBit::Zero => 0,
            LogicalBit::One => 1,
        }
    }
}

/// Code parameters `(g, n, u)`, stored with the derived qubit count `N`.
///
/// `u` may be fractional as long as `g·n·u` is an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GnuParams {
    g: u32,
    n: u32,
    qubits: u32,
}

impl GnuParams {
    pub fn new(g: u32, n: u32, u: f64) -> Result<Self> {
        if g == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "g = {g} and n = {n} must be positive"
            )));
        }
        if !(u.is_finite() && u > 0.0) {
            return Err(Error::InvalidParameter(format!("u = {u} must be positive")));
        }
        let total = (g * n) as f64 * u;
        let rounded = total.round();
        if (total - rounded).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "g*n*u = {total} is not an integer"
            )));
        }
        Self::with_qubits(g, n, rounded as u32)
    }

    pub fn with_qubits(g: u32, n: u32, qubits: u32) -> Result<Self> {
        if g == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "g = {g} and n = {n} must be positive"
            )));
        }
        if g * n > qubits {
            return Err(Error::InvalidParameter(format!(
                "g*n = {} exceeds N = {qubits}",
                g * n
            )));
        }
        if qubits > MAX_ANALYTIC_QUBITS {
            return Err(Error::OutOfRange(format!(
                "N = {qubits} exceeds {MAX_ANALYTIC_QUBITS}"
            )));
        }
        Ok(Self { g, n, qubits })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn u(&self) -> f64 {
        self.qubits as f64 / (self.g * self.n) as f64
    }

    /// `N = g·n·u`.
    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    fn require_oracle_size(&self) -> Result<()> {
        if self.qubits > MAX_ORACLE_QUBITS {
            return Err(Error::OutOfRange(format!(
                "dense vectors limited to N <= {MAX_ORACLE_QUBITS}, got {}",
                self.qubits
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GnuParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.g, self.n, self.u())
    }
}

/// Logical state as coefficients over Dicke states, keyed by excitation weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeCoefficientList {
    pub entries: BTreeMap<u32, f64>,
}

impl DickeCoefficientList {
    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|c| c * c).sum()
    }

    pub fn get(&self, weight: u32) -> f64 {
        self.entries.get(&weight).copied().unwrap_or(0.0)
    }
}

pub fn logical_state_coeffs(code: &GnuParams, bit: LogicalBit) -> DickeCoefficientList {
    let prefactor = 2f64.powi(1 - code.n as i32);
    let entries = (0..=code.n)
        .filter(|j| j % 2 == bit.parity())
        .map(|j| {
            (
                code.g * j,
                (prefactor * binomial_f64(code.n, j as i64)).sqrt(),
            )
        })
        .collect();
    DickeCoefficientList { entries }
}

pub fn dicke_vector(qubits: u32, weight: u32) -> Result<Vec<f64>> {
    if qubits > MAX_ORACLE_QUBITS || weight > qubits {
        return Err(Error::OutOfRange(format!(
            "Dicke state |D^{qubits}_{weight}> needs weight <= N <= {MAX_ORACLE_QUBITS}"
        )));
    }
    let amp = 1.0 / binomial_f64(qubits, weight as i64).sqrt();
    Ok((0..1usize << qubits)
        .map(|i| if i.count_ones() == weight { amp } else { 0.0 })
        .collect())
}

pub fn logical_vector(code: &GnuParams, bit: LogicalBit) -> Result<Vec<f64>> {
    code.require_oracle_size()?;
    let mut out = vec![0.0; 1usize << code.qubits];
    for (&w, &coeff) in &logical_state_coeffs(code, bit).entries {
        for (o, d) in out.iter_mut().zip(dicke_vector(code.qubits, w)?) {
            *o += coeff * d;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn code(g: u32, n: u32, u: f64) -> GnuParams {
        GnuParams::new(g, n, u).unwrap()
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn small_codes() -> Vec<GnuParams> {
        let mut out = Vec::new();
        for g in 1..=4 {
            for n in 1..=4 {
                for qubits in g * n..=8 {
                    out.push(GnuParams::with_qubits(g, n, qubits).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn params_validation() {
        assert_eq!(code(1, 1, 2.0).qubits(), 2);
        assert_eq!(code(2, 2, 1.5).qubits(), 6);
        assert!(GnuParams::new(2, 2, 1.3).is_err());
        assert!(GnuParams::new(0, 1, 1.0).is_err());
        assert!(GnuParams::new(1, 1, -1.0).is_err());
        assert!(GnuParams::new(2, 3, 0.5).is_err());
        assert!(matches!(
            GnuParams::new(1, 1, 61.0),
            Err(Error::OutOfRange(_))
        ));
        assert_eq!(code(1, 1, 2.0).to_string(), "(1,1,2)");
    }

    #[test]
    fn coeffs_examples() {
        let zero = logical_state_coeffs(&code(1, 1, 2.0), LogicalBit::Zero);
        assert_eq!(zero.entries, BTreeMap::from([(0, 1.0)]));
        let one = logical_state_coeffs(&code(1, 1, 2.0), LogicalBit::One);
        assert_eq!(one.entries, BTreeMap::from([(1, 1.0)]));
        let z = logical_state_coeffs(&code(1, 2, 1.0), LogicalBit::Zero);
        assert_eq!(z.entries.len(), 2);
        assert_abs_diff_eq!(z.get(0), FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(z.get(2), FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn coeffs_normalized_on_multiples_of_g() {
        for g in 1..=5 {
            for n in 1..=10 {
                if g * n * 2 > MAX_ANALYTIC_QUBITS {
                    continue;
                }
                let c = GnuParams::with_qubits(g, n, g * n * 2).unwrap();
                for bit in [LogicalBit::Zero, LogicalBit::One] {
                    let list = logical_state_coeffs(&c, bit);
                    assert_abs_diff_eq!(list.norm_sqr(), 1.0, epsilon = 1e-12);
                    assert!(list.entries.keys().all(|w| w % g == 0));
                }
            }
        }
    }

    #[test]
    fn dicke_examples() {
        let w = dicke_vector(2, 1).unwrap();
        for (x, y) in w.iter().zip([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
        let vac = dicke_vector(3, 0).unwrap();
        assert_eq!(vac[0], 1.0);
        assert_eq!(vac.iter().filter(|&&x| x != 0.0).count(), 1);
        let d42 = dicke_vector(4, 2).unwrap();
        let support: Vec<usize> = (0..16).filter(|&i| d42[i] != 0.0).collect();
        assert_eq!(support, vec![3, 5, 6, 9, 10, 12]);
        for i in support {
            assert_abs_diff_eq!(d42[i], 1.0 / 6f64.sqrt(), epsilon = 1e-15);
        }
        assert!(dicke_vector(3, 4).is_err());
        assert!(dicke_vector(13, 1).is_err());
    }

    #[test]
    fn logical_vector_examples() {
        let one = logical_vector(&code(1, 1, 2.0), LogicalBit::One).unwrap();
        for (x, y) in one.iter().zip([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
        let rep = logical_vector(&code(2, 1, 1.0), LogicalBit::One).unwrap();
        assert_eq!(rep, vec![0.0, 0.0, 0.0, 1.0]);
        let vac = logical_vector(&code(1, 1, 3.0), LogicalBit::Zero).unwrap();
        assert_eq!(vac[0], 1.0);
        assert_eq!(vac.iter().sum::<f64>(), 1.0);
        assert!(logical_vector(&code(1, 1, 13.0), LogicalBit::Zero).is_err());
    }

    #[test]
    fn logical_vectors_orthonormal_and_match_coeffs() {
        for c in small_codes() {
            let l0 = logical_vector(&c, LogicalBit::Zero).unwrap();
            let l1 = logical_vector(&c, LogicalBit::One).unwrap();
            assert_abs_diff_eq!(dot(&l0, &l0), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dot(&l1, &l1), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dot(&l0, &l1), 0.0, epsilon = 1e-12);
            for (bit, vec) in [(LogicalBit::Zero, &l0), (LogicalBit::One, &l1)] {
                let coeffs = logical_state_coeffs(&c, bit);
                for w in 0..=c.qubits() {
                    let d = dicke_vector(c.qubits(), w).unwrap();
                    assert_abs_diff_eq!(dot(vec, &d), coeffs.get(w), epsilon = 1e-12);
                }
            }
        }
    }

    fn permute_index(i: usize, perm: &[usize]) -> usize {
        perm.iter()
            .enumerate()
            .fold(0, |acc, (k, &p)| acc | (((i >> k) & 1) << p))
    }

    #[test]
    fn logical_vectors_permutation_invariant() {
        for c in small_codes().into_iter().filter(|c| c.qubits() <= 6) {
            let nq = c.qubits() as usize;
            // cyclic shift and a transposition generate the symmetric group
            let shift: Vec<usize> = (0..nq).map(|k| (k + 1) % nq).collect();
            let mut swap: Vec<usize> = (0..nq).collect();
            swap.swap(0, nq - 1);
            for bit in [LogicalBit::Zero, LogicalBit::One] {
                let v = logical_vector(&c, bit).unwrap();
                for perm in [&shift, &swap] {
                    let mut permuted = vec![0.0; v.len()];
                    for (i, &x) in v.iter().enumerate() {
                        permuted[permute_index(i, perm)] = x;
                    }
                    assert_eq!(permuted, v);
                }
            }
        }
    }
}
