//! Brute-force reference path: dense `2^N × 2^N` density matrices.
//!
//! Nothing here shares code with [`crate::analytic`] beyond the logical
//! vectors and the single-copy input state, so agreement between the two is a
//! meaningful check. Sizes are capped at [`MAX_ORACLE_QUBITS`].

pub mod circuit;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytic::{CodespaceProjection, InputEnsemble};
use crate::gnu::{logical_vector, GnuParams, LogicalBit, MAX_ORACLE_QUBITS};
use crate::qmath::DensityMatrix1Q;
use crate::{Error, Result};

pub use circuit::{circuit_projection, simulate_circuit_u2, Gate, GateList, Op};

/// Dense multi-qubit density matrix. Qubit `k` is bit `k` of the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseDensityMatrix {
    qubits: u32,
    matrix: DMatrix<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub(crate) fn single_qubit_matrix(rho: &DensityMatrix1Q) -> DMatrix<Complex64> {
    let m = rho.matrix();
    DMatrix::from_fn(2, 2, |i, j| m[i][j])
}

impl DenseDensityMatrix {
    pub fn from_matrix(qubits: u32, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self { qubits, matrix })
    }

    /// `|ψ⟩⟨ψ|` for an amplitude vector of length `2^N`.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                found: dim,
            });
        }
        let qubits = dim.trailing_zeros();
        let matrix = DMatrix::from_fn(dim, dim, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::from_matrix(qubits, matrix)
    }

    pub fn maximally_mixed(qubits: u32) -> Self {
        let dim = 1usize << qubits;
        let mut matrix = DMatrix::from_element(dim, dim, zero());
        for i in 0..dim {
            matrix[(i, i)] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self { qubits, matrix }
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `max |ρ_ij − ρ_ji*|`.
    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Relabels qubit `k` as qubit `perm[k]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let nq = self.qubits as usize;
        let mut seen = vec![false; nq];
        if perm.len() != nq
            || perm
                .iter()
                .any(|&p| p >= nq || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter(format!(
                "{perm:?} is not a permutation of {nq} qubits"
            )));
        }
        let map = |i: usize| {
            perm.iter()
                .enumerate()
                .fold(0, |acc, (k, &p)| acc | (((i >> k) & 1) << p))
        };
        let dim = self.dim();
        let mut out = DMatrix::from_element(dim, dim, zero());
        for i in 0..dim {
            for j in 0..dim {
                out[(map(i), map(j))] = self.matrix[(i, j)];
            }
        }
        Ok(Self {
            qubits: self.qubits,
            matrix: out,
        })
    }

    /// `⟨bra|ρ|ket⟩` for real vectors.
    pub fn matrix_element(&self, bra: &[f64], ket: &[f64]) -> Result<Complex64> {
        let dim = self.dim();
        if bra.len() != dim || ket.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bra.len().max(ket.len()),
            });
        }
        let mut acc = zero();
        for (i, &x) in bra.iter().enumerate().filter(|(_, x)| **x != 0.0) {
            for (j, &y) in ket.iter().enumerate().filter(|(_, y)| **y != 0.0) {
                acc += self.matrix[(i, j)] * (x * y);
            }
        }
        Ok(acc)
    }
}

/// `ρ_{N,ε} = ρ_initial^{⊗N}`.
pub fn build_rho_n(input: &InputEnsemble, qubits: u32) -> Result<DenseDensityMatrix> {
    if qubits > MAX_ORACLE_QUBITS {
        return Err(Error::OutOfRange(format!(
            "dense oracle limited to N <= {MAX_ORACLE_QUBITS}, got {qubits}"
        )));
    }
    let single = single_qubit_matrix(&input.single_copy());
    let mut matrix = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for _ in 0..qubits {
        matrix = single.kronecker(&matrix);
    }
    DenseDensityMatrix::from_matrix(qubits, matrix)
}

/// Logical-basis matrix elements `(⟨0_L|ρ|0_L⟩, ⟨1_L|ρ|1_L⟩, ⟨0_L|ρ|1_L⟩)`.
pub fn project_and_decode(
    rho: &DenseDensityMatrix,
    code: &GnuParams,
) -> Result<CodespaceProjection> {
    if rho.qubits() != code.qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1usize << code.qubits(),
            found: rho.dim(),
        });
    }
    let l0 = logical_vector(code, LogicalBit::Zero)?;
    let l1 = logical_vector(code, LogicalBit::One)?;
    Ok(CodespaceProjection {
        a: rho.matrix_element(&l0, &l0)?.re,
        b: rho.matrix_element(&l1, &l1)?.re,
        c: rho.matrix_element(&l0, &l1)?,
    })
}
