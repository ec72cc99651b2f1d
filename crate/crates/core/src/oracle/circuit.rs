//! Gate-level simulation of the two-qubit distillation circuit.
//!
//! Qubits: `0` and `1` carry the two noisy inputs, `2` is an ancilla in `|0⟩`.
//!
//! ```text
//! CNOT(0→1)  CH(1→0)  CNOT(1→0)   decode |0_L⟩→|00⟩, |1_L⟩→|11⟩
//! CNOT(0→2)  CNOT(1→2)            parity onto the ancilla
//! measure ancilla in Z, keep 0    accepts exactly the codespace
//! CNOT(0→1)                       qubit 1 returns to |0⟩
//! ```
//!
//! The output is qubit 0 after tracing out qubit 1 and the ancilla. With the
//! controlled-Hadamard written in the usual two-CNOT form the circuit uses
//! seven CNOTs.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{single_qubit_matrix, DenseDensityMatrix};
use crate::analytic::{final_state, CodespaceProjection, InputEnsemble, MIN_SUCCESS_PROBABILITY};
use crate::qmath::{hadamard, mat2_mul, phase_s, ry, rz, DensityMatrix1Q, Mat2};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    ControlledH { control: usize, target: usize },
    Single { qubit: usize, unitary: Mat2 },
}

/// A circuit step. Post-selection is a Z-basis measurement that keeps only
/// the given outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Gate(Gate),
    PostSelect { qubit: usize, outcome: u8 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateList {
    qubits: usize,
    ops: Vec<Op>,
}

impl GateList {
    pub fn new(qubits: usize, ops: Vec<Op>) -> Result<Self> {
        let in_range = |q: usize| q < qubits;
        for op in &ops {
            let ok = match *op {
                Op::Gate(
                    Gate::Cnot { control, target } | Gate::ControlledH { control, target },
                ) => in_range(control) && in_range(target) && control != target,
                Op::Gate(Gate::Single { qubit, .. }) => in_range(qubit),
                Op::PostSelect { qubit, outcome } => in_range(qubit) && outcome <= 1,
            };
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "bad operation {op:?} on {qubits} qubits"
                )));
            }
        }
        let measurements = ops
            .iter()
            .filter(|op| matches!(op, Op::PostSelect { .. }))
            .count();
        if measurements != 1 {
            return Err(Error::InvalidParameter(format!(
                "expected exactly one post-selection, found {measurements}"
            )));
        }
        Ok(Self { qubits, ops })
    }

    /// The fixed circuit for the `(1,1,2)` code.
    pub fn two_qubit_protocol() -> Self {
        use Gate::*;
        let ops = vec![
            Op::Gate(Cnot {
                control: 0,
                target: 1,
            }),
            Op::Gate(ControlledH {
                control: 1,
                target: 0,
            }),
            Op::Gate(Cnot {
                control: 1,
                target: 0,
            }),
            Op::Gate(Cnot {
                control: 0,
                target: 2,
            }),
            Op::Gate(Cnot {
                control: 1,
                target: 2,
            }),
            Op::PostSelect {
                qubit: 2,
                outcome: 0,
            },
            Op::Gate(Cnot {
                control: 0,
                target: 1,
            }),
        ];
        Self::new(3, ops).expect("valid by construction")
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    /// Replaces every controlled-Hadamard by `C`, CNOT, `B`, CNOT, `A` on the
    /// target followed by `S` on the control, where `H = i·A X B X C` with
    /// `A = Ry(π/4)`, `B = Ry(-π/4) Rz(-π/2)`, `C = Rz(π/2)` and `ABC = I`.
    pub fn expand_controlled_h(&self) -> Self {
        let ops = self
            .ops
            .iter()
            .flat_map(|op| match *op {
                Op::Gate(Gate::ControlledH { control, target }) => vec![
                    Op::Gate(Gate::Single {
                        qubit: target,
                        unitary: rz(FRAC_PI_2),
                    }),
                    Op::Gate(Gate::Cnot { control, target }),
                    Op::Gate(Gate::Single {
                        qubit: target,
                        unitary: mat2_mul(&ry(-FRAC_PI_4), &rz(-FRAC_PI_2)),
                    }),
                    Op::Gate(Gate::Cnot { control, target }),
                    Op::Gate(Gate::Single {
                        qubit: target,
                        unitary: ry(FRAC_PI_4),
                    }),
                    Op::Gate(Gate::Single {
                        qubit: control,
                        unitary: phase_s(),
                    }),
                ],
                other => vec![other],
            })
            .collect();
        Self {
            qubits: self.qubits,
            ops,
        }
    }

    pub fn cnot_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::Gate(Gate::Cnot { .. })))
            .count()
    }

    /// Runs the circuit on `rho` and returns the unnormalised post-selected
    /// state; its trace is the acceptance probability.
    pub fn run(&self, rho: &DenseDensityMatrix) -> Result<DenseDensityMatrix> {
        if rho.qubits() as usize != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.qubits,
                found: rho.dim(),
            });
        }
        let mut m = rho.matrix().clone();
        for op in &self.ops {
            match *op {
                Op::Gate(g) => {
                    let u = gate_matrix(&g, self.qubits);
                    m = &u * m * u.adjoint();
                }
                Op::PostSelect { qubit, outcome } => {
                    let keep = |i: usize| ((i >> qubit) & 1) as u8 == outcome;
                    let dim = m.nrows();
                    for i in 0..dim {
                        for j in 0..dim {
                            if !(keep(i) && keep(j)) {
                                m[(i, j)] = Complex64::new(0.0, 0.0);
                            }
                        }
                    }
                }
            }
        }
        DenseDensityMatrix::from_matrix(self.qubits as u32, m)
    }
}

fn embed_single(m: &mut DMatrix<Complex64>, col: usize, qubit: usize, u: &Mat2) {
    let b = (col >> qubit) & 1;
    for (out, row_u) in u.iter().enumerate() {
        let row = (col & !(1 << qubit)) | (out << qubit);
        m[(row, col)] += row_u[b];
    }
}

/// Full `2^q × 2^q` unitary of a gate.
pub fn gate_matrix(gate: &Gate, qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << qubits;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let one = Complex64::new(1.0, 0.0);
    for col in 0..dim {
        match *gate {
            Gate::Cnot { control, target } => {
                let row = if (col >> control) & 1 == 1 {
                    col ^ (1 << target)
                } else {
                    col
                };
                m[(row, col)] = one;
            }
            Gate::ControlledH { control, target } => {
                if (col >> control) & 1 == 1 {
                    embed_single(&mut m, col, target, &hadamard());
                } else {
                    m[(col, col)] = one;
                }
            }
            Gate::Single { qubit, unitary } => embed_single(&mut m, col, qubit, &unitary),
        }
    }
    m
}

/// Reduced state of `keep`, tracing out every other qubit.
fn reduce_to_qubit(rho: &DenseDensityMatrix, keep: usize) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    let m = rho.matrix();
    let dim = rho.dim();
    for rest in (0..dim).filter(|i| (i >> keep) & 1 == 0) {
        for a in 0..2 {
            for b in 0..2 {
                out[a][b] += m[(rest | (a << keep), rest | (b << keep))];
            }
        }
    }
    out
}

fn initial_state(input: &InputEnsemble) -> DenseDensityMatrix {
    let single = single_qubit_matrix(&input.single_copy());
    let mut ancilla = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
    ancilla[(0, 0)] = Complex64::new(1.0, 0.0);
    // ancilla is qubit 2, the most significant factor
    let m = ancilla.kronecker(&single.kronecker(&single));
    DenseDensityMatrix::from_matrix(3, m).expect("8x8")
}

/// Unnormalised output of the circuit, read as `(a, b, c)` on the surviving
/// qubit. `a + b` is the acceptance probability.
pub fn circuit_projection(
    input: &InputEnsemble,
    circuit: &GateList,
) -> Result<CodespaceProjection> {
    let out = circuit.run(&initial_state(input))?;
    let r = reduce_to_qubit(&out, 0);
    Ok(CodespaceProjection {
        a: r[0][0].re,
        b: r[1][1].re,
        c: r[0][1],
    })
}

/// Post-selected output state and acceptance probability of the two-qubit
/// circuit.
pub fn simulate_circuit_u2(input: &InputEnsemble) -> Result<(DensityMatrix1Q, f64)> {
    let p = circuit_projection(input, &GateList::two_qubit_protocol())?;
    let ps = p.a + p.b;
    if !(ps > MIN_SUCCESS_PROBABILITY) {
        return Err(Error::NonPositiveSuccessProbability(ps));
    }
    Ok((final_state(&p)?, ps))
}
