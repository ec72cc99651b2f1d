//! Closed-form projections for the `g = n = 1` codes on 2, 3 and 4 qubits.
//!
//! With `q = 1 − 2ε`, `C_k = cos(k v)` and `S_2 = sin 2v`, each form is a
//! polynomial in the single-copy matrix elements
//! `p = (1 + q C_2)/2`, `|r| = q S_2 / 2`. The forms below are the
//! commonly quoted ones with the sign errors listed in [`SIGN_CORRECTIONS`]
//! fixed; each must agree with [`crate::analytic::abc_general`] to `1e-12`.

use num_complex::Complex64;

use crate::analytic::{CodespaceProjection, InputEnsemble};

/// One sign changed relative to the commonly quoted closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignCorrection {
    pub qubits: u32,
    pub coefficient: &'static str,
    pub original: &'static str,
    pub corrected: &'static str,
    pub reason: &'static str,
}

pub const SIGN_CORRECTIONS: &[SignCorrection] = &[
    SignCorrection {
        qubits: 2,
        coefficient: "a",
        original: "-(1/4) (1 + (1-2e) cos 2v)^2",
        corrected: "(1/4) (1 + (1-2e) cos 2v)^2",
        reason: "a = <00|rho|00> is a Born probability; the leading minus makes it negative",
    },
    SignCorrection {
        qubits: 3,
        coefficient: "c",
        original: "(sqrt3/8) e^{-i theta} (1-2e) (1 - (1-2e) cos 2v)^2 sin 2v",
        corrected: "(sqrt3/8) e^{-i theta} (1-2e) (1 + (1-2e) cos 2v)^2 sin 2v",
        reason: "c = sqrt3 p^2 r with p = <0|rho1|0> = (1 + (1-2e) cos 2v)/2; |c|^2 = ab fails at e = 0 otherwise",
    },
];

fn terms(input: &InputEnsemble) -> (f64, f64, f64, Complex64) {
    let v = input.v();
    let q = 1.0 - 2.0 * input.eps();
    let base = 1.0 + q * (2.0 * v).cos();
    let phase = Complex64::from_polar(1.0, -input.theta());
    (q, base, (2.0 * v).sin(), phase)
}

/// `(1,1,2)`: `a = ¼ B²`, `b = ¼ − ¼ q² cos 4v`, `c = e^{-iθ} q B sin 2v / (2√2)`
/// with `B = 1 + q cos 2v`.
pub fn abc_closed_u2(input: &InputEnsemble) -> CodespaceProjection {
    let (q, base, s2, phase) = terms(input);
    let v = input.v();
    CodespaceProjection {
        a: 0.25 * base * base,
        b: 0.25 - 0.25 * q * q * (4.0 * v).cos(),
        c: phase * (q * base * s2 / (2.0 * 2f64.sqrt())),
    }
}

/// `(1,1,3)`.
pub fn abc_closed_u3(input: &InputEnsemble) -> CodespaceProjection {
    let (q, base, s2, phase) = terms(input);
    let (v, e) = (input.v(), input.eps());
    let b = (6.0 - 8.0 * e * (1.0 - e) + (3.0 - 2.0 * e) * (1.0 - 4.0 * e * e) * (2.0 * v).cos()
        - 6.0 * q * q * (4.0 * v).cos()
        + 3.0 * (-q).powi(3) * (6.0 * v).cos())
        / 32.0;
    CodespaceProjection {
        a: base.powi(3) / 8.0,
        b,
        c: phase * (3f64.sqrt() / 8.0 * q * base * base * s2),
    }
}

/// `(1,1,4)`. The quoted form is correct as written: its `(-1)` factors in
/// `a` and `c` cancel in pairs.
pub fn abc_closed_u4(input: &InputEnsemble) -> CodespaceProjection {
    let (q, base, s2, phase) = terms(input);
    let (v, e) = (input.v(), input.eps());
    let a = (-0.5 - (0.5 - e) * (2.0 * v).cos()).powi(4);
    let b = -0.125 * base * base * (-1.0 + 2.0 * (1.0 - e) * e + q * q * (4.0 * v).cos());
    let c = phase * (0.125 * (-q) * (-base).powi(3) * s2);
    CodespaceProjection { a, b, c }
}

/// Closed form for a `g = n = 1` code on `qubits` qubits, if one exists.
pub fn abc_closed(qubits: u32, input: &InputEnsemble) -> Option<CodespaceProjection> {
    match qubits {
        2 => Some(abc_closed_u2(input)),
        3 => Some(abc_closed_u3(input)),
        4 => Some(abc_closed_u4(input)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::codespace_projection;
    use crate::gnu::GnuParams;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn input(v: f64, theta: f64, eps: f64) -> InputEnsemble {
        InputEnsemble::new(v, theta, eps).unwrap()
    }

    #[test]
    fn u2_example_is_positive() {
        let p = abc_closed_u2(&input(FRAC_PI_4, 0.0, 0.0));
        assert_abs_diff_eq!(p.a, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p.b, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.c.re, 1.0 / 8f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn u3_vacuum() {
        for eps in [0.0, 0.2, 0.7] {
            let p = abc_closed_u3(&input(0.0, 0.0, eps));
            assert_abs_diff_eq!(
                p.a,
                (1.0 + (1.0 - 2.0 * eps)).powi(3) / 8.0,
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(abc_closed_u3(&input(0.0, 0.0, 0.0)).a, 1.0);
    }

    #[test]
    fn u4_vacuum() {
        let p = abc_closed_u4(&input(0.0, 1.1, 0.0));
        assert_abs_diff_eq!(p.a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.b, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.c.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_forms_match_general_formula() {
        for qubits in 2..=4 {
            let code = GnuParams::with_qubits(1, 1, qubits).unwrap();
            for i in 0..=8 {
                let v = FRAC_PI_2 * i as f64 / 8.0;
                for theta in [-3.0, 0.0, 0.7, 2.5] {
                    for eps in [0.0, 0.05, 0.3, 0.5, 0.9] {
                        let inp = input(v, theta, eps);
                        let closed = abc_closed(qubits, &inp).unwrap();
                        let general = codespace_projection(&code, &inp);
                        assert!(
                            closed.max_deviation(&general) < 1e-12,
                            "u={qubits} v={v} th={theta} e={eps}"
                        );
                    }
                }
            }
        }
        assert!(abc_closed(5, &input(0.1, 0.0, 0.0)).is_none());
    }

    #[test]
    fn uncorrected_forms_disagree() {
        // the listed corrections are necessary, not cosmetic
        let inp = input(0.5, 0.3, 0.1);
        let q = 1.0 - 2.0 * 0.1;
        let base = 1.0 + q * 1.0f64.cos();
        let printed_a = -0.25 * base * base;
        assert!((printed_a - abc_closed_u2(&inp).a).abs() > 0.1);
        let printed_c = 3f64.sqrt() / 8.0 * q * (1.0 - q * 1.0f64.cos()).powi(2) * 1.0f64.sin();
        assert!((printed_c - abc_closed_u3(&inp).c.norm()).abs() > 0.01);
        assert_eq!(SIGN_CORRECTIONS.len(), 2);
    }
}
