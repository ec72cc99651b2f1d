//! Tabulated curves behind each figure.

use std::fmt;
use std::str::FromStr;

use crate::gnu::GnuParams;
use crate::protocols::{
    bk_h_error, bk_t_error, repetition_curve, Composition, ErrorCurve, MagicTarget,
};
use crate::solver::{magic_curve_with, v_grid, TargetSpec, MAGIC_GRID_DIVISIONS};
use crate::{Error, Execution, Result};

/// `ε` grid step for error-curve figures.
pub const EPS_DIVISIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Noiseless output magic against `v` at `θ = π/4` for `u = 2, 3, 4`.
    MagicVsV,
    /// Maximum output error, X-flipped |T⟩ target, against BK-T.
    ErrorT,
    /// Maximum output error, X-flipped |H⟩ target, against BK-H.
    ErrorH,
    /// Two-stage scheme against a single BK round.
    Combined,
    /// Repetition code with exact-target inputs.
    Repetition,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::MagicVsV,
        FigureId::ErrorT,
        FigureId::ErrorH,
        FigureId::Combined,
        FigureId::Repetition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::MagicVsV => "1c",
            FigureId::ErrorT => "2b",
            FigureId::ErrorH => "2c",
            FigureId::Combined => "3b",
            FigureId::Repetition => "4",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown figure id '{s}' (expected 1c, 2b, 2c, 3b or 4)"
                ))
            })
    }
}

/// A table of named columns; `None` marks a point where the quantity is
/// undefined (zero success probability).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Dataset {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// `k / divisions` for `k = 0..=divisions/2`, i.e. `[0, 0.5]`.
pub fn eps_grid(divisions: usize) -> Vec<f64> {
    (0..=divisions / 2)
        .map(|k| k as f64 / divisions as f64)
        .collect()
}

fn codes_u234() -> Result<Vec<GnuParams>> {
    (2..=4).map(|u| GnuParams::with_qubits(1, 1, u)).collect()
}

fn tabulate(
    name: &str,
    columns: &[&str],
    xs: &[f64],
    execution: Execution,
    row: impl Fn(f64) -> Result<Vec<Option<f64>>> + Sync + Send,
) -> Result<Dataset> {
    let rows = execution
        .map(xs, |&x| {
            row(x).map(|mut r| {
                r.insert(0, Some(x));
                r
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        name: name.to_string(),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    })
}

pub fn figure(id: FigureId, execution: Execution) -> Result<Dataset> {
    match id {
        FigureId::MagicVsV => magic_vs_v(execution),
        FigureId::ErrorT => error_curves(id, TargetSpec::XT, bk_t_error, execution),
        FigureId::ErrorH => error_curves(id, TargetSpec::XH, bk_h_error, execution),
        FigureId::Combined => combined(execution),
        FigureId::Repetition => repetition(execution),
    }
}

fn magic_vs_v(execution: Execution) -> Result<Dataset> {
    let vs = v_grid(MAGIC_GRID_DIVISIONS);
    let theta = std::f64::consts::FRAC_PI_4;
    let curves = codes_u234()?
        .iter()
        .map(|code| magic_curve_with(code, theta, &vs, execution))
        .collect::<Result<Vec<_>>>()?;
    let rows = vs
        .iter()
        .map(|&v| {
            let mut row = vec![Some(v)];
            for c in &curves {
                row.push(c.points.iter().find(|p| p.0 == v).map(|p| p.1));
            }
            row
        })
        .collect();
    Ok(Dataset {
        name: FigureId::MagicVsV.to_string(),
        columns: ["v", "M2_u2", "M2_u3", "M2_u4"].map(String::from).to_vec(),
        rows,
    })
}

fn error_curves(
    id: FigureId,
    target: TargetSpec,
    bk: fn(f64) -> Result<f64>,
    execution: Execution,
) -> Result<Dataset> {
    let curves = codes_u234()?
        .into_iter()
        .map(|code| ErrorCurve::solved(code, &target))
        .collect::<Result<Vec<_>>>()?;
    tabulate(
        id.as_str(),
        &["eps", "E_u2", "E_u3", "E_u4", "E_bk"],
        &eps_grid(EPS_DIVISIONS),
        execution,
        |e| {
            let mut row = curves
                .iter()
                .map(|c| c.eval(e).map(Some))
                .collect::<Result<Vec<_>>>()?;
            row.push(Some(bk(e)?));
            Ok(row)
        },
    )
}

fn combined(execution: Execution) -> Result<Dataset> {
    let t = Composition::new(MagicTarget::T)?;
    let h = Composition::new(MagicTarget::H)?;
    let columns = ["eps", "combined_T", "combined_H", "bk_T", "bk_H"];
    tabulate("3b", &columns, &eps_grid(EPS_DIVISIONS), execution, |e| {
        Ok(vec![
            Some(t.stage_b_error(t.stage_a_error(e)?)?),
            Some(h.stage_b_error(h.stage_a_error(e)?)?),
            Some(bk_t_error(e)?),
            Some(bk_h_error(e)?),
        ])
    })
}

fn repetition(execution: Execution) -> Result<Dataset> {
    let t = repetition_curve(MagicTarget::T);
    let h = repetition_curve(MagicTarget::H);
    tabulate(
        "4",
        &["eps", "E_rep_T", "E_rep_H"],
        &eps_grid(EPS_DIVISIONS),
        execution,
        |e| Ok(vec![Some(t.eval(e)?), Some(h.eval(e)?)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
        }
        assert!("2a".parse::<FigureId>().is_err());
    }

    #[test]
    fn eps_grid_is_exact() {
        let g = eps_grid(EPS_DIVISIONS);
        assert_eq!(g.len(), 501);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[500], 0.5);
        assert_eq!(g[173], 0.173);
    }

    #[test]
    fn magic_figure_shape() {
        let d = figure(FigureId::MagicVsV, Execution::Parallel).unwrap();
        assert_eq!(d.rows.len(), MAGIC_GRID_DIVISIONS + 1);
        let last = d.rows.last().unwrap();
        // |1…1⟩ lies outside every codespace here
        assert_eq!(&last[1..], &[None, None, None]);
        assert_eq!(d.rows[0][1], Some(0.0));
    }

    #[test]
    fn repetition_figure_never_suppresses() {
        let d = figure(FigureId::Repetition, Execution::Parallel).unwrap();
        for row in &d.rows[1..] {
            let e = row[0].unwrap();
            assert!(row[1].unwrap() >= e - 1e-10);
            assert!(row[2].unwrap() >= e - 1e-10);
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        let a = figure(FigureId::Combined, Execution::Sequential).unwrap();
        let b = figure(FigureId::Combined, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.column("bk_T").unwrap()[0], Some(0.0));
    }
}
