//! Number formatting, CSV/JSON rendering and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value as Json};

/// Significant digits for every printed float.
pub const SIG_DIGITS: usize = 12;

/// `x` with 12 significant digits, `%g`-style: fixed notation for
/// exponents in `[-4, 12)`, scientific otherwise, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, or `null` if not finite.
fn json_num(x: f64) -> Json {
    let rounded: f64 = fmt_num(x).parse().unwrap_or(f64::NAN);
    serde_json::Number::from_f64(rounded)
        .map(Json::Number)
        .unwrap_or(Json::Null)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(Option<f64>),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(Some(x)) => fmt_num(*x),
            Cell::Num(None) => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Num(Some(x)) => json_num(*x),
            Cell::Num(None) => Json::Null,
            Cell::Int(i) => Json::from(*i),
            Cell::Text(s) => Json::from(s.as_str()),
            Cell::Bool(b) => Json::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(Some(x))
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

/// Command result: named scalar fields, optionally followed by a table.
///
/// CSV renders the table if there is one, otherwise the fields as a
/// one-row table. JSON renders one object holding the fields plus
/// `columns` and `rows`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub fields: Vec<(String, Cell)>,
    pub table: Option<(Vec<String>, Vec<Vec<Cell>>)>,
}

impl Output {
    pub fn field(mut self, name: &str, value: impl Into<Cell>) -> Self {
        self.fields.push((name.to_string(), value.into()));
        self
    }

    pub fn with_table(mut self, columns: Vec<String>, rows: Vec<Vec<Cell>>) -> Self {
        self.table = Some((columns, rows));
        self
    }

    pub fn to_csv(&self) -> String {
        let (header, rows): (Vec<String>, Vec<Vec<String>>) = match &self.table {
            Some((cols, rows)) => (
                cols.clone(),
                rows.iter()
                    .map(|r| r.iter().map(Cell::csv).collect())
                    .collect(),
            ),
            None => (
                self.fields.iter().map(|(k, _)| k.clone()).collect(),
                vec![self.fields.iter().map(|(_, v)| v.csv()).collect()],
            ),
        };
        let mut out = header.join(",");
        out.push('\n');
        for row in rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        for (k, v) in &self.fields {
            obj.insert(k.clone(), v.json());
        }
        if let Some((cols, rows)) = &self.table {
            obj.insert("columns".into(), Json::from(cols.clone()));
            obj.insert(
                "rows".into(),
                Json::Array(
                    rows.iter()
                        .map(|r| Json::Array(r.iter().map(Cell::json).collect()))
                        .collect(),
                ),
            );
        }
        let mut s = serde_json::to_string_pretty(&Json::Object(obj)).expect("serialisable");
        s.push('\n');
        s
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
