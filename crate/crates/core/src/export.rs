//! Text, CSV and JSON renderings of matrices, spectra and reports.
//!
//! Every renderer returns a complete `String` so callers can write output
//! in one piece. Field order and float formatting are fixed, so equal inputs
//! give byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::corner::{Basis, CornerShape};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::{CheckRecord, VerificationReport};
use crate::scalar::{Backend, Scalar};
use crate::spectrum::{SpectrumPrediction, SPECTRUM_TOL};

/// Output encodings shared by all renderers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

/// 17 significant digits.
pub fn fixed_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types always serialise");
    out.push('\n');
    out
}

fn basis_label(basis: &Basis) -> Vec<Vec<usize>> {
    basis.indices().iter().map(|i| i.members().to_vec()).collect()
}

/// A named matrix in a fixed basis.
#[derive(Clone, Debug)]
pub struct NamedMatrix<S> {
    pub name: String,
    pub matrix: Matrix<S>,
}

/// Generator and Hamiltonian matrices of one representation at one q.
#[derive(Clone, Debug)]
pub struct MatrixDump<'a, S> {
    pub shape: CornerShape,
    pub q_label: String,
    pub basis: &'a Basis,
    pub matrices: Vec<NamedMatrix<S>>,
}

#[derive(Serialize)]
struct JsonMatrix {
    name: String,
    rows: Vec<Vec<String>>,
    trace: String,
}

#[derive(Serialize)]
struct JsonDump {
    k: usize,
    l: usize,
    q: String,
    backend: Backend,
    basis: Vec<Vec<usize>>,
    convention: &'static str,
    matrices: Vec<JsonMatrix>,
}

const CONVENTION: &str = "row I holds the coefficients of the image of v_I";

impl<S: Scalar> MatrixDump<'_, S> {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let basis = self
            .basis
            .indices()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        for m in &self.matrices {
            writeln!(out, "# k: {}", self.shape.k()).unwrap();
            writeln!(out, "# l: {}", self.shape.l()).unwrap();
            writeln!(out, "# q: {}", self.q_label).unwrap();
            writeln!(out, "# p: {}", m.name).unwrap();
            writeln!(out, "# backend: {}", S::BACKEND).unwrap();
            writeln!(out, "# basis: {basis}").unwrap();
            writeln!(out, "# convention: {CONVENTION}").unwrap();
            for r in 0..m.matrix.rows() {
                let row: Vec<String> = m.matrix.row(r).iter().map(Scalar::repr).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
            writeln!(out, "# trace: {}", m.matrix.trace().repr()).unwrap();
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::from("k,l,q,matrix,row,col,value\n");
        for m in &self.matrices {
            for r in 0..m.matrix.rows() {
                for c in 0..m.matrix.cols() {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        self.shape.k(),
                        self.shape.l(),
                        self.q_label,
                        m.name,
                        r,
                        c,
                        m.matrix[(r, c)].repr()
                    )
                    .unwrap();
                }
            }
        }
        out
    }

    fn render_json(&self) -> String {
        to_json(&JsonDump {
            k: self.shape.k(),
            l: self.shape.l(),
            q: self.q_label.clone(),
            backend: S::BACKEND,
            basis: basis_label(self.basis),
            convention: CONVENTION,
            matrices: self
                .matrices
                .iter()
                .map(|m| JsonMatrix {
                    name: m.name.clone(),
                    rows: (0..m.matrix.rows())
                        .map(|r| m.matrix.row(r).iter().map(Scalar::repr).collect())
                        .collect(),
                    trace: m.matrix.trace().repr(),
                })
                .collect(),
        })
    }
}

/// Predicted level paired with the numeric eigenvalue of the same rank.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub q: String,
    pub m_indices: Vec<usize>,
    pub lambda_predicted: f64,
    pub lambda_numeric: f64,
    pub abs_residual: f64,
}

/// Pairs sorted predictions with sorted numeric eigenvalues.
pub fn spectrum_rows(q_label: &str, prediction: &SpectrumPrediction, numeric: &[f64]) -> Result<Vec<SpectrumRow>> {
    if prediction.len() != numeric.len() {
        return Err(Error::Eigen(format!(
            "{} predicted levels but {} numeric eigenvalues",
            prediction.len(),
            numeric.len()
        )));
    }
    let mut sorted = numeric.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(prediction
        .levels
        .iter()
        .zip(sorted)
        .map(|(level, x)| SpectrumRow {
            q: q_label.to_string(),
            m_indices: level.indices.clone(),
            lambda_predicted: level.value,
            lambda_numeric: x,
            abs_residual: (level.value - x).abs(),
        })
        .collect())
}

/// Spectrum comparison over a list of q values.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumTable {
    pub shape: CornerShape,
    pub backend: Backend,
    pub q: Vec<String>,
    pub tolerance: f64,
    pub pass: bool,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn new(shape: CornerShape, backend: Backend, q: Vec<String>, rows: Vec<SpectrumRow>, tolerance: f64) -> Self {
        let pass = rows.iter().all(|r| r.abs_residual < tolerance);
        Self {
            shape,
            backend,
            q,
            tolerance,
            pass,
            rows,
        }
    }

    pub fn with_default_tolerance(shape: CornerShape, backend: Backend, q: Vec<String>, rows: Vec<SpectrumRow>) -> Self {
        Self::new(shape, backend, q, rows, SPECTRUM_TOL)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut out = String::from("q,m_indices,lambda_predicted,lambda_numeric,abs_residual\n");
                for r in &self.rows {
                    writeln!(
                        out,
                        "{},{},{:?},{:?},{:?}",
                        r.q,
                        join_indices(&r.m_indices),
                        r.lambda_predicted,
                        r.lambda_numeric,
                        r.abs_residual
                    )
                    .unwrap();
                }
                out
            }
            Format::Text => {
                let mut out = String::new();
                writeln!(out, "shape {} backend {}", self.shape, self.backend).unwrap();
                for r in &self.rows {
                    writeln!(
                        out,
                        "q={} m=[{}] predicted={} numeric={} residual={}",
                        r.q,
                        join_indices(&r.m_indices),
                        fixed_float(r.lambda_predicted),
                        fixed_float(r.lambda_numeric),
                        fixed_float(r.abs_residual)
                    )
                    .unwrap();
                }
                writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" }).unwrap();
                out
            }
        }
    }
}

fn join_indices(indices: &[usize]) -> String {
    indices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct JsonReport<'a> {
    shape: CornerShape,
    backend: Backend,
    q: &'a [String],
    pass: bool,
    checks: &'a [CheckRecord],
}

/// Renders a report for one shape over a list of q values.
pub fn render_report(
    report: &VerificationReport,
    shape: CornerShape,
    backend: Backend,
    q: &[String],
    format: Format,
) -> String {
    match format {
        Format::Json => to_json(&JsonReport {
            shape,
            backend,
            q,
            pass: report.passed(),
            checks: &report.checks,
        }),
        Format::Csv => {
            let mut out = String::from("name,k,l,q,r,pass,residual\n");
            for c in &report.checks {
                let (k, l) = c.shape.map_or((String::new(), String::new()), |s| (s.k().to_string(), s.l().to_string()));
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    c.name,
                    k,
                    l,
                    c.q.as_deref().unwrap_or(""),
                    c.r.as_deref().unwrap_or(""),
                    c.pass,
                    c.residual.repr()
                )
                .unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for c in &report.checks {
                write!(out, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name).unwrap();
                if let Some(s) = c.shape {
                    write!(out, " shape={s}").unwrap();
                }
                if let Some(q) = &c.q {
                    write!(out, " q={q}").unwrap();
                }
                if let Some(r) = &c.r {
                    write!(out, " r={r}").unwrap();
                }
                write!(out, " residual={}", c.residual.repr()).unwrap();
                if let Some(t) = c.elapsed {
                    write!(out, " elapsed_ms={:.3}", t.as_secs_f64() * 1e3).unwrap();
                }
                out.push('\n');
            }
            writeln!(out, "{}", if report.passed() { "ALL PASS" } else { "FAILURES" }).unwrap();
            out
        }
    }
}
