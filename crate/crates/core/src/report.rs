//! Structured pass/fail records for identity checks.

use std::time::Duration;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::corner::CornerShape;
use crate::matrix::Matrix;
use crate::scalar::{Backend, Scalar};

/// Size of a discrepancy between two sides of an identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    /// Exact backend, both sides identical.
    ExactZero,
    /// Exact backend, nonzero difference; `repr` is the largest entry.
    Exact { magnitude: f64, repr: String },
    /// Floating point magnitude (relative unless stated otherwise).
    Approx(f64),
}

impl Residual {
    /// Residual of `lhs - rhs`. Approximate residuals are scaled by
    /// `max(1, max|lhs|, max|rhs|)`.
    pub fn between<S: Scalar>(lhs: &Matrix<S>, rhs: &Matrix<S>) -> Self {
        let diff = lhs - rhs;
        match S::BACKEND {
            Backend::Exact => Self::of_exact(&diff),
            Backend::Approximate => {
                let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
                Residual::Approx(diff.max_abs() / scale)
            }
        }
    }

    /// Residual of a quantity that should vanish, without rescaling.
    pub fn of_matrix<S: Scalar>(m: &Matrix<S>) -> Self {
        match S::BACKEND {
            Backend::Exact => Self::of_exact(m),
            Backend::Approximate => Residual::Approx(m.max_abs()),
        }
    }

    pub fn of_scalar<S: Scalar>(x: &S) -> Self {
        Self::of_matrix(&Matrix::diagonal(vec![x.clone()]))
    }

    fn of_exact<S: Scalar>(m: &Matrix<S>) -> Self {
        match m.max_abs_entry() {
            None => Residual::ExactZero,
            Some(x) => Residual::Exact {
                magnitude: x.abs_f64(),
                repr: x.repr(),
            },
        }
    }

    pub fn magnitude(&self) -> f64 {
        match self {
            Residual::ExactZero => 0.0,
            Residual::Exact { magnitude, .. } => *magnitude,
            Residual::Approx(x) => *x,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Residual::ExactZero)
    }

    /// Exact residuals pass only when literally zero; approximate ones below `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        match self {
            Residual::ExactZero => true,
            Residual::Exact { .. } => false,
            Residual::Approx(x) => *x < tol,
        }
    }

    /// The larger of two residuals. NaN counts as the worst possible value.
    pub fn worst(self, other: Residual) -> Residual {
        let rank = |r: &Residual| match r {
            Residual::ExactZero => (0, 0.0),
            Residual::Exact { magnitude, .. } => (1, *magnitude),
            Residual::Approx(x) if x.is_nan() => (2, f64::INFINITY),
            Residual::Approx(x) => (1, *x),
        };
        let (ra, ma) = rank(&self);
        let (rb, mb) = rank(&other);
        if (rb, mb) > (ra, ma) {
            other
        } else {
            self
        }
    }

    pub fn repr(&self) -> String {
        match self {
            Residual::ExactZero => "exact-zero".to_string(),
            Residual::Exact { repr, .. } => repr.clone(),
            Residual::Approx(x) => format!("{:.16e}", x),
        }
    }
}

impl Serialize for Residual {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        match self {
            Residual::ExactZero => serializer.serialize_str("exact-zero"),
            Residual::Exact { magnitude, .. } => serializer.serialize_f64(*magnitude),
            Residual::Approx(x) => serializer.serialize_f64(*x),
        }
    }
}

/// One verified identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub shape: Option<CornerShape>,
    pub q: Option<String>,
    pub r: Option<String>,
    pub pass: bool,
    pub residual: Residual,
    pub elapsed: Option<Duration>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, residual: Residual, pass: bool) -> Self {
        Self {
            name: name.into(),
            shape: None,
            q: None,
            r: None,
            pass,
            residual,
            elapsed: None,
        }
    }

    /// A record that passes iff the residual is zero (exact) or below `tol`.
    pub fn expect_zero(name: impl Into<String>, residual: Residual, tol: f64) -> Self {
        let pass = residual.passes(tol);
        Self::new(name, residual, pass)
    }

    pub fn with_shape(mut self, shape: CornerShape) -> Self {
        self.shape = Some(shape);
        self
    }

    pub fn with_q(mut self, q: impl Into<String>) -> Self {
        self.q = Some(q.into());
        self
    }

    pub fn with_r(mut self, r: impl Into<String>) -> Self {
        self.r = Some(r.into());
        self
    }
}

impl Serialize for CheckRecord {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut s = serializer.serialize_struct("CheckRecord", 8)?;
        s.serialize_field("name", &self.name)?;
        if let Some(shape) = &self.shape {
            s.serialize_field("shape", shape)?;
        }
        if let Some(q) = &self.q {
            s.serialize_field("q", q)?;
        }
        if let Some(r) = &self.r {
            s.serialize_field("r", r)?;
        }
        s.serialize_field("pass", &self.pass)?;
        s.serialize_field("residual", &self.residual)?;
        s.serialize_field("residual_repr", &self.residual.repr())?;
        if let Some(elapsed) = &self.elapsed {
            s.serialize_field("elapsed_ms", &(elapsed.as_secs_f64() * 1e3))?;
        }
        s.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Fills in shape and q on records that do not carry them yet.
    pub fn tag(mut self, shape: CornerShape, q: &str) -> Self {
        for c in &mut self.checks {
            c.shape.get_or_insert(shape);
            if c.q.is_none() {
                c.q = Some(q.to_string());
            }
        }
        self
    }
}
