//! Scalar backends, the deformation parameter and q-integers.
//!
//! Two backends implement [`Scalar`]: [`Rational`] (arbitrary precision,
//! every identity is checked with exact equality) and `f64` (equality up to
//! an explicit tolerance). All higher modules are generic over the backend.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact backend scalar.
pub type Rational = BigRational;

/// Relative equality tolerance for the approximate backend.
pub const EPS: f64 = 1e-9;
/// A q-integer with magnitude at or below this is treated as vanishing.
pub const EPS_GENERIC: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Approximate,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Approximate => f.write_str("approximate"),
        }
    }
}

/// A field element usable by the representation and verification code.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;

    /// Literal zero test (no tolerance).
    fn is_zero(&self) -> bool;

    fn to_f64(&self) -> f64;

    fn mul_ref(&self, rhs: &Self) -> Self;

    fn add_assign_ref(&mut self, rhs: &Self);

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        self.add_assign_ref(&a.mul_ref(b));
    }

    /// Full-precision string: `a/b` for rationals, 17 significant digits for floats.
    fn repr(&self) -> String;

    /// Short human label: `3/2` or `2` for rationals, shortest round-trip for floats.
    fn label(&self) -> String;

    /// Zero test used for pivoting. Exact scalars ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_zero(&self) -> bool {
        self.numer().is_zero()
    }

    fn to_f64(&self) -> f64 {
        // Ratio::to_f64 handles numerators and denominators beyond f64 range.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn repr(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn label(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        Scalar::is_zero(self)
    }

    fn abs_f64(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Approximate;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn repr(&self) -> String {
        format!("{:.16e}", self)
    }

    fn label(&self) -> String {
        format!("{}", self)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

/// Parses `a/b`, `a` (exact) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not an exact rational: {text:?}")))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let denom = parse_int(d)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, denom))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

/// The deformation parameter q together with its cached inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct QParam<S> {
    q: S,
    q_inv: S,
}

impl<S: Scalar> QParam<S> {
    pub fn new(q: S) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroParameter);
        }
        if !q.to_f64().is_finite() && S::BACKEND == Backend::Approximate {
            return Err(Error::Parse(format!("q must be finite, got {}", q.label())));
        }
        let q_inv = S::one() / q.clone();
        Ok(Self { q, q_inv })
    }

    pub fn value(&self) -> &S {
        &self.q
    }

    pub fn inverse(&self) -> &S {
        &self.q_inv
    }

    /// q^n for any integer n.
    pub fn pow(&self, n: i64) -> S {
        let base = if n >= 0 { &self.q } else { &self.q_inv };
        let mut acc = S::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul_ref(base);
        }
        acc
    }

    /// q - q^{-1}
    pub fn q_minus_inverse(&self) -> S {
        self.q.clone() - self.q_inv.clone()
    }

    pub fn label(&self) -> String {
        self.q.label()
    }

    pub fn to_f64(&self) -> Result<QParam<f64>> {
        QParam::new(self.q.to_f64())
    }
}

impl QParam<Rational> {
    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Self::new(Rational::from_ratio(numer, denom))
    }
}

/// The q-integer (p)_q = (q^p - q^{-p}) / (q - q^{-1}).
///
/// Evaluated as q^{p-1} + q^{p-3} + ... + q^{1-p}, which is the same rational
/// function with the q = ±1 singularity removed; (0)_q = 0 and (p)_1 = p.
pub fn q_int<S: Scalar>(p: u32, q: &QParam<S>) -> S {
    if p == 0 {
        return S::zero();
    }
    let step = q.inverse().mul_ref(q.inverse());
    let mut term = q.pow(i64::from(p) - 1);
    let mut sum = S::zero();
    for _ in 0..p {
        sum.add_assign_ref(&term);
        term = term.mul_ref(&step);
    }
    sum
}

/// Proof that (p)_q is nonvanishing for p = 1..=n_max, with the values kept
/// for reuse as denominators.
#[derive(Clone, Debug)]
pub struct GenericityCertificate<S> {
    n_max: u32,
    values: Vec<S>,
}

impl<S: Scalar> GenericityCertificate<S> {
    /// Builds a certificate from the q-integers (1)_q, (2)_q, ... in order.
    pub fn from_values(values: Vec<S>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            let vanishes = match S::BACKEND {
                Backend::Exact => v.is_zero(),
                Backend::Approximate => v.abs_f64() <= EPS_GENERIC,
            };
            if vanishes {
                return Err(Error::NonGenericParameter { p: i as u32 + 1 });
            }
        }
        Ok(Self {
            n_max: values.len() as u32,
            values,
        })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// (p)_q for 0 <= p <= n_max.
    pub fn q_int(&self, p: u32) -> S {
        if p == 0 {
            S::zero()
        } else {
            self.values[p as usize - 1].clone()
        }
    }

    /// The checked pairs (p, (p)_q).
    pub fn checked(&self) -> impl Iterator<Item = (u32, &S)> {
        self.values.iter().enumerate().map(|(i, v)| (i as u32 + 1, v))
    }
}

pub fn ensure_generic<S: Scalar>(q: &QParam<S>, n_max: u32) -> Result<GenericityCertificate<S>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    GenericityCertificate::from_values((1..=n_max).map(|p| q_int(p, q)).collect())
}
