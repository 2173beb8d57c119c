//! Predicted cosine spectra, explicit eigenvectors and numerical checks.
//!
//! The spectrum of the traceless Hamiltonian on V_(k,l) is the multiset of
//! sums Σ_i 2cos(π m_i/(k+l+1)) over 1 <= m_1 < ... < m_l <= k+l. Its
//! eigenvectors are wedge products of eigenvectors of the l = 1 chain with
//! k+l sites, which in turn are C(q) applied to the sine eigenvectors of the
//! path graph.

use std::f64::consts::PI;

use itertools::Itertools;
use nalgebra::DMatrix;

use crate::corner::{Basis, CornerRep, CornerShape, DEFAULT_DIM_CAP};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, c_matrix};
use crate::matrix::Matrix;
use crate::report::{CheckRecord, Residual, VerificationReport};
use crate::scalar::{QParam, Scalar};

/// Predicted vs numeric eigenvalues, sorted multisets compared pairwise.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// Relative eigenpair residual ‖Hψ - λψ‖ / ‖ψ‖.
pub const EIGENVECTOR_TOL: f64 = 1e-9;
/// Scaled norm of Π_I (H - λ_I).
pub const ANNIHILATOR_TOL: f64 = 1e-6;
/// The annihilator is only evaluated up to this dimension.
pub const ANNIHILATOR_MAX_DIM: usize = 35;
/// Largest admissible imaginary part of a numerical eigenvalue.
pub const IMAGINARY_TOL: f64 = 1e-8;
/// Two numerical spectra at different q.
pub const ISOSPECTRAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct PredictedLevel {
    /// m_1 < ... < m_l, each in 1..=k+l.
    pub indices: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPrediction {
    pub shape: CornerShape,
    /// Sorted ascending by value, ties by index tuple.
    pub levels: Vec<PredictedLevel>,
}

impl SpectrumPrediction {
    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// 2cos(π m / (n+1)), the m-th path-graph eigenvalue on n nodes.
pub fn path_eigenvalue(m: usize, n: usize) -> f64 {
    2.0 * (PI * m as f64 / (n + 1) as f64).cos()
}

pub fn predicted_spectrum(shape: CornerShape) -> Result<SpectrumPrediction> {
    predicted_spectrum_with_cap(shape, DEFAULT_DIM_CAP)
}

pub fn predicted_spectrum_with_cap(shape: CornerShape, cap: usize) -> Result<SpectrumPrediction> {
    shape.require_nontrivial()?;
    let dim = shape.dim();
    if dim > cap as u128 {
        return Err(Error::CapacityExceeded { dim, cap });
    }
    let n = shape.generators();
    let mut levels: Vec<PredictedLevel> = (1..=n)
        .combinations(shape.l())
        .map(|indices| {
            let value = indices.iter().fold(0.0, |acc, &m| acc + path_eigenvalue(m, n));
            PredictedLevel { indices, value }
        })
        .collect();
    levels.sort_by(|a, b| a.value.total_cmp(&b.value).then_with(|| a.indices.cmp(&b.indices)));
    Ok(SpectrumPrediction { shape, levels })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSpectrum {
    /// Real parts, sorted ascending.
    pub values: Vec<f64>,
    pub max_imaginary: f64,
}

/// Eigenvalues of a general real matrix via the real Schur form.
pub fn numeric_eigenvalues(m: &Matrix<f64>) -> Result<NumericSpectrum> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("eigenvalues of a non-square matrix".into()));
    }
    if m.entries().iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    let eig = DMatrix::from_row_slice(m.rows(), m.cols(), m.entries()).complex_eigenvalues();
    let max_imaginary = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut values: Vec<f64> = eig.iter().map(|z| z.re).collect();
    values.sort_by(f64::total_cmp);
    Ok(NumericSpectrum { values, max_imaginary })
}

/// Largest pairwise gap between two sorted multisets; `None` if sizes differ.
pub fn sorted_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    Some(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub indices: Vec<usize>,
    pub value: f64,
    /// Unit Euclidean norm, coordinates in the tableau basis.
    pub vector: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub shape: CornerShape,
    pub pairs: Vec<EigenPair>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

/// Eigenpairs of H_(k,1)(q): λ_m = 2cos(πm/(k+2)) with eigenvector
/// C(q)·(sin(π m j/(k+2)))_{j=1..k+1}.
pub fn eigensystem_l1<S: Scalar>(k: usize, q: &QParam<S>) -> Result<EigenSystem> {
    let c = c_matrix(k, q)?.matrix.to_f64();
    let pairs = (1..=k + 1)
        .map(|m| {
            let sines: Vec<f64> = (1..=k + 1)
                .map(|j| (PI * (m * j) as f64 / (k + 2) as f64).sin())
                .collect();
            EigenPair {
                indices: vec![m],
                value: path_eigenvalue(m, k + 1),
                vector: normalized(c.mul_vec(&sines)),
            }
        })
        .collect();
    Ok(EigenSystem {
        shape: CornerShape::new(k, 1),
        pairs,
    })
}

/// Determinant by elimination with partial pivoting.
fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let pivot = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .expect("nonempty range");
        if a[pivot][c] == 0.0 {
            return 0.0;
        }
        if pivot != c {
            a.swap(pivot, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    det
}

/// Coordinates of x_1 ∧ ... ∧ x_l in the basis v_I: the l×l minor of
/// [x_1 ... x_l] on the rows i - 2, i ∈ I.
pub fn wedge_coordinates(factors: &[&[f64]], basis: &Basis) -> Vec<f64> {
    basis
        .indices()
        .iter()
        .map(|index| {
            let minor = index
                .members()
                .iter()
                .map(|&i| factors.iter().map(|x| x[i - 2]).collect())
                .collect();
            determinant(minor)
        })
        .collect()
}

/// Eigenpairs of H_(k,l)(q) built as wedges of l = 1 eigenvectors.
pub fn eigensystem<S: Scalar>(shape: CornerShape, q: &QParam<S>) -> Result<EigenSystem> {
    eigensystem_with_cap(shape, q, DEFAULT_DIM_CAP)
}

pub fn eigensystem_with_cap<S: Scalar>(shape: CornerShape, q: &QParam<S>, cap: usize) -> Result<EigenSystem> {
    shape.require_nontrivial()?;
    let base = eigensystem_l1(shape.generators() - 1, q)?;
    let basis = Basis::enumerate(shape, cap)?;
    let prediction = predicted_spectrum_with_cap(shape, cap)?;
    let pairs = prediction
        .levels
        .into_iter()
        .map(|level| {
            let factors: Vec<&[f64]> = level
                .indices
                .iter()
                .map(|&m| base.pairs[m - 1].vector.as_slice())
                .collect();
            let coords = wedge_coordinates(&factors, &basis);
            if norm(&coords) < 1e-12 {
                return Err(Error::DegenerateWedge { indices: level.indices });
            }
            Ok(EigenPair {
                indices: level.indices,
                value: level.value,
                vector: normalized(coords),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenSystem { shape, pairs })
}

/// max over pairs of ‖Hψ - λψ‖ / ‖ψ‖.
pub fn eigenpair_residual(h: &Matrix<f64>, system: &EigenSystem) -> f64 {
    system
        .pairs
        .iter()
        .map(|pair| {
            let hv = h.mul_vec(&pair.vector);
            let diff: Vec<f64> = hv.iter().zip(&pair.vector).map(|(a, b)| a - pair.value * b).collect();
            norm(&diff) / norm(&pair.vector)
        })
        .fold(0.0, f64::max)
}

/// ‖Π_I (H - λ_I)‖_F / Π_I max(‖H‖_F + |λ_I|, 1) over the full predicted multiset.
pub fn annihilator_residual(h: &Matrix<f64>, prediction: &SpectrumPrediction) -> f64 {
    let h_norm = h.frobenius();
    let mut acc = Matrix::identity(h.rows());
    let mut scale = 1.0;
    for level in &prediction.levels {
        acc = acc.matmul(&h.add_identity(&-level.value));
        scale *= (h_norm + level.value.abs()).max(1.0);
    }
    acc.frobenius() / scale
}

/// Numeric eigenvalues, explicit eigenvectors and the annihilating product
/// against the predicted spectrum.
pub fn verify_spectrum<S: Scalar>(shape: CornerShape, q: &QParam<S>) -> Result<VerificationReport> {
    verify_spectrum_with_cap(shape, q, DEFAULT_DIM_CAP)
}

pub fn verify_spectrum_with_cap<S: Scalar>(shape: CornerShape, q: &QParam<S>, cap: usize) -> Result<VerificationReport> {
    let rep = CornerRep::with_cap(shape, q.clone(), cap)?;
    let h = build_hamiltonian(&rep).matrix.to_f64();
    let prediction = predicted_spectrum_with_cap(shape, cap)?;
    let numeric = numeric_eigenvalues(&h)?;
    let mut report = VerificationReport::new();

    let deviation = sorted_deviation(&prediction.values(), &numeric.values).unwrap_or(f64::INFINITY);
    report.push(CheckRecord::expect_zero(
        "spectrum.eigenvalues",
        Residual::Approx(deviation),
        SPECTRUM_TOL,
    ));
    report.push(CheckRecord::expect_zero(
        "spectrum.real",
        Residual::Approx(numeric.max_imaginary),
        IMAGINARY_TOL,
    ));

    let system = eigensystem_with_cap(shape, q, cap)?;
    report.push(CheckRecord::expect_zero(
        "spectrum.eigenvectors",
        Residual::Approx(eigenpair_residual(&h, &system)),
        EIGENVECTOR_TOL,
    ));

    if rep.dim() <= ANNIHILATOR_MAX_DIM {
        report.push(CheckRecord::expect_zero(
            "spectrum.annihilator",
            Residual::Approx(annihilator_residual(&h, &prediction)),
            ANNIHILATOR_TOL,
        ));
    }
    Ok(report.tag(shape, &q.label()))
}

/// Numerical spectra at q1 and q2 agree as sorted multisets.
pub fn verify_isospectral<S: Scalar>(shape: CornerShape, q1: &QParam<S>, q2: &QParam<S>) -> Result<VerificationReport> {
    verify_isospectral_with_cap(shape, q1, q2, DEFAULT_DIM_CAP)
}

pub fn verify_isospectral_with_cap<S: Scalar>(
    shape: CornerShape,
    q1: &QParam<S>,
    q2: &QParam<S>,
    cap: usize,
) -> Result<VerificationReport> {
    let spectrum_at = |q: &QParam<S>| -> Result<NumericSpectrum> {
        let rep = CornerRep::with_cap(shape, q.clone(), cap)?;
        numeric_eigenvalues(&build_hamiltonian(&rep).matrix.to_f64())
    };
    let a = spectrum_at(q1)?;
    let b = spectrum_at(q2)?;
    let deviation = sorted_deviation(&a.values, &b.values).unwrap_or(f64::INFINITY);
    let mut report = VerificationReport::new();
    report.push(
        CheckRecord::expect_zero("isospectral", Residual::Approx(deviation), ISOSPECTRAL_TOL)
            .with_shape(shape)
            .with_q(q1.label())
            .with_r(q2.label()),
    );
    Ok(report)
}
