//! Corner (hook) representations of the A-type Hecke algebra.
//!
//! For the diagram {k+1, 1^l} a standard tableau is fixed by its leg set
//! I ⊂ {2, ..., k+l+1} with |I| = l. Basis vectors v_I are ordered
//! lexicographically on the sorted leg sets.
//!
//! Matrix convention: row I of a generator matrix holds the expansion of
//! σ_p v_I, i.e. operators act on row vectors from the right. Products of
//! matrices are taken in the order algebra elements are written.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{product, Matrix};
use crate::report::{CheckRecord, Residual, VerificationReport};
use crate::scalar::{ensure_generic, GenericityCertificate, QParam, Scalar, EPS};

/// Default bound on representation and tensor-space dimensions.
pub const DEFAULT_DIM_CAP: usize = 1000;

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// The corner diagram {k+1, 1^l}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CornerShape {
    k: usize,
    l: usize,
}

impl CornerShape {
    pub fn new(k: usize, l: usize) -> Self {
        Self { k, l }
    }

    /// Arm length; the first row has k+1 boxes.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Leg length (number of rows below the first).
    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of Hecke generators, n = k + l.
    pub fn generators(&self) -> usize {
        self.k + self.l
    }

    pub fn dim(&self) -> u128 {
        binomial(self.k + self.l, self.l)
    }

    pub fn require_nontrivial(&self) -> Result<()> {
        if self.generators() == 0 {
            Err(Error::InvalidShape("k + l must be at least 1".into()))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for CornerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, l={})", self.k, self.l)
    }
}

/// Leg set I of a standard tableau, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(Vec<usize>);

impl BasisIndex {
    /// Checks that `members` is strictly increasing inside {2, ..., k+l+1}
    /// with exactly l entries.
    pub fn new(shape: CornerShape, members: Vec<usize>) -> Result<Self> {
        let top = shape.generators() + 1;
        let valid = members.len() == shape.l()
            && members.windows(2).all(|w| w[0] < w[1])
            && members.iter().all(|&i| (2..=top).contains(&i));
        if valid {
            Ok(Self(members))
        } else {
            Err(Error::InvalidArgument(format!(
                "{members:?} is not an increasing {}-subset of 2..={top}",
                shape.l()
            )))
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// s_p I: exchange p and p+1. Only meaningful when exactly one of them is in I.
    pub fn swapped(&self, p: usize) -> Self {
        let mut members: Vec<usize> = self
            .0
            .iter()
            .map(|&i| match i {
                i if i == p => p + 1,
                i if i == p + 1 => p,
                i => i,
            })
            .collect();
        members.sort_unstable();
        Self(members)
    }

    /// Arm entries j_1 < ... < j_k (the complement of I).
    pub fn complement(&self, shape: CornerShape) -> Vec<usize> {
        (2..=shape.generators() + 1).filter(|&j| !self.contains(j)).collect()
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Ordered standard-tableau basis of V_(k,l).
#[derive(Clone, Debug)]
pub struct Basis {
    shape: CornerShape,
    indices: Vec<BasisIndex>,
    lookup: HashMap<BasisIndex, usize>,
}

impl Basis {
    pub fn enumerate(shape: CornerShape, cap: usize) -> Result<Self> {
        let dim = shape.dim();
        if dim > cap as u128 {
            return Err(Error::CapacityExceeded { dim, cap });
        }
        let indices: Vec<BasisIndex> = (2..=shape.generators() + 1)
            .combinations(shape.l())
            .map(BasisIndex)
            .collect();
        let lookup = indices.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        Ok(Self { shape, indices, lookup })
    }

    pub fn shape(&self) -> CornerShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    pub fn position(&self, index: &BasisIndex) -> Option<usize> {
        self.lookup.get(index).copied()
    }
}

pub fn enumerate_basis(shape: CornerShape) -> Result<Basis> {
    Basis::enumerate(shape, DEFAULT_DIM_CAP)
}

/// σ_p v_I as at most two terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaAction<S> {
    pub diagonal: S,
    pub swapped: Option<(BasisIndex, S)>,
}

/// ρ_(k,l) at a fixed generic q.
#[derive(Clone, Debug)]
pub struct CornerRep<S> {
    basis: Basis,
    q: QParam<S>,
    q_ints: GenericityCertificate<S>,
}

impl<S: Scalar> CornerRep<S> {
    pub fn new(shape: CornerShape, q: QParam<S>) -> Result<Self> {
        Self::with_cap(shape, q, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(shape: CornerShape, q: QParam<S>, cap: usize) -> Result<Self> {
        let basis = Basis::enumerate(shape, cap)?;
        let q_ints = ensure_generic(&q, shape.generators() as u32 + 1)?;
        Ok(Self { basis, q, q_ints })
    }

    pub fn shape(&self) -> CornerShape {
        self.basis.shape
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn q(&self) -> &QParam<S> {
        &self.q
    }

    /// (p)_q for 0 <= p <= k+l+1.
    pub fn q_int(&self, p: usize) -> S {
        self.q_ints.q_int(p as u32)
    }

    fn check_generator(&self, p: usize) -> Result<()> {
        let n = self.shape().generators();
        if (1..=n).contains(&p) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("generator index {p} outside 1..={n}")))
        }
    }

    pub fn apply_sigma(&self, p: usize, index: &BasisIndex) -> Result<SigmaAction<S>> {
        self.check_generator(p)?;
        let q = &self.q;
        let qp = self.q_int(p);
        let exponent = p as i64;
        let (diagonal, off) = match (index.contains(p), index.contains(p + 1)) {
            (false, false) => (q.value().clone(), None),
            (false, true) => (
                -q.pow(-exponent) / qp.clone(),
                Some(self.q_int(p - 1) / qp),
            ),
            (true, false) => (q.pow(exponent) / qp.clone(), Some(self.q_int(p + 1) / qp)),
            (true, true) => (-q.inverse().clone(), None),
        };
        // p = 1 gives the coefficient (0)_q / (1)_q = 0, and s_1 I would leave the index range.
        let swapped = off.filter(|c| !c.is_zero()).map(|c| (index.swapped(p), c));
        Ok(SigmaAction { diagonal, swapped })
    }

    /// ρ(σ_p); row I is σ_p v_I.
    pub fn sigma_matrix(&self, p: usize) -> Result<Matrix<S>> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (row, index) in self.basis.indices().iter().enumerate() {
            let action = self.apply_sigma(p, index)?;
            m[(row, row)] = action.diagonal;
            if let Some((target, coeff)) = action.swapped {
                let col = self
                    .basis
                    .position(&target)
                    .expect("s_p I stays inside the basis");
                m[(row, col)] = coeff;
            }
        }
        Ok(m)
    }

    /// ρ(σ_1), ..., ρ(σ_{k+l}).
    pub fn generators(&self) -> Vec<Matrix<S>> {
        (1..=self.shape().generators())
            .map(|p| self.sigma_matrix(p).expect("p in range"))
            .collect()
    }
}

/// Residuals of the braid, locality and quadratic relations for a list of
/// generator matrices; `restrict` restricts to a subspace by left multiplication
/// (pass the identity for the whole space).
pub fn relation_residuals<S: Scalar>(
    gens: &[Matrix<S>],
    q: &QParam<S>,
    restrict: &Matrix<S>,
) -> (Residual, Residual, Residual) {
    let on = |m: &Matrix<S>| restrict.matmul(m);
    let mut braid = Residual::ExactZero;
    let mut locality = Residual::ExactZero;
    let mut hecke = Residual::ExactZero;
    let c = q.q_minus_inverse();
    for i in 0..gens.len() {
        let (a, ra) = (&gens[i], on(&gens[i]));
        if let Some(b) = gens.get(i + 1) {
            let lhs = ra.matmul(b).matmul(a);
            let rhs = on(b).matmul(a).matmul(b);
            braid = braid.worst(Residual::between(&lhs, &rhs));
        }
        for b in gens.iter().skip(i + 2) {
            locality = locality.worst(Residual::between(&ra.matmul(b), &on(b).matmul(a)));
        }
        let lhs = ra.matmul(a);
        let rhs = &ra.scale(&c) + restrict;
        hecke = hecke.worst(Residual::between(&lhs, &rhs));
    }
    (braid, locality, hecke)
}

pub fn verify_defining_relations<S: Scalar>(rep: &CornerRep<S>) -> VerificationReport {
    let gens = rep.generators();
    let (braid, locality, hecke) = relation_residuals(&gens, rep.q(), &Matrix::identity(rep.dim()));
    let mut report = VerificationReport::new();
    report.push(CheckRecord::expect_zero("relations.braid", braid, EPS));
    report.push(CheckRecord::expect_zero("relations.locality", locality, EPS));
    report.push(CheckRecord::expect_zero("relations.hecke", hecke, EPS));
    report.tag(rep.shape(), &rep.q().label())
}

/// N_1 = binom(k+l-1, l), N_2 = binom(k+l-1, l-1).
pub fn trace_counts(shape: CornerShape) -> (u128, u128) {
    let n = shape.generators();
    let l = shape.l();
    if n == 0 {
        return (0, 0);
    }
    let n1 = binomial(n - 1, l);
    let n2 = if l == 0 { 0 } else { binomial(n - 1, l - 1) };
    (n1, n2)
}

/// q N_1 - q^{-1} N_2
pub fn predicted_generator_trace<S: Scalar>(shape: CornerShape, q: &QParam<S>) -> S {
    let (n1, n2) = trace_counts(shape);
    q.value().clone() * S::from_int(n1 as i64) - q.inverse().clone() * S::from_int(n2 as i64)
}

/// X σ_i X^{-1} = σ_{i+1} with X = σ_1 σ_2 ... σ_{k+l}, and the induced
/// equality of all generator traces with q N_1 - q^{-1} N_2.
pub fn verify_cyclic_conjugation<S: Scalar>(rep: &CornerRep<S>) -> Result<VerificationReport> {
    let gens = rep.generators();
    let x = product(&gens, rep.dim());
    let x_inv = x.inverse().ok_or(Error::SingularConjugator)?;
    let mut conj = Residual::ExactZero;
    for pair in gens.windows(2) {
        let lhs = x.matmul(&pair[0]).matmul(&x_inv);
        conj = conj.worst(Residual::between(&lhs, &pair[1]));
    }
    let expected = Matrix::diagonal(vec![predicted_generator_trace(rep.shape(), rep.q())]);
    let mut trace = Residual::ExactZero;
    for g in &gens {
        trace = trace.worst(Residual::between(&Matrix::diagonal(vec![g.trace()]), &expected));
    }
    let mut report = VerificationReport::new();
    report.push(CheckRecord::expect_zero("conjugation.cyclic", conj, EPS));
    report.push(CheckRecord::expect_zero("conjugation.generator_trace", trace, EPS));
    Ok(report.tag(rep.shape(), &rep.q().label()))
}
