//! Wedge powers of the two-row corner representation.
//!
//! V = V_(k+l-1,1) has basis v_2, ..., v_{k+l+1}; tensor slot values a ∈ 0..d
//! stand for v_{a+2}, with d = k+l. The l-th wedge power, cut out of V^{⊗l} by
//! the antisymmetrizer A_l, carries the representation
//! q^{1-l} A_l (ρ(σ_p) ⊗ ... ⊗ ρ(σ_p)) A_l, and the map
//! ι: v_{i_1} ∧ ... ∧ v_{i_l} ↦ v_I identifies it with ρ_(k,l).
//!
//! All operators act on row vectors (see [`crate::corner`]), so restricting
//! to the wedge subspace means multiplying on the left by the matrix whose
//! rows are the wedge basis vectors A_l(v_{i_1} ⊗ ... ⊗ v_{i_l}).

use itertools::Itertools;

use crate::corner::{relation_residuals, CornerRep, CornerShape, DEFAULT_DIM_CAP};
use crate::error::{Error, Result};
use crate::hamiltonian::build_hamiltonian;
use crate::matrix::Matrix;
use crate::report::{CheckRecord, Residual, VerificationReport};
use crate::scalar::{QParam, Scalar, EPS};

/// Smallest residual a negative control must show.
pub const NEGATIVE_CONTROL_MIN: f64 = 1e-3;

/// V^{⊗l} with flat index Σ a_m d^{l-m}: slot 1 is the most significant digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    base_dim: usize,
    power: usize,
}

impl TensorSpace {
    pub fn new(base_dim: usize, power: usize, cap: usize) -> Result<Self> {
        let total = (base_dim as u128).checked_pow(power as u32).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::CapacityExceeded { dim: total, cap });
        }
        Ok(Self { base_dim, power })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn total(&self) -> usize {
        self.base_dim.pow(self.power as u32)
    }

    pub fn encode(&self, slots: &[usize]) -> usize {
        debug_assert_eq!(slots.len(), self.power);
        slots.iter().fold(0, |acc, &a| acc * self.base_dim + a)
    }

    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut slots = vec![0; self.power];
        for slot in slots.iter_mut().rev() {
            *slot = flat % self.base_dim;
            flat /= self.base_dim;
        }
        slots
    }

    /// Matrix of the slot permutation e_{a_1..a_l} ↦ e_{a_{s(1)}..a_{s(l)}}.
    pub fn slot_permutation<S: Scalar>(&self, perm: &[usize]) -> Matrix<S> {
        let n = self.total();
        let mut m = Matrix::zeros(n, n);
        for flat in 0..n {
            let slots = self.decode(flat);
            let permuted: Vec<usize> = perm.iter().map(|&s| slots[s]).collect();
            m[(flat, self.encode(&permuted))] = S::one();
        }
        m
    }
}

/// Parity of a permutation of 0..n as ±1.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let inversions = perm
        .iter()
        .enumerate()
        .map(|(i, a)| perm[i + 1..].iter().filter(|b| *b < a).count())
        .sum::<usize>();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// A_l = (1/l!) Σ_s (-1)^{len(s)} (slot permutation s).
#[derive(Clone, Debug)]
pub struct Antisymmetrizer<S> {
    pub space: TensorSpace,
    pub matrix: Matrix<S>,
}

pub fn antisymmetrizer<S: Scalar>(base_dim: usize, power: usize, cap: usize) -> Result<Antisymmetrizer<S>> {
    if power == 0 {
        return Err(Error::InvalidArgument("antisymmetrizer needs at least one slot".into()));
    }
    let space = TensorSpace::new(base_dim, power, cap)?;
    let n = space.total();
    let weight = S::one() / S::from_int(factorial(power));
    let perms: Vec<(Vec<usize>, S)> = (0..power)
        .permutations(power)
        .map(|p| {
            let sign = S::from_int(permutation_sign(&p));
            (p, sign * weight.clone())
        })
        .collect();
    let mut matrix = Matrix::<S>::zeros(n, n);
    for flat in 0..n {
        let slots = space.decode(flat);
        for (perm, coeff) in &perms {
            let target: Vec<usize> = perm.iter().map(|&s| slots[s]).collect();
            matrix[(flat, space.encode(&target))].add_assign_ref(coeff);
        }
    }
    Ok(Antisymmetrizer { space, matrix })
}

/// ι and its inverse on the wedge subspace.
#[derive(Clone, Debug)]
pub struct WedgeBasisMap<S> {
    /// dim × d^l; row I is v_{i_1} ∧ ... ∧ v_{i_l} = A_l(v_{i_1} ⊗ ... ⊗ v_{i_l}).
    pub embed: Matrix<S>,
    /// d^l × dim; ι as a right action: l! at (flat(i_1..i_l), I) for increasing tuples.
    pub iota: Matrix<S>,
}

impl<S: Scalar> WedgeBasisMap<S> {
    /// ι applied to a tensor given as a row vector.
    pub fn apply(&self, tensor: &[S]) -> Vec<S> {
        self.iota.transpose().mul_vec(tensor)
    }
}

/// The wedge realisation of ρ_(k,l) inside V_(k+l-1,1)^{⊗l}.
#[derive(Clone, Debug)]
pub struct WedgeModule<S> {
    k: usize,
    l: usize,
    base: CornerRep<S>,
    target: CornerRep<S>,
    base_generators: Vec<Matrix<S>>,
    antisym: Antisymmetrizer<S>,
    map: WedgeBasisMap<S>,
}

impl<S: Scalar> WedgeModule<S> {
    pub fn new(k: usize, l: usize, q: QParam<S>) -> Result<Self> {
        Self::with_cap(k, l, q, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(k: usize, l: usize, q: QParam<S>, cap: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidShape("wedge construction needs l >= 1".into()));
        }
        let base = CornerRep::with_cap(CornerShape::new(k + l - 1, 1), q.clone(), cap)?;
        let target = CornerRep::with_cap(CornerShape::new(k, l), q, cap)?;
        let d = k + l;
        let antisym = antisymmetrizer::<S>(d, l, cap)?;
        let space = antisym.space;
        let dim = target.dim();

        let mut embed = Matrix::zeros(dim, space.total());
        let mut iota = Matrix::zeros(space.total(), dim);
        let l_factorial = S::from_int(factorial(l));
        for (row, index) in target.basis().indices().iter().enumerate() {
            let slots: Vec<usize> = index.members().iter().map(|&i| i - 2).collect();
            let flat = space.encode(&slots);
            for col in 0..space.total() {
                embed[(row, col)] = antisym.matrix[(flat, col)].clone();
            }
            iota[(flat, row)] = l_factorial.clone();
        }
        let base_generators = base.generators();
        Ok(Self {
            k,
            l,
            base,
            target,
            base_generators,
            antisym,
            map: WedgeBasisMap { embed, iota },
        })
    }

    pub fn shape(&self) -> CornerShape {
        CornerShape::new(self.k, self.l)
    }

    pub fn q(&self) -> &QParam<S> {
        self.base.q()
    }

    pub fn space(&self) -> TensorSpace {
        self.antisym.space
    }

    pub fn antisymmetrizer(&self) -> &Matrix<S> {
        &self.antisym.matrix
    }

    pub fn basis_map(&self) -> &WedgeBasisMap<S> {
        &self.map
    }

    pub fn base(&self) -> &CornerRep<S> {
        &self.base
    }

    pub fn target(&self) -> &CornerRep<S> {
        &self.target
    }

    fn embed_in_slot(&self, op: &Matrix<S>, slot: usize) -> Matrix<S> {
        let d = self.k + self.l;
        let left = Matrix::identity(d.pow(slot as u32 - 1));
        let right = Matrix::identity(d.pow((self.l - slot) as u32));
        left.kron(op).kron(&right)
    }

    fn check_p(&self, p: usize) -> Result<()> {
        if (1..=self.k + self.l).contains(&p) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("generator index {p} outside 1..={}", self.k + self.l)))
        }
    }

    /// σ_p^{(m)} = 1^{⊗(m-1)} ⊗ ρ_(k+l-1,1)(σ_p) ⊗ 1^{⊗(l-m)}.
    pub fn embed_generator(&self, p: usize, m: usize) -> Result<Matrix<S>> {
        self.check_p(p)?;
        if !(1..=self.l).contains(&m) {
            return Err(Error::InvalidArgument(format!("slot {m} outside 1..={}", self.l)));
        }
        Ok(self.embed_in_slot(&self.base_generators[p - 1], m))
    }

    /// ρ(σ_p) ⊗ ... ⊗ ρ(σ_p) = σ_p^{(1)} ... σ_p^{(l)}.
    pub fn tensor_power(&self, p: usize) -> Result<Matrix<S>> {
        self.check_p(p)?;
        let g = &self.base_generators[p - 1];
        Ok((1..self.l).fold(g.clone(), |acc, _| acc.kron(g)))
    }

    /// q^{1-l} A_l (ρ(σ_p) ⊗ ... ⊗ ρ(σ_p)) A_l
    pub fn tilde_rho(&self, p: usize) -> Result<Matrix<S>> {
        let a = &self.antisym.matrix;
        let prefactor = self.q().pow(1 - self.l as i64);
        Ok(a.matmul(&self.tensor_power(p)?).matmul(a).scale(&prefactor))
    }

    pub fn tilde_generators(&self) -> Vec<Matrix<S>> {
        (1..=self.k + self.l)
            .map(|p| self.tilde_rho(p).expect("p in range"))
            .collect()
    }

    /// A_l T = T A_l = A_l T A_l for T the tensor power of ρ(σ_p).
    pub fn verify_one_sided_forms(&self, p: usize) -> Result<VerificationReport> {
        let a = &self.antisym.matrix;
        let t = self.tensor_power(p)?;
        let left = a.matmul(&t);
        let right = t.matmul(a);
        let both = left.matmul(a);
        let mut report = VerificationReport::new();
        report.push(CheckRecord::expect_zero(
            format!("wedge.one_sided.p{p}"),
            Residual::between(&left, &right).worst(Residual::between(&left, &both)),
            EPS,
        ));
        Ok(report.tag(self.shape(), &self.q().label()))
    }

    /// q^{1-l} A (σ^{(1)}...σ^{(l)}) A = A (Σ_m σ^{(m)} - (l-1) q) A, and for
    /// l = 2 the factorised form A (σ^{(1)} - q)(σ^{(2)} - q) A = 0.
    pub fn verify_sum_product_identity(&self, p: usize) -> Result<VerificationReport> {
        if self.l < 2 {
            return Err(Error::InvalidShape("sum/product identity needs l >= 2".into()));
        }
        let a = &self.antisym.matrix;
        let q = self.q();
        let n = self.space().total();
        let embedded = (1..=self.l)
            .map(|m| self.embed_generator(p, m))
            .collect::<Result<Vec<_>>>()?;
        let product = embedded.iter().skip(1).fold(embedded[0].clone(), |acc, m| acc.matmul(m));
        let lhs = a.matmul(&product).matmul(a).scale(&q.pow(1 - self.l as i64));
        let sum = embedded.iter().fold(Matrix::zeros(n, n), |acc, m| &acc + m);
        let shift = -(q.value().clone() * S::from_int(self.l as i64 - 1));
        let rhs = a.matmul(&sum.add_identity(&shift)).matmul(a);

        let mut report = VerificationReport::new();
        report.push(CheckRecord::expect_zero(
            format!("prop41.identity.p{p}"),
            Residual::between(&lhs, &rhs),
            EPS,
        ));
        if self.l == 2 {
            let minus_q = -q.value().clone();
            let factorised = a
                .matmul(&embedded[0].add_identity(&minus_q))
                .matmul(&embedded[1].add_identity(&minus_q))
                .matmul(a);
            report.push(CheckRecord::expect_zero(
                format!("prop41.factorised.p{p}"),
                Residual::of_matrix(&factorised),
                EPS,
            ));
        }
        Ok(report.tag(self.shape(), &q.label()))
    }

    /// Braid, locality and quadratic relations for ρ̃ on the wedge subspace.
    pub fn verify_wedge_relations(&self) -> VerificationReport {
        let gens = self.tilde_generators();
        let (braid, locality, hecke) = relation_residuals(&gens, self.q(), &self.map.embed);
        let mut report = VerificationReport::new();
        report.push(CheckRecord::expect_zero("wedge.braid", braid, EPS));
        report.push(CheckRecord::expect_zero("wedge.locality", locality, EPS));
        report.push(CheckRecord::expect_zero("wedge.hecke", hecke, EPS));
        report.tag(self.shape(), &self.q().label())
    }

    /// ι ∘ ρ̃(σ_p) = ρ_(k,l)(σ_p) ∘ ι on the wedge subspace, for every p,
    /// plus bijectivity of ι there.
    pub fn verify_wedge_equivalence(&self) -> VerificationReport {
        let mut worst = Residual::ExactZero;
        for (p, tilde) in (1..).zip(self.tilde_generators()) {
            let transported = self.map.embed.matmul(&tilde).matmul(&self.map.iota);
            let direct = self.target.sigma_matrix(p).expect("p in range");
            worst = worst.worst(Residual::between(&transported, &direct));
        }
        let round_trip = self.map.embed.matmul(&self.map.iota);
        let mut report = VerificationReport::new();
        report.push(CheckRecord::expect_zero("wedge.intertwining", worst, EPS));
        report.push(CheckRecord::expect_zero(
            "wedge.iota_bijective",
            Residual::between(&round_trip, &Matrix::identity(self.target.dim())),
            EPS,
        ));
        report.tag(self.shape(), &self.q().label())
    }

    /// (Σ_i H^{(i)}) restricted to the wedge subspace and carried to V_(k,l)
    /// by ι, where H^{(i)} is the l = 1 Hamiltonian in slot i.
    pub fn hamiltonian_via_wedge(&self) -> Matrix<S> {
        let h1 = build_hamiltonian(&self.base).matrix;
        let n = self.space().total();
        let chain_sum = (1..=self.l).fold(Matrix::zeros(n, n), |acc, slot| &acc + &self.embed_in_slot(&h1, slot));
        self.map.embed.matmul(&chain_sum).matmul(&self.map.iota)
    }

    /// (Σ_p ρ̃(σ_p) - (qk - q^{-1}l)) A_l carried to V_(k,l) by ι.
    pub fn hamiltonian_via_tilde_sum(&self) -> Matrix<S> {
        let n = self.space().total();
        let sum = self.tilde_generators().iter().fold(Matrix::zeros(n, n), |acc, t| &acc + t);
        let shift = crate::hamiltonian::hamiltonian_shift(self.shape(), self.q());
        let shifted = &sum - &self.antisym.matrix.scale(&shift);
        self.map.embed.matmul(&shifted).matmul(&self.map.iota)
    }

    pub fn verify_hamiltonian_via_wedge(&self) -> VerificationReport {
        let direct = build_hamiltonian(&self.target).matrix;
        let mut report = VerificationReport::new();
        report.push(CheckRecord::expect_zero(
            "wedge.hamiltonian.chain_sum",
            Residual::between(&self.hamiltonian_via_wedge(), &direct),
            EPS,
        ));
        report.push(CheckRecord::expect_zero(
            "wedge.hamiltonian.tilde_sum",
            Residual::between(&self.hamiltonian_via_tilde_sum(), &direct),
            EPS,
        ));
        report.tag(self.shape(), &self.q().label())
    }

    /// ι(A_l(x_1 ⊗ ... ⊗ x_l)) computed through the tensor space.
    pub fn wedge_via_tensor(&self, factors: &[Vec<S>]) -> Result<Vec<S>> {
        if factors.len() != self.l || factors.iter().any(|f| f.len() != self.k + self.l) {
            return Err(Error::InvalidArgument("need l vectors of length k+l".into()));
        }
        let space = self.space();
        let tensor: Vec<S> = (0..space.total())
            .map(|flat| {
                space
                    .decode(flat)
                    .iter()
                    .zip(factors)
                    .fold(S::one(), |acc, (&a, x)| acc.mul_ref(&x[a]))
            })
            .collect();
        let wedged = self.antisym.matrix.transpose().mul_vec(&tensor);
        Ok(self.map.apply(&wedged))
    }

    /// All wedge checks for one q: relations, intertwining, Hamiltonians,
    /// one-sided forms.
    pub fn verify_all(&self) -> Result<VerificationReport> {
        let mut report = self.verify_wedge_relations();
        report.extend(self.verify_wedge_equivalence());
        report.extend(self.verify_hamiltonian_via_wedge());
        for p in 1..=self.k + self.l {
            report.extend(self.verify_one_sided_forms(p)?);
        }
        Ok(report)
    }
}

/// The generalised idempotent condition for building a representation on
/// the image of A inside V_1 ⊗ V_2:
/// (i) A commutes with ρ_1 ⊗ ρ_2 and ρ_1 ⊗ 1 + 1 ⊗ ρ_2,
/// (ii) ((q - q^{-1} - α) ρ_1⊗ρ_2 + ρ_1⊗1 + 1⊗ρ_2 + (1-α²)/(q - q^{-1})) annihilates the image of A,
/// (iii) if both hold, α^{-1} A ρ_1⊗ρ_2 satisfies braid, locality and the
/// quadratic relation on the image of A.
///
/// At q = ±1 the condition in (ii) is used multiplied through by q - q^{-1}.
pub fn verify_general_idempotent_condition<S: Scalar>(
    rho1: &[Matrix<S>],
    rho2: &[Matrix<S>],
    a: &Matrix<S>,
    alpha: &S,
    q: &QParam<S>,
) -> Result<VerificationReport> {
    if rho1.len() != rho2.len() {
        return Err(Error::InvalidArgument("generator lists differ in length".into()));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("alpha must be nonzero".into()));
    }
    let (Some(g1), Some(g2)) = (rho1.first(), rho2.first()) else {
        return Err(Error::InvalidArgument("empty generator lists".into()));
    };
    let (d1, d2) = (g1.rows(), g2.rows());
    let n = d1 * d2;
    if a.rows() != n || a.cols() != n {
        return Err(Error::InvalidArgument(format!("A must be {n}×{n}")));
    }
    let id1 = Matrix::<S>::identity(d1);
    let id2 = Matrix::<S>::identity(d2);
    let c = q.q_minus_inverse();
    let degenerate = c.is_zero();
    let one_minus_alpha_sq = S::one() - alpha.mul_ref(alpha);

    let mut report = VerificationReport::new();
    report.push(CheckRecord::expect_zero(
        "prop43.idempotent",
        Residual::between(&a.matmul(a), a),
        EPS,
    ));

    let mut commutes_product = Residual::ExactZero;
    let mut commutes_sum = Residual::ExactZero;
    let mut annihilates = Residual::ExactZero;
    let mut products = Vec::with_capacity(rho1.len());
    for (r1, r2) in rho1.iter().zip(rho2) {
        let prod = r1.kron(r2);
        let sum = &r1.kron(&id2) + &id1.kron(r2);
        commutes_product = commutes_product.worst(Residual::between(&a.matmul(&prod), &prod.matmul(a)));
        commutes_sum = commutes_sum.worst(Residual::between(&a.matmul(&sum), &sum.matmul(a)));
        let combination = if degenerate {
            Matrix::identity(n).scale(&one_minus_alpha_sq)
        } else {
            let coefficient = c.clone() - alpha.clone();
            (&prod.scale(&coefficient) + &sum).add_identity(&(one_minus_alpha_sq.clone() / c.clone()))
        };
        annihilates = annihilates.worst(Residual::of_matrix(&a.matmul(&combination)));
        products.push(prod);
    }
    let stage_one = commutes_product.passes(EPS) && commutes_sum.passes(EPS);
    let stage_two = annihilates.passes(EPS);
    report.push(CheckRecord::expect_zero("prop43.commutes_product", commutes_product, EPS));
    report.push(CheckRecord::expect_zero("prop43.commutes_sum", commutes_sum, EPS));
    report.push(CheckRecord::expect_zero("prop43.annihilates", annihilates, EPS));

    if stage_one && stage_two {
        let inv_alpha = S::one() / alpha.clone();
        let gens: Vec<Matrix<S>> = products.iter().map(|p| a.matmul(p).scale(&inv_alpha)).collect();
        let (braid, locality, hecke) = relation_residuals(&gens, q, a);
        report.push(CheckRecord::expect_zero("prop43.braid", braid, EPS));
        report.push(CheckRecord::expect_zero("prop43.locality", locality, EPS));
        report.push(CheckRecord::expect_zero("prop43.hecke", hecke, EPS));
    }
    Ok(report)
}

/// The corner instance: ρ_1 = ρ_2 = ρ_(k+l-1,1), A = A_2.
pub fn prop43_corner_instance<S: Scalar>(
    base_k: usize,
    q: &QParam<S>,
    alpha: &S,
) -> Result<VerificationReport> {
    let base = CornerRep::new(CornerShape::new(base_k, 1), q.clone())?;
    let gens = base.generators();
    let a = antisymmetrizer::<S>(base_k + 1, 2, DEFAULT_DIM_CAP)?.matrix;
    Ok(verify_general_idempotent_condition(&gens, &gens, &a, alpha, q)?.tag(base.shape(), &q.label()))
}

/// Negative control: with α ∉ {q, -q^{-1}} the annihilation stage must fail
/// by more than [`NEGATIVE_CONTROL_MIN`].
pub fn prop43_negative_control<S: Scalar>(base_k: usize, q: &QParam<S>, alpha: &S) -> Result<CheckRecord> {
    let report = prop43_corner_instance(base_k, q, alpha)?;
    let residual = report
        .get("prop43.annihilates")
        .expect("annihilation stage always reported")
        .residual
        .clone();
    let pass = residual.magnitude() > NEGATIVE_CONTROL_MIN;
    Ok(CheckRecord::new("prop43.negative_control", residual, pass)
        .with_shape(CornerShape::new(base_k, 1))
        .with_q(q.label())
        .with_r(alpha.label()))
}
