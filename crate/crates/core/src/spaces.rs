//! Tensor-product spaces of qudits, their symmetric subspaces and the averaged
//! input density operators of the programmable discriminator.
//!
//! Registers are ordered `A ⊗ B ⊗ C`. Basis labels are 1-based tuples over
//! `{1..n}`; flat amplitude indices are 0-based and row-major, so register A
//! varies slowest: `(a, b, c) ↦ (a-1)n² + (b-1)n + (c-1)`.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{self, re, CMatrix, CVector, C64};

/// Norm tolerance for [`StateVector`].
pub const TAU_NORM: f64 = 1e-10;
/// Operator identity tolerance (Hermitian, idempotent, unitary, trace).
pub const TAU_OP: f64 = 1e-10;
/// Singular-value threshold used when counting ranks.
pub const TAU_RANK: f64 = 1e-8;

/// `factors` copies of an `n`-dimensional qudit space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    n: usize,
    factors: usize,
}

impl SpaceSpec {
    pub fn new(n: usize, factors: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("qudit dimension must be positive"));
        }
        if !(1..=3).contains(&factors) {
            return Err(Error::domain(format!("unsupported number of tensor factors: {factors}")));
        }
        Ok(Self { n, factors })
    }

    pub fn single(n: usize) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    /// `n^factors`
    pub fn dim(&self) -> usize {
        self.n.pow(self.factors as u32)
    }

    /// Row-major flat index of a 1-based label tuple.
    pub fn flatten(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.factors {
            return Err(Error::contract(format!(
                "label tuple has {} entries, space has {} factors",
                labels.len(),
                self.factors
            )));
        }
        labels.iter().try_fold(0usize, |acc, &l| {
            if l == 0 || l > self.n {
                Err(Error::domain(format!("basis label {l} outside 1..={}", self.n)))
            } else {
                Ok(acc * self.n + (l - 1))
            }
        })
    }

    /// Inverse of [`SpaceSpec::flatten`].
    pub fn unflatten(&self, mut index: usize) -> Vec<usize> {
        let mut labels = vec![0; self.factors];
        for slot in labels.iter_mut().rev() {
            *slot = index % self.n + 1;
            index /= self.n;
        }
        labels
    }

    fn tensor(&self, other: &SpaceSpec) -> Result<SpaceSpec> {
        if self.n != other.n {
            return Err(Error::contract("tensor factors must share the qudit dimension"));
        }
        SpaceSpec::new(self.n, self.factors + other.factors)
    }
}

/// Flat index of a three-register basis label `(a, b, c)`.
pub fn flatten_index(triple: (usize, usize, usize), n: usize) -> Result<usize> {
    SpaceSpec::new(n, 3)?.flatten(&[triple.0, triple.1, triple.2])
}

fn require_qudit(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::domain(format!("qudit dimension must be at least 2, got {n}")))
    } else {
        Ok(())
    }
}

/// Unit-norm vector of complex amplitudes over a [`SpaceSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: SpaceSpec,
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(space: SpaceSpec, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::contract(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TAU_NORM {
            return Err(Error::contract(format!("state has norm {norm}, expected 1")));
        }
        Ok(Self { space, amplitudes })
    }

    /// Normalizes `amplitudes`; fails on a (numerically) zero vector.
    pub fn normalized(space: SpaceSpec, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::contract("cannot normalize the zero vector"));
        }
        Self::new(space, amplitudes.unscale(norm))
    }

    pub fn from_slice(space: SpaceSpec, amplitudes: &[C64]) -> Result<Self> {
        Self::new(space, CVector::from_column_slice(amplitudes))
    }

    /// Product basis vector `|l₁ l₂ …⟩` with 1-based labels.
    pub fn basis(space: SpaceSpec, labels: &[usize]) -> Result<Self> {
        let idx = space.flatten(labels)?;
        let mut v = CVector::zeros(space.dim());
        v[idx] = linalg::ONE;
        Ok(Self { space, amplitudes: v })
    }

    pub(crate) fn from_raw(space: SpaceSpec, amplitudes: CVector) -> Self {
        debug_assert_eq!(amplitudes.len(), space.dim());
        Self { space, amplitudes }
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::contract("inner product across different spaces"));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let space = self.space.tensor(&other.space)?;
        Ok(Self::from_raw(space, self.amplitudes.kronecker(&other.amplitudes)))
    }

    pub fn projector(&self) -> Operator {
        Operator::from_raw(self.space, linalg::outer(&self.amplitudes))
    }
}

/// Square complex matrix acting on a [`SpaceSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: SpaceSpec,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: SpaceSpec, matrix: CMatrix) -> Result<Self> {
        let d = space.dim();
        if matrix.shape() != (d, d) {
            return Err(Error::contract(format!("operator of shape {:?} on a space of dimension {d}", matrix.shape())));
        }
        Ok(Self { space, matrix })
    }

    pub(crate) fn from_raw(space: SpaceSpec, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (space.dim(), space.dim()));
        Self { space, matrix }
    }

    pub fn identity(space: SpaceSpec) -> Self {
        Self::from_raw(space, CMatrix::identity(space.dim(), space.dim()))
    }

    pub fn zeros(space: SpaceSpec) -> Self {
        Self::from_raw(space, CMatrix::zeros(space.dim(), space.dim()))
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(&self.matrix)
    }

    pub fn kron(&self, other: &Operator) -> Result<Operator> {
        let space = self.space.tensor(&other.space)?;
        Ok(Self::from_raw(space, self.matrix.kronecker(&other.matrix)))
    }

    pub fn scaled(&self, factor: f64) -> Operator {
        Self::from_raw(self.space, &self.matrix * re(factor))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.same_space(other)?;
        Ok(Self::from_raw(self.space, &self.matrix + &other.matrix))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.same_space(other)?;
        Ok(Self::from_raw(self.space, &self.matrix - &other.matrix))
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        self.same_space(other)?;
        Ok(Self::from_raw(self.space, &self.matrix * &other.matrix))
    }

    pub fn apply(&self, state: &StateVector) -> Result<CVector> {
        if state.space() != self.space {
            return Err(Error::contract("operator and state live on different spaces"));
        }
        Ok(&self.matrix * state.amplitudes())
    }

    /// `Re ⟨ψ|O|ψ⟩`
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let v = self.apply(state)?;
        Ok(state.amplitudes().dotc(&v).re)
    }

    /// `Re Tr(self · other)`
    pub fn trace_product(&self, other: &Operator) -> Result<f64> {
        self.same_space(other)?;
        // Tr(AB) = Σ_ij A_ij B_ji
        let s: C64 = self.matrix.iter().zip(other.matrix.transpose().iter()).map(|(a, b)| a * b).sum();
        Ok(s.re)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.same_space(other)?;
        Ok(linalg::max_abs_diff(&self.matrix, &other.matrix))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }

    pub fn idempotency_defect(&self) -> f64 {
        linalg::max_abs_diff(&(&self.matrix * &self.matrix), &self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.idempotency_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        linalg::is_unitary(&self.matrix, tol)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn rank(&self, tol: f64) -> usize {
        linalg::rank(&self.matrix, tol)
    }

    fn same_space(&self, other: &Operator) -> Result<()> {
        if self.space != other.space {
            Err(Error::contract("operators live on different spaces"))
        } else {
            Ok(())
        }
    }
}

/// Hermitian idempotent [`Operator`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projector(Operator);

impl Projector {
    pub fn try_new(op: Operator, tol: f64) -> Result<Self> {
        if !op.is_projector(tol) {
            return Err(Error::contract(format!(
                "not a projector: hermiticity defect {:.3e}, idempotency defect {:.3e}",
                op.hermiticity_defect(),
                op.idempotency_defect()
            )));
        }
        Ok(Self(op))
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }
}

impl Deref for Projector {
    type Target = Operator;
    fn deref(&self) -> &Operator {
        &self.0
    }
}

/// Hermitian, positive semidefinite, unit-trace [`Operator`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(Operator);

impl DensityOperator {
    pub fn try_new(op: Operator, tol: f64) -> Result<Self> {
        if !op.is_hermitian(tol) {
            return Err(Error::contract("density operator must be Hermitian"));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::contract(format!("density operator has trace {tr}")));
        }
        let min = op.min_eigenvalue();
        if min < -tol {
            return Err(Error::contract(format!("density operator has eigenvalue {min}")));
        }
        Ok(Self(op))
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }
}

impl Deref for DensityOperator {
    type Target = Operator;
    fn deref(&self) -> &Operator {
        &self.0
    }
}

/// `|u⁽²⁾ᵢⱼ⟩` for `1 ≤ i ≤ j ≤ n`.
pub fn sym2_vector(n: usize, i: usize, j: usize) -> Result<StateVector> {
    require_qudit(n)?;
    if i > j {
        return Err(Error::domain(format!("labels must satisfy i <= j, got ({i}, {j})")));
    }
    let space = SpaceSpec::new(n, 2)?;
    let mut v = CVector::zeros(space.dim());
    if i == j {
        v[space.flatten(&[i, i])?] = linalg::ONE;
    } else {
        let w = re(std::f64::consts::FRAC_1_SQRT_2);
        v[space.flatten(&[i, j])?] = w;
        v[space.flatten(&[j, i])?] = w;
    }
    Ok(StateVector::from_raw(space, v))
}

/// Lexicographic pairs `(i, j)` with `1 ≤ i ≤ j ≤ n`.
pub fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i..=n).map(move |j| (i, j)))
}

/// Lexicographic triples `(i, j, k)` with `1 ≤ i ≤ j ≤ k ≤ n`.
pub fn ordered_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=n).flat_map(move |i| (i..=n).flat_map(move |j| (j..=n).map(move |k| (i, j, k))))
}

/// Orthonormal basis of the symmetric subspace of `ℋ⊗ℋ`, lexicographic in `(i, j)`.
pub fn symmetric_basis_2(n: usize) -> Result<Vec<StateVector>> {
    require_qudit(n)?;
    ordered_pairs(n).map(|(i, j)| sym2_vector(n, i, j)).collect()
}

/// `|u⁽³⁾ᵢⱼₖ⟩` for `1 ≤ i ≤ j ≤ k ≤ n`: the normalized sum over the distinct
/// permutations of `|ijk⟩`.
pub fn sym3_vector(n: usize, i: usize, j: usize, k: usize) -> Result<StateVector> {
    require_qudit(n)?;
    if !(i <= j && j <= k) {
        return Err(Error::domain(format!("labels must satisfy i <= j <= k, got ({i}, {j}, {k})")));
    }
    let space = SpaceSpec::new(n, 3)?;
    let kets: Vec<[usize; 3]> = if i == j && j == k {
        vec![[i, i, i]]
    } else if i == j {
        // |ijk⟩ + |ikj⟩ + |kij⟩
        vec![[i, j, k], [i, k, j], [k, i, j]]
    } else if j == k {
        // |ijk⟩ + |jik⟩ + |jki⟩
        vec![[i, j, k], [j, i, k], [j, k, i]]
    } else {
        vec![[i, j, k], [j, i, k], [i, k, j], [k, i, j], [j, k, i], [k, j, i]]
    };
    let w = re(1.0 / (kets.len() as f64).sqrt());
    let mut v = CVector::zeros(space.dim());
    for ket in &kets {
        v[space.flatten(ket)?] += w;
    }
    Ok(StateVector::from_raw(space, v))
}

/// Orthonormal basis of the fully symmetric subspace `S₀` of `⊗³ℋ`,
/// lexicographic in `(i, j, k)`.
pub fn symmetric_basis_3(n: usize) -> Result<Vec<StateVector>> {
    require_qudit(n)?;
    ordered_triples(n).map(|(i, j, k)| sym3_vector(n, i, j, k)).collect()
}

/// Operator permuting tensor factors: `|x₀ x₁ …⟩ ↦ |x_{perm[0]} x_{perm[1]} …⟩`.
pub fn permutation_operator(n: usize, perm: &[usize]) -> Result<Operator> {
    let space = SpaceSpec::new(n, perm.len())?;
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::domain(format!("{perm:?} is not a permutation")));
        }
    }
    let d = space.dim();
    let mut m = CMatrix::zeros(d, d);
    for col in 0..d {
        let labels = space.unflatten(col);
        let permuted: Vec<usize> = perm.iter().map(|&p| labels[p]).collect();
        m[(space.flatten(&permuted)?, col)] = linalg::ONE;
    }
    Ok(Operator::from_raw(space, m))
}

/// Exchange of the two factors of `ℋ⊗ℋ`.
pub fn swap_operator(n: usize) -> Result<Operator> {
    permutation_operator(n, &[1, 0])
}

/// The six permutations of three registers.
pub const PERMUTATIONS_3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn sum_of_dyads(space: SpaceSpec, vectors: &[StateVector]) -> Operator {
    let d = space.dim();
    let mut stacked = CMatrix::zeros(d, vectors.len());
    for (c, v) in vectors.iter().enumerate() {
        stacked.set_column(c, v.amplitudes());
    }
    Operator::from_raw(space, &stacked * stacked.adjoint())
}

/// Projector onto the symmetric subspace `Σ ⊂ ℋ⊗ℋ`, built from the `u⁽²⁾` dyads.
pub fn symmetric_projector(n: usize, factors: usize) -> Result<Projector> {
    require_qudit(n)?;
    let space = SpaceSpec::new(n, factors)?;
    let basis = match factors {
        2 => symmetric_basis_2(n)?,
        3 => symmetric_basis_3(n)?,
        _ => return Err(Error::domain("symmetric projectors exist for 2 or 3 factors only")),
    };
    Ok(Projector(sum_of_dyads(space, &basis)))
}

/// Projector onto `S₀`, the fully symmetric subspace of `⊗³ℋ`.
pub fn s0_projector(n: usize) -> Result<Projector> {
    symmetric_projector(n, 3)
}

/// `P_Σ(AB) ⊗ I_C`, the projector onto `S₁`.
pub fn s1_projector(n: usize) -> Result<Projector> {
    let p = symmetric_projector(n, 2)?;
    Ok(Projector(p.kron(&Operator::identity(SpaceSpec::single(n)?))?))
}

/// `I_A ⊗ P_Σ(BC)`, the projector onto `S₂`.
pub fn s2_projector(n: usize) -> Result<Projector> {
    let p = symmetric_projector(n, 2)?;
    Ok(Projector(Operator::identity(SpaceSpec::single(n)?).kron(&p)?))
}

/// Weight `2 / (n²(n+1))` carried by every unit vector of `S₁` (resp. `S₂`)
/// in the averaged inputs.
pub fn density_weight(n: usize) -> f64 {
    let n = n as f64;
    2.0 / (n * n * (n + 1.0))
}

/// Haar-averaged inputs `ρ₁ = w·P_Σ(AB)⊗I_C` and `ρ₂ = w·I_A⊗P_Σ(BC)`,
/// `w = 2/(n²(n+1))`.
pub fn mean_density_operators(n: usize) -> Result<(DensityOperator, DensityOperator)> {
    require_qudit(n)?;
    let w = density_weight(n);
    let rho1 = DensityOperator::try_new(s1_projector(n)?.scaled(w), TAU_OP)?;
    let rho2 = DensityOperator::try_new(s2_projector(n)?.scaled(w), TAU_OP)?;
    Ok((rho1, rho2))
}

/// Dimensions of the subspaces involved in the discrimination problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct DimensionTable {
    pub n: usize,
    pub dim_sigma: usize,
    pub dim_s0: usize,
    pub dim_s1: usize,
    pub dim_s2: usize,
    pub dim_s3: usize,
    pub dim_s4: usize,
    pub dim_s5: usize,
    pub dim_s6: usize,
    pub i0: usize,
}

impl DimensionTable {
    /// `(label, value)` rows in a fixed display order.
    pub fn rows(&self) -> [(&'static str, usize); 10] {
        [
            ("n", self.n),
            ("Sigma", self.dim_sigma),
            ("S0", self.dim_s0),
            ("S1", self.dim_s1),
            ("S2", self.dim_s2),
            ("S3", self.dim_s3),
            ("S4", self.dim_s4),
            ("S5", self.dim_s5),
            ("S6", self.dim_s6),
            ("i0", self.i0),
        ]
    }

    /// Largest absolute difference over all fields.
    pub fn max_deviation(&self, other: &DimensionTable) -> usize {
        self.rows().iter().zip(other.rows().iter()).map(|(a, b)| a.1.abs_diff(b.1)).max().unwrap_or(0)
    }
}

/// Closed-form dimension table.
pub fn dimension_table(n: usize) -> Result<DimensionTable> {
    require_qudit(n)?;
    let dim_sigma = n * (n + 1) / 2;
    let dim_s0 = n * (n + 1) * (n + 2) / 6;
    let dim_s1 = n * n * (n + 1) / 2;
    let i0 = n * (n + 1) * (n - 1) / 3;
    Ok(DimensionTable {
        n,
        dim_sigma,
        dim_s0,
        dim_s1,
        dim_s2: dim_s1,
        dim_s3: n * (n + 1) * (5 * n - 2) / 6,
        dim_s4: dim_s1 - dim_s0,
        dim_s5: dim_s1 - dim_s0,
        dim_s6: 2 * n * (n + 1) * (n - 1) / 3,
        i0,
    })
}

/// Dimension table measured from explicitly built projectors and spans.
///
/// Every entry is an SVD rank with singular-value threshold `tol_rank`.
/// `S₀` is measured from the full three-register symmetrizer, independently
/// of the `u⁽³⁾` list. `i0` is reported as half the measured dimension of `S₆`.
pub fn measured_dimension_table(n: usize, tol_rank: f64) -> Result<DimensionTable> {
    require_qudit(n)?;
    let p_sigma = symmetric_projector(n, 2)?;
    let p0 = {
        let mut acc = Operator::zeros(SpaceSpec::new(n, 3)?);
        for perm in PERMUTATIONS_3 {
            acc = acc.add(&permutation_operator(n, &perm)?)?;
        }
        acc.scaled(1.0 / 6.0)
    };
    let p1 = s1_projector(n)?;
    let p2 = s2_projector(n)?;

    // S₃ = span(S₁ ∪ S₂): stack both projectors' columns.
    let d = p1.space().dim();
    let mut stacked = CMatrix::zeros(d, 2 * d);
    stacked.columns_mut(0, d).copy_from(p1.matrix());
    stacked.columns_mut(d, d).copy_from(p2.matrix());
    let p3 = linalg::span_projector(&stacked, tol_rank);

    let dim_s6 = linalg::rank(&(&p3 - p0.matrix()), tol_rank);
    Ok(DimensionTable {
        n,
        dim_sigma: p_sigma.rank(tol_rank),
        dim_s0: p0.rank(tol_rank),
        dim_s1: p1.rank(tol_rank),
        dim_s2: p2.rank(tol_rank),
        dim_s3: linalg::rank(&stacked, tol_rank),
        dim_s4: linalg::rank(&(p1.matrix() - p0.matrix()), tol_rank),
        dim_s5: linalg::rank(&(p2.matrix() - p0.matrix()), tol_rank),
        dim_s6,
        i0: dim_s6 / 2,
    })
}

/// Which of the two overlapping subspaces a product basis refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `S₁ = Σ(AB) ⊗ ℋ_C`, basis `|u⁽²⁾_ab⟩|c⟩`
    S1,
    /// `S₂ = ℋ_A ⊗ Σ(BC)`, basis `|c⟩|u⁽²⁾_ab⟩`
    S2,
}

/// Label of a product basis vector of `S₁` or `S₂`: the symmetric pair and the
/// single register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductLabel {
    pub pair: (usize, usize),
    pub single: usize,
}

impl ProductLabel {
    pub fn new(pair: (usize, usize), single: usize) -> Self {
        let pair = if pair.0 <= pair.1 { pair } else { (pair.1, pair.0) };
        Self { pair, single }
    }

    pub fn vector(&self, n: usize, side: Side) -> Result<StateVector> {
        let u = sym2_vector(n, self.pair.0, self.pair.1)?;
        let e = StateVector::basis(SpaceSpec::single(n)?, &[self.single])?;
        match side {
            Side::S1 => u.tensor(&e),
            Side::S2 => e.tensor(&u),
        }
    }
}

/// Real linear combination of product basis vectors of `S₁` or `S₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCombination {
    pub side: Side,
    pub terms: Vec<(ProductLabel, f64)>,
}

impl ProductCombination {
    pub fn new(side: Side, terms: Vec<(ProductLabel, f64)>) -> Self {
        Self { side, terms }
    }

    /// Expands to the full three-register space (without renormalizing).
    pub fn to_amplitudes(&self, n: usize) -> Result<CVector> {
        let space = SpaceSpec::new(n, 3)?;
        let mut v = CVector::zeros(space.dim());
        for (label, coeff) in &self.terms {
            v += label.vector(n, self.side)?.amplitudes() * re(*coeff);
        }
        Ok(v)
    }

    /// Expands and checks unit norm.
    pub fn to_state(&self, n: usize) -> Result<StateVector> {
        StateVector::new(SpaceSpec::new(n, 3)?, self.to_amplitudes(n)?)
    }
}

/// Expansion of `|u⁽³⁾ᵢⱼₖ⟩` over the product basis of `S₁` or `S₂`.
///
/// `i = j = k` yields the single term `|u⁽²⁾ᵢᵢ⟩|i⟩` (resp. `|i⟩|u⁽²⁾ᵢᵢ⟩`).
pub fn expand_u3(n: usize, triple: (usize, usize, usize), side: Side) -> Result<ProductCombination> {
    require_qudit(n)?;
    let (i, j, k) = triple;
    if !(i <= j && j <= k) || i == 0 || k > n {
        return Err(Error::domain(format!("triple ({i}, {j}, {k}) must satisfy 1 <= i <= j <= k <= {n}")));
    }
    let two_thirds = (2.0f64 / 3.0).sqrt();
    let third = (1.0f64 / 3.0).sqrt();
    let l = ProductLabel::new;
    let terms = match (i == j, j == k, side) {
        (true, true, _) => vec![(l((i, i), i), 1.0)],
        // i = j < k
        (true, false, Side::S1) => vec![(l((i, k), j), two_thirds), (l((i, j), k), third)],
        (true, false, Side::S2) => vec![(l((j, k), i), two_thirds), (l((i, j), k), third)],
        // i < j = k
        (false, true, Side::S1) => vec![(l((i, j), k), two_thirds), (l((j, k), i), third)],
        (false, true, Side::S2) => vec![(l((i, k), j), two_thirds), (l((j, k), i), third)],
        // i < j < k
        (false, false, _) => vec![(l((i, j), k), third), (l((i, k), j), third), (l((j, k), i), third)],
    };
    Ok(ProductCombination::new(side, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn gram(vs: &[StateVector]) -> CMatrix {
        CMatrix::from_fn(vs.len(), vs.len(), |r, c| vs[r].inner(&vs[c]).unwrap())
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(flatten_index((1, 1, 1), 2).unwrap(), 0);
        assert_eq!(flatten_index((2, 2, 2), 2).unwrap(), 7);
        // Independent enumeration: A slowest, C fastest.
        let mut expected = 0;
        for a in 1..=2 {
            for b in 1..=2 {
                for c in 1..=2 {
                    assert_eq!(flatten_index((a, b, c), 2).unwrap(), expected);
                    expected += 1;
                }
            }
        }
        assert_eq!(flatten_index((1, 2, 1), 2).unwrap(), 2);
    }

    #[test]
    fn flatten_rejects_out_of_range() {
        assert!(matches!(flatten_index((0, 1, 1), 2), Err(Error::Domain(_))));
        assert!(matches!(flatten_index((1, 3, 1), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn unflatten_inverts_flatten() {
        let s = SpaceSpec::new(3, 3).unwrap();
        for idx in 0..s.dim() {
            assert_eq!(s.flatten(&s.unflatten(idx)).unwrap(), idx);
        }
    }

    #[test]
    fn sym2_basis_n2() {
        let b = symmetric_basis_2(2).unwrap();
        assert_eq!(b.len(), 3);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [vec![1.0, 0.0, 0.0, 0.0], vec![0.0, h, h, 0.0], vec![0.0, 0.0, 0.0, 1.0]];
        for (v, e) in b.iter().zip(expect.iter()) {
            for (a, x) in v.amplitudes().iter().zip(e) {
                assert!((a - re(*x)).norm() < EPS);
            }
        }
    }

    #[test]
    fn sym2_basis_n3_orthonormal() {
        let b = symmetric_basis_2(3).unwrap();
        assert_eq!(b.len(), 6);
        let g = gram(&b);
        assert!(linalg::max_abs_diff(&g, &CMatrix::identity(6, 6)) < EPS);
    }

    #[test]
    fn small_n_rejected() {
        assert!(symmetric_basis_2(1).is_err());
        assert!(symmetric_basis_3(1).is_err());
        assert!(mean_density_operators(1).is_err());
        assert!(dimension_table(1).is_err());
    }

    #[test]
    fn sym3_examples() {
        assert_eq!(symmetric_basis_3(2).unwrap().len(), 4);
        let s = SpaceSpec::new(2, 3).unwrap();
        let u = sym3_vector(2, 1, 1, 2).unwrap();
        let w = 1.0 / 3f64.sqrt();
        for (idx, a) in u.amplitudes().iter().enumerate() {
            let l = s.unflatten(idx);
            let expected = match l.as_slice() {
                [1, 1, 2] | [1, 2, 1] | [2, 1, 1] => w,
                _ => 0.0,
            };
            assert!((a - re(expected)).norm() < EPS, "{l:?}");
        }
        let u = sym3_vector(3, 1, 2, 3).unwrap();
        let s = SpaceSpec::new(3, 3).unwrap();
        let w = 1.0 / 6f64.sqrt();
        for (idx, a) in u.amplitudes().iter().enumerate() {
            let mut l = s.unflatten(idx);
            l.sort();
            let expected = if l == [1, 2, 3] { w } else { 0.0 };
            assert!((a - re(expected)).norm() < EPS);
        }
    }

    #[test]
    fn sym3_invariant_under_all_permutations() {
        for n in 2..=4 {
            let perms: Vec<Operator> = PERMUTATIONS_3.iter().map(|p| permutation_operator(n, p).unwrap()).collect();
            for u in symmetric_basis_3(n).unwrap() {
                for p in &perms {
                    let moved = p.apply(&u).unwrap();
                    assert!((moved - u.amplitudes()).camax() < EPS);
                }
            }
        }
    }

    #[test]
    fn sym_projector_matches_symmetrizer() {
        for n in 2..=4 {
            let p = symmetric_projector(n, 2).unwrap();
            assert!(p.is_projector(TAU_OP));
            assert!((p.trace().re - (n * (n + 1) / 2) as f64).abs() < 1e-12);
            let swap = swap_operator(n).unwrap();
            let sym = Operator::identity(swap.space()).add(&swap).unwrap().scaled(0.5);
            assert!(p.max_abs_diff(&sym).unwrap() < TAU_OP);
            let comm = p.mul(&swap).unwrap().sub(&swap.mul(&p).unwrap()).unwrap();
            assert!(linalg::max_abs(comm.matrix()) < EPS);
        }
    }

    #[test]
    fn mean_densities_n2_spectrum() {
        let (rho1, rho2) = mean_density_operators(2).unwrap();
        assert!((rho1.trace().re - 1.0).abs() < EPS);
        assert!((rho2.trace().re - 1.0).abs() < EPS);
        let ev = rho1.eigenvalues();
        let nonzero: Vec<f64> = ev.iter().copied().filter(|e| e.abs() > 1e-9).collect();
        assert_eq!(nonzero.len(), 6);
        for e in nonzero {
            assert!((e - 1.0 / 6.0).abs() < EPS);
        }
    }

    #[test]
    fn mean_density_n3_rank() {
        let (_, rho2) = mean_density_operators(3).unwrap();
        assert_eq!(rho2.rank(TAU_RANK), 18);
        assert!(rho2.min_eigenvalue() >= -1e-12);
    }

    #[test]
    fn dimension_table_values() {
        let t = dimension_table(2).unwrap();
        assert_eq!(
            (t.dim_sigma, t.dim_s0, t.dim_s1, t.dim_s2, t.dim_s3, t.dim_s4, t.dim_s5, t.dim_s6, t.i0),
            (3, 4, 6, 6, 8, 2, 2, 4, 2)
        );
        let t = dimension_table(3).unwrap();
        assert_eq!((t.dim_s0, t.dim_s3, t.dim_s6, t.i0), (10, 26, 16, 8));
        for n in 2..=12 {
            let t = dimension_table(n).unwrap();
            assert_eq!(t.dim_s6, 2 * t.i0);
            assert_eq!(t.dim_s3, t.dim_s0 + t.dim_s4 + t.dim_s5);
        }
    }

    #[test]
    fn measured_dimensions_n2() {
        let m = measured_dimension_table(2, TAU_RANK).unwrap();
        assert_eq!(m.dim_s3, 8);
        assert_eq!(m, dimension_table(2).unwrap());
    }

    #[test]
    fn expand_u3_examples() {
        let e = expand_u3(2, (1, 1, 2), Side::S1).unwrap();
        assert_eq!(
            e.terms,
            vec![
                (ProductLabel::new((1, 2), 1), (2.0f64 / 3.0).sqrt()),
                (ProductLabel::new((1, 1), 2), (1.0f64 / 3.0).sqrt()),
            ]
        );
        // |211⟩ = |2⟩|u₁₁⟩
        let e = expand_u3(2, (1, 1, 2), Side::S2).unwrap();
        assert_eq!(
            e.terms,
            vec![
                (ProductLabel::new((1, 2), 1), (2.0f64 / 3.0).sqrt()),
                (ProductLabel::new((1, 1), 2), (1.0f64 / 3.0).sqrt()),
            ]
        );
        let e = expand_u3(3, (1, 2, 3), Side::S1).unwrap();
        let v = e.to_amplitudes(3).unwrap();
        let u = sym3_vector(3, 1, 2, 3).unwrap();
        assert!((v - u.amplitudes()).norm() < EPS);
    }

    #[test]
    fn expand_u3_rejects_unordered() {
        assert!(matches!(expand_u3(3, (2, 1, 3), Side::S1), Err(Error::Domain(_))));
    }

    #[test]
    fn expand_u3_reconstructs_all_triples() {
        for n in 2..=5 {
            for (i, j, k) in ordered_triples(n) {
                let u = sym3_vector(n, i, j, k).unwrap();
                for side in [Side::S1, Side::S2] {
                    let v = expand_u3(n, (i, j, k), side).unwrap().to_amplitudes(n).unwrap();
                    assert!((v - u.amplitudes()).norm() < EPS, "n={n} ({i},{j},{k}) {side:?}");
                }
            }
        }
    }

    #[test]
    fn state_rejects_bad_norm() {
        let s = SpaceSpec::single(2).unwrap();
        assert!(StateVector::from_slice(s, &[re(1.0), re(1.0)]).is_err());
        assert!(StateVector::from_slice(s, &[re(1.0)]).is_err());
    }

    #[test]
    fn density_rejects_non_psd() {
        let s = SpaceSpec::single(2).unwrap();
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.5), re(-0.5)]));
        assert!(DensityOperator::try_new(Operator::new(s, m).unwrap(), TAU_OP).is_err());
    }
}
