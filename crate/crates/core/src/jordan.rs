//! Explicit Jordan bases `{gᵢ} ⊂ S₄`, `{hᵢ} ⊂ S₅` with `⟨gᵢ|hⱼ⟩ = -½ δᵢⱼ`,
//! plus a general principal-angle routine used to cross-check them.
//!
//! Pairs are enumerated lexicographically in the ordered triple `i ≤ j ≤ k`:
//! one pair for `i = j < k`, one for `i < j = k` and two (unprimed first) for
//! `i < j < k`. That gives `i0 = n(n+1)(n-1)/3` pairs, the dimension of `S₄`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::spaces::{
    self, mean_density_operators, DensityOperator, Operator, ProductCombination, ProductLabel, Side, SpaceSpec,
    StateVector, TAU_OP,
};

/// Which construction produced a `(g, h)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    /// `i = j < k`
    RepeatedLow,
    /// `i < j = k`
    RepeatedHigh,
    /// `i < j < k`, first of the two pairs
    Distinct,
    /// `i < j < k`, second ("primed") pair
    DistinctPrimed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairLabel {
    pub kind: PairKind,
    pub triple: (usize, usize, usize),
}

/// Paired orthonormal families spanning `S₄` and `S₅`.
#[derive(Debug, Clone)]
pub struct JordanPairSet {
    pub n: usize,
    pub g: Vec<StateVector>,
    pub h: Vec<StateVector>,
    pub labels: Vec<PairLabel>,
}

impl JordanPairSet {
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn space(&self) -> SpaceSpec {
        SpaceSpec::new(self.n, 3).expect("n validated at construction")
    }

    /// `Σᵢ |gᵢ⟩⟨gᵢ|`
    pub fn g_projector(&self) -> Operator {
        dyad_sum(self.space(), &self.g)
    }

    /// `Σᵢ |hᵢ⟩⟨hᵢ|`
    pub fn h_projector(&self) -> Operator {
        dyad_sum(self.space(), &self.h)
    }
}

fn dyad_sum(space: SpaceSpec, vs: &[StateVector]) -> Operator {
    let m = stack(space.dim(), vs);
    Operator::new(space, &m * m.adjoint()).expect("square by construction")
}

fn stack(dim: usize, vs: &[StateVector]) -> CMatrix {
    let cols: Vec<_> = vs.iter().map(|v| v.amplitudes()).collect();
    linalg::columns(&cols, dim)
}

fn pair_for(n: usize, kind: PairKind, (i, j, k): (usize, usize, usize)) -> Result<(StateVector, StateVector)> {
    let l = ProductLabel::new;
    let third = (1.0f64 / 3.0).sqrt();
    let two_thirds = (2.0f64 / 3.0).sqrt();
    let s3 = 3f64.sqrt();
    let a = (3.0 - s3) / 6.0;
    let b = (3.0 + s3) / 6.0;
    let c = s3 / 3.0;
    let (g_terms, h_terms) = match kind {
        // g = √⅓|u_ik⟩|j⟩ − √⅔|ijk⟩,  h = √⅓|i⟩|u_jk⟩ − √⅔|kij⟩
        PairKind::RepeatedLow => (
            vec![(l((i, k), j), third), (l((i, j), k), -two_thirds)],
            vec![(l((j, k), i), third), (l((i, j), k), -two_thirds)],
        ),
        // g = √⅓|u_ij⟩|k⟩ − √⅔|jki⟩,  h = √⅓|j⟩|u_ik⟩ − √⅔|ijk⟩
        PairKind::RepeatedHigh => (
            vec![(l((i, j), k), third), (l((j, k), i), -two_thirds)],
            vec![(l((i, k), j), third), (l((j, k), i), -two_thirds)],
        ),
        PairKind::Distinct => (
            vec![(l((i, j), k), a), (l((i, k), j), -b), (l((j, k), i), c)],
            vec![(l((i, j), k), a), (l((i, k), j), -b), (l((j, k), i), c)],
        ),
        PairKind::DistinctPrimed => (
            vec![(l((i, k), j), a), (l((i, j), k), -b), (l((j, k), i), c)],
            vec![(l((i, k), j), a), (l((i, j), k), -b), (l((j, k), i), c)],
        ),
    };
    let g = ProductCombination::new(Side::S1, g_terms).to_state(n)?;
    let h = ProductCombination::new(Side::S2, h_terms).to_state(n)?;
    Ok((g, h))
}

/// Builds the Jordan pair set for qudit dimension `n`.
pub fn build_gh_bases(n: usize) -> Result<JordanPairSet> {
    if n < 2 {
        return Err(Error::domain(format!("qudit dimension must be at least 2, got {n}")));
    }
    let mut labels = Vec::new();
    for (i, j, k) in spaces::ordered_triples(n) {
        let kinds: &[PairKind] = match (i == j, j == k) {
            (true, true) => &[],
            (true, false) => &[PairKind::RepeatedLow],
            (false, true) => &[PairKind::RepeatedHigh],
            (false, false) => &[PairKind::Distinct, PairKind::DistinctPrimed],
        };
        labels.extend(kinds.iter().map(|&kind| PairLabel { kind, triple: (i, j, k) }));
    }
    let mut g = Vec::with_capacity(labels.len());
    let mut h = Vec::with_capacity(labels.len());
    for label in &labels {
        let (gi, hi) = pair_for(n, label.kind, label.triple)?;
        g.push(gi);
        h.push(hi);
    }
    Ok(JordanPairSet { n, g, h, labels })
}

/// Cross-Gram matrix `Gᵢⱼ = ⟨aᵢ|bⱼ⟩`.
pub fn cross_gram(a: &[StateVector], b: &[StateVector]) -> Result<CMatrix> {
    let space = match (a.first(), b.first()) {
        (Some(x), Some(y)) if x.space() != y.space() => {
            return Err(Error::contract("families live on different spaces"))
        }
        (Some(x), _) => x.space(),
        (None, Some(y)) => y.space(),
        (None, None) => return Ok(CMatrix::zeros(0, 0)),
    };
    if a.iter().chain(b).any(|v| v.space() != space) {
        return Err(Error::contract("families live on different spaces"));
    }
    let ma = stack(space.dim(), a);
    let mb = stack(space.dim(), b);
    Ok(ma.adjoint() * mb)
}

/// Overlap matrix of a pair set together with its deviation from `-½·I`.
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    pub gram: CMatrix,
    /// `max |Gᵢⱼ + ½δᵢⱼ|`
    pub max_deviation: f64,
}

pub fn overlap_matrix(set: &JordanPairSet) -> Result<OverlapMatrix> {
    if set.g.len() != set.h.len() {
        return Err(Error::contract(format!("{} g-vectors but {} h-vectors", set.g.len(), set.h.len())));
    }
    let gram = cross_gram(&set.g, &set.h)?;
    let target = CMatrix::identity(gram.nrows(), gram.ncols()) * linalg::re(-0.5);
    let max_deviation = if gram.is_empty() { 0.0 } else { linalg::max_abs_diff(&gram, &target) };
    Ok(OverlapMatrix { gram, max_deviation })
}

/// Cosines of the principal angles between two orthonormal families, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanAngles {
    pub cosines: Vec<f64>,
}

impl JordanAngles {
    pub fn angles(&self) -> Vec<f64> {
        self.cosines.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect()
    }
}

fn orthonormality_defect(vs: &[StateVector]) -> Result<f64> {
    let g = cross_gram(vs, vs)?;
    Ok(if g.is_empty() { 0.0 } else { linalg::max_abs_diff(&g, &CMatrix::identity(vs.len(), vs.len())) })
}

/// Principal-angle cosines between `span(a)` and `span(b)`: the singular values
/// of the cross-Gram matrix. Both families must be orthonormal within `TAU_OP`.
pub fn jordan_angles(a: &[StateVector], b: &[StateVector]) -> Result<JordanAngles> {
    for (name, fam) in [("first", a), ("second", b)] {
        let d = orthonormality_defect(fam)?;
        if d > TAU_OP {
            return Err(Error::contract(format!("{name} family is not orthonormal (defect {d:.3e})")));
        }
    }
    let gram = cross_gram(a, b)?;
    Ok(JordanAngles { cosines: linalg::singular_values(&gram) })
}

/// `ρ₁ = w(P_S₀ + Σ|gᵢ⟩⟨gᵢ|)`, `ρ₂ = w(P_S₀ + Σ|hᵢ⟩⟨hᵢ|)`, `w = 2/(n²(n+1))`.
pub fn density_from_jordan(n: usize) -> Result<(DensityOperator, DensityOperator)> {
    let set = build_gh_bases(n)?;
    density_from_pair_set(&set)
}

pub fn density_from_pair_set(set: &JordanPairSet) -> Result<(DensityOperator, DensityOperator)> {
    let w = spaces::density_weight(set.n);
    let p0 = spaces::s0_projector(set.n)?;
    let rho1 = p0.add(&set.g_projector())?.scaled(w);
    let rho2 = p0.add(&set.h_projector())?.scaled(w);
    Ok((DensityOperator::try_new(rho1, TAU_OP)?, DensityOperator::try_new(rho2, TAU_OP)?))
}

/// Largest `|⟨x|y⟩|` for `x ∈ {gᵢ, hᵢ}`, `y ∈ {gⱼ, hⱼ}`, `i ≠ j`.
pub fn block_orthogonality_defect(set: &JordanPairSet) -> Result<f64> {
    let all: Vec<StateVector> = set.g.iter().chain(set.h.iter()).cloned().collect();
    let gram = cross_gram(&all, &all)?;
    let m = set.len();
    let mut worst = 0.0f64;
    for r in 0..2 * m {
        for c in 0..2 * m {
            if r % m != c % m {
                worst = worst.max(gram[(r, c)].norm());
            }
        }
    }
    Ok(worst)
}

/// Convenience check used by reports: `max |ρ(jordan) − ρ(direct)|` for both inputs.
pub fn density_consistency(n: usize) -> Result<f64> {
    let (j1, j2) = density_from_jordan(n)?;
    let (d1, d2) = mean_density_operators(n)?;
    Ok(j1.max_abs_diff(&d1)?.max(j2.max_abs_diff(&d2)?))
}
