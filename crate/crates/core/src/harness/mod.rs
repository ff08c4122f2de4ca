//! Haar sampling, Monte Carlo estimates and the verification report.
//!
//! All randomness is ChaCha8 with counter-style sub-streams: trial `k` of a run
//! seeded with `s` uses stream `k` of seed `s`. Parallel loops therefore give
//! the same numbers regardless of thread count, and reductions are done in
//! index order.

mod report;
mod stats;

pub use report::{verify_all, Check, Report, Tolerances};
pub use stats::{grid_scan_max, kolmogorov_pvalue, ks_statistic, GridMax, KsResult};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::optics::{self, discriminator_network, DiscriminatorNetwork, D1_OUTPUT, D2_OUTPUT, FAIL_OUTPUT};
use crate::povm::{self, Priors, ReciprocalBasis};
use crate::spaces::{DensityOperator, SpaceSpec, StateVector, TAU_OP};

/// Stream offset separating the two states of a pair drawn for one trial.
const SECOND_STATE_STREAM: u64 = 1 << 62;

/// Seed salt for the routing draws of [`simulate_programmable`].
const ROUTING_SALT: u64 = 0x5eed_c0de;

/// Haar-random pure state of dimension `n` drawn from `rng`.
pub fn haar_state_from_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    let space = SpaceSpec::single(n)?;
    loop {
        let v =
            CVector::from_iterator(n, (0..n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))));
        if v.norm() > 1e-150 {
            return StateVector::normalized(space, v);
        }
    }
}

/// Haar-random pure state of dimension `n ≥ 1`, deterministic in `seed`.
pub fn haar_state(n: usize, seed: u64) -> Result<StateVector> {
    haar_state_from_rng(n, &mut optics::substream(seed, 0))
}

/// Independent Haar pair `(ψ₁, ψ₂)` for trial `trial` of a run seeded with `seed`.
pub fn haar_pair(n: usize, seed: u64, trial: u64) -> Result<(StateVector, StateVector)> {
    let psi1 = haar_state_from_rng(n, &mut optics::substream(seed, trial))?;
    let psi2 = haar_state_from_rng(n, &mut optics::substream(seed, trial | SECOND_STATE_STREAM))?;
    Ok((psi1, psi2))
}

/// Haar-random `n×n` unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::domain("unitary dimension must be at least 1"));
    }
    let mut rng = optics::substream(seed, 0);
    let g = CMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { linalg::ONE };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    Ok(q)
}

/// Selects `Ψ₁ = ψ₁ψ₁ψ₂` or `Ψ₂ = ψ₁ψ₂ψ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    First,
    Second,
}

/// `(1/trials) Σ |Ψ⟩⟨Ψ|` over Haar pairs.
pub fn empirical_mean_density(n: usize, which: Which, trials: u64, seed: u64) -> Result<DensityOperator> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let space = SpaceSpec::new(n, 3)?;
    let dim = space.dim();
    let sum = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<CMatrix> {
            let (a, b) = haar_pair(n, seed, t)?;
            let (big1, big2) = povm::program_inputs(&a, &b)?;
            let psi = match which {
                Which::First => big1,
                Which::Second => big2,
            };
            Ok(linalg::outer(psi.amplitudes()))
        })
        .try_reduce(|| CMatrix::zeros(dim, dim), |x, y| Ok(x + y))?;
    let op = crate::spaces::Operator::new(space, sum.unscale(trials as f64))?;
    DensityOperator::try_new(op, TAU_OP)
}

/// Both sides of `Σᵢ|⟨Ψ₁|g⊥ᵢ⟩|² = Σᵢ|⟨Ψ₂|h⊥ᵢ⟩|² = ½(1 − |⟨ψ₁|ψ₂⟩|²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapIdentity {
    pub lhs_g: f64,
    pub lhs_h: f64,
    pub rhs: f64,
}

impl OverlapIdentity {
    pub fn max_discrepancy(&self) -> f64 {
        (self.lhs_g - self.rhs).abs().max((self.lhs_h - self.rhs).abs())
    }
}

/// Evaluates the overlap identity with a precomputed reciprocal basis.
pub fn overlap_identity_with(
    basis: &ReciprocalBasis,
    psi1: &StateVector,
    psi2: &StateVector,
) -> Result<OverlapIdentity> {
    for psi in [psi1, psi2] {
        let s = psi.space();
        if s.factors() != 1 || s.n() != basis.n {
            return Err(Error::contract(format!("expected single-qudit states of dimension {}", basis.n)));
        }
    }
    let (big1, big2) = povm::program_inputs(psi1, psi2)?;
    let (lhs_g, _) = basis.weights(&big1)?;
    let (_, lhs_h) = basis.weights(&big2)?;
    let rhs = 0.5 * (1.0 - psi1.inner(psi2)?.norm_sqr());
    Ok(OverlapIdentity { lhs_g, lhs_h, rhs })
}

/// Evaluates the overlap identity for states of dimension `n`.
pub fn overlap_identity_check(psi1: &StateVector, psi2: &StateVector, n: usize) -> Result<OverlapIdentity> {
    overlap_identity_with(&ReciprocalBasis::new(n)?, psi1, psi2)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√trials`.
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean − target| / stderr`; infinite if the estimate is exact but off target.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d <= 1e-15 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        self.z_score(target) <= sigmas
    }
}

/// Averages the exact pure-state success over Haar pairs.
pub fn mc_success(n: usize, omega1: f64, priors: Priors, trials: u64, seed: u64) -> Result<McEstimate> {
    if trials < 100 {
        return Err(Error::domain(format!("mc_success needs at least 100 trials, got {trials}")));
    }
    povm::check_omega1(omega1)?;
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (a, b) = haar_pair(n, seed, t)?;
            povm::pure_success(&a, &b, omega1, priors, n)
        })
        .collect::<Result<Vec<f64>>>()?;
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (m - 1.0);
    Ok(McEstimate { mean, stderr: (var / m).sqrt(), trials, seed })
}

/// Click-level run of the full discriminator on Haar-random inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgrammableRun {
    pub n: usize,
    pub priors: Priors,
    pub omega1: f64,
    pub shots: u64,
    pub seed: u64,
    /// `counts[k][o]`: true input `k` (0 → ψ₁, 1 → ψ₂), outcome `o` ∈ (D1, D2, F).
    pub counts: [[u64; 3]; 2],
    pub success_empirical: f64,
    pub success_analytic: f64,
    /// Binomial standard error at the analytic success probability.
    pub sigma: f64,
    /// Shots that lit the detector of the wrong state (must be zero).
    pub errors: u64,
}

impl ProgrammableRun {
    pub fn z_score(&self) -> f64 {
        if self.sigma > 0.0 {
            (self.success_empirical - self.success_analytic).abs() / self.sigma
        } else {
            0.0
        }
    }
}

/// Simulates `shots` uses of the discriminator.
///
/// Each shot draws a fresh Haar pair and a true input according to the
/// priors. The input reaches the Jordan blocks with probability
/// `(2/3)(1 − |⟨ψ₁|ψ₂⟩|²)`, where it is exactly `gᵢ` (for `Ψ₁`) or `hᵢ`
/// (for `Ψ₂`); otherwise the result is the failure outcome. Block photons are
/// sent through the six-port network with [`optics::simulate_clicks`].
pub fn simulate_programmable(n: usize, priors: Priors, omega1: f64, shots: u64, seed: u64) -> Result<ProgrammableRun> {
    if shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    let net = discriminator_network(omega1)?;
    let routed = (0..shots)
        .into_par_iter()
        .map(|t| -> Result<(usize, bool)> {
            let (a, b) = haar_pair(n, seed, t)?;
            let block_weight = 2.0 / 3.0 * (1.0 - a.inner(&b)?.norm_sqr());
            let mut rng = optics::substream(seed ^ ROUTING_SALT, t);
            let state = usize::from(rng.random::<f64>() >= priors.eta1);
            Ok((state, rng.random::<f64>() < block_weight))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = [[0u64; 3]; 2];
    let mut in_block = [0u64; 2];
    for (state, hit) in routed {
        if hit {
            in_block[state] += 1;
        } else {
            counts[state][FAIL_OUTPUT] += 1;
        }
    }
    let port_space = SpaceSpec::single(3)?;
    let inputs = [DiscriminatorNetwork::input_g(), DiscriminatorNetwork::input_h()];
    for (k, input) in inputs.into_iter().enumerate() {
        if in_block[k] == 0 {
            continue;
        }
        let state = StateVector::new(port_space, input)?;
        let click_seed = (seed ^ ROUTING_SALT).wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64 + 1);
        let stats = optics::simulate_clicks(&net.interferometer, &state, in_block[k], click_seed)?;
        for (o, c) in stats.counts.iter().enumerate() {
            counts[k][o] += c;
        }
    }
    let success_empirical = (counts[0][D1_OUTPUT] + counts[1][D2_OUTPUT]) as f64 / shots as f64;
    let success_analytic = povm::average_success(n, net.omega1, priors)?;
    Ok(ProgrammableRun {
        n,
        priors,
        omega1: net.omega1,
        shots,
        seed,
        counts,
        success_empirical,
        success_analytic,
        sigma: (success_analytic * (1.0 - success_analytic) / shots as f64).sqrt(),
        errors: counts[0][D2_OUTPUT] + counts[1][D1_OUTPUT],
    })
}
