//! Detection operators of the ω₁-family and the success probabilities they
//! achieve, for the averaged (mixed) inputs and for pure inputs.
//!
//! Inside each two-dimensional block `Tᵢ = span(gᵢ, hᵢ)`:
//!
//! ```text
//! Π₁⁽ⁱ⁾ = sin²ω₁ |g⊥ᵢ⟩⟨g⊥ᵢ|
//! Π₂⁽ⁱ⁾ = 4cos²ω₁/(1+3cos²ω₁) |h⊥ᵢ⟩⟨h⊥ᵢ|
//! Π₀⁽ⁱ⁾ = I_T − Π₁⁽ⁱ⁾ − Π₂⁽ⁱ⁾
//! ```
//!
//! With `x = 1 + 3cos²ω₁ ∈ [1, 4]` the per-block success is
//! `Pⁱ(x) = 1 − η₁x/4 − η₂/x`, maximized at `x₀ = 2√(η₂/η₁)` when that lies in
//! `[1, 4]`, i.e. for `1/5 ≤ η₁ ≤ 4/5`, with value `1 − √(η₁η₂)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{self, JordanPairSet};
use crate::linalg::{self, re, CMatrix};
use crate::spaces::{Operator, SpaceSpec, StateVector};

/// Slack allowed on reported probabilities before they are treated as errors.
pub const PROBABILITY_SLACK: f64 = 1e-12;

const ANGLE_SLACK: f64 = 1e-12;

/// A-priori probabilities of the two inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub eta1: f64,
    pub eta2: f64,
}

impl Priors {
    pub fn new(eta1: f64, eta2: f64) -> Result<Self> {
        if !(eta1 >= 0.0 && eta2 >= 0.0) || (eta1 + eta2 - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("invalid priors ({eta1}, {eta2})")));
        }
        Ok(Self { eta1, eta2 })
    }

    /// `(η₁, 1 − η₁)`
    pub fn from_eta1(eta1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta1) {
            return Err(Error::domain(format!("eta1 = {eta1} outside [0, 1]")));
        }
        Ok(Self { eta1, eta2: 1.0 - eta1 })
    }

    pub fn equal() -> Self {
        Self { eta1: 0.5, eta2: 0.5 }
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.eta1 <= 0.0 || self.eta1 >= 1.0 {
            Err(Error::DegeneratePriors { eta1: self.eta1 })
        } else {
            Ok(())
        }
    }
}

/// Clamp a probability into `[0, 1]`, failing if it is off by more than
/// [`PROBABILITY_SLACK`].
pub fn checked_probability(p: f64) -> Result<f64> {
    if !p.is_finite() || !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(Error::ProbabilityOutOfRange { value: p });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Validates `ω₁ ∈ [0, π/2]`, snapping values within rounding of an endpoint.
pub fn check_omega1(omega1: f64) -> Result<f64> {
    if !omega1.is_finite() || !(-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&omega1) {
        return Err(Error::domain(format!("omega1 = {omega1} outside [0, pi/2]")));
    }
    Ok(omega1.clamp(0.0, FRAC_PI_2))
}

/// `x = 1 + 3cos²ω₁`
pub fn x_from_omega1(omega1: f64) -> Result<f64> {
    let w = check_omega1(omega1)?;
    Ok(1.0 + 3.0 * w.cos().powi(2))
}

/// Inverse of [`x_from_omega1`] on `[1, 4] → [0, π/2]`.
pub fn omega1_from_x(x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(((x - 1.0) / 3.0).clamp(0.0, 1.0).sqrt().acos())
}

fn check_x(x: f64) -> Result<()> {
    if !(1.0..=4.0).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [1, 4]")));
    }
    Ok(())
}

/// Weight of the `|g⊥⟩⟨g⊥|` dyads: `sin²ω₁`.
pub fn pi1_weight(omega1: f64) -> f64 {
    omega1.sin().powi(2)
}

/// Weight of the `|h⊥⟩⟨h⊥|` dyads: `4cos²ω₁/(1+3cos²ω₁)`.
pub fn pi2_weight(omega1: f64) -> f64 {
    let c2 = omega1.cos().powi(2);
    4.0 * c2 / (1.0 + 3.0 * c2)
}

/// `cos²ω₂ = 1/(1+3cos²ω₁)`, returned as `ω₂ ∈ [0, π/2]`.
pub fn omega2_constraint(omega1: f64) -> Result<f64> {
    let w = check_omega1(omega1)?;
    let c2 = 1.0 / (1.0 + 3.0 * w.cos().powi(2));
    Ok(c2.sqrt().clamp(0.0, 1.0).acos())
}

/// Reciprocal states: `g⊥ ⟂ h`, `h⊥ ⟂ g`, both unit norm.
///
/// Only the Jordan-pair geometry is accepted: `⟨g|h⟩` must be real and equal to
/// `-½` within `1e-6`. Then `g⊥ = (2g + h)/√3` and `h⊥ = (2h + g)/√3`.
pub fn reciprocal_pair(g: &StateVector, h: &StateVector) -> Result<(StateVector, StateVector)> {
    let s = g.inner(h)?;
    if (s.re + 0.5).abs() > 1e-6 || s.im.abs() > 1e-6 {
        return Err(Error::contract(format!("reciprocal states need <g|h> = -1/2, got {s}")));
    }
    let denom = (1.0 - s.norm_sqr()).sqrt();
    // (g − ⟨h|g⟩h)/√(1 − |⟨h|g⟩|²)
    let g_perp = (g.amplitudes() - h.amplitudes() * s.conj()).unscale(denom);
    let h_perp = (h.amplitudes() - g.amplitudes() * s).unscale(denom);
    Ok((StateVector::normalized(g.space(), g_perp)?, StateVector::normalized(h.space(), h_perp)?))
}

/// Three-outcome measurement; outcome 1 identifies the first input, 2 the
/// second, 0 is the inconclusive result.
#[derive(Debug, Clone)]
pub struct MeasurementTriple {
    pub pi1: Operator,
    pub pi2: Operator,
    pub pi0: Operator,
    /// Identity of the space the triple is complete on (`I` or the projector onto a block).
    pub support: Operator,
    pub omega1: f64,
}

impl MeasurementTriple {
    /// Smallest eigenvalues of `(Π₁, Π₂, Π₀)`.
    pub fn min_eigenvalues(&self) -> [f64; 3] {
        [self.pi1.min_eigenvalue(), self.pi2.min_eigenvalue(), self.pi0.min_eigenvalue()]
    }

    /// `max |Π₁ + Π₂ + Π₀ − support|`
    pub fn completeness_defect(&self) -> f64 {
        let sum = self.pi1.matrix() + self.pi2.matrix() + self.pi0.matrix();
        linalg::max_abs_diff(&sum, self.support.matrix())
    }

    /// Checks positivity and completeness within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let mins = self.min_eigenvalues();
        if let Some(m) = mins.iter().find(|&&m| m < -tol) {
            return Err(Error::contract(format!("POVM element has eigenvalue {m}")));
        }
        let d = self.completeness_defect();
        if d > tol {
            return Err(Error::contract(format!("POVM elements miss completeness by {d:.3e}")));
        }
        Ok(())
    }

    /// Outcome probabilities `(p₁, p₂, p₀)` for a pure state.
    pub fn probabilities(&self, state: &StateVector) -> Result<[f64; 3]> {
        Ok([
            checked_probability(self.pi1.expectation(state)?)?,
            checked_probability(self.pi2.expectation(state)?)?,
            checked_probability(self.pi0.expectation(state)?)?,
        ])
    }
}

/// POVM restricted to the block spanned by a Jordan pair `(g, h)`.
pub fn subspace_povm(g: &StateVector, h: &StateVector, omega1: f64) -> Result<MeasurementTriple> {
    let w = check_omega1(omega1)?;
    let (gp, hp) = reciprocal_pair(g, h)?;
    let space = g.space();
    let pi1 = gp.projector().scaled(pi1_weight(w));
    let pi2 = hp.projector().scaled(pi2_weight(w));
    // g⊥ ⟂ h, so {g⊥, h} is an orthonormal basis of the block.
    let support = gp.projector().add(&h.projector())?;
    let pi0 = support.sub(&pi1)?.sub(&pi2)?;
    debug_assert_eq!(pi0.space(), space);
    Ok(MeasurementTriple { pi1, pi2, pi0, support, omega1: w })
}

/// Reciprocal vectors of every Jordan pair, stacked as matrix columns.
#[derive(Debug, Clone)]
pub struct ReciprocalBasis {
    pub n: usize,
    /// Columns `g⊥ᵢ`
    pub g_perp: CMatrix,
    /// Columns `h⊥ᵢ`
    pub h_perp: CMatrix,
}

impl ReciprocalBasis {
    pub fn new(n: usize) -> Result<Self> {
        Self::from_pair_set(&jordan::build_gh_bases(n)?)
    }

    pub fn from_pair_set(set: &JordanPairSet) -> Result<Self> {
        let dim = set.space().dim();
        let mut g_perp = CMatrix::zeros(dim, set.len());
        let mut h_perp = CMatrix::zeros(dim, set.len());
        for (c, (g, h)) in set.g.iter().zip(&set.h).enumerate() {
            let (gp, hp) = reciprocal_pair(g, h)?;
            g_perp.set_column(c, gp.amplitudes());
            h_perp.set_column(c, hp.amplitudes());
        }
        Ok(Self { n: set.n, g_perp, h_perp })
    }

    pub fn space(&self) -> SpaceSpec {
        SpaceSpec::new(self.n, 3).expect("validated n")
    }

    /// `(Σᵢ|⟨g⊥ᵢ|Ψ⟩|², Σᵢ|⟨h⊥ᵢ|Ψ⟩|²)`
    pub fn weights(&self, state: &StateVector) -> Result<(f64, f64)> {
        if state.space() != self.space() {
            return Err(Error::contract("state does not live on the three-register space"));
        }
        let g = (self.g_perp.adjoint() * state.amplitudes()).norm_squared();
        let h = (self.h_perp.adjoint() * state.amplitudes()).norm_squared();
        Ok((g, h))
    }

    /// Full-space POVM for a given `ω₁`.
    pub fn povm(&self, omega1: f64) -> Result<MeasurementTriple> {
        let w = check_omega1(omega1)?;
        let space = self.space();
        let pi1 = &self.g_perp * self.g_perp.adjoint() * re(pi1_weight(w));
        let pi2 = &self.h_perp * self.h_perp.adjoint() * re(pi2_weight(w));
        let support = Operator::identity(space);
        let pi0 = support.matrix() - &pi1 - &pi2;
        Ok(MeasurementTriple {
            pi1: Operator::new(space, pi1)?,
            pi2: Operator::new(space, pi2)?,
            pi0: Operator::new(space, pi0)?,
            support,
            omega1: w,
        })
    }
}

/// Full POVM on `⊗³ℋ`: `Π₁ = sin²ω₁ Σ|g⊥ᵢ⟩⟨g⊥ᵢ|`, `Π₂ = 4cos²ω₁/(1+3cos²ω₁) Σ|h⊥ᵢ⟩⟨h⊥ᵢ|`,
/// `Π₀ = I − Π₁ − Π₂`.
pub fn total_povm(n: usize, omega1: f64) -> Result<MeasurementTriple> {
    check_omega1(omega1)?;
    ReciprocalBasis::new(n)?.povm(omega1)
}

/// `Pⁱ(x) = 1 − η₁x/4 − η₂/x` for `x ∈ [1, 4]`.
pub fn success_curve_x(x: f64, priors: Priors) -> Result<f64> {
    check_x(x)?;
    checked_probability(1.0 - priors.eta1 * x / 4.0 - priors.eta2 / x)
}

/// Per-block success as a function of the angle:
/// `(3/4)η₁sin²ω₁ + 3η₂cos²ω₁/(1+3cos²ω₁)`.
pub fn subspace_success(omega1: f64, priors: Priors) -> Result<f64> {
    let w = check_omega1(omega1)?;
    let c2 = w.cos().powi(2);
    checked_probability(0.75 * priors.eta1 * w.sin().powi(2) + 3.0 * priors.eta2 * c2 / (1.0 + 3.0 * c2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `η₁ < 1/5`: optimum at `x = 4` (`ω₁ = 0`).
    Low,
    /// `1/5 ≤ η₁ ≤ 4/5`: interior optimum `x₀ = 2√(η₂/η₁)`.
    Middle,
    /// `η₁ > 4/5`: optimum at `x = 1` (`ω₁ = π/2`).
    High,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Regime::Low => "low",
            Regime::Middle => "middle",
            Regime::High => "high",
        })
    }
}

/// Optimum over the ω₁-family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeResult {
    pub value: f64,
    pub regime: Regime,
    pub x_star: f64,
    pub omega1_star: f64,
}

/// Regime and optimizer `x*` for the given priors.
pub fn optimal_x(priors: Priors) -> Result<(Regime, f64)> {
    priors.require_nondegenerate()?;
    Ok(if priors.eta1 < 0.2 {
        (Regime::Low, 4.0)
    } else if priors.eta1 > 0.8 {
        (Regime::High, 1.0)
    } else {
        (Regime::Middle, (2.0 * (priors.eta2 / priors.eta1).sqrt()).clamp(1.0, 4.0))
    })
}

fn regime_result(priors: Priors, value: impl Fn(Regime) -> f64) -> Result<RegimeResult> {
    let (regime, x_star) = optimal_x(priors)?;
    Ok(RegimeResult { value: checked_probability(value(regime))?, regime, x_star, omega1_star: omega1_from_x(x_star)? })
}

/// Best per-block success: `(3/4)η₂`, `1 − √(η₁η₂)` or `(3/4)η₁`.
pub fn optimal_subspace(priors: Priors) -> Result<RegimeResult> {
    regime_result(priors, |r| match r {
        Regime::Low => 0.75 * priors.eta2,
        Regime::Middle => 1.0 - (priors.eta1 * priors.eta2).sqrt(),
        Regime::High => 0.75 * priors.eta1,
    })
}

/// `P̃(ω₁) = (n−1)η₁sin²ω₁/(2n) + 2(n−1)η₂cos²ω₁/(n(1+3cos²ω₁))`
pub fn average_success(n: usize, omega1: f64, priors: Priors) -> Result<f64> {
    require_n(n)?;
    let w = check_omega1(omega1)?;
    let nf = n as f64;
    let c2 = w.cos().powi(2);
    checked_probability(
        (nf - 1.0) * priors.eta1 * w.sin().powi(2) / (2.0 * nf)
            + 2.0 * (nf - 1.0) * priors.eta2 * c2 / (nf * (1.0 + 3.0 * c2)),
    )
}

/// `η₁Tr(Π₁ρ₁) + η₂Tr(Π₂ρ₂)` evaluated on explicit operators.
pub fn success_from_operators(
    povm: &MeasurementTriple,
    rho1: &Operator,
    rho2: &Operator,
    priors: Priors,
) -> Result<f64> {
    checked_probability(priors.eta1 * povm.pi1.trace_product(rho1)? + priors.eta2 * povm.pi2.trace_product(rho2)?)
}

/// Best averaged success: `(n−1)η₂/(2n)`, `2(n−1)(1 − √(η₁η₂))/(3n)` or `(n−1)η₁/(2n)`.
pub fn optimal_average(n: usize, priors: Priors) -> Result<RegimeResult> {
    require_n(n)?;
    let nf = n as f64;
    regime_result(priors, |r| match r {
        Regime::Low => (nf - 1.0) * priors.eta2 / (2.0 * nf),
        Regime::Middle => 2.0 * (nf - 1.0) * (1.0 - (priors.eta1 * priors.eta2).sqrt()) / (3.0 * nf),
        Regime::High => (nf - 1.0) * priors.eta1 / (2.0 * nf),
    })
}

fn require_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::domain(format!("qudit dimension must be at least 2, got {n}")))
    } else {
        Ok(())
    }
}

fn require_single_qudit(psi: &StateVector, n: usize) -> Result<()> {
    let s = psi.space();
    if s.factors() != 1 || s.n() != n {
        return Err(Error::contract(format!(
            "expected a single qudit of dimension {n}, got {} factor(s) of dimension {}",
            s.factors(),
            s.n()
        )));
    }
    Ok(())
}

/// Program/data inputs `Ψ₁ = ψ₁⊗ψ₁⊗ψ₂` and `Ψ₂ = ψ₁⊗ψ₂⊗ψ₂`.
pub fn program_inputs(psi1: &StateVector, psi2: &StateVector) -> Result<(StateVector, StateVector)> {
    let big1 = psi1.tensor(psi1)?.tensor(psi2)?;
    let big2 = psi1.tensor(psi2)?.tensor(psi2)?;
    Ok((big1, big2))
}

/// Closed-form success for pure inputs:
/// `[½η₁sin²ω₁ + 2η₂cos²ω₁/(1+3cos²ω₁)]·(1 − |⟨ψ₁|ψ₂⟩|²)`.
pub fn pure_success(psi1: &StateVector, psi2: &StateVector, omega1: f64, priors: Priors, n: usize) -> Result<f64> {
    require_n(n)?;
    require_single_qudit(psi1, n)?;
    require_single_qudit(psi2, n)?;
    let w = check_omega1(omega1)?;
    let overlap_sq = psi1.inner(psi2)?.norm_sqr().min(1.0);
    let c2 = w.cos().powi(2);
    checked_probability(
        (0.5 * priors.eta1 * w.sin().powi(2) + 2.0 * priors.eta2 * c2 / (1.0 + 3.0 * c2)) * (1.0 - overlap_sq),
    )
}

/// `η₁⟨Ψ₁|Π₁|Ψ₁⟩ + η₂⟨Ψ₂|Π₂|Ψ₂⟩` evaluated on explicit operators.
pub fn pure_success_from_operators(
    povm: &MeasurementTriple,
    psi1: &StateVector,
    psi2: &StateVector,
    priors: Priors,
) -> Result<f64> {
    let (big1, big2) = program_inputs(psi1, psi2)?;
    checked_probability(priors.eta1 * povm.pi1.expectation(&big1)? + priors.eta2 * povm.pi2.expectation(&big2)?)
}

/// Best pure-state success; depends only on the priors and `|⟨ψ₁|ψ₂⟩|²`.
pub fn optimal_pure(overlap_sq: f64, priors: Priors) -> Result<RegimeResult> {
    if !(0.0..=1.0).contains(&overlap_sq) {
        return Err(Error::domain(format!("overlap_sq = {overlap_sq} outside [0, 1]")));
    }
    let f = 1.0 - overlap_sq;
    regime_result(priors, |r| match r {
        Regime::Low => 0.5 * priors.eta2 * f,
        Regime::Middle => 2.0 / 3.0 * (1.0 - (priors.eta1 * priors.eta2).sqrt()) * f,
        Regime::High => 0.5 * priors.eta1 * f,
    })
}
