//! Programmable unambiguous discrimination between two unknown qudit states.
//!
//! A data qudit holds either `ψ₁` or `ψ₂`, and two program qudits hold one copy
//! of each. The library builds the symmetric-subspace machinery on `⊗³ℂⁿ`, the
//! Jordan pairs `(gᵢ, hᵢ)` with `⟨gᵢ|hⱼ⟩ = −½δᵢⱼ`, the one-parameter POVM
//! family, its success probabilities and optima, an ideal single-photon
//! interferometer realizing the measurement, and a seeded verification
//! harness.
//!
//! Modules build bottom-up:
//!
//! - [`spaces`]: tensor-product spaces, symmetric projectors, dimension formulas
//! - [`jordan`]: the explicit Jordan bases and the averaged input densities
//! - [`povm`]: detection operators, success probabilities and regime optima
//! - [`optics`]: two-mode layers, the discriminator network, Reck synthesis, click sampling
//! - [`harness`]: Haar sampling, Monte Carlo estimates and `verify_all`
//! - [`cli`]: the `qdisc` command-line front end
//!
//! ```
//! use qudit_discriminator::povm::{optimal_average, Priors, Regime};
//!
//! let best = optimal_average(2, Priors::equal()).unwrap();
//! assert_eq!(best.regime, Regime::Middle);
//! assert!((best.value - 1.0 / 6.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod harness;
pub mod jordan;
pub mod linalg;
pub mod optics;
pub mod povm;
pub mod spaces;

pub use error::{Error, Result};
