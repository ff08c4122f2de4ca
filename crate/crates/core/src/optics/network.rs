//! Six-port network distinguishing the two states of one Jordan block.
//!
//! Inputs are ordered `(g⊥, h, vacuum)` and outputs `(D1, D2, F)`. The network
//! is two cascaded beam splitters: `ω₁` mixes the `g⊥` port with the vacuum
//! port, then `ω₂` mixes the `h` port with that output. Its columns are
//!
//! ```text
//! U₃ e_g⊥ = (−sin ω₁, cos ω₁ cos ω₂, cos ω₁ sin ω₂)
//! U₃ e_h  = (0,       −sin ω₂,       cos ω₂)
//! ```
//!
//! `D2` stays dark for `g = (√3/2) g⊥ − ½ h` only if `sin ω₂ = −√3 cos ω₁ cos ω₂`,
//! so the network uses the negative root `ω₂ = −arccos(1/√(1+3cos²ω₁))`.

use nalgebra::{Matrix3, Matrix3x2, Vector3};

use super::{Interferometer, TwoModeLayer};
use crate::error::Result;
use crate::linalg::{re, CMatrix, CVector, C64};
use crate::povm::{check_omega1, omega2_constraint};

pub const G_PERP_PORT: usize = 0;
pub const H_PORT: usize = 1;
pub const VACUUM_PORT: usize = 2;

pub const D1_OUTPUT: usize = 0;
pub const D2_OUTPUT: usize = 1;
pub const FAIL_OUTPUT: usize = 2;

#[derive(Debug, Clone)]
pub struct DiscriminatorNetwork {
    pub omega1: f64,
    /// Signed second angle used in the column formulas (always `≤ 0`).
    pub omega2: f64,
    pub interferometer: Interferometer,
}

/// Builds the discriminator for a given `ω₁ ∈ [0, π/2]`.
pub fn discriminator_network(omega1: f64) -> Result<DiscriminatorNetwork> {
    let w1 = check_omega1(omega1)?;
    let w2 = -omega2_constraint(w1)?;
    let mut net = Interferometer::new(3)?;
    // U₂(−ω) = [[−sin ω, cos ω], [cos ω, sin ω]]
    net.push(TwoModeLayer::new(G_PERP_PORT, VACUUM_PORT, -w1, 0.0, 0.0)?)?;
    net.push(TwoModeLayer::new(H_PORT, VACUUM_PORT, -w2, 0.0, 0.0)?)?;
    Ok(DiscriminatorNetwork { omega1: w1, omega2: w2, interferometer: net })
}

impl DiscriminatorNetwork {
    pub fn unitary(&self) -> CMatrix {
        self.interferometer.unitary()
    }

    /// `U₃` from the closed-form column actions (vacuum column completed by the cross product).
    pub fn reference_unitary(&self) -> Matrix3<f64> {
        let (s1, c1) = self.omega1.sin_cos();
        let (s2, c2) = self.omega2.sin_cos();
        let col_g = Vector3::new(-s1, c1 * c2, c1 * s2);
        let col_h = Vector3::new(0.0, -s2, c2);
        Matrix3::from_columns(&[col_g, col_h, col_g.cross(&col_h)])
    }

    /// `|g⟩ = (√3/2)|g⊥⟩ − ½|h⟩` on the input ports.
    pub fn input_g() -> CVector {
        CVector::from_vec(vec![re(3f64.sqrt() / 2.0), re(-0.5), re(0.0)])
    }

    /// `|h⟩` on the input ports.
    pub fn input_h() -> CVector {
        CVector::from_vec(vec![re(0.0), re(1.0), re(0.0)])
    }

    /// Born probabilities `(D1, D2, F)` for an input given on the three ports.
    pub fn probabilities(&self, input: &CVector) -> Result<[f64; 3]> {
        let p = self.interferometer.output_probabilities(input)?;
        Ok([p[D1_OUTPUT], p[D2_OUTPUT], p[FAIL_OUTPUT]])
    }

    /// Detection operators induced on the block, in the orthonormal basis `(g⊥, h)`:
    /// `Πₖ = V†|k⟩⟨k|V` with `V` the isometry into the first two input ports.
    pub fn block_operators(&self) -> [nalgebra::Matrix2<C64>; 3] {
        let u = self.unitary();
        let v = Matrix3x2::from_fn(|r, c| u[(r, c)]);
        [D1_OUTPUT, D2_OUTPUT, FAIL_OUTPUT].map(|k| {
            let row = v.row(k);
            row.adjoint() * row
        })
    }
}
