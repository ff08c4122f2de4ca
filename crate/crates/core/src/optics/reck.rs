//! Triangular (Reck-style) synthesis of arbitrary unitaries and of
//! single-photon state preparation networks.
//!
//! Entries below the diagonal are nulled column by column, bottom-up, by
//! row operations on adjacent modes `(k−1, k)`. Each row operation
//! `G = R(ω)·diag(e^{−iφ}, e^{−iθ})` first removes the phases of the two
//! entries and then rotates the weight into row `k−1`. Its inverse is exactly
//! `U₂(ω, φ, θ)`, so `U = L₁ ⋯ L_m · Δ` with `Δ` the leftover diagonal.
//!
//! Because each `U₂` carries its phases behind the splitter, the leftover
//! diagonal sits on the input side; [`super::Interferometer`] applies its
//! phase layer before the first two-mode layer.

use super::{Interferometer, TwoModeLayer};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Entries smaller than this are treated as already nulled.
const NULL_TOL: f64 = 1e-15;

/// Unitarity tolerance accepted by [`reck_decompose`].
pub const UNITARY_INPUT_TOL: f64 = 1e-8;

struct RowRotation {
    upper: usize,
    omega: f64,
    phi: f64,
    theta: f64,
}

impl RowRotation {
    /// Rotation on rows `(k−1, k)` nulling the lower entry `y` against the upper `x`.
    fn nulling(upper: usize, x: C64, y: C64) -> Self {
        Self { upper, omega: x.norm().atan2(y.norm()), phi: x.arg(), theta: y.arg() }
    }

    /// Applies `G = R(ω)·diag(e^{−iφ}, e^{−iθ})` to rows `(upper, upper+1)` of `w`.
    fn apply_rows(&self, w: &mut CMatrix) {
        let (s, c) = self.omega.sin_cos();
        let pa = C64::from_polar(1.0, -self.phi);
        let pb = C64::from_polar(1.0, -self.theta);
        let (a, b) = (self.upper, self.upper + 1);
        for col in 0..w.ncols() {
            let x = w[(a, col)] * pa;
            let y = w[(b, col)] * pb;
            w[(a, col)] = x * s + y * c;
            w[(b, col)] = x * c - y * s;
        }
    }

    fn inverse_layer(&self) -> TwoModeLayer {
        TwoModeLayer { mode_a: self.upper, mode_b: self.upper + 1, omega: self.omega, phi: self.phi, theta: self.theta }
    }
}

/// Assembles `U = L₁ ⋯ L_m · Δ` from the nulling sequence `G₁ … G_m`.
fn assemble(num_modes: usize, rotations: &[RowRotation], leftover: &[C64]) -> Result<Interferometer> {
    let mut net = Interferometer::new(num_modes)?;
    // L_m acts first.
    for rot in rotations.iter().rev() {
        net.push(rot.inverse_layer())?;
    }
    for (mode, d) in leftover.iter().enumerate() {
        let chi = if d.norm() > NULL_TOL { d.arg() } else { 0.0 };
        net.set_phase(mode, chi)?;
    }
    Ok(net)
}

/// Decomposes an `N×N` unitary into at most `N(N−1)/2` two-mode layers plus
/// one phase layer.
pub fn reck_decompose(u: &CMatrix) -> Result<Interferometer> {
    if !u.is_square() || u.nrows() == 0 {
        return Err(Error::contract(format!("expected a non-empty square matrix, got {:?}", u.shape())));
    }
    let defect = linalg::unitarity_defect(u);
    if defect > UNITARY_INPUT_TOL {
        return Err(Error::contract(format!("matrix is not unitary (defect {defect:.3e})")));
    }
    let n = u.nrows();
    let mut w = u.clone();
    let mut rotations = Vec::new();
    for col in 0..n.saturating_sub(1) {
        for k in (col + 1..n).rev() {
            let (x, y) = (w[(k - 1, col)], w[(k, col)]);
            if y.norm() <= NULL_TOL {
                continue;
            }
            let rot = RowRotation::nulling(k - 1, x, y);
            rot.apply_rows(&mut w);
            rotations.push(rot);
        }
    }
    let leftover: Vec<C64> = (0..n).map(|i| w[(i, i)]).collect();
    assemble(n, &rotations, &leftover)
}

/// Cascade of adjacent two-mode layers sending a photon in mode 0 to the
/// state `Σ aᵢ|i⟩`. Only the first column of the network is constrained.
pub fn prepare_state_network(amplitudes: &[C64]) -> Result<Interferometer> {
    if amplitudes.is_empty() {
        return Err(Error::contract("no amplitudes given"));
    }
    let v = CVector::from_column_slice(amplitudes);
    let norm = v.norm();
    if (norm - 1.0).abs() > crate::spaces::TAU_NORM {
        return Err(Error::contract(format!("amplitudes have norm {norm}, expected 1")));
    }
    let n = amplitudes.len();
    let mut w = CMatrix::from_column_slice(n, 1, amplitudes);
    let mut rotations = Vec::new();
    for k in (1..n).rev() {
        let (x, y) = (w[(k - 1, 0)], w[(k, 0)]);
        if y.norm() <= NULL_TOL {
            continue;
        }
        let rot = RowRotation::nulling(k - 1, x, y);
        rot.apply_rows(&mut w);
        rotations.push(rot);
    }
    let mut leftover = vec![linalg::ONE; n];
    leftover[0] = w[(0, 0)];
    assemble(n, &rotations, &leftover)
}
