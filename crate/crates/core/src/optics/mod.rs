//! Idealized single-photon linear optics.
//!
//! A photon in mode `k` of an `N`-mode network is the basis vector `e_k`; a
//! lossless network acts on it by an `N×N` unitary. Every network here is an
//! ordered list of [`TwoModeLayer`]s plus one per-mode phase layer. The phase
//! layer sits on the input ports, so light meets it before `L₁`:
//!
//! ```text
//! U = L_K ⋯ L₂ · L₁ · diag(e^{iχ₀}, …, e^{iχ_{N−1}})
//! ```
//!
//! where each `L` embeds
//!
//! ```text
//! U₂(ω, φ, θ) = [[sin ω e^{iφ},  cos ω e^{iφ}],
//!                [cos ω e^{iθ}, −sin ω e^{iθ}]]
//! ```
//!
//! on its mode pair. Mode indices are 0-based in the API and 1-based in the
//! text format (see [`Interferometer::to_text`]).

mod clicks;
mod network;
mod reck;
mod text;

pub(crate) use clicks::substream;
pub use clicks::{simulate_clicks, ClickStats};
pub use network::{
    discriminator_network, DiscriminatorNetwork, D1_OUTPUT, D2_OUTPUT, FAIL_OUTPUT, G_PERP_PORT, H_PORT, VACUUM_PORT,
};
pub use reck::{prepare_state_network, reck_decompose};

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};

/// `U₂(ω, φ, θ)`, the general four-port element.
pub fn two_mode_unitary(omega: f64, phi: f64, theta: f64) -> Matrix2<C64> {
    let (s, c) = omega.sin_cos();
    let p = C64::from_polar(1.0, phi);
    let t = C64::from_polar(1.0, theta);
    Matrix2::new(p * s, p * c, t * c, -t * s)
}

/// Real beam splitter `[[sin ω, cos ω], [cos ω, −sin ω]]`; transmittance `√t = sin ω`.
pub fn beamsplitter(omega: f64) -> Matrix2<f64> {
    let (s, c) = omega.sin_cos();
    Matrix2::new(s, c, c, -s)
}

/// One four-port element acting on `(mode_a, mode_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeLayer {
    pub mode_a: usize,
    pub mode_b: usize,
    pub omega: f64,
    pub phi: f64,
    pub theta: f64,
}

impl TwoModeLayer {
    pub fn new(mode_a: usize, mode_b: usize, omega: f64, phi: f64, theta: f64) -> Result<Self> {
        if mode_a == mode_b {
            return Err(Error::domain(format!("layer acts on mode {mode_a} twice")));
        }
        Ok(Self { mode_a, mode_b, omega, phi, theta })
    }

    pub fn block(&self) -> Matrix2<C64> {
        two_mode_unitary(self.omega, self.phi, self.theta)
    }

    /// `N×N` embedding, identity outside the mode pair.
    pub fn embed(&self, num_modes: usize) -> CMatrix {
        let mut m = CMatrix::identity(num_modes, num_modes);
        let b = self.block();
        let (a, c) = (self.mode_a, self.mode_b);
        m[(a, a)] = b[(0, 0)];
        m[(a, c)] = b[(0, 1)];
        m[(c, a)] = b[(1, 0)];
        m[(c, c)] = b[(1, 1)];
        m
    }

    /// Applies the layer to a mode-amplitude vector in place.
    pub fn apply(&self, amps: &mut CVector) {
        let b = self.block();
        let (x, y) = (amps[self.mode_a], amps[self.mode_b]);
        amps[self.mode_a] = b[(0, 0)] * x + b[(0, 1)] * y;
        amps[self.mode_b] = b[(1, 0)] * x + b[(1, 1)] * y;
    }
}

/// Ordered two-mode layers plus an input-side per-mode phase layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferometer {
    num_modes: usize,
    layers: Vec<TwoModeLayer>,
    phases: Vec<f64>,
}

impl Interferometer {
    /// The identity network on `num_modes` modes.
    pub fn new(num_modes: usize) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::domain("an interferometer needs at least one mode"));
        }
        Ok(Self { num_modes, layers: Vec::new(), phases: vec![0.0; num_modes] })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn layers(&self) -> &[TwoModeLayer] {
        &self.layers
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn push(&mut self, layer: TwoModeLayer) -> Result<()> {
        if layer.mode_a >= self.num_modes || layer.mode_b >= self.num_modes || layer.mode_a == layer.mode_b {
            return Err(Error::domain(format!(
                "layer on modes ({}, {}) in a {}-mode network",
                layer.mode_a, layer.mode_b, self.num_modes
            )));
        }
        self.layers.push(layer);
        Ok(())
    }

    pub fn set_phase(&mut self, mode: usize, angle: f64) -> Result<()> {
        let slot = self
            .phases
            .get_mut(mode)
            .ok_or_else(|| Error::domain(format!("phase on mode {mode} in a {}-mode network", self.num_modes)))?;
        *slot = angle;
        Ok(())
    }

    /// Composed unitary `L_K ⋯ L₁ · D`.
    pub fn unitary(&self) -> CMatrix {
        let mut u = CMatrix::from_diagonal(&CVector::from_iterator(
            self.num_modes,
            self.phases.iter().map(|&chi| C64::from_polar(1.0, chi)),
        ));
        for layer in &self.layers {
            u = layer.embed(self.num_modes) * u;
        }
        u
    }

    /// Output mode amplitudes for the given input amplitudes.
    pub fn apply(&self, input: &CVector) -> Result<CVector> {
        if input.len() != self.num_modes {
            return Err(Error::contract(format!(
                "{} input amplitudes for a {}-mode network",
                input.len(),
                self.num_modes
            )));
        }
        let mut v = input.clone();
        for (x, &chi) in v.iter_mut().zip(&self.phases) {
            *x *= C64::from_polar(1.0, chi);
        }
        for layer in &self.layers {
            layer.apply(&mut v);
        }
        Ok(v)
    }

    /// Born probabilities of finding the photon in each output mode.
    pub fn output_probabilities(&self, input: &CVector) -> Result<Vec<f64>> {
        Ok(self.apply(input)?.iter().map(|a| a.norm_sqr()).collect())
    }

    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.unitary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    const EPS: f64 = 1e-12;

    fn real(m: &Matrix2<f64>) -> Matrix2<C64> {
        m.map(re)
    }

    fn close2(a: &Matrix2<C64>, b: [[f64; 2]; 2]) -> bool {
        (0..2).all(|r| (0..2).all(|c| (a[(r, c)] - re(b[r][c])).norm() < EPS))
    }

    #[test]
    fn two_mode_examples() {
        assert!(close2(&two_mode_unitary(FRAC_PI_2, 0.0, 0.0), [[1.0, 0.0], [0.0, -1.0]]));
        assert!(close2(&two_mode_unitary(0.0, 0.0, 0.0), [[0.0, 1.0], [1.0, 0.0]]));
        for (w, p, t) in [(0.3, 1.1, -2.0), (1.2, 0.0, 3.0), (-0.7, 2.5, 0.4)] {
            let u = two_mode_unitary(w, p, t);
            let d = u.adjoint() * u - Matrix2::identity();
            assert!(d.iter().all(|x| x.norm() < EPS));
        }
    }

    #[test]
    fn beamsplitter_examples() {
        let b = beamsplitter(FRAC_PI_4);
        assert!(b.iter().all(|x| (x.abs() - FRAC_1_SQRT_2).abs() < EPS));
        let b = beamsplitter(FRAC_PI_2);
        assert!((b - Matrix2::new(1.0, 0.0, 0.0, -1.0)).amax() < EPS);
        for w in [0.0, 0.4, 1.3, 2.9] {
            let b = beamsplitter(w);
            assert!((b - b.transpose()).amax() < EPS);
            assert!((b.transpose() * b - Matrix2::identity()).amax() < EPS);
            assert!((b.determinant() + 1.0).abs() < EPS);
            let u = two_mode_unitary(w, 0.0, 0.0);
            assert!((u - real(&b)).iter().all(|x| x.norm() < EPS));
        }
    }

    #[test]
    fn layer_rejects_same_mode() {
        assert!(TwoModeLayer::new(1, 1, 0.0, 0.0, 0.0).is_err());
        let mut net = Interferometer::new(2).unwrap();
        assert!(net.push(TwoModeLayer { mode_a: 0, mode_b: 2, omega: 0.0, phi: 0.0, theta: 0.0 }).is_err());
        assert!(net.set_phase(2, 0.1).is_err());
    }

    #[test]
    fn apply_matches_unitary() {
        let mut net = Interferometer::new(3).unwrap();
        net.push(TwoModeLayer::new(0, 2, 0.4, 0.1, -0.3).unwrap()).unwrap();
        net.push(TwoModeLayer::new(1, 2, 1.1, 0.7, 0.2).unwrap()).unwrap();
        net.set_phase(1, 0.9).unwrap();
        let u = net.unitary();
        assert!(linalg::unitarity_defect(&u) < EPS);
        let v = CVector::from_vec(vec![C64::new(0.2, 0.1), re(-0.5), C64::new(0.0, 0.3)]);
        assert!((net.apply(&v).unwrap() - &u * &v).norm() < EPS);
        assert!(net.apply(&CVector::zeros(2)).is_err());
    }
}
