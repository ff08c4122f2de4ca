//! Single-photon click sampling.
//!
//! Shot `k` draws from its own ChaCha8 stream (`seed`, stream `k`), so counts
//! do not depend on how rayon splits the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Interferometer;
use crate::error::{Error, Result};
use crate::spaces::StateVector;

/// Per-output-mode click counts from a seeded run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClickStats {
    pub shots: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
}

impl ClickStats {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.shots as f64).collect()
    }

    /// `½ Σ |fₖ − pₖ|`
    pub fn total_variation(&self, exact: &[f64]) -> f64 {
        0.5 * self.frequencies().iter().zip(exact).map(|(f, p)| (f - p).abs()).sum::<f64>()
    }

    /// Binomial standard deviation of a frequency with success probability `p`.
    pub fn sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.shots as f64).sqrt()
    }
}

/// Random generator for sub-stream `stream` of `seed`.
pub(crate) fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Index of the first cumulative weight exceeding `u`; rounding slack lands on the last nonzero entry.
pub(crate) fn sample_index(cumulative: &[f64], u: f64) -> usize {
    let target = u * cumulative.last().copied().unwrap_or(0.0);
    cumulative.iter().position(|&c| target < c).unwrap_or_else(|| {
        let total = *cumulative.last().unwrap();
        cumulative.iter().position(|&c| c >= total).unwrap_or(cumulative.len() - 1)
    })
}

pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    probs
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p.max(0.0);
            Some(*acc)
        })
        .collect()
}

/// Sends `shots` single photons prepared in `input` through `net` and counts
/// detector clicks per output mode.
pub fn simulate_clicks(net: &Interferometer, input: &StateVector, shots: u64, seed: u64) -> Result<ClickStats> {
    if shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    let space = input.space();
    if space.factors() != 1 || space.n() != net.num_modes() {
        return Err(Error::contract(format!(
            "input of dimension {} for a {}-mode network",
            space.dim(),
            net.num_modes()
        )));
    }
    let cum = cumulative(&net.output_probabilities(input.amplitudes())?);
    let modes = net.num_modes();
    let counts = (0..shots)
        .into_par_iter()
        .fold(
            || vec![0u64; modes],
            |mut acc, shot| {
                let u: f64 = substream(seed, shot).random();
                acc[sample_index(&cum, u)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; modes],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ClickStats { shots, seed, counts })
}
