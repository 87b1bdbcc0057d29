//! Monte Carlo emulation of the three-detector readout: seeded draws from
//! the outcome distribution, empirical correlators with standard errors, and
//! plug-in entropies of the empirical marginals.

use lgsim_core::ineq::outcome_distribution;
use lgsim_core::{DensityOp, Result};

/// Name of the generator, recorded in output headers so files are
/// reproducible from the seed alone.
pub const RNG_ALGORITHM: &str = "splitmix64";

/// SplitMix64: a 64-bit counter generator (Steele, Lea & Flood 2014).
/// Fixed arithmetic, no platform dependence, one u64 of state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Empirical statistics from `n` seeded draws of the three-bit outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleEstimate {
    pub n: u64,
    pub seed: u64,
    /// Outcome counts indexed `|A1 A2 A3>` lexicographic; sums to `n`.
    pub counts: [u64; 8],
    /// Empirical `(K12, K23, K13)`.
    pub k_hat: [f64; 3],
    /// Binomial standard error `sqrt((1 - K^2) / n)` per correlator.
    pub stderr: [f64; 3],
    /// Plug-in Shannon entropies of the empirical pairwise marginals,
    /// ordered `(A1 A2), (A2 A3), (A1 A3)`.
    pub shannon_pairs: [f64; 3],
    /// Plug-in entropy of the full empirical three-bit distribution.
    pub shannon_triple: f64,
}

/// Draws `n >= 1` outcomes from the diagonal of `rho123` using a
/// deterministic stream seeded with `seed`.
pub fn sample_outcomes(rho123: &DensityOp, n: u64, seed: u64) -> Result<SampleEstimate> {
    assert!(n >= 1, "sample count must be positive");
    let p = outcome_distribution(rho123)?;
    let mut cumulative = [0.0f64; 8];
    let mut acc = 0.0;
    for (slot, &prob) in p.iter().enumerate() {
        acc += prob.max(0.0);
        cumulative[slot] = acc;
    }
    cumulative[7] = f64::INFINITY; // guard against roundoff at the top end

    let mut rng = SplitMix64::new(seed);
    let mut counts = [0u64; 8];
    for _ in 0..n {
        let u = rng.next_f64() * acc;
        let outcome = cumulative.iter().position(|&edge| u < edge).unwrap_or(7);
        counts[outcome] += 1;
    }

    Ok(estimate_from_counts(counts, n, seed))
}

fn estimate_from_counts(counts: [u64; 8], n: u64, seed: u64) -> SampleEstimate {
    let total = n as f64;
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let sign = |bit: usize| 1.0 - 2.0 * bit as f64;

    let mut k_hat = [0.0f64; 3];
    for (idx, f) in freq.iter().enumerate() {
        let (x, y, z) = (idx >> 2 & 1, idx >> 1 & 1, idx & 1);
        k_hat[0] += sign(x) * sign(y) * f;
        k_hat[1] += sign(y) * sign(z) * f;
        k_hat[2] += sign(x) * sign(z) * f;
    }
    let stderr =
        k_hat.map(|k| ((1.0 - k * k).max(0.0) / total).sqrt());

    let mut pair12 = [0.0f64; 4];
    let mut pair23 = [0.0f64; 4];
    let mut pair13 = [0.0f64; 4];
    for (idx, f) in freq.iter().enumerate() {
        let (x, y, z) = (idx >> 2 & 1, idx >> 1 & 1, idx & 1);
        pair12[x * 2 + y] += f;
        pair23[y * 2 + z] += f;
        pair13[x * 2 + z] += f;
    }
    let plug_in = |dist: &[f64]| -> f64 {
        -dist
            .iter()
            .filter(|&&q| q > 0.0)
            .map(|&q| q * q.log2())
            .sum::<f64>()
    };

    SampleEstimate {
        n,
        seed,
        counts,
        k_hat,
        stderr,
        shannon_pairs: [plug_in(&pair12), plug_in(&pair23), plug_in(&pair13)],
        shannon_triple: plug_in(&freq),
    }
}
