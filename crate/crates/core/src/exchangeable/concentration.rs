//! Exchangeable random measures on a grid of `[0, 1]` and their distance to
//! the uniform measure of the same total mass.

use super::ExchError;
use crate::enumeration::sampling::{mix_seed, rng_from_seed};
use crate::ghp::{prokhorov, q_frac, q_to_f64, LinePoints, Q};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random mass vectors on `n` points, as integer weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MassGenerator {
    /// Independent uniform weights in `1..=1000`.
    IidUniform,
    /// All mass on one uniformly chosen point.
    SingleAtom,
    /// Equal weights.
    Uniform,
    /// Weight growing with the index; not exchangeable.
    Increasing,
}

impl MassGenerator {
    pub fn name(self) -> &'static str {
        match self {
            MassGenerator::IidUniform => "iid-uniform",
            MassGenerator::SingleAtom => "single-atom",
            MassGenerator::Uniform => "uniform",
            MassGenerator::Increasing => "increasing",
        }
    }

    pub fn sample<R: Rng>(self, n: usize, rng: &mut R) -> Vec<u64> {
        match self {
            MassGenerator::IidUniform => (0..n).map(|_| rng.gen_range(1..=1000)).collect(),
            MassGenerator::SingleAtom => {
                let mut w = vec![0; n];
                w[rng.gen_range(0..n)] = 1;
                w
            }
            MassGenerator::Uniform => vec![1; n],
            MassGenerator::Increasing => (0..n).map(|i| (i as u64 + 1) * rng.gen_range(1..=10)).collect(),
        }
    }
}

fn trend(w: &[u64]) -> f64 {
    let n = w.len() as f64;
    let total: u64 = w.iter().sum();
    w.iter().enumerate().map(|(i, &x)| (i as f64 - (n - 1.0) / 2.0) * x as f64).sum::<f64>() / total as f64
}

/// Two-sided permutation test of exchangeability with a linear-trend
/// statistic: each sample's coordinates are shuffled independently to build
/// the null distribution. Returns the p-value.
pub fn permutation_trend_test<R: Rng>(samples: &[Vec<u64>], perms: usize, rng: &mut R) -> f64 {
    let obs: f64 = samples.iter().map(|w| trend(w)).sum::<f64>().abs();
    let mut hits = 0;
    let mut buf = Vec::new();
    for _ in 0..perms {
        let t: f64 = samples
            .iter()
            .map(|w| {
                buf.clone_from(w);
                buf.shuffle(rng);
                trend(&buf)
            })
            .sum();
        // tolerance for ties in exactly symmetric samples
        hits += (t.abs() >= obs - 1e-12 * (1.0 + obs)) as usize;
    }
    (1 + hits) as f64 / (1 + perms) as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationRow {
    pub n: usize,
    pub replicas: usize,
    pub mean_upper: f64,
    pub mean_lower: f64,
    pub mean_max_mass: f64,
    /// `P(δ_P ≥ 2ε)` estimated from certified lower ends (a lower estimate).
    pub freq_lower_ge_2eps: f64,
    /// The same from certified upper ends (an upper estimate).
    pub freq_upper_ge_2eps: f64,
    /// `K_ε (ε/K_ε)^{-2} E[max ν]` with the empirical mean of the max.
    pub chain_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationReport {
    pub generator: MassGenerator,
    pub epsilon: f64,
    /// Cells of `[0, 1]` of length `1/K_ε < ε`.
    pub k_eps: usize,
    pub p_value: f64,
    pub rows: Vec<ConcentrationRow>,
}

impl ConcentrationReport {
    /// Ratio of the mean upper bound at the smallest size to that at the largest.
    pub fn decrease_factor(&self) -> f64 {
        let (a, b) = (self.rows.first().unwrap(), self.rows.last().unwrap());
        a.mean_upper / b.mean_upper
    }
}

/// Exchangeability test sample size and permutation count.
const TEST_SAMPLES: usize = 60;
const TEST_PERMS: usize = 199;
pub const REJECT_LEVEL: f64 = 0.01;

/// Masses `ν = w/|w|` on the grid `{i/n}` against `Unif` on the same grid,
/// along a ladder of sizes; the Prokhorov distance is certified by
/// [`prokhorov`]. Generators failing the exchangeability test are rejected.
pub fn measure_concentration_check(
    generator: MassGenerator,
    ladder: &[usize],
    replicas: usize,
    epsilon: f64,
    seed: u64,
) -> Result<ConcentrationReport, ExchError> {
    let mut rng = rng_from_seed(mix_seed(seed, u64::MAX));
    let n0 = ladder.first().copied().unwrap_or(1).clamp(2, 200);
    let samples: Vec<Vec<u64>> = (0..TEST_SAMPLES).map(|_| generator.sample(n0, &mut rng)).collect();
    let p_value = permutation_trend_test(&samples, TEST_PERMS, &mut rng);
    if p_value < REJECT_LEVEL {
        return Err(ExchError::NotExchangeable(p_value));
    }
    let k_eps = (1.0 / epsilon).floor() as usize + 1;
    let mut rows = Vec::new();
    for (li, &n) in ladder.iter().enumerate() {
        let pts = LinePoints { pos: (0..n).map(|i| q_frac(i as i64, n as i64)).collect() };
        let unif: Vec<Q> = vec![q_frac(1, n as i64); n];
        let (mut up, mut lo, mut mx, mut hit_lo, mut hit_up) = (0.0, 0.0, 0.0, 0usize, 0usize);
        for r in 0..replicas {
            let mut rng = rng_from_seed(mix_seed(seed, (li * 1_000_003 + r) as u64));
            let w = generator.sample(n, &mut rng);
            let total: u64 = w.iter().sum();
            let nu: Vec<Q> = w.iter().map(|&x| q_frac(x as i64, total as i64)).collect();
            let b = prokhorov(&pts, &nu, &unif).expect("valid input");
            let (l, u) = (q_to_f64(&b.lower), q_to_f64(&b.upper));
            up += u;
            lo += l;
            mx += *w.iter().max().unwrap() as f64 / total as f64;
            hit_lo += (l >= 2.0 * epsilon) as usize;
            hit_up += (u >= 2.0 * epsilon) as usize;
        }
        let k = replicas as f64;
        let kf = k_eps as f64;
        rows.push(ConcentrationRow {
            n,
            replicas,
            mean_upper: up / k,
            mean_lower: lo / k,
            mean_max_mass: mx / k,
            freq_lower_ge_2eps: hit_lo as f64 / k,
            freq_upper_ge_2eps: hit_up as f64 / k,
            chain_bound: kf * (epsilon / kf).powi(-2) * mx / k,
        });
    }
    Ok(ConcentrationReport { generator, epsilon, k_eps, p_value, rows })
}
