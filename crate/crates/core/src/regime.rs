//! Ensemble estimates for empty and parallel hyperedges, their asymptotic
//! limits, and the density thresholds separating the sparse regimes.
//!
//! A hyperedge is empty when its column is all zeros; two hyperedges are
//! parallel when their columns are identical, i.e. their Hamming distance
//! vanishes. The homogeneous model admits closed forms for all of these;
//! heterogeneous models need per-column products and pairwise sums, which
//! are computed exactly up to a configurable number of hyperedges and
//! estimated on a seeded pair subsample beyond it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::incidence::IncidenceMatrix;
use crate::models::{ModelKind, ModelSolution};
use crate::rng::{derive_seed, sample_rng};
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// Controls for the pairwise (parallel-hyperedge) statistics.
#[derive(Debug, Clone)]
pub struct RegimeOptions {
    /// Largest hyperedge count for which all pairs are enumerated.
    pub exact_pair_limit: usize,
    /// Number of pairs drawn when the exact enumeration is skipped.
    pub subsample_pairs: usize,
    /// Seed for the pair subsample.
    pub seed: u64,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        RegimeOptions {
            exact_pair_limit: 2000,
            subsample_pairs: 100_000,
            seed: 0,
        }
    }
}

/// Ensemble estimates of empty- and parallel-hyperedge abundance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeReport<F> {
    /// Probability that each hyperedge is empty.
    pub empty_probabilities: Vec<F>,
    /// Probability of observing at least one empty hyperedge.
    pub any_empty_probability: F,
    /// Expected number of empty hyperedges.
    pub expected_empty_count: F,
    /// Average single-hyperedge empty probability.
    pub mean_empty_probability: F,
    /// Average over hyperedge pairs of the probability of being parallel;
    /// absent when there are fewer than two hyperedges.
    pub mean_parallel_probability: Option<F>,
    /// Average over hyperedge pairs of the expected Hamming distance.
    pub mean_hamming_distance: Option<F>,
    /// Whether the pairwise averages come from a random pair subsample.
    pub pairs_subsampled: bool,
    /// Standard error of the subsampled parallel probability.
    pub parallel_probability_se: Option<F>,
    /// Standard error of the subsampled Hamming distance.
    pub hamming_distance_se: Option<F>,
}

/// Probability that hyperedge `alpha` is empty under the model.
pub fn empty_probability<F: Real>(model: &ModelSolution<F>, alpha: usize) -> F {
    let mut product = F::one();
    for i in 0..model.n_nodes {
        product *= F::one() - model.p(i, alpha);
    }
    product
}

/// Probability that hyperedges `a` and `b` are parallel (identical columns).
pub fn parallel_probability<F: Real>(model: &ModelSolution<F>, a: usize, b: usize) -> F {
    let mut product = F::one();
    for i in 0..model.n_nodes {
        product *= F::one() - mismatch_probability(model.p(i, a), model.p(i, b));
    }
    product
}

/// Expected Hamming distance between the columns of hyperedges `a` and `b`.
pub fn expected_hamming<F: Real>(model: &ModelSolution<F>, a: usize, b: usize) -> F {
    let mut sum = F::zero();
    for i in 0..model.n_nodes {
        sum += mismatch_probability(model.p(i, a), model.p(i, b));
    }
    sum
}

/// Probability that row `i` differs between two columns with cell
/// probabilities `pa` and `pb`.
#[inline]
fn mismatch_probability<F: Real>(pa: F, pb: F) -> F {
    pa * (F::one() - pb) + pb * (F::one() - pa)
}

/// Regime report with default pairwise options.
pub fn regime_report<F: Real>(model: &ModelSolution<F>) -> RegimeReport<F> {
    regime_report_with(model, &RegimeOptions::default())
}

/// Regime report with explicit control over the pairwise statistics.
pub fn regime_report_with<F: Real>(
    model: &ModelSolution<F>,
    options: &RegimeOptions,
) -> RegimeReport<F> {
    let l = model.n_hyperedges;
    if model.kind == ModelKind::Rhm {
        return homogeneous_report(model.scalar.unwrap_or_else(F::zero), model.n_nodes, l);
    }

    let one = F::one();
    let empty: Vec<F> = (0..l).map(|alpha| empty_probability(model, alpha)).collect();
    let expected_empty = empty.iter().copied().sum::<F>();
    let none_empty = empty.iter().fold(one, |acc, &p0| acc * (one - p0));
    let mean_empty = if l == 0 {
        F::zero()
    } else {
        expected_empty / real(l as u64)
    };

    let mut report = RegimeReport {
        empty_probabilities: empty,
        any_empty_probability: one - none_empty,
        expected_empty_count: expected_empty,
        mean_empty_probability: mean_empty,
        mean_parallel_probability: None,
        mean_hamming_distance: None,
        pairs_subsampled: false,
        parallel_probability_se: None,
        hamming_distance_se: None,
    };
    if l < 2 {
        return report;
    }

    // Cache the columns once; every pair visit reads two of them.
    let columns: Vec<Vec<F>> = (0..l).map(|alpha| model.column_probabilities(alpha)).collect();
    if l <= options.exact_pair_limit {
        let mut parallel_sum = F::zero();
        let mut hamming_sum = F::zero();
        for a in 0..l {
            for b in (a + 1)..l {
                let (p0, d) = pair_statistics(&columns[a], &columns[b]);
                parallel_sum += p0;
                hamming_sum += d;
            }
        }
        let pairs = real::<F>((l as u64) * (l as u64 - 1) / 2);
        report.mean_parallel_probability = Some(parallel_sum / pairs);
        report.mean_hamming_distance = Some(hamming_sum / pairs);
    } else {
        let mut rng = sample_rng(derive_seed(options.seed, u64::MAX), 0);
        let count = options.subsample_pairs.max(1);
        let mut parallel = Vec::with_capacity(count);
        let mut hamming = Vec::with_capacity(count);
        for _ in 0..count {
            let a = rng.gen_range(0..l);
            let b = loop {
                let b = rng.gen_range(0..l);
                if b != a {
                    break b;
                }
            };
            let (p0, d) = pair_statistics(&columns[a], &columns[b]);
            parallel.push(p0);
            hamming.push(d);
        }
        let (p0_mean, p0_se) = mean_and_se(&parallel);
        let (d_mean, d_se) = mean_and_se(&hamming);
        report.mean_parallel_probability = Some(p0_mean);
        report.mean_hamming_distance = Some(d_mean);
        report.pairs_subsampled = true;
        report.parallel_probability_se = p0_se;
        report.hamming_distance_se = d_se;
    }
    report
}

fn pair_statistics<F: Real>(col_a: &[F], col_b: &[F]) -> (F, F) {
    let one = F::one();
    let mut product = one;
    let mut sum = F::zero();
    for (&pa, &pb) in col_a.iter().zip(col_b) {
        let q = mismatch_probability(pa, pb);
        product *= one - q;
        sum += q;
    }
    (product, sum)
}

fn mean_and_se<F: Real>(values: &[F]) -> (F, Option<F>) {
    let n = real::<F>(values.len() as u64);
    let mean = values.iter().copied().sum::<F>() / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let ss = values
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<F>();
    let se = (ss / (n * (n - F::one()))).sqrt();
    (mean, Some(se))
}

fn homogeneous_report<F: Real>(p: F, n: usize, l: usize) -> RegimeReport<F> {
    let one = F::one();
    let two = one + one;
    let p0 = (one - p).powi(n as i32);
    let p1 = one - (one - p0).powi(l as i32);
    let expected_empty = real::<F>(l as u64) * p0;
    let q = two * p * (one - p);
    let (parallel, hamming) = if l >= 2 {
        (Some((one - q).powi(n as i32)), Some(q * real(n as u64)))
    } else {
        (None, None)
    };
    RegimeReport {
        empty_probabilities: vec![p0; l],
        any_empty_probability: p1,
        expected_empty_count: expected_empty,
        mean_empty_probability: p0,
        mean_parallel_probability: parallel,
        mean_hamming_distance: hamming,
        pairs_subsampled: false,
        parallel_probability_se: None,
        hamming_distance_se: None,
    }
}

/// Large-N limit of the homogeneous report at expected hyperdegree `h`.
///
/// All hyperedges are exchangeable, so the single-hyperedge quantities are
/// scalars: p0 = e^{-h}, expected empty count L·e^{-h} (computed as
/// exp(ln L - h) so it is exactly 1 at h = ln L), pairwise parallel
/// probability e^{-2h} and Hamming distance 2h.
pub fn asymptotic_regime<F: Real>(n_hyperedges: usize, h: F) -> RegimeReport<F> {
    let one = F::one();
    let l = n_hyperedges;
    let p0 = (-h).exp();
    let ln_l = real::<F>(l as u64).ln();
    let expected_empty = (ln_l - h).exp();
    let (parallel, hamming) = if l >= 2 {
        (Some((-(h + h)).exp()), Some(h + h))
    } else {
        (None, None)
    };
    RegimeReport {
        empty_probabilities: vec![p0; l],
        any_empty_probability: one - (one - p0).powi(l as i32),
        expected_empty_count: expected_empty,
        mean_empty_probability: p0,
        mean_parallel_probability: parallel,
        mean_hamming_distance: hamming,
        pairs_subsampled: false,
        parallel_probability_se: None,
        hamming_distance_se: None,
    }
}

/// Large-N limit when each hyperedge keeps its own expected hyperdegree.
///
/// Hyperedge α is empty with probability e^{-h_α}; a pair (α, β) is
/// parallel with probability e^{-(h_α+h_β)} and has expected Hamming
/// distance h_α + h_β. The pairwise averages reduce to closed forms in the
/// per-hyperedge sums, so no pair enumeration is needed.
pub fn asymptotic_regime_hyperdegrees<F: Real>(hyperdegrees: &[F]) -> RegimeReport<F> {
    let one = F::one();
    let l = hyperdegrees.len();
    let empty: Vec<F> = hyperdegrees.iter().map(|&h| (-h).exp()).collect();
    let expected_empty = empty.iter().copied().sum::<F>();
    let none_empty = empty.iter().fold(one, |acc, &p0| acc * (one - p0));
    let mean_empty = if l == 0 {
        F::zero()
    } else {
        expected_empty / real(l as u64)
    };
    let (parallel, hamming) = if l >= 2 {
        let sum: F = expected_empty;
        let sum_sq: F = empty.iter().map(|&a| a * a).sum();
        let pairs = real::<F>((l as u64) * (l as u64 - 1) / 2);
        let h_sum: F = hyperdegrees.iter().copied().sum();
        let two = one + one;
        (
            Some((sum * sum - sum_sq) / (two * pairs)),
            Some(h_sum * two / real(l as u64)),
        )
    } else {
        (None, None)
    };
    RegimeReport {
        empty_probabilities: empty,
        any_empty_probability: one - none_empty,
        expected_empty_count: expected_empty,
        mean_empty_probability: mean_empty,
        mean_parallel_probability: parallel,
        mean_hamming_distance: hamming,
        pairs_subsampled: false,
        parallel_probability_se: None,
        hamming_distance_se: None,
    }
}

/// Number of empty hyperedges in an observed matrix.
pub fn observed_empty_count(m: &IncidenceMatrix) -> usize {
    (0..m.n_hyperedges())
        .filter(|&alpha| m.hyperedge_members(alpha).is_empty())
        .count()
}

/// Fraction of hyperedge pairs with identical columns; `None` when there
/// are fewer than two hyperedges.
pub fn observed_parallel_fraction(m: &IncidenceMatrix) -> Option<f64> {
    let l = m.n_hyperedges();
    if l < 2 {
        return None;
    }
    let mut groups: std::collections::HashMap<&[u32], u64> = std::collections::HashMap::new();
    for alpha in 0..l {
        *groups.entry(m.hyperedge_members(alpha)).or_insert(0) += 1;
    }
    let parallel: u64 = groups.values().map(|&c| c * (c - 1) / 2).sum();
    let pairs = (l as u64) * (l as u64 - 1) / 2;
    Some(parallel as f64 / pairs as f64)
}

/// The three characteristic densities of the homogeneous ensemble,
/// expressed both as expected hyperdegrees and as matrix densities.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Thresholds<F> {
    /// Hyperdegree above which two hyperedges differ by one entry on
    /// average.
    #[serde(rename = "h_r")]
    pub resolution_hyperdegree: F,
    /// Hyperdegree above which less than one empty hyperedge is expected.
    #[serde(rename = "h_f")]
    pub filling_hyperdegree: F,
    /// Hyperdegree above which any two hyperedges are expected to overlap.
    #[serde(rename = "h_p")]
    pub percolation_hyperdegree: F,
    /// Resolution threshold as a matrix density.
    #[serde(rename = "p_r")]
    pub resolution_density: F,
    /// Filling threshold as a matrix density.
    #[serde(rename = "p_f")]
    pub filling_density: F,
    /// Percolation threshold as a matrix density.
    #[serde(rename = "p_p")]
    pub percolation_density: F,
}

/// Computes the six threshold values for an N×L ensemble.
pub fn thresholds<F: Real>(n_nodes: usize, n_hyperedges: usize) -> Result<Thresholds<F>> {
    if n_nodes < 1 || n_hyperedges < 2 {
        return Err(Error::invalid(format!(
            "thresholds need N >= 1 and L >= 2, got N = {n_nodes}, L = {n_hyperedges}"
        )));
    }
    let one = F::one();
    let two = one + one;
    let n = real::<F>(n_nodes as u64);
    let h_r = one / two;
    let h_f = real::<F>(n_hyperedges as u64).ln();
    let h_p = n.sqrt();
    Ok(Thresholds {
        resolution_hyperdegree: h_r,
        filling_hyperdegree: h_f,
        percolation_hyperdegree: h_p,
        resolution_density: h_r / n,
        filling_density: h_f / n,
        percolation_density: one / n.sqrt(),
    })
}
