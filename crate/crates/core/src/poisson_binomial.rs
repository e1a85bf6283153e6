//! Poisson-Binomial distribution: the number of successes across independent
//! Bernoulli trials with heterogeneous probabilities.
//!
//! Exact probabilities come from a capped convolution that only ever adds
//! nonnegative terms, so pmf, cdf and survival values are accurate in a
//! relative sense even deep in the tails (no `1 - cdf` cancellation). The
//! cost of a query at `x` is `O(n * min(x + 1, n - x + 1))`.
//!
//! Above a configurable size cutoff the refined normal approximation with a
//! skewness correction is used instead and the distribution reports itself
//! as approximate. Approximate tail probabilities below `1e-6` are never
//! returned: the exact convolution is recomputed for those queries, so small
//! p-values are always exact.

use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default trial-count cutoff above which the refined normal approximation
/// answers non-tail queries.
pub const DEFAULT_APPROX_CUTOFF: usize = 10_000;

/// Tail mass below which an approximate answer is replaced by an exact one.
pub const EXACT_TAIL_FLOOR: f64 = 1e-6;

/// Sum of independent, non-identical Bernoulli variables.
#[derive(Debug, Clone)]
pub struct PoissonBinomial<F> {
    probs: Vec<F>,
    cutoff: usize,
}

impl<F: Real> PoissonBinomial<F> {
    /// Builds the distribution from per-trial success probabilities.
    pub fn new(probs: Vec<F>) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if !(p >= F::zero() && p <= F::one()) {
                return Err(Error::invalid(format!(
                    "probability {} at index {} is outside [0, 1]",
                    p, i
                )));
            }
        }
        Ok(PoissonBinomial {
            probs,
            cutoff: DEFAULT_APPROX_CUTOFF,
        })
    }

    /// Builds the homogeneous special case with `n` equal trials, i.e. the
    /// Binomial(n, p) distribution.
    pub fn uniform(n: usize, p: F) -> Result<Self> {
        PoissonBinomial::new(vec![p; n])
    }

    /// Overrides the approximation cutoff (mainly for testing and tuning).
    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }

    /// Number of trials.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// Whether there are no trials (the distribution is then a point mass
    /// at zero).
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// True when non-tail queries are answered by the refined normal
    /// approximation rather than exact convolution.
    pub fn is_approximate(&self) -> bool {
        self.probs.len() > self.cutoff
    }

    /// Exact mean.
    pub fn mean(&self) -> F {
        self.probs.iter().copied().sum()
    }

    /// Exact variance.
    pub fn variance(&self) -> F {
        self.probs.iter().map(|&p| p * (F::one() - p)).sum()
    }

    /// P(X = x).
    pub fn pmf(&self, x: u64) -> F {
        let n = self.probs.len() as u64;
        if x > n {
            return F::zero();
        }
        if self.is_approximate() {
            let value = self.approx_cdf(x as i64) - self.approx_cdf(x as i64 - 1);
            let value = value.max(F::zero());
            if value.to_f64().unwrap_or(0.0) >= EXACT_TAIL_FLOOR {
                return value;
            }
        }
        self.pmf_exact(x)
    }

    /// P(X <= x).
    pub fn cdf(&self, x: u64) -> F {
        let n = self.probs.len() as u64;
        if x >= n {
            return F::one();
        }
        if self.is_approximate() {
            let value = self.approx_cdf(x as i64);
            if value.to_f64().unwrap_or(0.0) >= EXACT_TAIL_FLOOR {
                return value;
            }
        }
        self.cdf_exact(x)
    }

    /// P(X >= x). `survival(0)` is 1 by convention.
    pub fn survival(&self, x: u64) -> F {
        if x == 0 {
            return F::one();
        }
        let n = self.probs.len() as u64;
        if x > n {
            return F::zero();
        }
        if self.is_approximate() {
            let value = F::one() - self.approx_cdf(x as i64 - 1);
            if value.to_f64().unwrap_or(0.0) >= EXACT_TAIL_FLOOR {
                return value;
            }
        }
        self.survival_exact(x)
    }

    fn pmf_exact(&self, x: u64) -> F {
        let n = self.probs.len() as u64;
        debug_assert!(x <= n);
        if x <= n - x {
            *convolve_prefix(&self.probs, x as usize)
                .last()
                .expect("prefix nonempty")
        } else {
            // P(X = x) = P(n - X = n - x) with flipped trial outcomes.
            let flipped: Vec<F> = self.probs.iter().map(|&p| F::one() - p).collect();
            *convolve_prefix(&flipped, (n - x) as usize)
                .last()
                .expect("prefix nonempty")
        }
    }

    fn cdf_exact(&self, x: u64) -> F {
        let n = self.probs.len() as u64;
        if x >= n {
            return F::one();
        }
        if x <= n - x {
            convolve_prefix(&self.probs, x as usize).iter().copied().sum()
        } else {
            F::one() - self.survival_exact(x + 1)
        }
    }

    fn survival_exact(&self, x: u64) -> F {
        let n = self.probs.len() as u64;
        if x == 0 {
            return F::one();
        }
        if x > n {
            return F::zero();
        }
        if x <= n + 1 - x {
            // Forward pass with an absorbing "x or more" state: only
            // nonnegative additions, so tiny tails keep relative accuracy.
            absorbing_tail(&self.probs, x as usize)
        } else {
            // P(X >= x) = P(n - X <= n - x), again a sum of positive terms.
            let flipped: Vec<F> = self.probs.iter().map(|&p| F::one() - p).collect();
            convolve_prefix(&flipped, (n - x) as usize).iter().copied().sum()
        }
    }

    /// Full exact pmf vector of length n + 1. O(n^2); intended for moderate
    /// n and for cross-checks.
    pub fn pmf_vector(&self) -> Vec<F> {
        convolve_prefix(&self.probs, self.probs.len())
    }

    /// Refined normal cdf estimate at integer argument `x` (continuity
    /// corrected, skewness adjusted, clamped to [0, 1]).
    fn approx_cdf(&self, x: i64) -> F {
        let mu = self.mean().to_f64().expect("scalar to f64");
        let var = self.variance().to_f64().expect("scalar to f64");
        if var == 0.0 {
            return if (x as f64) < mu { F::zero() } else { F::one() };
        }
        let sigma = var.sqrt();
        let m3: f64 = self
            .probs
            .iter()
            .map(|&p| {
                let p = p.to_f64().expect("scalar to f64");
                p * (1.0 - p) * (1.0 - 2.0 * p)
            })
            .sum();
        let skew = m3 / (sigma * sigma * sigma);
        let v = (x as f64 + 0.5 - mu) / sigma;
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        let value = normal.cdf(v) + skew * (1.0 - v * v) * normal.pdf(v) / 6.0;
        F::from_f64(value.clamp(0.0, 1.0)).expect("f64 to scalar")
    }
}

/// Exact pmf prefix `[P(X=0), ..., P(X=cap)]` for the trial list `probs`.
///
/// Mass moving past the cap is discarded, which cannot disturb the retained
/// entries: state j only ever receives from states j and j - 1.
fn convolve_prefix<F: Real>(probs: &[F], cap: usize) -> Vec<F> {
    let mut dp = vec![F::zero(); cap + 1];
    dp[0] = F::one();
    for &p in probs {
        let q = F::one() - p;
        for j in (0..=cap).rev() {
            let step = if j > 0 { dp[j - 1] * p } else { F::zero() };
            dp[j] = dp[j] * q + step;
        }
    }
    dp
}

/// P(X >= cap) via a forward convolution with an absorbing top state.
fn absorbing_tail<F: Real>(probs: &[F], cap: usize) -> F {
    debug_assert!(cap >= 1);
    let mut dp = vec![F::zero(); cap];
    dp[0] = F::one();
    let mut absorbed = F::zero();
    for &p in probs {
        let q = F::one() - p;
        absorbed += dp[cap - 1] * p;
        for j in (0..cap).rev() {
            let step = if j > 0 { dp[j - 1] * p } else { F::zero() };
            dp[j] = dp[j] * q + step;
        }
    }
    absorbed
}
