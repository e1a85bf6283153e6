//! Statistically validated projection: per-pair overlap p-values under a
//! fitted model, false-discovery-rate selection, and the validated edge
//! set.
//!
//! The overlap of nodes i and j is a sum of independent Bernoulli cells,
//! so its null distribution is Poisson-Binomial with success probabilities
//! {p_iα p_jα}_α. Only pairs that actually overlap are evaluated and
//! stored; a pair with zero observed overlap has p-value 1 and can never
//! be rejected at any sub-unit significance, but it still counts toward
//! the number of tests.

use std::collections::HashMap;
use std::io::Write;

use crate::models::{ModelKind, ModelSolution};
use crate::incidence::IncidenceMatrix;
use crate::poisson_binomial::PoissonBinomial;
use crate::projection::project;
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// One evaluated node pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairStatistic<F> {
    /// Smaller node index.
    pub i: u32,
    /// Larger node index.
    pub j: u32,
    /// Number of hyperedges the two nodes share in the data.
    pub observed_weight: u64,
    /// Right-tail probability of an overlap at least this large.
    pub p_value: F,
    /// The overlap is impossible under the model (expected weight zero).
    pub anomalous: bool,
    /// Selected by the false-discovery-rate rule.
    pub validated: bool,
}

/// Result of validating a projection against a null model.
#[derive(Debug, Clone)]
pub struct ValidationResult<F> {
    /// Overlapping pairs with their p-values, sorted by (i, j). Pairs with
    /// zero observed overlap are not stored; their implicit p-value is 1.
    pub pairs: Vec<PairStatistic<F>>,
    /// Total number of tests, N(N−1)/2, including non-overlapping pairs.
    pub n_tests: u64,
    /// Number of structurally anomalous pairs.
    pub anomaly_count: usize,
    /// Single-test significance level used for selection, if selection ran.
    pub significance: Option<F>,
    /// Rank î of the selection rule; 0 when nothing is rejected.
    pub threshold_rank: u64,
    /// p-value at the selection rank.
    pub threshold_p_value: Option<F>,
}

impl<F: Real> ValidationResult<F> {
    /// Iterates over the validated edges as (i, j, observed weight).
    pub fn validated_edges(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.pairs
            .iter()
            .filter(|p| p.validated)
            .map(|p| (p.i, p.j, p.observed_weight))
    }
}

/// Computes the overlap p-value of every overlapping node pair.
///
/// No selection is performed; all `validated` flags are false.
pub fn pair_pvalues<F: Real>(
    observed: &IncidenceMatrix,
    model: &ModelSolution<F>,
) -> Result<ValidationResult<F>> {
    if model.n_nodes != observed.n_nodes() || model.n_hyperedges != observed.n_hyperedges() {
        return Err(Error::invalid(format!(
            "model shape {}x{} does not match matrix shape {}x{}",
            model.n_nodes,
            model.n_hyperedges,
            observed.n_nodes(),
            observed.n_hyperedges()
        )));
    }
    let n = observed.n_nodes() as u64;
    let graph = project(observed);
    let mut engine = PvalueEngine::new(model);
    let mut pairs = Vec::new();
    let mut anomaly_count = 0;
    for i in 0..observed.n_nodes() {
        for &(j, w) in graph.neighbors(i) {
            if (j as usize) <= i {
                continue;
            }
            let (p_value, anomalous) = engine.evaluate(i, j as usize, w)?;
            if anomalous {
                anomaly_count += 1;
            }
            pairs.push(PairStatistic {
                i: i as u32,
                j,
                observed_weight: w,
                p_value,
                anomalous,
                validated: false,
            });
        }
    }
    Ok(ValidationResult {
        pairs,
        n_tests: n * n.saturating_sub(1) / 2,
        anomaly_count,
        significance: None,
        threshold_rank: 0,
        threshold_p_value: None,
    })
}

/// Dispatches overlap-distribution queries, caching shared distributions.
struct PvalueEngine<'a, F: Real> {
    model: &'a ModelSolution<F>,
    /// Cache for models whose pair distribution is Binomial: keyed by the
    /// bit pattern of the constant cell product and the observed weight.
    uniform_memo: HashMap<(u64, u64), F>,
    /// Shared probability vector for the hyperedge-layer partial model,
    /// whose pair distribution does not depend on the pair at all.
    shared: Option<(Vec<F>, F, HashMap<u64, F>)>,
}

impl<'a, F: Real> PvalueEngine<'a, F> {
    fn new(model: &'a ModelSolution<F>) -> Self {
        let shared = (model.kind == ModelKind::HpcmHyperedges).then(|| {
            let probs: Vec<F> = (0..model.n_hyperedges)
                .map(|alpha| {
                    let p = model.p(0, alpha);
                    p * p
                })
                .collect();
            let mean = probs.iter().copied().sum();
            (probs, mean, HashMap::new())
        });
        PvalueEngine {
            model,
            uniform_memo: HashMap::new(),
            shared,
        }
    }

    fn evaluate(&mut self, i: usize, j: usize, w: u64) -> Result<(F, bool)> {
        let l = self.model.n_hyperedges;
        match self.model.kind {
            ModelKind::Rhm | ModelKind::HpcmNodes => {
                let q = self.model.p(i, 0) * self.model.p(j, 0);
                if q == F::zero() {
                    return Ok((F::zero(), true));
                }
                let key = (q.to_f64().map(f64::to_bits).unwrap_or(0), w);
                if let Some(&cached) = self.uniform_memo.get(&key) {
                    return Ok((cached, false));
                }
                let value = PoissonBinomial::uniform(l, q)?.survival(w);
                self.uniform_memo.insert(key, value);
                Ok((value, false))
            }
            ModelKind::HpcmHyperedges => {
                let (probs, mean, memo) = self.shared.as_mut().expect("initialized for this kind");
                if *mean == F::zero() {
                    return Ok((F::zero(), true));
                }
                if let Some(&cached) = memo.get(&w) {
                    return Ok((cached, false));
                }
                let value = PoissonBinomial::new(probs.clone())?.survival(w);
                memo.insert(w, value);
                Ok((value, false))
            }
            _ => {
                let mut probs = Vec::with_capacity(l);
                let mut mean = F::zero();
                for alpha in 0..l {
                    let q = self.model.p(i, alpha) * self.model.p(j, alpha);
                    mean += q;
                    probs.push(q);
                }
                if mean == F::zero() {
                    return Ok((F::zero(), true));
                }
                Ok((PoissonBinomial::new(probs)?.survival(w), false))
            }
        }
    }
}

/// Outcome of the false-discovery-rate selection rule.
#[derive(Debug, Clone, PartialEq)]
pub struct FdrSelection<F> {
    /// Largest rank î (1-based) with p_(î) ≤ î·t/n; 0 when none.
    pub threshold_rank: u64,
    /// p-value at that rank.
    pub threshold_p_value: Option<F>,
    /// Indices into the input list whose hypotheses are rejected. Ties are
    /// resolved by p-value, so every test with p ≤ p_(î) is rejected.
    pub rejected: Vec<usize>,
}

/// Benjamini-Hochberg selection over the given p-values.
pub fn fdr_select<F: Real>(pvalues: &[F], t: F) -> Result<FdrSelection<F>> {
    if pvalues.is_empty() {
        return Err(Error::invalid("fdr_select needs at least one p-value"));
    }
    fdr_select_among(pvalues, t, pvalues.len() as u64)
}

/// Benjamini-Hochberg selection when the given p-values are the smallest
/// of `n_total` tests and every omitted test has p-value 1.
pub fn fdr_select_among<F: Real>(
    pvalues: &[F],
    t: F,
    n_total: u64,
) -> Result<FdrSelection<F>> {
    if !(t > F::zero() && t < F::one()) {
        return Err(Error::invalid(format!(
            "significance level must lie strictly in (0, 1), got {t}"
        )));
    }
    if n_total < pvalues.len() as u64 || n_total == 0 {
        return Err(Error::invalid(format!(
            "total test count {n_total} is smaller than the p-value list ({})",
            pvalues.len()
        )));
    }
    for &p in pvalues {
        if !(p >= F::zero() && p <= F::one()) {
            return Err(Error::invalid(format!("p-value {p} outside [0, 1]")));
        }
    }
    let mut order: Vec<usize> = (0..pvalues.len()).collect();
    order.sort_by(|&a, &b| pvalues[a].partial_cmp(&pvalues[b]).expect("validated above"));

    let n = real::<F>(n_total);
    let mut threshold_rank = 0u64;
    let mut threshold_p = None;
    for (position, &index) in order.iter().enumerate() {
        let rank = position as u64 + 1;
        if pvalues[index] <= real::<F>(rank) * t / n {
            threshold_rank = rank;
            threshold_p = Some(pvalues[index]);
        }
    }
    let rejected = match threshold_p {
        Some(cut) => {
            let mut rejected: Vec<usize> =
                (0..pvalues.len()).filter(|&i| pvalues[i] <= cut).collect();
            rejected.sort_unstable();
            rejected
        }
        None => Vec::new(),
    };
    Ok(FdrSelection {
        threshold_rank,
        threshold_p_value: threshold_p,
        rejected,
    })
}

/// Default single-test significance level.
pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;

/// Runs the full validated-projection pipeline.
///
/// Composes [`pair_pvalues`] with [`fdr_select_among`] over all
/// N(N−1)/2 pair tests and flags the validated pairs.
pub fn validated_projection<F: Real>(
    observed: &IncidenceMatrix,
    model: &ModelSolution<F>,
    t: F,
) -> Result<ValidationResult<F>> {
    let mut result = pair_pvalues(observed, model)?;
    result.significance = Some(t);
    if result.n_tests == 0 || result.pairs.is_empty() {
        return Ok(result);
    }
    let pvalues: Vec<F> = result.pairs.iter().map(|p| p.p_value).collect();
    let selection = fdr_select_among(&pvalues, t, result.n_tests)?;
    for &index in &selection.rejected {
        result.pairs[index].validated = true;
    }
    result.threshold_rank = selection.threshold_rank;
    result.threshold_p_value = selection.threshold_p_value;
    Ok(result)
}

/// Writes the evaluated pairs as CSV: `i,j,w_obs,p_value,validated`.
pub fn write_validated_csv<F: Real, W: Write>(
    result: &ValidationResult<F>,
    writer: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["i", "j", "w_obs", "p_value", "validated"])?;
    for pair in &result.pairs {
        out.write_record([
            pair.i.to_string(),
            pair.j.to_string(),
            pair.observed_weight.to_string(),
            format!("{}", pair.p_value),
            u8::from(pair.validated).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
