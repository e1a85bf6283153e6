//! Expected values of projection quantities under a fitted model, the
//! expected confusion matrix, and the goodness-of-fit R².
//!
//! Every cell is an independent Bernoulli variable, so the overlap
//! w_ij = Σ_α I_iα I_jα has closed-form mean and variance, and the strength
//! σ_i = Σ_{j≠i} w_ij decomposes over columns as well. The expected
//! disparity ratio is the one genuinely approximate quantity here: it is
//! the first-order ratio of expectations, which ignores the correlation
//! between numerator and denominator. Sampling is the reference estimator
//! for it.

use crate::centrality::{cec, CecResult, SymmetricWeights};
use crate::incidence::IncidenceMatrix;
use crate::models::ModelSolution;
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// Expected projection metrics for every node.
#[derive(Debug, Clone)]
pub struct ExpectedProjection<F> {
    /// Expected degree of each node.
    pub degrees: Vec<F>,
    /// Expected strength ⟨σ_i⟩ in the projection.
    pub sigma: Vec<F>,
    /// Variance of the strength.
    pub sigma_variance: Vec<F>,
    /// Expected projection degree ⟨κ_i⟩.
    pub kappa: Vec<F>,
    /// Expected mean incident hyperedge size; missing when ⟨k_i⟩ = 0.
    pub knn: Vec<Option<F>>,
    /// First-order expected disparity ratio; missing when the denominator
    /// vanishes. Approximate by construction: prefer sampling when the
    /// ensemble is strongly heterogeneous.
    pub disparity: Vec<Option<F>>,
    /// Σ_{j≠i} ⟨w_ij⟩², the squared-mean part of the disparity numerator.
    pub sum_squared_weights: Vec<F>,
    /// Σ_{j≠i} Var[w_ij], the variance part of the disparity numerator.
    pub sum_weight_variances: Vec<F>,
}

/// Expected overlap ⟨w_ij⟩ = Σ_α p_iα p_jα.
pub fn expected_weight<F: Real>(model: &ModelSolution<F>, i: usize, j: usize) -> F {
    (0..model.n_hyperedges)
        .map(|alpha| model.p(i, alpha) * model.p(j, alpha))
        .sum()
}

/// Variance of the overlap, Σ_α p_iα p_jα (1 − p_iα p_jα).
pub fn weight_variance<F: Real>(model: &ModelSolution<F>, i: usize, j: usize) -> F {
    (0..model.n_hyperedges)
        .map(|alpha| {
            let q = model.p(i, alpha) * model.p(j, alpha);
            q * (F::one() - q)
        })
        .sum()
}

/// Probability that nodes `i` and `j` share at least one hyperedge,
/// ⟨a_ij⟩ = 1 − Π_α (1 − p_iα p_jα).
pub fn overlap_probability<F: Real>(model: &ModelSolution<F>, i: usize, j: usize) -> Result<F> {
    if i == j {
        return Err(Error::invalid(format!(
            "overlap probability needs two distinct nodes, got i = j = {i}"
        )));
    }
    let mut product = F::one();
    for alpha in 0..model.n_hyperedges {
        product *= F::one() - model.p(i, alpha) * model.p(j, alpha);
    }
    Ok(F::one() - product)
}

/// Computes all expected projection metrics in one pass.
///
/// The per-node quantities cost O(NL); the pairwise ones (⟨κ⟩ and the
/// disparity building blocks) cost O(N²L).
pub fn expected_projection<F: Real>(model: &ModelSolution<F>) -> ExpectedProjection<F> {
    let n = model.n_nodes;
    let l = model.n_hyperedges;
    let one = F::one();

    let rows: Vec<Vec<F>> = (0..n)
        .map(|i| (0..l).map(|alpha| model.p(i, alpha)).collect())
        .collect();
    let mut col_mean = vec![F::zero(); l];
    let mut col_var = vec![F::zero(); l];
    for row in &rows {
        for (alpha, &p) in row.iter().enumerate() {
            col_mean[alpha] += p;
            col_var[alpha] += p * (one - p);
        }
    }

    let mut degrees = vec![F::zero(); n];
    let mut sigma = vec![F::zero(); n];
    let mut sigma_variance = vec![F::zero(); n];
    for i in 0..n {
        for (alpha, &p) in rows[i].iter().enumerate() {
            degrees[i] += p;
            let others_mean = col_mean[alpha] - p;
            let others_var = col_var[alpha] - p * (one - p);
            sigma[i] += p * others_mean;
            // Var[I S] = p Var[S] + p (1 - p) E[S]^2 for I ⫫ S.
            sigma_variance[i] += p * others_var + p * (one - p) * others_mean * others_mean;
        }
    }

    let mut kappa = vec![F::zero(); n];
    let mut sum_squared_weights = vec![F::zero(); n];
    let mut sum_weight_variances = vec![F::zero(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut mean = F::zero();
            let mut variance = F::zero();
            let mut no_overlap = one;
            for (pi, pj) in rows[i].iter().zip(&rows[j]) {
                let q = *pi * *pj;
                mean += q;
                variance += q * (one - q);
                no_overlap *= one - q;
            }
            let sq = mean * mean;
            sum_squared_weights[i] += sq;
            sum_squared_weights[j] += sq;
            sum_weight_variances[i] += variance;
            sum_weight_variances[j] += variance;
            kappa[i] += one - no_overlap;
            kappa[j] += one - no_overlap;
        }
    }

    let knn = (0..n)
        .map(|i| {
            if degrees[i] > F::zero() {
                Some((sigma[i] + degrees[i]) / degrees[i])
            } else {
                None
            }
        })
        .collect();
    let disparity = (0..n)
        .map(|i| {
            let denominator = sigma[i] * sigma[i] + sigma_variance[i];
            if denominator > F::zero() {
                Some((sum_squared_weights[i] + sum_weight_variances[i]) / denominator)
            } else {
                None
            }
        })
        .collect();

    ExpectedProjection {
        degrees,
        sigma,
        sigma_variance,
        kappa,
        knn,
        disparity,
        sum_squared_weights,
        sum_weight_variances,
    }
}

/// Dense expected projection matrix ⟨W⟩ with zero diagonal.
pub fn expected_weight_matrix<F: Real>(model: &ModelSolution<F>) -> Vec<Vec<F>> {
    let n = model.n_nodes;
    let l = model.n_hyperedges;
    let rows: Vec<Vec<F>> = (0..n)
        .map(|i| (0..l).map(|alpha| model.p(i, alpha)).collect())
        .collect();
    let mut w = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mean: F = rows[i].iter().zip(&rows[j]).map(|(&a, &b)| a * b).sum();
            w[i][j] = mean;
            w[j][i] = mean;
        }
    }
    w
}

/// Centrality of the expected projection: the dominant eigenvector of ⟨W⟩.
///
/// This avoids sampling the ensemble; the sampled per-matrix centralities
/// average to nearly the same vector.
pub fn expected_cec<F: Real>(
    model: &ModelSolution<F>,
    tol: F,
    max_iter: usize,
) -> Result<CecResult<F>> {
    let dense = expected_weight_matrix(model);
    let weights = SymmetricWeights::from_dense(&dense)?;
    cec(&weights, tol, max_iter)
}

/// Expected confusion-matrix summary of a model against an observed matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionExpectation<F> {
    /// Expected true positive rate; missing when the matrix has no 1s.
    pub tpr: Option<F>,
    /// Expected specificity; missing when the matrix has no 0s.
    pub spc: Option<F>,
    /// Expected positive predictive value; missing when either the matrix
    /// or the model has no 1s.
    pub ppv: Option<F>,
    /// Expected accuracy; missing only for an empty matrix.
    pub acc: Option<F>,
}

/// Computes the expected confusion matrix of `model` against `observed`.
pub fn expected_confusion<F: Real>(
    model: &ModelSolution<F>,
    observed: &IncidenceMatrix,
) -> Result<ConfusionExpectation<F>> {
    if model.n_nodes != observed.n_nodes() || model.n_hyperedges != observed.n_hyperedges() {
        return Err(Error::invalid(format!(
            "confusion matrix needs matching shapes: model is {}x{}, matrix is {}x{}",
            model.n_nodes,
            model.n_hyperedges,
            observed.n_nodes(),
            observed.n_hyperedges()
        )));
    }
    let cells = (model.n_nodes as u64) * (model.n_hyperedges as u64);
    let t = observed.total_ones();
    let expected_total = model.expected_total();
    let mut true_positives = F::zero();
    for (i, alpha) in observed.cells() {
        true_positives += model.p(i as usize, alpha as usize);
    }
    let true_negatives =
        real::<F>(cells - t) - (expected_total - true_positives);

    Ok(ConfusionExpectation {
        tpr: (t > 0).then(|| true_positives / real(t)),
        spc: (cells > t).then(|| true_negatives / real(cells - t)),
        ppv: (t > 0 && expected_total > F::zero()).then(|| true_positives / expected_total),
        acc: (cells > 0).then(|| (true_positives + true_negatives) / real(cells)),
    })
}

/// Coefficient of determination of a model's predictions against data.
///
/// Returns `Ok(None)` when the empirical vector is constant, which leaves
/// the baseline variance zero and the ratio undefined.
pub fn r_squared<F: Real>(empirical: &[F], expected: &[F]) -> Result<Option<F>> {
    if empirical.len() != expected.len() || empirical.len() < 2 {
        return Err(Error::invalid(format!(
            "r_squared needs two equal-length vectors of at least 2 entries, got {} and {}",
            empirical.len(),
            expected.len()
        )));
    }
    let n = real::<F>(empirical.len() as u64);
    let mean = empirical.iter().copied().sum::<F>() / n;
    let baseline: F = empirical.iter().map(|&x| (x - mean) * (x - mean)).sum();
    if baseline == F::zero() {
        return Ok(None);
    }
    let residual: F = empirical
        .iter()
        .zip(expected)
        .map(|(&x, &e)| (x - e) * (x - e))
        .sum();
    Ok(Some(F::one() - residual / baseline))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::DegreeSummary;
    use crate::models::{fit_cla, fit_hpcm_nodes, fit_rhm, rhm_with_probability};
    use approx::assert_relative_eq;

    #[test]
    fn full_matrix_expectations() {
        let model = rhm_with_probability::<f64>(3, 4, 1.0).unwrap();
        let e = expected_projection(&model);
        for i in 0..3 {
            assert_relative_eq!(e.sigma[i], 4.0 * 2.0);
            assert_relative_eq!(e.kappa[i], 2.0);
            assert_relative_eq!(e.sigma_variance[i], 0.0);
            assert_relative_eq!(e.knn[i].unwrap(), (8.0 + 4.0) / 4.0);
        }
    }

    #[test]
    fn pairwise_helpers_match_direct_sums() {
        let d = DegreeSummary::new(vec![2, 1, 1], vec![2, 1, 1]).unwrap();
        let model = fit_cla::<f64>(&d);
        let w = expected_weight(&model, 0, 1);
        let direct: f64 = (0..3).map(|a| model.p(0, a) * model.p(1, a)).sum();
        assert_relative_eq!(w, direct);
        let v = weight_variance(&model, 0, 1);
        let direct_v: f64 = (0..3)
            .map(|a| {
                let q = model.p(0, a) * model.p(1, a);
                q * (1.0 - q)
            })
            .sum();
        assert_relative_eq!(v, direct_v);
    }

    #[test]
    fn overlap_probability_checks_distinctness() {
        let model = rhm_with_probability::<f64>(3, 2, 0.5).unwrap();
        assert!(overlap_probability(&model, 1, 1).is_err());
        let a = overlap_probability(&model, 0, 1).unwrap();
        assert_relative_eq!(a, 1.0 - (1.0 - 0.25f64).powi(2));
    }

    #[test]
    fn zero_degree_node_has_empty_expectations() {
        let d = DegreeSummary::new(vec![2, 0], vec![1, 1]).unwrap();
        let model = fit_hpcm_nodes::<f64>(&d);
        let e = expected_projection(&model);
        assert_eq!(e.sigma[1], 0.0);
        assert_eq!(e.knn[1], None);
        assert_eq!(e.disparity[1], None);
        assert_eq!(overlap_probability(&model, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn chung_lu_sigma_matches_quoted_form() {
        // Under the unclamped approximation, ⟨σ_i⟩ ≈ k_i Σ_α h_α² / T
        // up to the per-column self term.
        let d = DegreeSummary::new(vec![1, 1, 1, 1], vec![2, 1, 1]).unwrap();
        let model = fit_cla::<f64>(&d);
        let e = expected_projection(&model);
        let t = 4.0;
        for i in 0..4 {
            let k = d.node_degrees()[i] as f64;
            let quoted: f64 = d
                .hyperedge_degrees()
                .iter()
                .map(|&h| {
                    let h = h as f64;
                    (k * h / t) * (h - k * h / t)
                })
                .sum();
            assert_relative_eq!(e.sigma[i], quoted, max_relative = 1e-12);
        }
    }

    #[test]
    fn expected_cec_is_uniform_for_exchangeable_models() {
        let model = rhm_with_probability::<f64>(5, 3, 0.4).unwrap();
        let result = expected_cec(&model, 1e-12, 10_000).unwrap();
        let expect = 1.0 / (5f64).sqrt();
        for &v in &result.vector {
            assert_relative_eq!(v, expect, max_relative = 1e-9);
        }
        assert!(!result.disconnected);
    }

    #[test]
    fn confusion_for_perfect_and_degree_matching_models() {
        let m = IncidenceMatrix::from_memberships(2, vec![vec![0, 1], vec![0]]).unwrap();
        let d = m.degree_summary();

        let rhm = fit_rhm::<f64>(&d);
        let c = expected_confusion(&rhm, &m).unwrap();
        assert_relative_eq!(c.tpr.unwrap(), c.ppv.unwrap(), max_relative = 1e-14);

        // A model that concentrates all probability on the observed cells.
        let perfect = fit_hpcm_nodes::<f64>(&DegreeSummary::new(vec![2, 2], vec![2, 2]).unwrap());
        let full = IncidenceMatrix::from_memberships(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let c = expected_confusion(&perfect, &full).unwrap();
        assert_eq!(c.tpr.unwrap(), 1.0);
        assert_eq!(c.ppv.unwrap(), 1.0);
        assert_eq!(c.acc.unwrap(), 1.0);
        assert_eq!(c.spc, None);
    }

    #[test]
    fn confusion_shape_mismatch_is_rejected() {
        let m = IncidenceMatrix::from_memberships(2, vec![vec![0]]).unwrap();
        let model = rhm_with_probability::<f64>(3, 1, 0.5).unwrap();
        assert!(expected_confusion(&model, &m).is_err());
    }

    #[test]
    fn r_squared_anchors() {
        let x = [1.0f64, 2.0, 3.0];
        assert_relative_eq!(r_squared(&x, &x).unwrap().unwrap(), 1.0);
        let baseline = [2.0f64, 2.0, 2.0];
        assert_relative_eq!(r_squared(&x, &baseline).unwrap().unwrap(), 0.0);
        assert_eq!(r_squared(&baseline, &x).unwrap(), None);
        assert!(r_squared(&x, &baseline[..2]).is_err());
        assert!(r_squared(&x[..1], &baseline[..1]).is_err());
    }
}
