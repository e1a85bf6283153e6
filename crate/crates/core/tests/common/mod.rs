#![allow(dead_code)]

use hypernull::incidence::IncidenceMatrix;
use hypernull::models::ModelSolution;
use nalgebra::{DMatrix, DVector};

/// 0-indexed hyperedge memberships of the 6x5 example hypergraph used
/// throughout the integration tests: k = (3,3,3,3,4,1), h = (2,4,4,4,3),
/// T = 17, sigma = (8,8,9,6,10,3), kappa = (5,4,5,4,5,3).
pub fn fixture_memberships() -> Vec<Vec<u32>> {
    vec![
        vec![3, 4],
        vec![0, 2, 4, 5],
        vec![0, 1, 2, 4],
        vec![1, 2, 3, 4],
        vec![0, 1, 3],
    ]
}

pub fn fixture_matrix() -> IncidenceMatrix {
    IncidenceMatrix::from_memberships(6, fixture_memberships()).unwrap()
}

/// The same hypergraph as a labeled hyperedge-list document. Node indices
/// are assigned in first-appearance order, so degree vectors parsed from
/// this text are a permutation of the canonical ones.
pub const FIXTURE_HYPEREDGE_LIST: &str = "\
n4 n5
n1 n3 n5 n6
n1 n2 n3 n5
n2 n3 n4 n5
n1 n2 n4
";

/// The same hypergraph as a dense CSV document with the canonical row order.
pub const FIXTURE_DENSE_CSV: &str = "\
node,e1,e2,e3,e4,e5
n1,0,1,1,0,1
n2,0,0,1,1,1
n3,0,1,1,1,0
n4,1,0,0,1,1
n5,1,1,1,1,0
n6,0,1,0,0,0
";

/// Dense probability matrix of a model, rows = nodes.
pub fn probability_matrix(model: &ModelSolution<f64>) -> Vec<Vec<f64>> {
    (0..model.n_nodes)
        .map(|i| (0..model.n_hyperedges).map(|a| model.p(i, a)).collect())
        .collect()
}

/// Exhaustive ensemble moments obtained by enumerating all 2^(N*L)
/// incidence matrices and weighting each by its Bernoulli probability.
/// Everything here is an independent re-derivation used as an oracle; no
/// library analytics are involved.
pub struct EnsembleMoments {
    pub n: usize,
    pub l: usize,
    pub mean_weight: Vec<Vec<f64>>,
    pub weight_variance: Vec<Vec<f64>>,
    pub overlap: Vec<Vec<f64>>,
    pub sigma: Vec<f64>,
    pub sigma_variance: Vec<f64>,
    pub kappa: Vec<f64>,
    pub empty_probabilities: Vec<f64>,
    pub any_empty: f64,
    pub expected_empty: f64,
    pub parallel: Vec<Vec<f64>>,
    pub hamming: Vec<Vec<f64>>,
    /// `pair_survival[i][j][x]` = P(w_ij >= x) for x in 0..=L, i < j.
    pub pair_survival: Vec<Vec<Vec<f64>>>,
}

impl EnsembleMoments {
    pub fn compute(probs: &[Vec<f64>]) -> Self {
        let n = probs.len();
        let l = probs[0].len();
        let cells = n * l;
        assert!(cells <= 20, "enumeration oracle is for tiny instances");

        let mut mean_weight = vec![vec![0.0; n]; n];
        let mut mean_weight_sq = vec![vec![0.0; n]; n];
        let mut overlap = vec![vec![0.0; n]; n];
        let mut sigma = vec![0.0; n];
        let mut sigma_sq = vec![0.0; n];
        let mut kappa = vec![0.0; n];
        let mut empty_probabilities = vec![0.0; l];
        let mut any_empty = 0.0;
        let mut expected_empty = 0.0;
        let mut parallel = vec![vec![0.0; l]; l];
        let mut hamming = vec![vec![0.0; l]; l];
        let mut pair_pmf = vec![vec![vec![0.0; l + 1]; n]; n];
        let mut total_weight = 0.0;

        for mask in 0u32..(1u32 << cells) {
            let mut weight = 1.0;
            for cell in 0..cells {
                let p = probs[cell / l][cell % l];
                weight *= if mask >> cell & 1 == 1 { p } else { 1.0 - p };
            }
            if weight == 0.0 {
                continue;
            }
            total_weight += weight;

            let rows: Vec<u32> = (0..n)
                .map(|i| (0..l).filter(|a| mask >> (i * l + a) & 1 == 1).fold(0, |m, a| m | 1 << a))
                .collect();
            let cols: Vec<u32> = (0..l)
                .map(|a| (0..n).filter(|i| mask >> (i * l + a) & 1 == 1).fold(0, |m, i| m | 1 << i))
                .collect();

            for i in 0..n {
                let mut s = 0u32;
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let w = (rows[i] & rows[j]).count_ones();
                    s += w;
                    mean_weight[i][j] += weight * w as f64;
                    mean_weight_sq[i][j] += weight * (w * w) as f64;
                    if w > 0 {
                        overlap[i][j] += weight;
                        kappa[i] += weight;
                    }
                    if i < j {
                        pair_pmf[i][j][w as usize] += weight;
                    }
                }
                sigma[i] += weight * s as f64;
                sigma_sq[i] += weight * (s * s) as f64;
            }

            let empties = cols.iter().filter(|&&c| c == 0).count();
            expected_empty += weight * empties as f64;
            if empties > 0 {
                any_empty += weight;
            }
            for a in 0..l {
                if cols[a] == 0 {
                    empty_probabilities[a] += weight;
                }
                for b in 0..l {
                    if a == b {
                        continue;
                    }
                    if cols[a] == cols[b] {
                        parallel[a][b] += weight;
                    }
                    hamming[a][b] += weight * (cols[a] ^ cols[b]).count_ones() as f64;
                }
            }
        }
        assert!(
            (total_weight - 1.0).abs() < 1e-9,
            "enumeration weights sum to {total_weight}"
        );

        let weight_variance = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| mean_weight_sq[i][j] - mean_weight[i][j] * mean_weight[i][j])
                    .collect()
            })
            .collect();
        let sigma_variance = (0..n).map(|i| sigma_sq[i] - sigma[i] * sigma[i]).collect();
        let pair_survival = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut tail = vec![0.0; l + 1];
                        let mut acc = 0.0;
                        for x in (0..=l).rev() {
                            acc += pair_pmf[i][j][x];
                            tail[x] = acc;
                        }
                        tail
                    })
                    .collect()
            })
            .collect();

        EnsembleMoments {
            n,
            l,
            mean_weight,
            weight_variance,
            overlap,
            sigma,
            sigma_variance,
            kappa,
            empty_probabilities,
            any_empty,
            expected_empty,
            parallel,
            hamming,
            pair_survival,
        }
    }
}

/// Expected confusion quantities by exhaustive enumeration against a fixed
/// observed matrix. Ratios follow the ratio-of-expectations convention.
pub struct ConfusionOracle {
    pub tpr: Option<f64>,
    pub spc: Option<f64>,
    pub ppv: Option<f64>,
    pub acc: Option<f64>,
}

pub fn confusion_oracle(probs: &[Vec<f64>], observed: &IncidenceMatrix) -> ConfusionOracle {
    let n = probs.len();
    let l = probs[0].len();
    let cells = n * l;
    let t_star = observed.total_ones() as f64;
    let mut tp = 0.0;
    let mut tn = 0.0;
    let mut mean_total = 0.0;
    for mask in 0u32..(1u32 << cells) {
        let mut weight = 1.0;
        for cell in 0..cells {
            let p = probs[cell / l][cell % l];
            weight *= if mask >> cell & 1 == 1 { p } else { 1.0 - p };
        }
        if weight == 0.0 {
            continue;
        }
        for cell in 0..cells {
            let bit = mask >> cell & 1 == 1;
            let obs = observed.contains(cell / l, cell % l);
            if bit {
                mean_total += weight;
            }
            if bit && obs {
                tp += weight;
            }
            if !bit && !obs {
                tn += weight;
            }
        }
    }
    let cells = cells as f64;
    ConfusionOracle {
        tpr: (t_star > 0.0).then(|| tp / t_star),
        spc: (cells > t_star).then(|| tn / (cells - t_star)),
        ppv: (t_star > 0.0 && mean_total > 0.0).then(|| tp / mean_total),
        acc: (cells > 0.0).then(|| (tp + tn) / cells),
    }
}

/// Dominant eigenvector of a dense symmetric matrix through a full
/// eigendecomposition, normalized like the library's power iteration:
/// nonnegative entries, unit Euclidean norm.
pub fn dense_cec_oracle(w: &[Vec<f64>]) -> Vec<f64> {
    let n = w.len();
    let m = DMatrix::from_fn(n, n, |i, j| w[i][j]);
    let eigen = m.symmetric_eigen();
    let top = eigen
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(idx, _)| idx)
        .unwrap();
    let mut v: Vec<f64> = eigen.eigenvectors.column(top).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        for entry in &mut v {
            *entry = -*entry;
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for entry in &mut v {
        *entry /= norm;
    }
    v
}

/// Damped Gauss-Newton solver for the coupled degree equations with
/// real-valued interior targets. Test-only: used to cross-check the
/// production fitter and to probe monotonicity under fractional
/// perturbations, which integer degree summaries cannot express.
pub fn newton_hcm(
    node_targets: &[f64],
    edge_targets: &[f64],
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>), String> {
    let n = node_targets.len();
    let l = edge_targets.len();
    for &k in node_targets {
        if !(k > 0.0 && k < l as f64) {
            return Err(format!("node target {k} not interior to (0, {l})"));
        }
    }
    for &h in edge_targets {
        if !(h > 0.0 && h < n as f64) {
            return Err(format!("edge target {h} not interior to (0, {n})"));
        }
    }
    let total: f64 = node_targets.iter().sum();
    if (total - edge_targets.iter().sum::<f64>()).abs() > 1e-9 {
        return Err("inconsistent target sums".into());
    }

    let mut x: Vec<f64> = node_targets.iter().map(|k| k / total.sqrt()).collect();
    let mut y: Vec<f64> = edge_targets.iter().map(|h| h / total.sqrt()).collect();
    let dim = n + l;
    for _ in 0..500 {
        let mut fval = DVector::<f64>::zeros(dim);
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..n {
            for a in 0..l {
                let q = x[i] * y[a];
                let p = q / (1.0 + q);
                let d = p * (1.0 - p);
                fval[i] += p;
                fval[n + a] += p;
                jac[(i, i)] += d;
                jac[(i, n + a)] = d;
                jac[(n + a, i)] = d;
                jac[(n + a, n + a)] += d;
            }
        }
        for i in 0..n {
            fval[i] -= node_targets[i];
        }
        for a in 0..l {
            fval[n + a] -= edge_targets[a];
        }
        if fval.amax() < tol {
            return Ok((x, y));
        }
        let jt = jac.transpose();
        let lhs = &jt * &jac + DMatrix::identity(dim, dim) * 1e-12;
        let rhs = -(&jt * &fval);
        let delta = lhs
            .lu()
            .solve(&rhs)
            .ok_or_else(|| "singular Newton system".to_string())?;
        let biggest = delta.amax();
        let scale = if biggest > 2.0 { 2.0 / biggest } else { 1.0 };
        for i in 0..n {
            x[i] *= (scale * delta[i]).exp();
        }
        for a in 0..l {
            y[a] *= (scale * delta[n + a]).exp();
        }
    }
    Err("Newton iteration did not converge".into())
}

/// Straightforward quadratic scan of the ranked-threshold rule: sort, find
/// the largest satisfied rank, reject everything at or below that p-value.
pub fn bh_scan_oracle(pvalues: &[f64], t: f64, n_total: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pvalues.len()).collect();
    order.sort_by(|&a, &b| pvalues[a].partial_cmp(&pvalues[b]).unwrap());
    let n = n_total as f64;
    let mut cut = None;
    for (pos, &idx) in order.iter().enumerate() {
        if pvalues[idx] <= (pos + 1) as f64 * t / n {
            cut = Some(pvalues[idx]);
        }
    }
    match cut {
        None => Vec::new(),
        Some(c) => (0..pvalues.len()).filter(|&j| pvalues[j] <= c).collect(),
    }
}
