//! Co-membership projection of a hypergraph onto its nodes.
//!
//! The projection W = I I^T (with the diagonal zeroed) counts, for every
//! node pair, the hyperedges they share. All structural quantities are kept
//! as exact integers; the real-valued per-node metrics (disparity Y and
//! average incident hyperedge size k_nn) are derived from integer ratios on
//! demand, so they are exact at whatever scalar precision the caller picks.

use std::io::Write;

use crate::error::Result;
use crate::incidence::IncidenceMatrix;
use crate::scalar::{real, Real};

/// Weighted co-membership graph plus per-node summaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionGraph {
    /// Sorted `(neighbor, weight)` lists; only strictly positive weights.
    adjacency: Vec<Vec<(u32, u64)>>,
    /// Node strengths: sigma_i = sum_j w_ij.
    sigma: Vec<u64>,
    /// Sum of squared weights per node, for the disparity.
    sum_sq_weights: Vec<u128>,
    /// Node degrees k_i of the underlying incidence matrix.
    node_degrees: Vec<u64>,
    node_labels: Option<Vec<String>>,
}

/// Projects an incidence matrix onto its nodes.
///
/// Runs in O(sum_a h_a^2) integer operations; the result is independent of
/// hyperedge order.
pub fn project(m: &IncidenceMatrix) -> ProjectionGraph {
    let n = m.n_nodes();
    let mut weights: Vec<std::collections::HashMap<u32, u64>> =
        vec![std::collections::HashMap::new(); n];
    for alpha in 0..m.n_hyperedges() {
        let members = m.hyperedge_members(alpha);
        for (pos, &i) in members.iter().enumerate() {
            for &j in &members[pos + 1..] {
                *weights[i as usize].entry(j).or_insert(0) += 1;
                *weights[j as usize].entry(i).or_insert(0) += 1;
            }
        }
    }
    let mut adjacency = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut sum_sq = Vec::with_capacity(n);
    for row in weights {
        let mut list: Vec<(u32, u64)> = row.into_iter().collect();
        list.sort_unstable_by_key(|&(j, _)| j);
        sigma.push(list.iter().map(|&(_, w)| w).sum());
        sum_sq.push(list.iter().map(|&(_, w)| (w as u128) * (w as u128)).sum());
        adjacency.push(list);
    }
    ProjectionGraph {
        adjacency,
        sigma,
        sum_sq_weights: sum_sq,
        node_degrees: m.degree_summary().node_degrees().to_vec(),
        node_labels: m.node_labels().map(<[String]>::to_vec),
    }
}

impl ProjectionGraph {
    /// Number of nodes.
    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    /// Positive-weight neighbors of node `i`, sorted by index.
    pub fn neighbors(&self, i: usize) -> &[(u32, u64)] {
        &self.adjacency[i]
    }

    /// Shared-hyperedge count between `i` and `j` (0 when none, or `i == j`).
    pub fn weight(&self, i: usize, j: usize) -> u64 {
        if i == j {
            return 0;
        }
        self.adjacency[i]
            .binary_search_by_key(&(j as u32), |&(nbr, _)| nbr)
            .map_or(0, |pos| self.adjacency[i][pos].1)
    }

    /// Strength sigma_i of node `i`.
    pub fn strength(&self, i: usize) -> u64 {
        self.sigma[i]
    }

    /// All strengths.
    pub fn strengths(&self) -> &[u64] {
        &self.sigma
    }

    /// Number of distinct neighbors kappa_i of node `i`.
    pub fn neighbor_count(&self, i: usize) -> u64 {
        self.adjacency[i].len() as u64
    }

    /// All neighbor counts.
    pub fn neighbor_counts(&self) -> Vec<u64> {
        self.adjacency.iter().map(|a| a.len() as u64).collect()
    }

    /// Node degrees of the projected incidence matrix.
    pub fn node_degrees(&self) -> &[u64] {
        &self.node_degrees
    }

    /// Disparity Y_i = sum_j (w_ij / sigma_i)^2, `None` when sigma_i = 0.
    pub fn disparity<F: Real>(&self, i: usize) -> Option<F> {
        if self.sigma[i] == 0 {
            return None;
        }
        let s: F = real(self.sigma[i]);
        let num = F::from_u128(self.sum_sq_weights[i]).expect("weight fits scalar");
        Some(num / (s * s))
    }

    /// All disparities.
    pub fn disparities<F: Real>(&self) -> Vec<Option<F>> {
        (0..self.n_nodes()).map(|i| self.disparity(i)).collect()
    }

    /// Average size of the hyperedges incident to node `i`,
    /// k_nn_i = sum_a I_ia h_a / k_i.
    ///
    /// Evaluated through the exact identity k_nn_i * k_i = sigma_i + k_i, so
    /// no per-hyperedge floating sum is involved. `None` when sigma_i = 0,
    /// matching the disparity's domain.
    pub fn mean_incident_size<F: Real>(&self, i: usize) -> Option<F> {
        if self.sigma[i] == 0 {
            return None;
        }
        let k: F = real(self.node_degrees[i]);
        let s: F = real(self.sigma[i]);
        Some((s + k) / k)
    }

    /// All mean incident sizes.
    pub fn mean_incident_sizes<F: Real>(&self) -> Vec<Option<F>> {
        (0..self.n_nodes())
            .map(|i| self.mean_incident_size(i))
            .collect()
    }

    /// Node labels inherited from the incidence matrix, if any.
    pub fn node_labels(&self) -> Option<&[String]> {
        self.node_labels.as_deref()
    }

    fn node_label(&self, i: usize) -> String {
        match &self.node_labels {
            Some(labels) => labels[i].clone(),
            None => i.to_string(),
        }
    }

    /// Writes the weighted edge list as CSV with header `i,j,w_ij`.
    ///
    /// One row per unordered pair with positive weight, ordered by `(i, j)`.
    pub fn write_edges_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv_writer = csv::Writer::from_writer(writer);
        csv_writer.write_record(["i", "j", "w_ij"])?;
        for i in 0..self.n_nodes() {
            for &(j, w) in &self.adjacency[i] {
                if (j as usize) > i {
                    csv_writer.write_record([
                        self.node_label(i),
                        self.node_label(j as usize),
                        w.to_string(),
                    ])?;
                }
            }
        }
        csv_writer.flush()?;
        Ok(())
    }

    /// Writes per-node metrics as CSV with header
    /// `node,k,sigma,kappa,Y,knn,cec`.
    ///
    /// Undefined disparities and mean incident sizes are written as empty
    /// fields, never as 0. The centrality column is filled from `cec` when
    /// provided and left empty otherwise.
    pub fn write_node_metrics_csv<W: Write>(&self, cec: Option<&[f64]>, writer: W) -> Result<()> {
        let mut csv_writer = csv::Writer::from_writer(writer);
        csv_writer.write_record(["node", "k", "sigma", "kappa", "Y", "knn", "cec"])?;
        for i in 0..self.n_nodes() {
            let y = self
                .disparity::<f64>(i)
                .map_or(String::new(), |v| format!("{v}"));
            let knn = self
                .mean_incident_size::<f64>(i)
                .map_or(String::new(), |v| format!("{v}"));
            let c = cec.map_or(String::new(), |v| format!("{}", v[i]));
            csv_writer.write_record([
                self.node_label(i),
                self.node_degrees[i].to_string(),
                self.sigma[i].to_string(),
                self.adjacency[i].len().to_string(),
                y,
                knn,
                c,
            ])?;
        }
        csv_writer.flush()?;
        Ok(())
    }
}
