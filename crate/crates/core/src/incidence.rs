//! Binary node-hyperedge incidence matrices.
//!
//! An [`IncidenceMatrix`] stores the N x L 0/1 matrix of a hypergraph with
//! N nodes (rows) and L hyperedges (columns). Storage is sparse and kept in
//! both orientations: membership lists per hyperedge for column scans and
//! membership lists per node for row scans. Empty hyperedges, isolated nodes
//! and parallel (duplicate) hyperedges are all representable.

use std::borrow::Cow;

use crate::error::{Error, Result};

/// Sparse binary incidence matrix of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    n_nodes: usize,
    /// Sorted node indices per hyperedge.
    columns: Vec<Vec<u32>>,
    /// Sorted hyperedge indices per node.
    rows: Vec<Vec<u32>>,
    node_labels: Option<Vec<String>>,
    hyperedge_labels: Option<Vec<String>>,
}

impl IncidenceMatrix {
    /// Builds a matrix from per-hyperedge membership lists over `n_nodes`
    /// nodes indexed `0..n_nodes`.
    ///
    /// Fails if an index is out of range or repeated within one hyperedge.
    pub fn from_memberships(n_nodes: usize, memberships: Vec<Vec<u32>>) -> Result<Self> {
        let mut columns = memberships;
        for (alpha, members) in columns.iter_mut().enumerate() {
            members.sort_unstable();
            for pair in members.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::invalid(format!(
                        "node {} repeated in hyperedge {}",
                        pair[0], alpha
                    )));
                }
            }
            if let Some(&last) = members.last() {
                if last as usize >= n_nodes {
                    return Err(Error::invalid(format!(
                        "node index {} out of range in hyperedge {} (N = {})",
                        last, alpha, n_nodes
                    )));
                }
            }
        }
        let rows = transpose(n_nodes, &columns);
        Ok(IncidenceMatrix {
            n_nodes,
            columns,
            rows,
            node_labels: None,
            hyperedge_labels: None,
        })
    }

    /// Builds a matrix from hyperedges given as lists of node labels.
    ///
    /// Nodes are indexed by first appearance. A label repeated within one
    /// hyperedge is an error; identical hyperedges are kept as parallel
    /// columns.
    pub fn from_labeled_hyperedges<S: AsRef<str>>(hyperedges: &[Vec<S>]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: std::collections::HashMap<String, u32> = std::collections::HashMap::new();
        let mut memberships = Vec::with_capacity(hyperedges.len());
        for edge in hyperedges {
            let mut members = Vec::with_capacity(edge.len());
            for label in edge {
                let label = label.as_ref();
                let id = *index.entry(label.to_owned()).or_insert_with(|| {
                    labels.push(label.to_owned());
                    (labels.len() - 1) as u32
                });
                members.push(id);
            }
            memberships.push(members);
        }
        let mut m = Self::from_memberships(labels.len(), memberships)?;
        m.node_labels = Some(labels);
        Ok(m)
    }

    /// Builds a matrix from dense 0/1 rows, one per node.
    pub fn from_dense_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n_nodes = rows.len();
        let n_hyperedges = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_hyperedges {
                return Err(Error::invalid(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n_hyperedges
                )));
            }
        }
        let mut memberships = vec![Vec::new(); n_hyperedges];
        for (i, row) in rows.iter().enumerate() {
            for (alpha, &cell) in row.iter().enumerate() {
                if cell {
                    memberships[alpha].push(i as u32);
                }
            }
        }
        Self::from_memberships(n_nodes, memberships)
    }

    /// Attaches node labels; length must equal N.
    pub fn with_node_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_nodes {
            return Err(Error::invalid(format!(
                "{} node labels for {} nodes",
                labels.len(),
                self.n_nodes
            )));
        }
        self.node_labels = Some(labels);
        Ok(self)
    }

    /// Attaches hyperedge labels; length must equal L.
    pub fn with_hyperedge_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.columns.len() {
            return Err(Error::invalid(format!(
                "{} hyperedge labels for {} hyperedges",
                labels.len(),
                self.columns.len()
            )));
        }
        self.hyperedge_labels = Some(labels);
        Ok(self)
    }

    /// Number of nodes N.
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of hyperedges L.
    pub fn n_hyperedges(&self) -> usize {
        self.columns.len()
    }

    /// Total number of ones T.
    pub fn total_ones(&self) -> u64 {
        self.columns.iter().map(|c| c.len() as u64).sum()
    }

    /// Sorted members of hyperedge `alpha`.
    pub fn hyperedge_members(&self, alpha: usize) -> &[u32] {
        &self.columns[alpha]
    }

    /// Sorted hyperedges containing node `i`.
    pub fn node_memberships(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    /// Whether cell (i, alpha) is set.
    pub fn contains(&self, i: usize, alpha: usize) -> bool {
        self.columns[alpha].binary_search(&(i as u32)).is_ok()
    }

    /// Iterates set cells as `(node, hyperedge)` in column-major order.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(alpha, members)| members.iter().map(move |&i| (i, alpha as u32)))
    }

    /// Node labels, if attached.
    pub fn node_labels(&self) -> Option<&[String]> {
        self.node_labels.as_deref()
    }

    /// Hyperedge labels, if attached.
    pub fn hyperedge_labels(&self) -> Option<&[String]> {
        self.hyperedge_labels.as_deref()
    }

    /// Label of node `i`, falling back to its index.
    pub fn node_label(&self, i: usize) -> Cow<'_, str> {
        match &self.node_labels {
            Some(labels) => Cow::Borrowed(labels[i].as_str()),
            None => Cow::Owned(i.to_string()),
        }
    }

    /// Label of hyperedge `alpha`, falling back to its index.
    pub fn hyperedge_label(&self, alpha: usize) -> Cow<'_, str> {
        match &self.hyperedge_labels {
            Some(labels) => Cow::Borrowed(labels[alpha].as_str()),
            None => Cow::Owned(alpha.to_string()),
        }
    }

    /// Row and column sums of the matrix.
    pub fn degree_summary(&self) -> DegreeSummary {
        let node_degrees = self.rows.iter().map(|r| r.len() as u64).collect();
        let hyperedge_degrees = self.columns.iter().map(|c| c.len() as u64).collect();
        DegreeSummary {
            node_degrees,
            hyperedge_degrees,
        }
    }

    /// Structural equality ignoring labels: same shape and same cell set.
    pub fn same_cells(&self, other: &IncidenceMatrix) -> bool {
        self.n_nodes == other.n_nodes && self.columns == other.columns
    }
}

fn transpose(n_nodes: usize, columns: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut rows = vec![Vec::new(); n_nodes];
    for (alpha, members) in columns.iter().enumerate() {
        for &i in members {
            rows[i as usize].push(alpha as u32);
        }
    }
    rows
}

/// Row sums (node degrees k), column sums (hyperedge sizes h) and their
/// shared total T of an incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSummary {
    node_degrees: Vec<u64>,
    hyperedge_degrees: Vec<u64>,
}

impl DegreeSummary {
    /// Builds a summary from explicit degree sequences.
    ///
    /// Requires the two sequences to share their total and each degree to be
    /// soft-graphical: `k_i <= L` and `h_a <= N`.
    pub fn new(node_degrees: Vec<u64>, hyperedge_degrees: Vec<u64>) -> Result<Self> {
        let n = node_degrees.len() as u64;
        let l = hyperedge_degrees.len() as u64;
        let kt: u64 = node_degrees.iter().sum();
        let ht: u64 = hyperedge_degrees.iter().sum();
        if kt != ht {
            return Err(Error::invalid(format!(
                "node degrees sum to {} but hyperedge degrees sum to {}",
                kt, ht
            )));
        }
        if let Some((i, &k)) = node_degrees.iter().enumerate().find(|(_, &k)| k > l) {
            return Err(Error::invalid(format!(
                "node degree k[{}] = {} exceeds L = {}",
                i, k, l
            )));
        }
        if let Some((a, &h)) = hyperedge_degrees.iter().enumerate().find(|(_, &h)| h > n) {
            return Err(Error::invalid(format!(
                "hyperedge degree h[{}] = {} exceeds N = {}",
                a, h, n
            )));
        }
        Ok(DegreeSummary {
            node_degrees,
            hyperedge_degrees,
        })
    }

    /// Number of nodes N.
    pub fn n_nodes(&self) -> usize {
        self.node_degrees.len()
    }

    /// Number of hyperedges L.
    pub fn n_hyperedges(&self) -> usize {
        self.hyperedge_degrees.len()
    }

    /// Node degrees k.
    pub fn node_degrees(&self) -> &[u64] {
        &self.node_degrees
    }

    /// Hyperedge sizes h.
    pub fn hyperedge_degrees(&self) -> &[u64] {
        &self.hyperedge_degrees
    }

    /// Total number of ones T.
    pub fn total(&self) -> u64 {
        self.node_degrees.iter().sum()
    }
}
