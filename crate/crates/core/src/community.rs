//! Seeded Louvain community detection for the validated projection.
//!
//! Greedy modularity optimization with the usual two phases: local moves
//! over nodes in a seed-shuffled order, then aggregation of communities
//! into super-nodes, repeated until the modularity gain falls below a
//! small cutoff. For a fixed seed the result is deterministic; ties
//! between candidate communities go to the smallest community id.

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;

use crate::rng::{derive_seed, sample_rng};
use crate::scalar::Real;
use crate::validation::ValidationResult;
use crate::{Error, Result};

/// Smallest modularity gain still counted as an improvement.
const MIN_GAIN: f64 = 1e-9;

/// A node partition with its modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community id per node; ids are contiguous from 0 in order of first
    /// appearance.
    pub assignments: Vec<u32>,
    /// Modularity of the partition on the input graph.
    pub modularity: f64,
}

impl Partition {
    /// Number of communities.
    pub fn community_count(&self) -> usize {
        self.assignments.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
    }
}

/// Weighted undirected graph in adjacency-list form. Each edge {i, j} must
/// appear in both endpoint lists with the same weight; self entries are
/// not allowed.
pub type Adjacency = Vec<Vec<(u32, f64)>>;

/// Builds the adjacency of the validated projection, weighting each
/// validated edge by its observed overlap.
pub fn validated_adjacency<F: Real>(result: &ValidationResult<F>, n_nodes: usize) -> Adjacency {
    let mut adjacency: Adjacency = vec![Vec::new(); n_nodes];
    for (i, j, w) in result.validated_edges() {
        adjacency[i as usize].push((j, w as f64));
        adjacency[j as usize].push((i, w as f64));
    }
    for list in &mut adjacency {
        list.sort_unstable_by_key(|&(j, _)| j);
    }
    adjacency
}

fn check_adjacency(adjacency: &Adjacency) -> Result<()> {
    let n = adjacency.len();
    let mut forward: Vec<(u32, u32, u64)> = Vec::new();
    let mut backward: Vec<(u32, u32, u64)> = Vec::new();
    for (i, list) in adjacency.iter().enumerate() {
        for &(j, w) in list {
            if j as usize >= n {
                return Err(Error::invalid(format!(
                    "neighbor index {j} out of range (n = {n})"
                )));
            }
            if j as usize == i {
                return Err(Error::invalid(format!("self entry on node {i}")));
            }
            if w < 0.0 || !w.is_finite() {
                return Err(Error::invalid(format!(
                    "edge ({i}, {j}) has invalid weight {w}"
                )));
            }
            forward.push((i as u32, j, w.to_bits()));
            backward.push((j, i as u32, w.to_bits()));
        }
    }
    forward.sort_unstable();
    backward.sort_unstable();
    if forward != backward {
        return Err(Error::invalid("adjacency is not symmetric"));
    }
    Ok(())
}

/// One level of the aggregated graph.
struct LevelGraph {
    adjacency: Adjacency,
    /// Internal weight folded onto each node by aggregation.
    self_loops: Vec<f64>,
}

impl LevelGraph {
    fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    fn strengths(&self) -> Vec<f64> {
        self.adjacency
            .iter()
            .zip(&self.self_loops)
            .map(|(list, &loop_w)| {
                list.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * loop_w
            })
            .collect()
    }

    fn total_weight_doubled(&self) -> f64 {
        self.strengths().iter().sum()
    }

    fn modularity_of(&self, assignments: &[u32]) -> f64 {
        let m2 = self.total_weight_doubled();
        if m2 == 0.0 {
            return 0.0;
        }
        let strengths = self.strengths();
        let mut internal: BTreeMap<u32, f64> = BTreeMap::new();
        let mut totals: BTreeMap<u32, f64> = BTreeMap::new();
        for (i, &c) in assignments.iter().enumerate() {
            *totals.entry(c).or_insert(0.0) += strengths[i];
            *internal.entry(c).or_insert(0.0) += 2.0 * self.self_loops[i];
            for &(j, w) in &self.adjacency[i] {
                if assignments[j as usize] == c {
                    *internal.entry(c).or_insert(0.0) += w;
                }
            }
        }
        internal
            .iter()
            .map(|(c, &in_c)| in_c / m2 - (totals[c] / m2).powi(2))
            .sum()
    }
}

/// Modularity of an assignment on a plain adjacency (no self-loops).
pub fn modularity(adjacency: &Adjacency, assignments: &[u32]) -> Result<f64> {
    check_adjacency(adjacency)?;
    if adjacency.len() != assignments.len() {
        return Err(Error::invalid(format!(
            "{} assignments for {} nodes",
            assignments.len(),
            adjacency.len()
        )));
    }
    let level = LevelGraph {
        adjacency: adjacency.clone(),
        self_loops: vec![0.0; adjacency.len()],
    };
    Ok(level.modularity_of(assignments))
}

/// Runs seeded Louvain on a weighted undirected graph.
pub fn louvain(adjacency: &Adjacency, seed: u64) -> Result<Partition> {
    check_adjacency(adjacency)?;
    let n = adjacency.len();
    if n == 0 {
        return Ok(Partition {
            assignments: Vec::new(),
            modularity: 0.0,
        });
    }

    let base = LevelGraph {
        adjacency: adjacency.clone(),
        self_loops: vec![0.0; n],
    };
    let singleton_q = base.modularity_of(&identity_assignment(n));
    if base.total_weight_doubled() == 0.0 {
        return Ok(Partition {
            assignments: identity_assignment(n),
            modularity: 0.0,
        });
    }

    let mut level = base;
    let mut global: Vec<u32> = identity_assignment(n);
    let mut best_q = singleton_q;
    for level_index in 0.. {
        let local = local_moves(&level, derive_seed(seed, level_index));
        let assignments = relabel(&local);
        let q = level.modularity_of(&assignments);
        let merged = assignments.iter().max().map(|&c| c as usize + 1).unwrap_or(0);
        if q <= best_q + MIN_GAIN || merged == level.node_count() {
            if q > best_q {
                for g in &mut global {
                    *g = assignments[*g as usize];
                }
            }
            break;
        }
        best_q = q;
        for g in &mut global {
            *g = assignments[*g as usize];
        }
        level = aggregate(&level, &assignments, merged);
    }

    let assignments = relabel(&global);
    let final_q = LevelGraph {
        adjacency: adjacency.clone(),
        self_loops: vec![0.0; n],
    }
    .modularity_of(&assignments);
    if final_q < singleton_q {
        return Ok(Partition {
            assignments: identity_assignment(n),
            modularity: singleton_q,
        });
    }
    Ok(Partition {
        assignments,
        modularity: final_q,
    })
}

fn identity_assignment(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

/// Renumbers community ids to be contiguous in order of first appearance.
fn relabel(assignments: &[u32]) -> Vec<u32> {
    let mut mapping: BTreeMap<u32, u32> = BTreeMap::new();
    let mut next = 0u32;
    assignments
        .iter()
        .map(|&c| {
            *mapping.entry(c).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

/// Phase one: move nodes between communities until no move helps.
fn local_moves(level: &LevelGraph, seed: u64) -> Vec<u32> {
    let n = level.node_count();
    let strengths = level.strengths();
    let m2 = level.total_weight_doubled();
    let mut community: Vec<u32> = identity_assignment(n);
    let mut community_total = strengths.clone();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut sample_rng(seed, 0));

    loop {
        let mut moved = false;
        for &u in &order {
            let current = community[u];
            let k_u = strengths[u];
            community_total[current as usize] -= k_u;

            let mut links: BTreeMap<u32, f64> = BTreeMap::new();
            links.entry(current).or_insert(0.0);
            for &(v, w) in &level.adjacency[u] {
                *links.entry(community[v as usize]).or_insert(0.0) += w;
            }

            let score = |c: u32, link: f64| link - k_u * community_total[c as usize] / m2;
            let stay = score(current, links[&current]);
            let mut best_c = current;
            let mut best_score = f64::NEG_INFINITY;
            for (&c, &link) in &links {
                if c == current {
                    continue;
                }
                let s = score(c, link);
                if s > best_score || (s == best_score && c < best_c) {
                    best_c = c;
                    best_score = s;
                }
            }

            let target = if best_score > stay + MIN_GAIN {
                best_c
            } else {
                current
            };
            community_total[target as usize] += k_u;
            if target != current {
                community[u] = target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    community
}

/// Phase two: collapse each community into a single node.
fn aggregate(level: &LevelGraph, assignments: &[u32], merged: usize) -> LevelGraph {
    let mut self_loops = vec![0.0; merged];
    let mut between: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for (u, &cu) in assignments.iter().enumerate() {
        self_loops[cu as usize] += level.self_loops[u];
        for &(v, w) in &level.adjacency[u] {
            let cv = assignments[v as usize];
            if cu == cv {
                // Each internal edge is visited from both endpoints.
                if (v as usize) > u {
                    self_loops[cu as usize] += w;
                }
            } else if cu < cv {
                *between.entry((cu, cv)).or_insert(0.0) += w;
            }
        }
    }
    let mut adjacency: Adjacency = vec![Vec::new(); merged];
    for (&(a, b), &w) in &between {
        adjacency[a as usize].push((b, w));
        adjacency[b as usize].push((a, w));
    }
    for list in &mut adjacency {
        list.sort_unstable_by_key(|&(j, _)| j);
    }
    LevelGraph {
        adjacency,
        self_loops,
    }
}

/// Writes a partition as CSV: `node,community`. Labels replace indices
/// when provided.
pub fn write_partition_csv<W: Write>(
    partition: &Partition,
    labels: Option<&[String]>,
    writer: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["node", "community"])?;
    for (i, &c) in partition.assignments.iter().enumerate() {
        let name = labels
            .and_then(|l| l.get(i).cloned())
            .unwrap_or_else(|| i.to_string());
        out.write_record([name, c.to_string()])?;
    }
    out.flush()?;
    Ok(())
}
