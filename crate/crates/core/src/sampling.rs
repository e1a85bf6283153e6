//! Ensemble sampling: canonical draws from a fitted model and
//! constraint-preserving shuffles of an observed matrix.
//!
//! Both samplers are deterministic functions of `(input, count, seed)`.
//! Canonical cells use the counter-based generator from [`crate::rng`], so
//! the batch is identical no matter how samples are distributed over
//! threads; shuffles draw from an independent ChaCha8 stream per sample.

use std::collections::HashMap;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::incidence::IncidenceMatrix;
use crate::models::ModelSolution;
use crate::rng::{cell_uniform, sample_rng};
use crate::scalar::Real;
use crate::{Error, Result};

/// How the matrices of a batch were generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// Independent Bernoulli draw per cell from a model.
    Canonical,
    /// Uniform rearrangement of all 1s; preserves the total T.
    ShuffleAll,
    /// Independent rearrangement within each row; preserves every degree.
    ShuffleRows,
    /// Independent rearrangement within each column; preserves every
    /// hyperdegree.
    ShuffleCols,
}

/// Shuffle flavor accepted by [`shuffle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShuffleKind {
    /// Rearrange all 1s over the whole matrix.
    All,
    /// Rearrange the 1s of each row along that row.
    Rows,
    /// Rearrange the 1s of each column along that column.
    Columns,
}

impl ShuffleKind {
    /// The batch kind produced by this shuffle.
    pub fn sample_kind(self) -> SampleKind {
        match self {
            ShuffleKind::All => SampleKind::ShuffleAll,
            ShuffleKind::Rows => SampleKind::ShuffleRows,
            ShuffleKind::Columns => SampleKind::ShuffleCols,
        }
    }
}

impl FromStr for ShuffleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ShuffleKind::All),
            "rows" => Ok(ShuffleKind::Rows),
            "cols" | "columns" => Ok(ShuffleKind::Columns),
            other => Err(Error::invalid(format!(
                "unknown shuffle kind '{other}' (expected all, rows or cols)"
            ))),
        }
    }
}

/// A reproducible collection of sampled incidence matrices.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    /// The sampled matrices, in sample order.
    pub matrices: Vec<IncidenceMatrix>,
    /// Seed the batch was generated from.
    pub seed: u64,
    /// How the matrices were generated.
    pub kind: SampleKind,
}

/// Draws one canonical sample: cell (i, α) is set with probability p(i, α).
pub fn canonical_matrix<F: Real>(
    model: &ModelSolution<F>,
    sample: u64,
    seed: u64,
) -> IncidenceMatrix {
    let n = model.n_nodes;
    let l = model.n_hyperedges;
    let mut columns = Vec::with_capacity(l);
    for alpha in 0..l {
        let mut members = Vec::new();
        for i in 0..n {
            let p = model.p(i, alpha).to_f64().unwrap_or(0.0);
            if cell_uniform(seed, sample, i as u64, alpha as u64) < p {
                members.push(i as u32);
            }
        }
        columns.push(members);
    }
    IncidenceMatrix::from_memberships(n, columns).expect("generated cells are in range")
}

/// Draws `count` canonical samples from the model.
///
/// The batch depends only on `(model, count, seed)`; generation is
/// parallelized over samples without affecting the result.
pub fn sample<F: Real>(model: &ModelSolution<F>, count: usize, seed: u64) -> SampleBatch {
    let matrices = (0..count)
        .into_par_iter()
        .map(|s| canonical_matrix(model, s as u64, seed))
        .collect();
    SampleBatch {
        matrices,
        seed,
        kind: SampleKind::Canonical,
    }
}

/// Applies `f` to each canonical sample without retaining the matrices.
///
/// Results come back in sample order, so downstream reductions are
/// independent of the number of worker threads.
pub fn map_samples<F, S, G>(model: &ModelSolution<F>, count: usize, seed: u64, f: G) -> Vec<S>
where
    F: Real,
    S: Send,
    G: Fn(usize, &IncidenceMatrix) -> S + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|s| f(s, &canonical_matrix(model, s as u64, seed)))
        .collect()
}

/// Draws one shuffled rearrangement of `m`.
pub fn shuffled_matrix(
    m: &IncidenceMatrix,
    kind: ShuffleKind,
    sample: u64,
    seed: u64,
) -> IncidenceMatrix {
    let mut rng = sample_rng(seed, sample);
    let n = m.n_nodes();
    let l = m.n_hyperedges();
    let mut columns = vec![Vec::new(); l];
    match kind {
        ShuffleKind::All => {
            let positions = (n as u64) * (l as u64);
            for cell in sample_distinct(&mut rng, positions, m.total_ones()) {
                let alpha = (cell / n as u64) as usize;
                columns[alpha].push((cell % n as u64) as u32);
            }
        }
        ShuffleKind::Rows => {
            for i in 0..n {
                let k = m.node_memberships(i).len() as u64;
                for alpha in sample_distinct(&mut rng, l as u64, k) {
                    columns[alpha as usize].push(i as u32);
                }
            }
        }
        ShuffleKind::Columns => {
            for (alpha, column) in columns.iter_mut().enumerate() {
                let h = m.hyperedge_members(alpha).len() as u64;
                *column = sample_distinct(&mut rng, n as u64, h)
                    .into_iter()
                    .map(|i| i as u32)
                    .collect();
            }
        }
    }
    IncidenceMatrix::from_memberships(n, columns).expect("shuffled cells are in range")
}

/// Draws `count` constraint-preserving shuffles of `m`.
pub fn shuffle(m: &IncidenceMatrix, kind: ShuffleKind, count: usize, seed: u64) -> SampleBatch {
    let matrices = (0..count)
        .into_par_iter()
        .map(|s| shuffled_matrix(m, kind, s as u64, seed))
        .collect();
    SampleBatch {
        matrices,
        seed,
        kind: kind.sample_kind(),
    }
}

/// Applies `f` to each shuffle without retaining the matrices.
pub fn map_shuffles<S, G>(
    m: &IncidenceMatrix,
    kind: ShuffleKind,
    count: usize,
    seed: u64,
    f: G,
) -> Vec<S>
where
    S: Send,
    G: Fn(usize, &IncidenceMatrix) -> S + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|s| f(s, &shuffled_matrix(m, kind, s as u64, seed)))
        .collect()
}

/// Samples `count` distinct values from `0..population` (partial
/// Fisher-Yates over a virtual array).
fn sample_distinct(rng: &mut ChaCha8Rng, population: u64, count: u64) -> Vec<u64> {
    assert!(count <= population, "cannot sample {count} of {population}");
    let mut remapped: HashMap<u64, u64> = HashMap::new();
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let j = rng.gen_range(idx..population);
        let chosen = remapped.get(&j).copied().unwrap_or(j);
        let displaced = remapped.get(&idx).copied().unwrap_or(idx);
        remapped.insert(j, displaced);
        out.push(chosen);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::DegreeSummary;
    use crate::models::{fit_rhm, ModelSolution};
    use crate::rng::sample_rng;

    fn small_matrix() -> IncidenceMatrix {
        IncidenceMatrix::from_memberships(
            4,
            vec![vec![0, 1, 2], vec![1, 3], vec![0], vec![], vec![2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn canonical_extremes() {
        let d = DegreeSummary::new(vec![0, 0, 0], vec![0, 0]).unwrap();
        let zero: ModelSolution<f64> = fit_rhm(&d);
        let batch = sample(&zero, 3, 1);
        assert!(batch.matrices.iter().all(|m| m.total_ones() == 0));

        let d = DegreeSummary::new(vec![2, 2, 2], vec![3, 3]).unwrap();
        let full: ModelSolution<f64> = fit_rhm(&d);
        let batch = sample(&full, 3, 1);
        assert!(batch.matrices.iter().all(|m| m.total_ones() == 6));
    }

    #[test]
    fn batches_are_reproducible() {
        let d = DegreeSummary::new(vec![2, 1, 1], vec![2, 1, 1, 0]).unwrap();
        let model: ModelSolution<f64> = fit_rhm(&d);
        let a = sample(&model, 5, 99);
        let b = sample(&model, 5, 99);
        for (x, y) in a.matrices.iter().zip(&b.matrices) {
            assert!(x.same_cells(y));
        }
        let c = sample(&model, 5, 100);
        assert!(a.matrices.iter().zip(&c.matrices).any(|(x, y)| !x.same_cells(y)));
    }

    #[test]
    fn map_matches_materialized_batch() {
        let d = DegreeSummary::new(vec![2, 1, 1], vec![2, 1, 1, 0]).unwrap();
        let model: ModelSolution<f64> = fit_rhm(&d);
        let counts = map_samples(&model, 6, 7, |_, m| m.total_ones());
        let batch = sample(&model, 6, 7);
        let direct: Vec<u64> = batch.matrices.iter().map(|m| m.total_ones()).collect();
        assert_eq!(counts, direct);
    }

    #[test]
    fn shuffle_all_preserves_total() {
        let m = small_matrix();
        let batch = shuffle(&m, ShuffleKind::All, 20, 5);
        for s in &batch.matrices {
            assert_eq!(s.total_ones(), m.total_ones());
            assert_eq!(s.n_nodes(), 4);
            assert_eq!(s.n_hyperedges(), 5);
        }
    }

    #[test]
    fn shuffle_rows_preserves_degrees() {
        let m = small_matrix();
        let want = m.degree_summary().node_degrees().to_vec();
        let batch = shuffle(&m, ShuffleKind::Rows, 20, 5);
        for s in &batch.matrices {
            assert_eq!(s.degree_summary().node_degrees(), want.as_slice());
        }
    }

    #[test]
    fn shuffle_cols_preserves_hyperdegrees() {
        let m = small_matrix();
        let want = m.degree_summary().hyperedge_degrees().to_vec();
        let batch = shuffle(&m, ShuffleKind::Columns, 20, 5);
        for s in &batch.matrices {
            assert_eq!(s.degree_summary().hyperedge_degrees(), want.as_slice());
        }
    }

    #[test]
    fn distinct_sampling_is_exact_and_uniformish() {
        let mut rng = sample_rng(3, 0);
        let mut histogram = [0u32; 6];
        for _ in 0..3000 {
            let picks = sample_distinct(&mut rng, 6, 3);
            let mut sorted = picks.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 3);
            for p in picks {
                histogram[p as usize] += 1;
            }
        }
        // Each value should appear about 3000 * 3/6 = 1500 times.
        for count in histogram {
            assert!((1350..1650).contains(&count), "histogram {histogram:?}");
        }
    }

    #[test]
    fn shuffle_kind_parsing() {
        assert_eq!(ShuffleKind::from_str("rows").unwrap(), ShuffleKind::Rows);
        assert_eq!(ShuffleKind::from_str("cols").unwrap(), ShuffleKind::Columns);
        assert!(ShuffleKind::from_str("sideways").is_err());
    }
}
