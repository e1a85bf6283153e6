//! Co-membership eigenvector centrality.
//!
//! The centrality is the Perron-Frobenius eigenvector of the weighted
//! projection W, found by shifted power iteration from a uniform positive
//! start. The shift (W + I) leaves eigenvectors untouched while breaking the
//! sign oscillation a bipartite component would otherwise sustain, so the
//! iteration is deterministic and always settles on the dominant eigenpair.

use crate::error::{Error, Result};
use crate::projection::ProjectionGraph;
use crate::scalar::{real_usize, Real};

/// Symmetric nonnegative weight matrix in adjacency-list form.
///
/// Only strictly positive entries are stored; the diagonal is ignored.
#[derive(Debug, Clone)]
pub struct SymmetricWeights<F> {
    n: usize,
    adjacency: Vec<Vec<(u32, F)>>,
}

impl<F: Real> SymmetricWeights<F> {
    /// Adopts the integer weights of a projection graph.
    pub fn from_projection(g: &ProjectionGraph) -> Self {
        let n = g.n_nodes();
        let adjacency = (0..n)
            .map(|i| {
                g.neighbors(i)
                    .iter()
                    .map(|&(j, w)| (j, F::from_u64(w).expect("weight fits scalar")))
                    .collect()
            })
            .collect();
        SymmetricWeights { n, adjacency }
    }

    /// Builds from a dense square matrix.
    ///
    /// Entries must be nonnegative and symmetric; the diagonal is dropped.
    pub fn from_dense(rows: &[Vec<F>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {} has {} entries in an {}x{} matrix",
                    i,
                    row.len(),
                    n,
                    n
                )));
            }
        }
        let mut adjacency: Vec<Vec<(u32, F)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = rows[i][j];
                if w < F::zero() || !w.is_finite() {
                    return Err(Error::invalid(format!(
                        "weight w[{}][{}] = {} is not a finite nonnegative value",
                        i, j, w
                    )));
                }
                if (w - rows[j][i]).abs() > F::epsilon() * w.abs().max(F::one()) {
                    return Err(Error::invalid(format!(
                        "weights are not symmetric at ({}, {})",
                        i, j
                    )));
                }
                if w > F::zero() {
                    adjacency[i].push((j as u32, w));
                    adjacency[j].push((i as u32, w));
                }
            }
        }
        Ok(SymmetricWeights { n, adjacency })
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    fn matvec(&self, v: &[F], out: &mut [F]) {
        for (i, row) in self.adjacency.iter().enumerate() {
            let mut acc = F::zero();
            for &(j, w) in row {
                acc += w * v[j as usize];
            }
            out[i] = acc;
        }
    }

    /// Connected components over positive weights, singletons included,
    /// listed in order of their smallest node.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut queue = vec![start as u32];
            seen[start] = true;
            let mut members = Vec::new();
            while let Some(node) = queue.pop() {
                members.push(node);
                for &(j, _) in &self.adjacency[node as usize] {
                    if !seen[j as usize] {
                        seen[j as usize] = true;
                        queue.push(j);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    fn has_edges(&self) -> bool {
        self.adjacency.iter().any(|row| !row.is_empty())
    }
}

/// Converged dominant eigenpair of a weight matrix.
#[derive(Debug, Clone)]
pub struct CecResult<F> {
    /// Entrywise nonnegative eigenvector with unit Euclidean norm; zero on
    /// nodes outside the component that was used.
    pub vector: Vec<F>,
    /// Rayleigh quotient v^T W v at convergence.
    pub eigenvalue: F,
    /// Iterations performed.
    pub iterations: usize,
    /// Final max-norm residual of W v - lambda v.
    pub residual: F,
    /// True when W was disconnected and the centrality covers only the
    /// largest component.
    pub disconnected: bool,
}

/// Computes the co-membership eigenvector centrality of `w`.
///
/// Disconnected matrices are restricted to their largest component (ties
/// broken toward the component holding the smallest node index) and flagged.
/// An all-zero matrix has no meaningful centrality and is an error.
pub fn cec<F: Real>(w: &SymmetricWeights<F>, tol: F, max_iter: usize) -> Result<CecResult<F>> {
    if w.n() == 0 || !w.has_edges() {
        return Err(Error::invalid(
            "centrality of an all-zero weight matrix is undefined",
        ));
    }
    let components = w.components();
    let mut largest: &Vec<u32> = &components[0];
    for c in &components[1..] {
        if c.len() > largest.len() {
            largest = c;
        }
    }
    let disconnected = largest.len() < w.n();

    // Dense index map for the chosen component.
    let local: std::collections::HashMap<u32, u32> = largest
        .iter()
        .enumerate()
        .map(|(pos, &node)| (node, pos as u32))
        .collect();
    let size = largest.len();
    let sub: Vec<Vec<(u32, F)>> = largest
        .iter()
        .map(|&node| {
            w.adjacency[node as usize]
                .iter()
                .map(|&(j, wt)| (local[&j], wt))
                .collect()
        })
        .collect();
    let sub = SymmetricWeights {
        n: size,
        adjacency: sub,
    };

    let uniform = F::one() / real_usize::<F>(size).sqrt();
    let mut v = vec![uniform; size];
    let mut y = vec![F::zero(); size];
    let ten = F::from_u8(10).expect("small constant");
    let mut residual = F::infinity();
    for iteration in 1..=max_iter {
        sub.matvec(&v, &mut y);
        let eigenvalue = dot(&v, &y);
        residual = v
            .iter()
            .zip(&y)
            .map(|(&vi, &yi)| (yi - eigenvalue * vi).abs())
            .fold(F::zero(), F::max);
        // Shifted step: z = (W + I) v, renormalized.
        let norm = v
            .iter()
            .zip(&y)
            .map(|(&vi, &yi)| (yi + vi) * (yi + vi))
            .sum::<F>()
            .sqrt();
        let mut diff = F::zero();
        for (vi, &yi) in v.iter_mut().zip(&y) {
            let next = (yi + *vi) / norm;
            diff = diff.max((next - *vi).abs());
            *vi = next;
        }
        if diff < tol && residual <= ten * tol {
            let mut vector = vec![F::zero(); w.n()];
            for (pos, &node) in largest.iter().enumerate() {
                vector[node as usize] = v[pos];
            }
            return Ok(CecResult {
                vector,
                eigenvalue,
                iterations: iteration,
                residual,
                disconnected,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Default power-iteration tolerance used by the command-line tool.
pub const DEFAULT_CEC_TOL: f64 = 1e-10;
/// Default power-iteration budget.
pub const DEFAULT_CEC_MAX_ITER: usize = 100_000;

fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}
