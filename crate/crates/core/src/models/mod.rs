//! Maximum-entropy null models over binary incidence matrices.
//!
//! Every model is a product measure: cell (i, a) is an independent Bernoulli
//! variable with probability `p(i, a)` determined by the model kind and its
//! multipliers. The kinds:
//!
//! * `rhm`: one global probability, fixing the expected total only.
//! * `hpcm-nodes` / `hpcm-hyperedges`: one probability per row (column),
//!   fixing expected node degrees (hyperedge sizes).
//! * `hcm`: probabilities `x_i y_a / (1 + x_i y_a)` fixing both degree
//!   sequences at once; solved iteratively, see [`fit_hcm`].
//! * `cla`: the Chung-Lu style approximation `k_i h_a / T`, clamped to 1.
//! * `fitness`: `z f_i g_a / (1 + z f_i g_a)` with externally given fitness
//!   scores and a density-controlling parameter z.

mod hcm;

pub use hcm::{fit_hcm, fit_hcm_targets, DEFAULT_HCM_MAX_ITER, DEFAULT_HCM_TOL};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::DegreeSummary;
use crate::scalar::{real, real_usize, Real};

/// Which null model a [`ModelSolution`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Random hypergraph model: uniform cell probability.
    Rhm,
    /// Hypergraph partial configuration model on node degrees.
    HpcmNodes,
    /// Hypergraph partial configuration model on hyperedge sizes.
    HpcmHyperedges,
    /// Hypergraph configuration model on both degree sequences.
    Hcm,
    /// Chung-Lu approximation of the configuration model.
    Cla,
    /// Fitness ensemble with given scores and density parameter.
    Fitness,
}

impl ModelKind {
    /// Serialized name, also used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rhm => "rhm",
            ModelKind::HpcmNodes => "hpcm-nodes",
            ModelKind::HpcmHyperedges => "hpcm-hyperedges",
            ModelKind::Hcm => "hcm",
            ModelKind::Cla => "cla",
            ModelKind::Fitness => "fitness",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rhm" => Ok(ModelKind::Rhm),
            "hpcm-nodes" => Ok(ModelKind::HpcmNodes),
            "hpcm-hyperedges" => Ok(ModelKind::HpcmHyperedges),
            "hcm" => Ok(ModelKind::Hcm),
            "cla" => Ok(ModelKind::Cla),
            "fitness" => Ok(ModelKind::Fitness),
            other => Err(Error::invalid(format!(
                "unknown model kind {:?} (expected rhm, hpcm-nodes, hpcm-hyperedges, hcm, cla \
                 or fitness)",
                other
            ))),
        }
    }
}

/// A fitted (or directly constructed) null model.
///
/// The struct serializes to the JSON object
/// `{kind, N, L, x, y, p_or_z, residual, clamp_count, ...}`; `x`/`y` are the
/// per-node and per-hyperedge multipliers when the kind has them. For `hcm`
/// solutions whose inputs force boundary probabilities (zero or saturated
/// lines), the optional `row_stamp`/`col_stamp` arrays record the removal
/// cascade: entry 0 marks an interior line, a positive stamp t a line whose
/// remaining cells were fixed to 0 at step t, a negative stamp -t a line
/// fixed to 1 at step t. Cells between two removed lines take the value of
/// the line removed first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSolution<F> {
    /// Model kind.
    pub kind: ModelKind,
    /// Number of nodes N.
    #[serde(rename = "N")]
    pub n_nodes: usize,
    /// Number of hyperedges L.
    #[serde(rename = "L")]
    pub n_hyperedges: usize,
    /// Per-node multipliers (kind dependent), if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Vec<F>>,
    /// Per-hyperedge multipliers (kind dependent), if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<Vec<F>>,
    /// Global scalar: p for `rhm`, z for `fitness`.
    #[serde(rename = "p_or_z", skip_serializing_if = "Option::is_none", default)]
    pub scalar: Option<F>,
    /// Max-norm violation of the constraints the kind is meant to satisfy.
    pub residual: F,
    /// Number of cells clamped to probability 1 (`cla` only).
    #[serde(default)]
    pub clamp_count: u64,
    /// Boundary removal stamps for rows (`hcm` only; see the type docs).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub row_stamp: Vec<i32>,
    /// Boundary removal stamps for columns (`hcm` only).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub col_stamp: Vec<i32>,
}

/// State of one row or column line in an `hcm` solution.
#[derive(Debug, Clone, Copy, PartialEq)]
enum LineState<F> {
    Interior(F),
    Removed { order: u32, one: bool },
}

impl<F: Real> ModelSolution<F> {
    /// Cell probability p(i, a).
    pub fn p(&self, i: usize, alpha: usize) -> F {
        debug_assert!(i < self.n_nodes && alpha < self.n_hyperedges);
        match self.kind {
            ModelKind::Rhm => self.scalar.expect("rhm stores p"),
            ModelKind::HpcmNodes => self.x.as_ref().expect("hpcm-nodes stores x")[i],
            ModelKind::HpcmHyperedges => self.y.as_ref().expect("hpcm-hyperedges stores y")[alpha],
            ModelKind::Cla => {
                let x = self.x.as_ref().expect("cla stores x")[i];
                let y = self.y.as_ref().expect("cla stores y")[alpha];
                (x * y).min(F::one())
            }
            ModelKind::Fitness => {
                let z = self.scalar.expect("fitness stores z");
                let x = self.x.as_ref().expect("fitness stores f")[i];
                let y = self.y.as_ref().expect("fitness stores g")[alpha];
                odds_to_prob(z * x * y)
            }
            ModelKind::Hcm => {
                let row = self.row_state(i);
                let col = self.col_state(alpha);
                match (row, col) {
                    (LineState::Interior(x), LineState::Interior(y)) => odds_to_prob(x * y),
                    (LineState::Removed { one, .. }, LineState::Interior(_)) => forced(one),
                    (LineState::Interior(_), LineState::Removed { one, .. }) => forced(one),
                    (
                        LineState::Removed { order: o1, one: v1 },
                        LineState::Removed { order: o2, one: v2 },
                    ) => forced(if o1 < o2 { v1 } else { v2 }),
                }
            }
        }
    }

    fn row_state(&self, i: usize) -> LineState<F> {
        line_state(&self.row_stamp, self.x.as_ref().expect("hcm stores x"), i)
    }

    fn col_state(&self, alpha: usize) -> LineState<F> {
        line_state(&self.col_stamp, self.y.as_ref().expect("hcm stores y"), alpha)
    }

    /// Expected number of ones, sum of all cell probabilities.
    pub fn expected_total(&self) -> F {
        let n = real_usize::<F>(self.n_nodes);
        let l = real_usize::<F>(self.n_hyperedges);
        match self.kind {
            ModelKind::Rhm => n * l * self.scalar.expect("rhm stores p"),
            ModelKind::HpcmNodes => {
                let x = self.x.as_ref().expect("hpcm-nodes stores x");
                x.iter().copied().sum::<F>() * l
            }
            ModelKind::HpcmHyperedges => {
                let y = self.y.as_ref().expect("hpcm-hyperedges stores y");
                y.iter().copied().sum::<F>() * n
            }
            _ => {
                let mut total = F::zero();
                for i in 0..self.n_nodes {
                    for alpha in 0..self.n_hyperedges {
                        total += self.p(i, alpha);
                    }
                }
                total
            }
        }
    }

    /// Expected density, expected total over N L.
    pub fn expected_density(&self) -> F {
        let cells = real_usize::<F>(self.n_nodes) * real_usize::<F>(self.n_hyperedges);
        if cells == F::zero() {
            F::zero()
        } else {
            self.expected_total() / cells
        }
    }

    /// Expected node degrees, row sums of the probability matrix.
    pub fn expected_node_degrees(&self) -> Vec<F> {
        (0..self.n_nodes)
            .map(|i| {
                (0..self.n_hyperedges)
                    .map(|alpha| self.p(i, alpha))
                    .sum::<F>()
            })
            .collect()
    }

    /// Expected hyperedge sizes, column sums of the probability matrix.
    pub fn expected_hyperedge_degrees(&self) -> Vec<F> {
        (0..self.n_hyperedges)
            .map(|alpha| (0..self.n_nodes).map(|i| self.p(i, alpha)).sum::<F>())
            .collect()
    }

    /// One probability column as a dense vector.
    pub fn column_probabilities(&self, alpha: usize) -> Vec<F> {
        (0..self.n_nodes).map(|i| self.p(i, alpha)).collect()
    }

    /// Checks internal consistency after deserialization.
    pub fn validate(&self) -> Result<()> {
        let need = |cond: bool, what: &str| {
            if cond {
                Ok(())
            } else {
                Err(Error::invalid(format!(
                    "{} solution is missing or mis-sized {}",
                    self.kind, what
                )))
            }
        };
        let x_len = self.x.as_ref().map(Vec::len);
        let y_len = self.y.as_ref().map(Vec::len);
        match self.kind {
            ModelKind::Rhm => need(self.scalar.is_some(), "p")?,
            ModelKind::HpcmNodes => need(x_len == Some(self.n_nodes), "x")?,
            ModelKind::HpcmHyperedges => need(y_len == Some(self.n_hyperedges), "y")?,
            ModelKind::Cla | ModelKind::Hcm => {
                need(x_len == Some(self.n_nodes), "x")?;
                need(y_len == Some(self.n_hyperedges), "y")?;
            }
            ModelKind::Fitness => {
                need(x_len == Some(self.n_nodes), "f")?;
                need(y_len == Some(self.n_hyperedges), "g")?;
                need(self.scalar.is_some(), "z")?;
            }
        }
        if !self.row_stamp.is_empty() {
            need(self.row_stamp.len() == self.n_nodes, "row stamps")?;
        }
        if !self.col_stamp.is_empty() {
            need(self.col_stamp.len() == self.n_hyperedges, "col stamps")?;
        }
        Ok(())
    }
}

fn line_state<F: Real>(stamps: &[i32], values: &[F], index: usize) -> LineState<F> {
    let stamp = stamps.get(index).copied().unwrap_or(0);
    if stamp == 0 {
        LineState::Interior(values[index])
    } else {
        LineState::Removed {
            order: stamp.unsigned_abs(),
            one: stamp < 0,
        }
    }
}

fn forced<F: Real>(one: bool) -> F {
    if one {
        F::one()
    } else {
        F::zero()
    }
}

/// Probability `o / (1 + o)` of a Bernoulli cell with odds `o`, saturating
/// at 1 when the odds overflow.
pub(crate) fn odds_to_prob<F: Real>(odds: F) -> F {
    if odds.is_finite() {
        odds / (F::one() + odds)
    } else {
        F::one()
    }
}

/// Fits the uniform model: p = T / (N L).
pub fn fit_rhm<F: Real>(d: &DegreeSummary) -> ModelSolution<F> {
    let cells = (d.n_nodes() * d.n_hyperedges()) as u64;
    let p = if cells == 0 {
        F::zero()
    } else {
        real::<F>(d.total()) / real::<F>(cells)
    };
    let residual = (real_usize::<F>(d.n_nodes()) * real_usize::<F>(d.n_hyperedges()) * p
        - real::<F>(d.total()))
    .abs();
    ModelSolution {
        kind: ModelKind::Rhm,
        n_nodes: d.n_nodes(),
        n_hyperedges: d.n_hyperedges(),
        x: None,
        y: None,
        scalar: Some(p),
        residual,
        clamp_count: 0,
        row_stamp: Vec::new(),
        col_stamp: Vec::new(),
    }
}

/// Builds a uniform model with an explicitly chosen cell probability.
///
/// Used by density sweeps, where the grid point is a real density rather
/// than an integer total.
pub fn rhm_with_probability<F: Real>(
    n_nodes: usize,
    n_hyperedges: usize,
    p: F,
) -> Result<ModelSolution<F>> {
    if !(F::zero()..=F::one()).contains(&p) {
        return Err(Error::invalid(format!(
            "uniform cell probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(ModelSolution {
        kind: ModelKind::Rhm,
        n_nodes,
        n_hyperedges,
        x: None,
        y: None,
        scalar: Some(p),
        residual: F::zero(),
        clamp_count: 0,
        row_stamp: Vec::new(),
        col_stamp: Vec::new(),
    })
}

/// Fits the node-degree partial configuration model: p(i, .) = k_i / L.
pub fn fit_hpcm_nodes<F: Real>(d: &DegreeSummary) -> ModelSolution<F> {
    let l = real_usize::<F>(d.n_hyperedges());
    let x: Vec<F> = d
        .node_degrees()
        .iter()
        .map(|&k| if l > F::zero() { real::<F>(k) / l } else { F::zero() })
        .collect();
    let residual = d
        .node_degrees()
        .iter()
        .zip(&x)
        .map(|(&k, &p)| (p * l - real::<F>(k)).abs())
        .fold(F::zero(), F::max);
    ModelSolution {
        kind: ModelKind::HpcmNodes,
        n_nodes: d.n_nodes(),
        n_hyperedges: d.n_hyperedges(),
        x: Some(x),
        y: None,
        scalar: None,
        residual,
        clamp_count: 0,
        row_stamp: Vec::new(),
        col_stamp: Vec::new(),
    }
}

/// Fits the hyperedge-size partial configuration model: p(., a) = h_a / N.
pub fn fit_hpcm_hyperedges<F: Real>(d: &DegreeSummary) -> ModelSolution<F> {
    let n = real_usize::<F>(d.n_nodes());
    let y: Vec<F> = d
        .hyperedge_degrees()
        .iter()
        .map(|&h| if n > F::zero() { real::<F>(h) / n } else { F::zero() })
        .collect();
    let residual = d
        .hyperedge_degrees()
        .iter()
        .zip(&y)
        .map(|(&h, &p)| (p * n - real::<F>(h)).abs())
        .fold(F::zero(), F::max);
    ModelSolution {
        kind: ModelKind::HpcmHyperedges,
        n_nodes: d.n_nodes(),
        n_hyperedges: d.n_hyperedges(),
        x: None,
        y: Some(y),
        scalar: None,
        residual,
        clamp_count: 0,
        row_stamp: Vec::new(),
        col_stamp: Vec::new(),
    }
}

/// Fits the Chung-Lu approximation: p(i, a) = min(1, k_i h_a / T), stored
/// through the multipliers x_i = k_i / sqrt(T), y_a = h_a / sqrt(T).
pub fn fit_cla<F: Real>(d: &DegreeSummary) -> ModelSolution<F> {
    let t = d.total();
    let sqrt_t = real::<F>(t).sqrt();
    let x: Vec<F> = d
        .node_degrees()
        .iter()
        .map(|&k| if t > 0 { real::<F>(k) / sqrt_t } else { F::zero() })
        .collect();
    let y: Vec<F> = d
        .hyperedge_degrees()
        .iter()
        .map(|&h| if t > 0 { real::<F>(h) / sqrt_t } else { F::zero() })
        .collect();

    // Clamp count and residual over distinct degree classes.
    let row_classes = count_classes(d.node_degrees());
    let col_classes = count_classes(d.hyperedge_degrees());
    let mut clamp_count = 0u64;
    for (&k, &mk) in &row_classes {
        for (&h, &mh) in &col_classes {
            if t > 0 && k * h > t {
                clamp_count += mk * mh;
            }
        }
    }
    let solution = ModelSolution {
        kind: ModelKind::Cla,
        n_nodes: d.n_nodes(),
        n_hyperedges: d.n_hyperedges(),
        x: Some(x),
        y: Some(y),
        scalar: None,
        residual: F::zero(),
        clamp_count,
        row_stamp: Vec::new(),
        col_stamp: Vec::new(),
    };
    let residual = constraint_residual(&solution, d);
    ModelSolution {
        residual,
        ..solution
    }
}

/// Builds a fitness ensemble with scores `f`, `g` and density parameter `z`.
pub fn fitness_model<F: Real>(f: Vec<F>, g: Vec<F>, z: F) -> Result<ModelSolution<F>> {
    if z <= F::zero() || !z.is_finite() {
        return Err(Error::invalid(format!("z must be positive and finite, got {z}")));
    }
    for (name, scores) in [("f", &f), ("g", &g)] {
        if let Some((idx, &v)) = scores
            .iter()
            .enumerate()
            .find(|(_, &v)| v <= F::zero() || !v.is_finite())
        {
            return Err(Error::invalid(format!(
                "fitness {}[{}] = {} must be positive and finite",
                name, idx, v
            )));
        }
    }
    Ok(ModelSolution {
        kind: ModelKind::Fitness,
        n_nodes: f.len(),
        n_hyperedges: g.len(),
        x: Some(f),
        y: Some(g),
        scalar: Some(z),
        residual: F::zero(),
        clamp_count: 0,
        row_stamp: Vec::new(),
        col_stamp: Vec::new(),
    })
}

/// Finds z such that the fitness ensemble with scores `f`, `g` has expected
/// density `target`, by bisection on log z.
pub fn solve_z_for_density<F: Real>(
    f: &[F],
    g: &[F],
    target: F,
    tol: F,
) -> Result<ModelSolution<F>> {
    if f.is_empty() || g.is_empty() {
        return Err(Error::invalid("fitness lists must be nonempty"));
    }
    if !(target > F::zero() && target <= F::one()) {
        return Err(Error::invalid(format!(
            "target density {target} must lie in (0, 1]"
        )));
    }
    let density = |z: F| -> F {
        let mut total = F::zero();
        for &fi in f {
            for &ga in g {
                total += odds_to_prob(z * fi * ga);
            }
        }
        total / (real_usize::<F>(f.len()) * real_usize::<F>(g.len()))
    };

    let ceiling = F::from_f64(1e300).expect("large bound");
    let floor = F::from_f64(1e-300).expect("small bound");
    let mut lo = F::one();
    let mut hi = F::one();
    let grow = F::from_f64(16.0).expect("step");
    let mut guard = 0;
    while density(lo) > target && lo > floor {
        lo /= grow;
        guard += 1;
        if guard > 500 {
            break;
        }
    }
    guard = 0;
    while density(hi) < target && hi < ceiling {
        hi *= grow;
        guard += 1;
        if guard > 500 {
            break;
        }
    }

    let mut best = har_mid(lo, hi);
    for _ in 0..400 {
        let mid = har_mid(lo, hi);
        let d = density(mid);
        best = mid;
        if (d - target).abs() <= tol {
            break;
        }
        if d < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = best;
    let achieved = density(z);
    if (achieved - target).abs() > tol * F::from_f64(100.0).expect("scale") {
        return Err(Error::NonConvergence {
            iterations: 400,
            residual: (achieved - target).abs().to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut solution = fitness_model(f.to_vec(), g.to_vec(), z)?;
    solution.residual = (achieved - target).abs();
    Ok(solution)
}

fn har_mid<F: Real>(lo: F, hi: F) -> F {
    ((lo.ln() + hi.ln()) / F::from_f64(2.0).expect("two")).exp()
}

/// Max violation of the degree constraints a kind claims to satisfy,
/// evaluated cell by cell through `p`.
pub fn constraint_residual<F: Real>(solution: &ModelSolution<F>, d: &DegreeSummary) -> F {
    let rows = solution.expected_node_degrees();
    let cols = solution.expected_hyperedge_degrees();
    let row_res = rows
        .iter()
        .zip(d.node_degrees())
        .map(|(&got, &want)| (got - real::<F>(want)).abs())
        .fold(F::zero(), F::max);
    let col_res = cols
        .iter()
        .zip(d.hyperedge_degrees())
        .map(|(&got, &want)| (got - real::<F>(want)).abs())
        .fold(F::zero(), F::max);
    match solution.kind {
        ModelKind::HpcmNodes => row_res,
        ModelKind::HpcmHyperedges => col_res,
        _ => row_res.max(col_res),
    }
}

fn count_classes(values: &[u64]) -> std::collections::BTreeMap<u64, u64> {
    let mut map = std::collections::BTreeMap::new();
    for &v in values {
        *map.entry(v).or_insert(0) += 1;
    }
    map
}
