//! Density sweeps: analytic regime curves with Monte Carlo confirmation.
//!
//! A sweep walks a density grid, builds the requested ensemble at each
//! point, evaluates the analytic regime quantities, and estimates the same
//! quantities from canonical samples with a normal-approximation 95%
//! confidence band. Output rows are model-independent CSV records.
//!
//! The sampling seed never feeds the analytic columns. For fitness
//! ensembles the fitness vectors are drawn from a separate `fitness_seed`,
//! so re-running with a different sampling seed reproduces the same
//! analytic curve.

use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Pareto};

use crate::models::{rhm_with_probability, solve_z_for_density, ModelSolution};
use crate::regime::{observed_empty_count, observed_parallel_fraction, regime_report};
use crate::rng::{derive_seed, sample_rng};
use crate::sampling::map_samples;
use crate::{Error, Result};

/// How node or hyperedge fitness scores are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitnessDistribution {
    /// All scores equal to one.
    Constant,
    /// Uniform on (0, 1].
    Uniform,
    /// Pareto with scale 1 and the given shape.
    Pareto {
        /// Tail exponent of the distribution.
        shape: f64,
    },
}

impl FitnessDistribution {
    fn draw<R: Rng>(self, rng: &mut R, count: usize) -> Result<Vec<f64>> {
        match self {
            FitnessDistribution::Constant => Ok(vec![1.0; count]),
            FitnessDistribution::Uniform => {
                Ok((0..count).map(|_| 1.0 - rng.gen::<f64>()).collect())
            }
            FitnessDistribution::Pareto { shape } => {
                let dist = Pareto::new(1.0, shape)
                    .map_err(|e| Error::invalid(format!("invalid Pareto shape {shape}: {e}")))?;
                Ok((0..count).map(|_| dist.sample(rng)).collect())
            }
        }
    }
}

impl FromStr for FitnessDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "constant" {
            return Ok(FitnessDistribution::Constant);
        }
        if s == "uniform" {
            return Ok(FitnessDistribution::Uniform);
        }
        if let Some(shape) = s.strip_prefix("pareto:") {
            let shape: f64 = shape
                .parse()
                .map_err(|_| Error::invalid(format!("invalid Pareto shape '{shape}'")))?;
            return Ok(FitnessDistribution::Pareto { shape });
        }
        Err(Error::invalid(format!(
            "unknown fitness distribution '{s}' (expected constant, uniform or pareto:SHAPE)"
        )))
    }
}

/// The ensemble family a sweep walks through.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepModel {
    /// Uniform cell probability equal to the grid density.
    Rhm,
    /// Fitness ensemble with z solved so the expected density matches the
    /// grid point.
    Fitness {
        /// Distribution of the node scores.
        nodes: FitnessDistribution,
        /// Distribution of the hyperedge scores.
        hyperedges: FitnessDistribution,
    },
}

/// Full description of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Ensemble family.
    pub model: SweepModel,
    /// Number of nodes.
    pub n_nodes: usize,
    /// Number of hyperedges.
    pub n_hyperedges: usize,
    /// Strictly increasing density grid in (0, 1].
    pub densities: Vec<f64>,
    /// Canonical samples per grid point.
    pub samples: usize,
    /// Seed for the Monte Carlo columns.
    pub seed: u64,
    /// Seed for the fitness draw; does not affect uniform sweeps.
    pub fitness_seed: u64,
}

/// A quantity a sweep can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepQuantity {
    /// Probability of at least one empty hyperedge.
    AnyEmpty,
    /// Mean fraction of empty hyperedges.
    EmptyFraction,
    /// Mean fraction of parallel hyperedge pairs.
    ParallelFraction,
}

impl SweepQuantity {
    /// Column label used in sweep output.
    pub fn name(self) -> &'static str {
        match self {
            SweepQuantity::AnyEmpty => "p1",
            SweepQuantity::EmptyFraction => "p0",
            SweepQuantity::ParallelFraction => "P0",
        }
    }

    /// All supported quantities.
    pub fn all() -> [SweepQuantity; 3] {
        [
            SweepQuantity::AnyEmpty,
            SweepQuantity::EmptyFraction,
            SweepQuantity::ParallelFraction,
        ]
    }
}

impl FromStr for SweepQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p1" => Ok(SweepQuantity::AnyEmpty),
            "p0" => Ok(SweepQuantity::EmptyFraction),
            "P0" => Ok(SweepQuantity::ParallelFraction),
            other => Err(Error::invalid(format!(
                "unknown sweep quantity '{other}' (expected p1, p0 or P0)"
            ))),
        }
    }
}

/// One output record of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Grid density the ensemble was built for.
    pub density: f64,
    /// Which quantity the row reports.
    pub quantity: SweepQuantity,
    /// Analytic ensemble value.
    pub analytic: f64,
    /// Monte Carlo mean.
    pub sample_mean: f64,
    /// Lower edge of the 95% confidence band.
    pub ci_low: f64,
    /// Upper edge of the 95% confidence band.
    pub ci_high: f64,
    /// Number of samples behind the estimate.
    pub n_samples: usize,
}

/// Log-spaced density grid from `lo` to `hi` inclusive.
pub fn log_density_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
        return Err(Error::invalid(format!(
            "grid bounds must satisfy 0 < lo <= hi <= 1, got [{lo}, {hi}]"
        )));
    }
    if points == 0 {
        return Err(Error::invalid("grid needs at least one point"));
    }
    if points == 1 || lo == hi {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln();
    let mut grid: Vec<f64> = (0..points)
        .map(|k| lo * (ratio * k as f64 / (points - 1) as f64).exp())
        .collect();
    grid[points - 1] = hi;
    for pair in grid.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::invalid(
                "grid bounds too close for the requested number of points",
            ));
        }
    }
    Ok(grid)
}

fn validate_spec(spec: &SweepSpec, quantities: &[SweepQuantity]) -> Result<()> {
    if spec.n_nodes == 0 || spec.n_hyperedges == 0 {
        return Err(Error::invalid("sweep needs N >= 1 and L >= 1"));
    }
    if spec.samples == 0 {
        return Err(Error::invalid("sweep needs at least one sample per point"));
    }
    if spec.densities.is_empty() {
        return Err(Error::invalid("sweep needs a nonempty density grid"));
    }
    for &d in &spec.densities {
        if !(d > 0.0 && d <= 1.0) {
            return Err(Error::invalid(format!("grid density {d} outside (0, 1]")));
        }
    }
    for pair in spec.densities.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::invalid("density grid must be strictly increasing"));
        }
    }
    if quantities.contains(&SweepQuantity::ParallelFraction) && spec.n_hyperedges < 2 {
        return Err(Error::invalid(
            "parallel-pair statistics need at least two hyperedges",
        ));
    }
    Ok(())
}

/// Runs the sweep, returning one row per (density, quantity).
pub fn run_sweep(spec: &SweepSpec, quantities: &[SweepQuantity]) -> Result<Vec<SweepRow>> {
    validate_spec(spec, quantities)?;
    let fitness = match &spec.model {
        SweepModel::Rhm => None,
        SweepModel::Fitness { nodes, hyperedges } => {
            let mut rng = sample_rng(derive_seed(spec.fitness_seed, u64::MAX), 0);
            let f = nodes.draw(&mut rng, spec.n_nodes)?;
            let g = hyperedges.draw(&mut rng, spec.n_hyperedges)?;
            Some((f, g))
        }
    };

    let l = spec.n_hyperedges;
    let mut rows = Vec::with_capacity(spec.densities.len() * quantities.len());
    for (index, &density) in spec.densities.iter().enumerate() {
        let model: ModelSolution<f64> = match &fitness {
            None => rhm_with_probability(spec.n_nodes, l, density)?,
            Some((f, g)) => solve_z_for_density(f, g, density, 1e-12)?,
        };
        let report = regime_report(&model);
        let stats = map_samples(
            &model,
            spec.samples,
            derive_seed(spec.seed, index as u64),
            |_, m| {
                let empty = observed_empty_count(m);
                [
                    f64::from(empty > 0),
                    empty as f64 / l as f64,
                    observed_parallel_fraction(m).unwrap_or(0.0),
                ]
            },
        );
        for &quantity in quantities {
            let (analytic, column) = match quantity {
                SweepQuantity::AnyEmpty => (report.any_empty_probability, 0),
                SweepQuantity::EmptyFraction => (report.mean_empty_probability, 1),
                SweepQuantity::ParallelFraction => (
                    report
                        .mean_parallel_probability
                        .expect("validated L >= 2 above"),
                    2,
                ),
            };
            let values: Vec<f64> = stats.iter().map(|s| s[column]).collect();
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let half_width = if values.len() > 1 {
                let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
                1.96 * (ss / (n - 1.0)).sqrt() / n.sqrt()
            } else {
                0.0
            };
            rows.push(SweepRow {
                density,
                quantity,
                analytic,
                sample_mean: mean,
                ci_low: mean - half_width,
                ci_high: mean + half_width,
                n_samples: values.len(),
            });
        }
    }
    Ok(rows)
}

/// Writes sweep rows as CSV:
/// `density,quantity,analytic,sample_mean,ci_low,ci_high,n_samples`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "density",
        "quantity",
        "analytic",
        "sample_mean",
        "ci_low",
        "ci_high",
        "n_samples",
    ])?;
    for row in rows {
        out.write_record([
            format!("{}", row.density),
            row.quantity.name().to_string(),
            format!("{}", row.analytic),
            format!("{}", row.sample_mean),
            format!("{}", row.ci_low),
            format!("{}", row.ci_high),
            row.n_samples.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_spec(densities: Vec<f64>) -> SweepSpec {
        SweepSpec {
            model: SweepModel::Rhm,
            n_nodes: 10,
            n_hyperedges: 8,
            densities,
            samples: 50,
            seed: 5,
            fitness_seed: 0,
        }
    }

    #[test]
    fn grid_is_log_spaced_and_inclusive() {
        let grid = log_density_grid(1e-4, 1.0, 5).unwrap();
        assert_eq!(grid.len(), 5);
        assert_eq!(grid[0], 1e-4);
        assert_eq!(grid[4], 1.0);
        for pair in grid.windows(2) {
            assert!((pair[1] / pair[0] - 10.0).abs() < 1e-9);
        }
        assert!(log_density_grid(0.0, 1.0, 5).is_err());
        assert!(log_density_grid(0.5, 0.1, 5).is_err());
    }

    #[test]
    fn full_density_point_is_degenerate() {
        let rows = run_sweep(&uniform_spec(vec![1.0]), &SweepQuantity::all()).unwrap();
        let by_name = |n: &str| rows.iter().find(|r| r.quantity.name() == n).unwrap();
        assert_eq!(by_name("p1").analytic, 0.0);
        assert_eq!(by_name("p1").sample_mean, 0.0);
        assert_eq!(by_name("p0").sample_mean, 0.0);
        assert_eq!(by_name("P0").analytic, 1.0);
        assert_eq!(by_name("P0").sample_mean, 1.0);
    }

    #[test]
    fn sample_means_track_analytic_values() {
        let mut spec = uniform_spec(vec![0.02, 0.2]);
        spec.samples = 400;
        let rows = run_sweep(&spec, &[SweepQuantity::AnyEmpty]).unwrap();
        for row in rows {
            assert!(
                row.ci_low - 0.05 <= row.analytic && row.analytic <= row.ci_high + 0.05,
                "analytic {} outside widened band [{}, {}]",
                row.analytic,
                row.ci_low,
                row.ci_high
            );
        }
    }

    #[test]
    fn analytic_columns_ignore_the_sampling_seed() {
        let spec_a = uniform_spec(vec![0.05, 0.5]);
        let mut spec_b = uniform_spec(vec![0.05, 0.5]);
        spec_b.seed = 999;
        let a = run_sweep(&spec_a, &SweepQuantity::all()).unwrap();
        let b = run_sweep(&spec_b, &SweepQuantity::all()).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.analytic, rb.analytic);
        }
        assert!(a.iter().zip(&b).any(|(ra, rb)| ra.sample_mean != rb.sample_mean));
    }

    #[test]
    fn fitness_sweep_hits_requested_density() {
        let spec = SweepSpec {
            model: SweepModel::Fitness {
                nodes: FitnessDistribution::Pareto { shape: 2.0 },
                hyperedges: FitnessDistribution::Constant,
            },
            n_nodes: 12,
            n_hyperedges: 9,
            densities: vec![0.1],
            samples: 200,
            seed: 3,
            fitness_seed: 17,
        };
        let rows = run_sweep(&spec, &[SweepQuantity::EmptyFraction]).unwrap();
        assert_eq!(rows.len(), 1);
        // Sampled and analytic empty fractions should be close at n = 200.
        assert!((rows[0].sample_mean - rows[0].analytic).abs() < 0.1);
    }

    #[test]
    fn spec_validation_catches_bad_grids() {
        assert!(run_sweep(&uniform_spec(vec![]), &[SweepQuantity::AnyEmpty]).is_err());
        assert!(run_sweep(&uniform_spec(vec![0.5, 0.5]), &[SweepQuantity::AnyEmpty]).is_err());
        assert!(run_sweep(&uniform_spec(vec![0.0]), &[SweepQuantity::AnyEmpty]).is_err());
        let mut bad = uniform_spec(vec![0.5]);
        bad.samples = 0;
        assert!(run_sweep(&bad, &[SweepQuantity::AnyEmpty]).is_err());
        let mut narrow = uniform_spec(vec![0.5]);
        narrow.n_hyperedges = 1;
        assert!(run_sweep(&narrow, &[SweepQuantity::ParallelFraction]).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = vec![SweepRow {
            density: 0.25,
            quantity: SweepQuantity::AnyEmpty,
            analytic: 0.5,
            sample_mean: 0.4375,
            ci_low: 0.4,
            ci_high: 0.475,
            n_samples: 16,
        }];
        let mut buffer = Vec::new();
        write_sweep_csv(&rows, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        assert_eq!(
            text,
            "density,quantity,analytic,sample_mean,ci_low,ci_high,n_samples\n\
             0.25,p1,0.5,0.4375,0.4,0.475,16\n"
        );
    }
}
