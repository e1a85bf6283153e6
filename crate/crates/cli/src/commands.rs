//! The eight subcommands.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use hypernull::centrality::{cec, SymmetricWeights, DEFAULT_CEC_MAX_ITER, DEFAULT_CEC_TOL};
use hypernull::community::{louvain, validated_adjacency, write_partition_csv};
use hypernull::expectation::{
    expected_cec, expected_confusion, expected_projection, r_squared,
};
use hypernull::incidence::IncidenceMatrix;
use hypernull::io::{self, Format, SAMPLE_CONTAINER_MAGIC};
use hypernull::models::{
    fit_cla, fit_hcm, fit_hpcm_hyperedges, fit_hpcm_nodes, fit_rhm, ModelKind,
};
use hypernull::projection::project;
use hypernull::sampling::{self, ShuffleKind};
use hypernull::sweep::{
    log_density_grid, run_sweep, write_sweep_csv, FitnessDistribution, SweepModel, SweepQuantity,
    SweepSpec,
};
use hypernull::validation::{validated_projection, write_validated_csv, DEFAULT_SIGNIFICANCE};
use hypernull::Model;

use crate::input;

fn parse_format(s: &str) -> Result<Format, hypernull::Error> {
    Format::from_str(s)
}

fn parse_fit_model(s: &str) -> Result<ModelKind, String> {
    match ModelKind::from_str(s) {
        Ok(ModelKind::Fitness) => Err(
            "the fitness ensemble takes explicit scores and cannot be fitted from data; \
             expected rhm, hpcm-nodes, hpcm-hyperedges, hcm or cla"
                .to_string(),
        ),
        Ok(kind) => Ok(kind),
        Err(error) => Err(error.to_string()),
    }
}

fn parse_shuffle_kind(s: &str) -> Result<ShuffleKind, hypernull::Error> {
    ShuffleKind::from_str(s)
}

fn parse_quantity(s: &str) -> Result<SweepQuantity, hypernull::Error> {
    SweepQuantity::from_str(s)
}

fn parse_fitness(s: &str) -> Result<FitnessDistribution, hypernull::Error> {
    FitnessDistribution::from_str(s)
}

/// Flags shared by every command that reads an incidence matrix.
#[derive(Args)]
pub struct InputArgs {
    /// Input file; `-` reads standard input (benson needs a real path)
    #[arg(long)]
    input: PathBuf,
    /// Input format
    #[arg(long, default_value = "hyperedge-list", value_parser = parse_format)]
    format: Format,
}

/// Flags shared by every command that fits a model.
#[derive(Args)]
pub struct FitArgs {
    /// Null model to fit
    #[arg(long, value_parser = parse_fit_model)]
    model: ModelKind,
    /// Convergence tolerance for iterative fits
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration budget for iterative fits
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
}

impl FitArgs {
    fn fit(&self, matrix: &IncidenceMatrix) -> Result<Model> {
        let d = matrix.degree_summary();
        let model = match self.model {
            ModelKind::Rhm => fit_rhm(&d),
            ModelKind::HpcmNodes => fit_hpcm_nodes(&d),
            ModelKind::HpcmHyperedges => fit_hpcm_hyperedges(&d),
            ModelKind::Cla => fit_cla(&d),
            ModelKind::Hcm => fit_hcm(&d, self.tol, self.max_iter)
                .context("hcm fit did not converge; raise --max-iter or relax --tol")?,
            ModelKind::Fitness => bail!("fitness is not a fittable model"),
        };
        eprintln!(
            "hypernull: fitted {} (residual {:.3e}, {} clamped cells)",
            model.kind, model.residual, model.clamp_count
        );
        Ok(model)
    }
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn solve(args: SolveArgs) -> Result<ExitCode> {
    let matrix = input::load_matrix(&args.input.input, args.input.format)?;
    let model = args.fit.fit(&matrix)?;
    let mut sink = input::sink(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut sink, &model)?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct SampleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Number of samples to draw
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Sampling seed
    #[arg(long)]
    seed: u64,
    /// Output container (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn sample(args: SampleArgs) -> Result<ExitCode> {
    let matrix = input::load_matrix(&args.input.input, args.input.format)?;
    let model = args.fit.fit(&matrix)?;
    let batch = sampling::sample(&model, args.samples, args.seed);
    let mut sink = input::sink(args.out.as_deref())?;
    io::write_sample_container(&batch.matrices, &mut sink)?;
    sink.flush()?;
    eprintln!(
        "hypernull: wrote {} samples of {}x{}",
        batch.matrices.len(),
        model.n_nodes,
        model.n_hyperedges
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct ShuffleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// What the shuffle preserves: `all` (total only), `rows` or `cols`
    #[arg(long, default_value = "all", value_parser = parse_shuffle_kind)]
    kind: ShuffleKind,
    /// Number of shuffles to draw
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Shuffling seed
    #[arg(long)]
    seed: u64,
    /// Output container (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn shuffle(args: ShuffleArgs) -> Result<ExitCode> {
    let matrix = input::load_matrix(&args.input.input, args.input.format)?;
    let batch = sampling::shuffle(&matrix, args.kind, args.samples, args.seed);
    let mut sink = input::sink(args.out.as_deref())?;
    io::write_sample_container(&batch.matrices, &mut sink)?;
    sink.flush()?;
    eprintln!("hypernull: wrote {} shuffles", batch.matrices.len());
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy)]
pub enum SweepFamily {
    Rhm,
    Fitness,
}

fn parse_family(s: &str) -> Result<SweepFamily, String> {
    match s {
        "rhm" => Ok(SweepFamily::Rhm),
        "fitness" => Ok(SweepFamily::Fitness),
        other => Err(format!("unknown sweep family '{other}' (expected rhm or fitness)")),
    }
}

#[derive(Args)]
pub struct SweepArgs {
    /// Ensemble family
    #[arg(long, default_value = "rhm", value_parser = parse_family)]
    model: SweepFamily,
    /// Number of nodes N
    #[arg(long)]
    nodes: usize,
    /// Number of hyperedges L
    #[arg(long)]
    hyperedges: usize,
    /// Smallest grid density
    #[arg(long, default_value_t = 1e-6)]
    density_min: f64,
    /// Largest grid density
    #[arg(long, default_value_t = 1.0)]
    density_max: f64,
    /// Number of log-spaced grid points
    #[arg(long, default_value_t = 30)]
    points: usize,
    /// Canonical samples per grid point
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Monte Carlo seed
    #[arg(long)]
    seed: u64,
    /// Score distribution for both sides under `--model fitness`
    #[arg(long, default_value = "uniform", value_parser = parse_fitness)]
    fitness: FitnessDistribution,
    /// Seed of the score draw, kept apart so analytic columns ignore --seed
    #[arg(long, default_value_t = 0)]
    fitness_seed: u64,
    /// Quantities to tabulate
    #[arg(long, value_delimiter = ',', default_values = ["p1", "p0", "P0"], value_parser = parse_quantity)]
    quantities: Vec<SweepQuantity>,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn sweep(args: SweepArgs) -> Result<ExitCode> {
    let spec = SweepSpec {
        model: match args.model {
            SweepFamily::Rhm => SweepModel::Rhm,
            SweepFamily::Fitness => SweepModel::Fitness {
                nodes: args.fitness,
                hyperedges: args.fitness,
            },
        },
        n_nodes: args.nodes,
        n_hyperedges: args.hyperedges,
        densities: log_density_grid(args.density_min, args.density_max, args.points)?,
        samples: args.samples,
        seed: args.seed,
        fitness_seed: args.fitness_seed,
    };
    eprintln!(
        "hypernull: sweeping {} densities x {} quantities, {} samples each",
        spec.densities.len(),
        args.quantities.len(),
        spec.samples
    );
    let rows = run_sweep(&spec, &args.quantities)?;
    let mut sink = input::sink(args.out.as_deref())?;
    write_sweep_csv(&rows, &mut sink)?;
    sink.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Directory receiving node_metrics.csv and summary.json
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

/// Header of the per-node metrics table produced by `analyze`.
pub const METRICS_HEADER: [&str; 12] = [
    "node", "k", "sigma", "exp_sigma", "kappa", "exp_kappa", "Y", "exp_Y", "knn", "exp_knn",
    "cec", "exp_cec",
];

fn opt_cell(value: Option<f64>) -> String {
    value.map_or(String::new(), |v| format!("{v}"))
}

fn r2(empirical: &[f64], expected: &[f64]) -> Option<f64> {
    if empirical.len() < 2 {
        return None;
    }
    r_squared(empirical, expected).ok().flatten()
}

fn paired_r2(empirical: &[Option<f64>], expected: &[Option<f64>]) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = empirical
        .iter()
        .zip(expected)
        .filter_map(|(e, x)| Some(((*e)?, (*x)?)))
        .collect();
    let (e, x): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    r2(&e, &x)
}

pub fn analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let matrix = input::load_matrix(&args.input.input, args.input.format)?;
    let model = args.fit.fit(&matrix)?;
    let d = matrix.degree_summary();
    let graph = project(&matrix);
    let expected = expected_projection(&model);

    let empirical_cec = match cec(
        &SymmetricWeights::from_projection(&graph),
        DEFAULT_CEC_TOL,
        DEFAULT_CEC_MAX_ITER,
    ) {
        Ok(result) => Some(result),
        Err(error) => {
            eprintln!("hypernull: empirical centrality unavailable: {error}");
            None
        }
    };
    let model_cec = match expected_cec(&model, DEFAULT_CEC_TOL, DEFAULT_CEC_MAX_ITER) {
        Ok(result) => Some(result),
        Err(error) => {
            eprintln!("hypernull: expected centrality unavailable: {error}");
            None
        }
    };

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let metrics_path = args.out_dir.join("node_metrics.csv");
    let mut table = csv::Writer::from_writer(input::create(&metrics_path)?);
    table.write_record(METRICS_HEADER)?;
    let n = matrix.n_nodes();
    let empirical_y: Vec<Option<f64>> = (0..n).map(|i| graph.disparity(i)).collect();
    let empirical_knn: Vec<Option<f64>> = (0..n).map(|i| graph.mean_incident_size(i)).collect();
    for i in 0..n {
        table.write_record([
            matrix.node_label(i).into_owned(),
            format!("{}", d.node_degrees()[i]),
            format!("{}", graph.strength(i)),
            format!("{}", expected.sigma[i]),
            format!("{}", graph.neighbor_count(i)),
            format!("{}", expected.kappa[i]),
            opt_cell(empirical_y[i]),
            opt_cell(expected.disparity[i]),
            opt_cell(empirical_knn[i]),
            opt_cell(expected.knn[i]),
            opt_cell(empirical_cec.as_ref().map(|c| c.vector[i])),
            opt_cell(model_cec.as_ref().map(|c| c.vector[i])),
        ])?;
    }
    table.flush()?;
    eprintln!("hypernull: wrote {}", metrics_path.display());

    let sigma: Vec<f64> = graph.strengths().iter().map(|&s| s as f64).collect();
    let kappa: Vec<f64> = (0..n).map(|i| graph.neighbor_count(i) as f64).collect();
    let confusion = expected_confusion(&model, &matrix)?;
    let cells = (model.n_nodes * model.n_hyperedges) as f64;
    let summary = serde_json::json!({
        "model": model.kind,
        "N": model.n_nodes,
        "L": model.n_hyperedges,
        "T": d.total(),
        "density": if cells > 0.0 { d.total() as f64 / cells } else { 0.0 },
        "residual": model.residual,
        "clamp_count": model.clamp_count,
        "r_squared": {
            "sigma": r2(&sigma, &expected.sigma),
            "kappa": r2(&kappa, &expected.kappa),
            "Y": paired_r2(&empirical_y, &expected.disparity),
            "knn": paired_r2(&empirical_knn, &expected.knn),
            "cec": match (&empirical_cec, &model_cec) {
                (Some(e), Some(x)) => r2(&e.vector, &x.vector),
                _ => None,
            },
        },
        "confusion": {
            "tpr": confusion.tpr,
            "spc": confusion.spc,
            "ppv": confusion.ppv,
            "acc": confusion.acc,
        },
    });
    let summary_path = args.out_dir.join("summary.json");
    let mut out = input::create(&summary_path)?;
    serde_json::to_writer_pretty(&mut out, &summary)?;
    writeln!(out)?;
    eprintln!("hypernull: wrote {}", summary_path.display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// False discovery rate of the selection
    #[arg(long, visible_alias = "t", default_value_t = DEFAULT_SIGNIFICANCE)]
    significance: f64,
    /// Seed of the community detection pass
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit 0 even when pairs impossible under the model are observed
    #[arg(long)]
    allow_anomalies: bool,
    /// Validated edge list CSV (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Community CSV (default: `<out>.communities.csv` when --out is given)
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

pub fn validate(args: ValidateArgs) -> Result<ExitCode> {
    let matrix = input::load_matrix(&args.input.input, args.input.format)?;
    let model = args.fit.fit(&matrix)?;
    let result = validated_projection(&matrix, &model, args.significance)?;
    eprintln!(
        "hypernull: {} tests, {} overlapping pairs, {} validated, {} anomalies",
        result.n_tests,
        result.pairs.len(),
        result.validated_edges().count(),
        result.anomaly_count
    );

    let mut sink = input::sink(args.out.as_deref())?;
    write_validated_csv(&result, &mut sink)?;
    sink.flush()?;

    let partition_path = args.partition_out.clone().or_else(|| {
        args.out
            .as_ref()
            .map(|path| path.with_extension("communities.csv"))
    });
    match partition_path {
        Some(path) => {
            let adjacency = validated_adjacency(&result, matrix.n_nodes());
            let partition = louvain(&adjacency, args.seed)?;
            write_partition_csv(&partition, matrix.node_labels(), input::create(&path)?)?;
            eprintln!(
                "hypernull: {} communities (modularity {:.4}) written to {}",
                partition.community_count(),
                partition.modularity,
                path.display()
            );
        }
        None => eprintln!("hypernull: no --out or --partition-out; community export skipped"),
    }

    if result.anomaly_count > 0 {
        eprintln!(
            "hypernull: {} node pairs overlap although the model gives them zero probability",
            result.anomaly_count
        );
        if !args.allow_anomalies {
            eprintln!("hypernull: failing; pass --allow-anomalies to accept them");
            return Ok(ExitCode::from(3));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct ThresholdsArgs {
    /// Number of nodes
    #[arg(long = "N")]
    n: usize,
    /// Number of hyperedges
    #[arg(long = "L")]
    l: usize,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn thresholds(args: ThresholdsArgs) -> Result<ExitCode> {
    let table = hypernull::regime::thresholds::<f64>(args.n, args.l)?;
    let mut sink = input::sink(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut sink, &table)?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Auto,
    Solution,
    Samples,
    Sweep,
    Validated,
    Partition,
    Metrics,
    Summary,
    Thresholds,
    HyperedgeList,
    Benson,
    DenseMatrix,
}

fn parse_check_kind(s: &str) -> Result<CheckKind, String> {
    Ok(match s {
        "auto" => CheckKind::Auto,
        "solution" => CheckKind::Solution,
        "samples" => CheckKind::Samples,
        "sweep" => CheckKind::Sweep,
        "validated" => CheckKind::Validated,
        "partition" => CheckKind::Partition,
        "metrics" => CheckKind::Metrics,
        "summary" => CheckKind::Summary,
        "thresholds" => CheckKind::Thresholds,
        "hyperedge-list" => CheckKind::HyperedgeList,
        "benson" => CheckKind::Benson,
        "dense-matrix" => CheckKind::DenseMatrix,
        other => return Err(format!("unknown artifact kind '{other}'")),
    })
}

#[derive(Args)]
pub struct CheckArgs {
    /// File to verify; `-` reads standard input
    #[arg(long)]
    input: PathBuf,
    /// Artifact kind; `auto` sniffs magic bytes, JSON shape or CSV header
    #[arg(long, default_value = "auto", value_parser = parse_check_kind)]
    kind: CheckKind,
}

pub fn check(args: CheckArgs) -> Result<ExitCode> {
    let verdict = match args.kind {
        CheckKind::Benson => check_benson(&args.input),
        kind => {
            let bytes = input::read_bytes(&args.input)?;
            match kind {
                CheckKind::Auto => sniff(&args.input, &bytes),
                CheckKind::Solution => check_solution(&bytes),
                CheckKind::Samples => check_samples(&bytes),
                CheckKind::Sweep => check_sweep(&bytes),
                CheckKind::Validated => check_validated(&bytes),
                CheckKind::Partition => check_partition(&bytes),
                CheckKind::Metrics => check_metrics(&bytes),
                CheckKind::Summary => check_summary(&bytes),
                CheckKind::Thresholds => check_thresholds(&bytes),
                CheckKind::HyperedgeList => check_hyperedge_list(&bytes),
                CheckKind::DenseMatrix => check_dense(&bytes),
                CheckKind::Benson => unreachable!(),
            }
        }
    };
    match verdict {
        Ok(description) => {
            println!("ok: {description}");
            Ok(ExitCode::SUCCESS)
        }
        Err(error) => {
            eprintln!("hypernull: check failed: {error:#}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn sniff(path: &std::path::Path, bytes: &[u8]) -> Result<String> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    if name.contains("nverts") {
        return check_benson(path);
    }
    if bytes.starts_with(SAMPLE_CONTAINER_MAGIC) {
        return check_samples(bytes);
    }
    let text = std::str::from_utf8(bytes).context("neither a sample container nor text")?;
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let object = value.as_object().ok_or_else(|| anyhow!("not a JSON object"))?;
        return if object.contains_key("r_squared") {
            check_summary(bytes)
        } else if object.contains_key("h_r") {
            check_thresholds(bytes)
        } else if object.contains_key("kind") {
            check_solution(bytes)
        } else {
            Err(anyhow!("JSON object is no artifact of this tool"))
        };
    }
    let header: Vec<&str> = text.lines().next().unwrap_or_default().split(',').collect();
    if header == ["density", "quantity", "analytic", "sample_mean", "ci_low", "ci_high", "n_samples"] {
        check_sweep(bytes)
    } else if header == ["i", "j", "w_obs", "p_value", "validated"] {
        check_validated(bytes)
    } else if header == ["node", "community"] {
        check_partition(bytes)
    } else if header == METRICS_HEADER {
        check_metrics(bytes)
    } else if header.len() > 1 {
        check_dense(bytes)
    } else {
        check_hyperedge_list(bytes)
    }
}

fn check_benson(path: &std::path::Path) -> Result<String> {
    let (nverts, simplices) = input::benson_paths(path)?;
    let matrix = io::read_benson(input::open(&nverts)?, input::open(&simplices)?)?;
    Ok(format!(
        "benson dataset, {} nodes x {} hyperedges, {} incidences",
        matrix.n_nodes(),
        matrix.n_hyperedges(),
        matrix.total_ones()
    ))
}

fn check_solution(bytes: &[u8]) -> Result<String> {
    let model: Model = serde_json::from_slice(bytes)?;
    model.validate()?;
    Ok(format!(
        "{} solution for {}x{}, residual {:.3e}",
        model.kind, model.n_nodes, model.n_hyperedges, model.residual
    ))
}

fn check_samples(bytes: &[u8]) -> Result<String> {
    let matrices = io::read_sample_container(bytes)?;
    let dims = matrices
        .first()
        .map_or("empty".to_string(), |m| format!("{}x{}", m.n_nodes(), m.n_hyperedges()));
    Ok(format!("sample container, {} matrices ({dims})", matrices.len()))
}

fn csv_rows(bytes: &[u8], header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::Reader::from_reader(bytes);
    let found: Vec<&str> = reader.headers()?.iter().collect();
    if found != header {
        bail!("unexpected header {found:?}");
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        rows.push(record?);
    }
    Ok(rows)
}

fn field<T: FromStr>(record: &csv::StringRecord, index: usize, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = record.get(index).ok_or_else(|| anyhow!("row too short"))?;
    raw.parse()
        .map_err(|e| anyhow!("bad {what} {raw:?}: {e}"))
}

fn check_sweep(bytes: &[u8]) -> Result<String> {
    let rows = csv_rows(
        bytes,
        &["density", "quantity", "analytic", "sample_mean", "ci_low", "ci_high", "n_samples"],
    )?;
    for record in &rows {
        let density: f64 = field(record, 0, "density")?;
        if !(density > 0.0 && density <= 1.0) {
            bail!("density {density} outside (0, 1]");
        }
        field::<SweepQuantity>(record, 1, "quantity")?;
        for (index, what) in [(2, "analytic"), (3, "sample_mean"), (4, "ci_low"), (5, "ci_high")] {
            let value: f64 = field(record, index, what)?;
            if !value.is_finite() {
                bail!("non-finite {what}");
            }
        }
        field::<u64>(record, 6, "n_samples")?;
    }
    Ok(format!("sweep table, {} rows", rows.len()))
}

fn check_validated(bytes: &[u8]) -> Result<String> {
    let rows = csv_rows(bytes, &["i", "j", "w_obs", "p_value", "validated"])?;
    let mut validated = 0u64;
    for record in &rows {
        field::<u64>(record, 0, "i")?;
        field::<u64>(record, 1, "j")?;
        field::<u64>(record, 2, "w_obs")?;
        let p: f64 = field(record, 3, "p_value")?;
        if !(0.0..=1.0).contains(&p) {
            bail!("p-value {p} outside [0, 1]");
        }
        match record.get(4) {
            Some("0") => {}
            Some("1") => validated += 1,
            other => bail!("validated flag {other:?} is not 0/1"),
        }
    }
    Ok(format!("validated edge list, {} pairs, {validated} validated", rows.len()))
}

fn check_partition(bytes: &[u8]) -> Result<String> {
    let rows = csv_rows(bytes, &["node", "community"])?;
    let mut communities = std::collections::BTreeSet::new();
    for record in &rows {
        communities.insert(field::<u32>(record, 1, "community")?);
    }
    Ok(format!("partition, {} nodes in {} communities", rows.len(), communities.len()))
}

fn check_metrics(bytes: &[u8]) -> Result<String> {
    let rows = csv_rows(bytes, &METRICS_HEADER)?;
    for record in &rows {
        for (index, name) in METRICS_HEADER.iter().enumerate().skip(1) {
            let raw = record.get(index).ok_or_else(|| anyhow!("row too short"))?;
            if !raw.is_empty() {
                field::<f64>(record, index, name)?;
            }
        }
    }
    Ok(format!("node metrics, {} rows", rows.len()))
}

fn check_summary(bytes: &[u8]) -> Result<String> {
    let value: serde_json::Value = serde_json::from_slice(bytes)?;
    for key in ["model", "N", "L", "r_squared", "confusion"] {
        if value.get(key).is_none() {
            bail!("summary lacks the {key:?} field");
        }
    }
    Ok(format!("analysis summary for model {}", value["model"]))
}

fn check_thresholds(bytes: &[u8]) -> Result<String> {
    let table: hypernull::Thresholds = serde_json::from_slice(bytes)?;
    Ok(format!(
        "threshold table (p_r {}, p_f {}, p_p {})",
        table.resolution_density, table.filling_density, table.percolation_density
    ))
}

fn check_hyperedge_list(bytes: &[u8]) -> Result<String> {
    let matrix = io::read_hyperedge_list(bytes)?;
    Ok(format!(
        "hyperedge list, {} nodes x {} hyperedges",
        matrix.n_nodes(),
        matrix.n_hyperedges()
    ))
}

fn check_dense(bytes: &[u8]) -> Result<String> {
    let matrix = io::read_dense_csv(bytes)?;
    Ok(format!(
        "dense matrix, {} nodes x {} hyperedges, {} incidences",
        matrix.n_nodes(),
        matrix.n_hyperedges(),
        matrix.total_ones()
    ))
}
