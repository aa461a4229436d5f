//! Subcommand implementations. Each returns the report text and a short
//! human-readable summary; writing them out is left to the caller.

use std::fs;
use std::path::{Path, PathBuf};

use biaspca::evaluation::{
    compare_solution, epsilon_sweep, parse_baseline, random_subsets, subset_e_rpca, Baseline, EIGENVALUE_ERROR_METRIC,
};
use biaspca::rpca::{copt_with, exhaustive_optimal_outliers, SearchOptions};
use biaspca::{
    centered_pca_direct, centered_pca_with_bias, BiasChoice, BiasConfig, Centering, DataMatrixF64, PcaModelF64,
    RpcaProblem, RpcaSolutionF64, DEFAULT_EPSILON,
};
use serde::Serialize;

use crate::args::{
    BiasArgs, Cli, Command, CompareArgs, DataArgs, Format, OrientationArg, PcaArgs, RpcaArgs, SearchArgs, SweepArgs,
};
use crate::dataset::{load_dataset, parse_columns, Dataset, DatasetSpec, Orientation, Source};
use crate::error::CliError;
use crate::report::{one_based, reals, rounded, to_json, Csv, Real, COVARIANCE_CONVENTION};

pub const TOOL: &str = "biaspca";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub report: String,
    pub summary: String,
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Pca(args) => cmd_pca(args),
        Command::BiasSweep(args) => cmd_bias_sweep(args),
        Command::Rpca(args) => cmd_rpca(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

#[derive(Debug, Serialize)]
struct DatasetInfo {
    name: String,
    orientation: &'static str,
    /// 1-based file columns, or `None` for all of them.
    columns: Option<Vec<usize>>,
    header: bool,
    features: usize,
    points: usize,
}

#[derive(Debug, Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    covariance_convention: &'static str,
    dataset: DatasetInfo,
}

struct Loaded {
    meta: Meta,
    data: Dataset,
}

fn load(args: &DataArgs, command: &'static str) -> Result<Loaded, CliError> {
    let orientation = match args.orientation {
        OrientationArg::Rows => Orientation::PointsAsRows,
        OrientationArg::Columns => Orientation::PointsAsColumns,
    };
    let columns = args.columns.as_deref().map(parse_columns).transpose()?;
    let spec = DatasetSpec::resolve(
        Source::parse(&args.dataset, args.seed),
        orientation,
        columns,
        args.header,
    );
    let data = load_dataset(&spec)?;
    let meta = Meta {
        tool: TOOL,
        version: VERSION,
        command,
        covariance_convention: COVARIANCE_CONVENTION,
        dataset: DatasetInfo {
            name: data.name.clone(),
            orientation: spec.orientation.name(),
            columns: spec.columns.as_ref().map(|c| c.iter().map(|i| i + 1).collect()),
            header: spec.header,
            features: data.matrix.dim(),
            points: data.matrix.len(),
        },
    };
    Ok(Loaded { meta, data })
}

fn csv_meta(csv: &mut Csv, meta: &Meta) {
    csv.meta("tool", meta.tool);
    csv.meta("version", meta.version);
    csv.meta("command", meta.command);
    csv.meta("covariance_convention", meta.covariance_convention);
    csv.meta("dataset", &meta.dataset.name);
    csv.meta("orientation", meta.dataset.orientation);
    if let Some(cols) = &meta.dataset.columns {
        csv.meta(
            "columns",
            cols.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
        );
    }
    csv.meta("header", meta.dataset.header);
    csv.meta("features", meta.dataset.features);
    csv.meta("points", meta.dataset.points);
}

fn opt_text(v: Option<f64>) -> String {
    v.map(|x| Real(x).text()).unwrap_or_default()
}

fn bias_choice(args: &BiasArgs) -> Option<BiasChoice<f64>> {
    match (args.epsilon, args.bias) {
        (_, Some(b)) => Some(BiasChoice::Explicit(b)),
        (Some(e), None) => Some(BiasChoice::Epsilon(e)),
        (None, None) => None,
    }
}

fn summary_header(meta: &Meta) -> String {
    format!(
        "{} {}: {} ({} features, {} points)\n",
        meta.tool, meta.command, meta.dataset.name, meta.dataset.features, meta.dataset.points
    )
}

/// Coordinates of every point in the model's component basis.
fn coordinates(model: &PcaModelF64, x: &DataMatrixF64) -> Vec<Vec<f64>> {
    x.points().map(|p| model.project(p)).collect()
}

#[derive(Debug, Serialize)]
struct PcaConfig {
    k: usize,
    epsilon: Option<Real>,
    bias: Option<Real>,
}

#[derive(Debug, Serialize)]
struct PointCoordinates {
    index: usize,
    coordinates: Vec<Real>,
}

#[derive(Debug, Serialize)]
struct PcaReport {
    meta: Meta,
    config: PcaConfig,
    method: &'static str,
    epsilon: Option<Real>,
    bias: Option<Real>,
    conditioning_ratio: Option<Real>,
    center: Vec<Real>,
    eigenvalues: Vec<Real>,
    components: Vec<Vec<Real>>,
    points: Vec<PointCoordinates>,
}

pub fn cmd_pca(args: &PcaArgs) -> Result<Output, CliError> {
    let Loaded { meta, data } = load(&args.data, "pca")?;
    let x = &data.matrix;
    let k = args.k.unwrap_or(x.dim());
    let (method, model, config, conditioning) = match bias_choice(&args.bias) {
        Some(choice) => {
            let out = centered_pca_with_bias(x, k, BiasConfig::for_data(x, choice)?)?;
            (
                "bias_trick",
                out.model,
                Some(out.config),
                out.conditioning.map(|c| c.ratio),
            )
        }
        None => ("direct", centered_pca_direct(x, k)?, None, None),
    };
    let coords = coordinates(&model, x);

    let summary = format!(
        "{}method {method}{}\neigenvalues: {}\n",
        summary_header(&meta),
        config
            .map(|c| format!(", bias {:.4} (epsilon {:.4})", c.bias, c.epsilon))
            .unwrap_or_default(),
        rounded(&model.eigenvalues)
    );

    let report = match args.output.format {
        Format::Json => to_json(&PcaReport {
            config: PcaConfig {
                k,
                epsilon: args.bias.epsilon.map(Real),
                bias: args.bias.bias.map(Real),
            },
            method,
            epsilon: config.map(|c| Real(c.epsilon)),
            bias: config.map(|c| Real(c.bias)),
            conditioning_ratio: conditioning.map(Real),
            center: reals(&model.center),
            eigenvalues: reals(&model.eigenvalues),
            components: model.components.columns().map(reals).collect(),
            points: coords
                .iter()
                .enumerate()
                .map(|(i, c)| PointCoordinates {
                    index: i + 1,
                    coordinates: reals(c),
                })
                .collect(),
            meta,
        }),
        Format::Csv => {
            let mut csv = Csv::new();
            csv_meta(&mut csv, &meta);
            csv.meta("k", k);
            csv.meta("method", method);
            csv.meta("epsilon", opt_text(config.map(|c| c.epsilon)));
            csv.meta("bias", opt_text(config.map(|c| c.bias)));
            csv.meta("eigenvalues", join_reals(&model.eigenvalues));
            csv.meta("center", join_reals(&model.center));
            let mut header = vec!["index".to_string()];
            header.extend((1..=k).map(|j| format!("pc{j}")));
            csv.row(header);
            for (i, c) in coords.iter().enumerate() {
                let mut row = vec![(i + 1).to_string()];
                row.extend(c.iter().map(|&v| Real(v).text()));
                csv.row(row);
            }
            csv.finish()
        }
    };
    Ok(Output { report, summary })
}

fn join_reals(values: &[f64]) -> String {
    values.iter().map(|&v| Real(v).text()).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Serialize)]
struct SweepConfig {
    k: usize,
    epsilons: Vec<Real>,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    epsilon: Real,
    bias: Real,
    eigenvalue_error: Real,
    subspace_angle: Real,
}

#[derive(Debug, Serialize)]
struct SweepReport {
    meta: Meta,
    config: SweepConfig,
    eigenvalue_error_metric: &'static str,
    subspace_angle_metric: &'static str,
    rows: Vec<SweepRow>,
}

const ANGLE_METRIC: &str = "largest principal angle between component spans, radians";

pub fn cmd_bias_sweep(args: &SweepArgs) -> Result<Output, CliError> {
    let Loaded { meta, data } = load(&args.data, "bias-sweep")?;
    let x = &data.matrix;
    let k = args.k.unwrap_or(x.dim());
    let sweep = epsilon_sweep(x, k, &args.epsilons)?;

    let mut summary = summary_header(&meta);
    summary.push_str("epsilon      bias  eig_error      angle\n");
    for i in 0..sweep.epsilons.len() {
        summary.push_str(&format!(
            "{:7.4} {:9.4} {:10.4e} {:10.4e}\n",
            sweep.epsilons[i], sweep.biases[i], sweep.eigenvalue_errors[i], sweep.subspace_angles[i]
        ));
    }

    let report = match args.output.format {
        Format::Json => to_json(&SweepReport {
            meta,
            config: SweepConfig {
                k,
                epsilons: reals(&args.epsilons),
            },
            eigenvalue_error_metric: EIGENVALUE_ERROR_METRIC,
            subspace_angle_metric: ANGLE_METRIC,
            rows: (0..sweep.epsilons.len())
                .map(|i| SweepRow {
                    epsilon: Real(sweep.epsilons[i]),
                    bias: Real(sweep.biases[i]),
                    eigenvalue_error: Real(sweep.eigenvalue_errors[i]),
                    subspace_angle: Real(sweep.subspace_angles[i]),
                })
                .collect(),
        }),
        Format::Csv => {
            let mut csv = Csv::new();
            csv_meta(&mut csv, &meta);
            csv.meta("k", k);
            csv.meta("eigenvalue_error_metric", EIGENVALUE_ERROR_METRIC);
            csv.meta("subspace_angle_metric", ANGLE_METRIC);
            csv.row(["epsilon", "bias", "eigenvalue_error", "subspace_angle"]);
            for i in 0..sweep.epsilons.len() {
                csv.row([
                    Real(sweep.epsilons[i]).text(),
                    Real(sweep.biases[i]).text(),
                    Real(sweep.eigenvalue_errors[i]).text(),
                    Real(sweep.subspace_angles[i]).text(),
                ]);
            }
            csv.finish()
        }
    };
    Ok(Output { report, summary })
}

#[derive(Debug, Serialize)]
struct SearchConfig {
    k: usize,
    r: usize,
    epsilon: Option<Real>,
    bias: Option<Real>,
    oracle: bool,
    random_subsets: Option<usize>,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct RandomSubsetCheck {
    count: usize,
    seed: u64,
    best_e_rpca: Real,
    subsets_better_than_copt: usize,
    copt_not_worse: bool,
}

#[derive(Debug, Serialize)]
struct PointRecord {
    index: usize,
    outlier: bool,
    residual: Real,
    coordinates: Vec<Real>,
}

#[derive(Debug, Serialize)]
struct RpcaReport {
    meta: Meta,
    config: SearchConfig,
    search: &'static str,
    epsilon: Real,
    bias: Real,
    mean_norm: Real,
    outliers: Vec<usize>,
    objective: Real,
    e_rpca: Real,
    center: Vec<Real>,
    components: Vec<Vec<Real>>,
    nodes_expanded: u64,
    subsets_evaluated: u64,
    random_subset_check: Option<RandomSubsetCheck>,
    points: Vec<PointRecord>,
}

struct Solved {
    problem: RpcaProblem<f64>,
    solution: RpcaSolutionF64,
    search: &'static str,
    random: Option<RandomSubsetCheck>,
}

fn solve(args: &SearchArgs, data: &Dataset, seed: u64) -> Result<Solved, CliError> {
    let choice = bias_choice(&args.bias).unwrap_or(BiasChoice::Epsilon(DEFAULT_EPSILON));
    let problem = RpcaProblem::new(data.matrix.clone(), args.k, args.r, Centering::Bias(choice))?;
    let threads = usize::try_from(args.threads).map_err(|_| CliError::Usage("thread count too large".into()))?;
    let (solution, search) = if args.oracle {
        (exhaustive_optimal_outliers(&problem)?, "exhaustive")
    } else {
        (copt_with(&problem, &SearchOptions { threads })?, "branch_and_bound")
    };
    let random = match args.random_subsets {
        Some(count) => {
            let mut best = f64::INFINITY;
            let mut better = 0;
            for subset in random_subsets(data.matrix.len(), args.k, count, seed) {
                let e = subset_e_rpca(&data.matrix, &subset, args.r)?;
                best = best.min(e);
                if e < solution.e_rpca {
                    better += 1;
                }
            }
            Some(RandomSubsetCheck {
                count,
                seed,
                best_e_rpca: Real(best),
                subsets_better_than_copt: better,
                copt_not_worse: better == 0,
            })
        }
        None => None,
    };
    Ok(Solved {
        problem,
        solution,
        search,
        random,
    })
}

fn search_config(args: &SearchArgs, seed: u64) -> SearchConfig {
    SearchConfig {
        k: args.k,
        r: args.r,
        epsilon: args.bias.epsilon.map(Real),
        bias: args.bias.bias.map(Real),
        oracle: args.oracle,
        random_subsets: args.random_subsets,
        seed,
    }
}

fn random_summary(check: &Option<RandomSubsetCheck>) -> String {
    match check {
        Some(c) => format!(
            "random subsets: {} drawn, best e_rpca {:.4}, {} better than COPT\n",
            c.count, c.best_e_rpca.0, c.subsets_better_than_copt
        ),
        None => String::new(),
    }
}

pub fn cmd_rpca(args: &RpcaArgs) -> Result<Output, CliError> {
    let Loaded { meta, data } = load(&args.data, "rpca")?;
    let solved = solve(&args.search, &data, args.data.seed)?;
    let sol = &solved.solution;
    let bias = sol.bias.expect("COPT always uses a bias");
    let x = &data.matrix;
    let model = PcaModelF64 {
        components: sol.components.clone(),
        eigenvalues: Vec::new(),
        center: sol.center.clone(),
    };
    let residuals = sol.residuals(x);
    let coords = coordinates(&model, x);
    let is_outlier = |i: usize| sol.outliers.binary_search(&i).is_ok();

    let summary = format!(
        "{}search {}, bias {:.4} (epsilon {:.4})\noutliers: {}\nobjective {:.4}\ne_rpca {:.4}\n{}",
        summary_header(&meta),
        solved.search,
        bias.bias,
        bias.epsilon,
        one_based(&sol.outliers),
        sol.objective,
        sol.e_rpca,
        random_summary(&solved.random),
    );

    let report = match args.output.format {
        Format::Json => to_json(&RpcaReport {
            config: search_config(&args.search, args.data.seed),
            search: solved.search,
            epsilon: Real(bias.epsilon),
            bias: Real(bias.bias),
            mean_norm: Real(bias.mu_norm),
            outliers: sol.outliers.iter().map(|i| i + 1).collect(),
            objective: Real(sol.objective),
            e_rpca: Real(sol.e_rpca),
            center: reals(&sol.center),
            components: sol.components.columns().map(reals).collect(),
            nodes_expanded: sol.stats.nodes_expanded,
            subsets_evaluated: sol.stats.subsets_evaluated,
            random_subset_check: solved.random,
            points: (0..x.len())
                .map(|i| PointRecord {
                    index: i + 1,
                    outlier: is_outlier(i),
                    residual: Real(residuals[i]),
                    coordinates: reals(&coords[i]),
                })
                .collect(),
            meta,
        }),
        Format::Csv => {
            let mut csv = Csv::new();
            csv_meta(&mut csv, &meta);
            search_csv_meta(&mut csv, &args.search, args.data.seed);
            csv.meta("search", solved.search);
            csv.meta("epsilon", Real(bias.epsilon).text());
            csv.meta("bias", Real(bias.bias).text());
            csv.meta("outliers", one_based(&sol.outliers));
            csv.meta("objective", Real(sol.objective).text());
            csv.meta("e_rpca", Real(sol.e_rpca).text());
            csv.meta("nodes_expanded", sol.stats.nodes_expanded);
            csv.meta("subsets_evaluated", sol.stats.subsets_evaluated);
            if let Some(c) = &solved.random {
                csv.meta("random_subsets_best_e_rpca", c.best_e_rpca.text());
                csv.meta("random_subsets_better_than_copt", c.subsets_better_than_copt);
            }
            let mut header = vec!["index".to_string(), "outlier".into(), "residual".into()];
            header.extend((1..=args.search.r).map(|j| format!("pc{j}")));
            csv.row(header);
            for i in 0..x.len() {
                let mut row = vec![
                    (i + 1).to_string(),
                    is_outlier(i).to_string(),
                    Real(residuals[i]).text(),
                ];
                row.extend(coords[i].iter().map(|&v| Real(v).text()));
                csv.row(row);
            }
            csv.finish()
        }
    };
    Ok(Output { report, summary })
}

fn search_csv_meta(csv: &mut Csv, args: &SearchArgs, seed: u64) {
    csv.meta("k", args.k);
    csv.meta("r", args.r);
    csv.meta("requested_epsilon", opt_text(args.bias.epsilon));
    csv.meta("requested_bias", opt_text(args.bias.bias));
    csv.meta("oracle", args.oracle);
    csv.meta("seed", seed);
}

#[derive(Debug, Serialize)]
struct VariantRecord {
    name: String,
    outliers: Vec<usize>,
    e_rpca: Real,
}

#[derive(Debug, Serialize)]
struct CompareReport {
    meta: Meta,
    config: SearchConfig,
    baselines: Vec<String>,
    search: &'static str,
    epsilon: Option<Real>,
    bias: Option<Real>,
    variants: Vec<VariantRecord>,
    random_subset_check: Option<RandomSubsetCheck>,
}

fn read_baseline(spec: &str, n: usize) -> Result<Baseline, CliError> {
    let (name, path) = match spec.split_once('=') {
        Some((name, path)) => (name.to_string(), PathBuf::from(path)),
        None => {
            let path = PathBuf::from(spec);
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| spec.to_string());
            (name, path)
        }
    };
    let text = fs::read_to_string(&path).map_err(|source| CliError::BaselineRead {
        path: path.clone(),
        source,
    })?;
    Ok(Baseline {
        name,
        outliers: parse_baseline(&text, n)?,
    })
}

pub fn cmd_compare(args: &CompareArgs) -> Result<Output, CliError> {
    let Loaded { meta, data } = load(&args.data, "compare")?;
    let baselines = args
        .baseline
        .iter()
        .map(|b| read_baseline(b, data.matrix.len()))
        .collect::<Result<Vec<_>, _>>()?;
    let solved = solve(&args.search, &data, args.data.seed)?;
    let report = compare_solution(&data.name, &solved.problem, &solved.solution, &baselines)?;

    let mut summary = summary_header(&meta);
    summary.push_str(&format!("k {} r {}\n", report.num_outliers, report.rank));
    for v in &report.variants {
        summary.push_str(&format!(
            "{:>12}  e_rpca {:.4}  outliers: {}\n",
            v.name,
            v.e_rpca,
            one_based(&v.outliers)
        ));
    }
    summary.push_str(&random_summary(&solved.random));

    let text = match args.output.format {
        Format::Json => to_json(&CompareReport {
            meta,
            config: search_config(&args.search, args.data.seed),
            baselines: args.baseline.clone(),
            search: solved.search,
            epsilon: report.epsilon.map(Real),
            bias: report.bias.map(Real),
            variants: report
                .variants
                .iter()
                .map(|v| VariantRecord {
                    name: v.name.clone(),
                    outliers: v.outliers.iter().map(|i| i + 1).collect(),
                    e_rpca: Real(v.e_rpca),
                })
                .collect(),
            random_subset_check: solved.random,
        }),
        Format::Csv => {
            let mut csv = Csv::new();
            csv_meta(&mut csv, &meta);
            search_csv_meta(&mut csv, &args.search, args.data.seed);
            csv.meta("search", solved.search);
            csv.meta("epsilon", opt_text(report.epsilon));
            csv.meta("bias", opt_text(report.bias));
            if let Some(c) = &solved.random {
                csv.meta("random_subsets_best_e_rpca", c.best_e_rpca.text());
                csv.meta("random_subsets_better_than_copt", c.subsets_better_than_copt);
            }
            csv.row(["variant", "size", "e_rpca", "outliers"]);
            for v in &report.variants {
                csv.row([
                    v.name.clone(),
                    v.outliers.len().to_string(),
                    Real(v.e_rpca).text(),
                    v.outliers
                        .iter()
                        .map(|i| (i + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                ]);
            }
            csv.finish()
        }
    };
    Ok(Output { report: text, summary })
}

/// Writes `output.report` to `path`, creating parent directories.
pub fn write_report(path: &Path, output: &Output) -> Result<(), CliError> {
    let write_err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(write_err)?;
    }
    fs::write(path, &output.report).map_err(write_err)
}
