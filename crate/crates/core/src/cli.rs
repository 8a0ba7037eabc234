//! The `qwspec` command line: `build`, `spectrum`, `verify` and `eigvec`.
//!
//! Exit codes: 0 success, 1 verdict failure, 2 input error, 3 numerical
//! error. Errors go to stderr prefixed by the error kind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    grover_weights, parse_edge_list_weighted, parse_graph_json, Digraph, GraphInput,
    WeightFunction, DEFAULT_TOL_NORM,
};
use crate::linalg::deserialize_matrix;
use crate::operators::{
    build_abstract_model, build_model_with_tolerances, model_to_json, WalkModel, WalkModelJson,
};
use crate::random::{
    random_connected_graph, random_szegedy_weights, seeded_rng, DEFAULT_EDGE_PROBABILITY,
};
use crate::report::{
    eigenbases, report_json, spectrum_csv, spectrum_table, to_json_string, verdict_lines,
};
use crate::spectral::{angular_distance, full_report, ReportOptions, SpectralReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qwspec",
    version,
    about = "Spectra of Szegedy/Grover quantum walks via the discriminant operator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the walk model of a graph and write it as JSON.
    Build(RunArgs),
    /// Compute the eigensystem of U, write the report and CSV, print a table.
    Spectrum(RunArgs),
    /// Run the verdict suite and print one line per check.
    Verify(RunArgs),
    /// Dump the eigenbasis for an eigenvalue of U or of T.
    Eigvec(EigvecArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightScheme {
    Grover,
    File,
}

#[derive(Debug, Clone, Args, Default)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub tol_norm: Option<f64>,
    #[arg(long, env = "QWSPEC_TOL_OP")]
    pub tol_op: Option<f64>,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    #[arg(long)]
    pub tol_match: Option<f64>,
    #[arg(long)]
    pub tol_sub: Option<f64>,
    #[arg(long)]
    pub tol_spec: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Edge list, graph JSON, or model JSON.
    pub input: Option<PathBuf>,
    /// Weight scheme; defaults to the file's weights when present, else Grover.
    #[arg(long, value_enum)]
    pub weights: Option<WeightScheme>,
    /// Use a random connected graph with this many vertices instead of a file.
    #[arg(long, value_name = "VERTICES", conflicts_with = "input")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_EDGE_PROBABILITY)]
    pub edge_prob: f64,
    /// Treat the input as an abstract model: no graph-based multiplicities.
    #[arg(long = "abstract")]
    pub abstract_mode: bool,
    /// Output file (model JSON for `build`).
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    /// Directory for default output paths.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Sidecar file for eigenbases.
    #[arg(long)]
    pub eigenbases: Option<PathBuf>,
    #[arg(long)]
    pub embed_eigenbases: bool,
    /// Print only the summary line in `verify`.
    #[arg(long)]
    pub no_verify_lemmas: bool,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EigvecArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Eigenvalue of U as `re,im`.
    #[arg(long, conflicts_with = "mu", allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Eigenvalue of T; selects the inherited items built from it.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
}

/// Resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: InputSource,
    pub weights: Option<WeightScheme>,
    pub abstract_mode: bool,
    pub tol_norm: f64,
    pub options: ReportOptions,
    pub model_out: PathBuf,
    pub report_out: PathBuf,
    pub csv_out: PathBuf,
    pub eigenbases_out: Option<PathBuf>,
    pub embed_eigenbases: bool,
    pub verify_lemmas: bool,
}

#[derive(Debug, Clone)]
pub enum InputSource {
    File(PathBuf),
    Random {
        vertices: usize,
        seed: u64,
        edge_prob: f64,
    },
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let source = match (&args.input, args.random) {
            (Some(p), None) => InputSource::File(p.clone()),
            (None, Some(vertices)) => InputSource::Random {
                vertices,
                seed: args.seed,
                edge_prob: args.edge_prob,
            },
            _ => {
                return Err(Error::InvalidConfig(
                    "give an input file or --random N".into(),
                ))
            }
        };
        let t = &args.tolerances;
        let tol_norm = t.tol_norm.unwrap_or(DEFAULT_TOL_NORM);
        let named = [
            ("tol-norm", Some(tol_norm)),
            ("tol-op", t.tol_op),
            ("rank-tol", t.rank_tol),
            ("cluster-tol", t.cluster_tol),
            ("tol-match", t.tol_match),
            ("tol-sub", t.tol_sub),
            ("tol-spec", t.tol_spec),
        ];
        for (name, value) in named {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "--{name} must be positive, got {v}"
                    )));
                }
            }
        }
        let out_dir = &args.out_dir;
        match fs::metadata(out_dir) {
            Ok(meta) if meta.is_dir() && !meta.permissions().readonly() => {}
            Ok(_) => {
                return Err(Error::InvalidConfig(format!(
                    "output directory {} is not writable",
                    out_dir.display()
                )))
            }
            Err(e) => {
                return Err(Error::InvalidConfig(format!(
                    "output directory {}: {e}",
                    out_dir.display()
                )))
            }
        }
        let stem = match &source {
            InputSource::File(p) => {
                let name = p.file_name().and_then(|s| s.to_str()).unwrap_or("input");
                name.split('.').next().unwrap_or("input").to_string()
            }
            InputSource::Random { vertices, seed, .. } => format!("random-n{vertices}-s{seed}"),
        };
        let stem = if stem.is_empty() {
            "input".to_string()
        } else {
            stem
        };
        Ok(RunConfig {
            source,
            weights: args.weights,
            abstract_mode: args.abstract_mode,
            tol_norm,
            options: ReportOptions {
                tol_op: t.tol_op,
                rank_tol: t.rank_tol,
                cluster_tol: t.cluster_tol,
                tol_match: t.tol_match,
                tol_sub: t.tol_sub,
                tol_spec: t.tol_spec,
                abstract_mode: args.abstract_mode,
            },
            model_out: args
                .output
                .clone()
                .unwrap_or_else(|| out_dir.join(format!("{stem}.model.json"))),
            report_out: args
                .report
                .clone()
                .unwrap_or_else(|| out_dir.join(format!("{stem}.report.json"))),
            csv_out: args
                .csv
                .clone()
                .unwrap_or_else(|| out_dir.join(format!("{stem}.spectrum.csv"))),
            eigenbases_out: args.eigenbases.clone(),
            embed_eigenbases: args.embed_eigenbases,
            verify_lemmas: !args.no_verify_lemmas,
        })
    }
}

/// A model plus the graph it came from, when there is one.
pub struct LoadedModel {
    pub model: WalkModel,
    pub graph: Option<Digraph>,
}

/// Abstract model file: just `d_A` and `S`.
#[derive(serde::Deserialize)]
struct AbstractModelJson {
    #[serde(rename = "dA", deserialize_with = "deserialize_matrix")]
    d_a: crate::linalg::CMat,
    #[serde(rename = "S", deserialize_with = "deserialize_matrix")]
    shift: crate::linalg::CMat,
}

fn choose_weights(
    g: &Digraph,
    file: Option<WeightFunction>,
    scheme: Option<WeightScheme>,
) -> Result<(WeightFunction, &'static str)> {
    match (scheme, file) {
        (Some(WeightScheme::Grover), _) | (None, None) => Ok((grover_weights(g), "grover")),
        (Some(WeightScheme::File), Some(w)) | (None, Some(w)) => Ok((w, "file")),
        (Some(WeightScheme::File), None) => Err(Error::InvalidWeights(
            "--weights file given but the input carries no weights".into(),
        )),
    }
}

fn build_from_graph(input: GraphInput, config: &RunConfig) -> Result<LoadedModel> {
    let (w, scheme) = choose_weights(&input.graph, input.weights, config.weights)?;
    let mut model =
        build_model_with_tolerances(&input.graph, &w, config.tol_norm, config.options.tol_op)?;
    model.provenance.weight_scheme = scheme.into();
    Ok(LoadedModel {
        model,
        graph: Some(input.graph),
    })
}

/// Reads the configured input into a model.
pub fn load(config: &RunConfig) -> Result<LoadedModel> {
    match &config.source {
        InputSource::Random {
            vertices,
            seed,
            edge_prob,
        } => {
            let mut rng = seeded_rng(*seed);
            let g = random_connected_graph(&mut rng, *vertices, *edge_prob)?;
            let (w, scheme) = match config.weights {
                Some(WeightScheme::Grover) => (grover_weights(&g), "grover"),
                _ => (random_szegedy_weights(&mut rng, &g), "random"),
            };
            let mut model =
                build_model_with_tolerances(&g, &w, config.tol_norm, config.options.tol_op)?;
            model.provenance.weight_scheme = scheme.into();
            model.provenance.seed = Some(*seed);
            Ok(LoadedModel {
                model,
                graph: Some(g),
            })
        }
        InputSource::File(path) => {
            let text = fs::read_to_string(path)?;
            let is_json = path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("json"));
            if !is_json {
                return build_from_graph(parse_edge_list_weighted(&text)?, config);
            }
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse {
                    line: e.line(),
                    message: e.to_string(),
                })?;
            if value.get("edges").is_some() {
                build_from_graph(parse_graph_json(&text)?, config)
            } else if value.get("dB").is_some() {
                let doc: WalkModelJson = serde_json::from_value(value)?;
                let mut doc = doc;
                if let Some(t) = config.options.tol_op {
                    doc.tol_op = t;
                }
                Ok(LoadedModel {
                    model: doc.into_model()?,
                    graph: None,
                })
            } else if value.get("dA").is_some() {
                let doc: AbstractModelJson = serde_json::from_value(value)?;
                Ok(LoadedModel {
                    model: build_abstract_model(doc.d_a, doc.shift, config.options.tol_op)?,
                    graph: None,
                })
            } else {
                Err(Error::Parse {
                    line: 0,
                    message: "JSON input needs `edges` (graph) or `dA` (model)".into(),
                })
            }
        }
    }
}

fn report_for(config: &RunConfig, loaded: &LoadedModel) -> Result<SpectralReport> {
    let graph = if config.abstract_mode {
        None
    } else {
        loaded.graph.as_ref()
    };
    full_report(&loaded.model, graph, &config.options)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)?;
    Ok(())
}

pub fn cmd_build(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(config)?;
    write_file(&config.model_out, &model_to_json(&loaded.model)?)?;
    writeln!(
        out,
        "wrote {} (n = {}, m = {}, tol_op = {:e})",
        config.model_out.display(),
        loaded.model.n(),
        loaded.model.m(),
        loaded.model.tol_op()
    )?;
    Ok(EXIT_OK)
}

fn write_report_files(
    config: &RunConfig,
    loaded: &LoadedModel,
    report: &SpectralReport,
) -> Result<()> {
    let json = report_json(
        report,
        loaded.model.n(),
        loaded.model.m(),
        config.embed_eigenbases,
    );
    write_file(&config.report_out, &to_json_string(&json)?)?;
    write_file(&config.csv_out, &spectrum_csv(report))?;
    if let Some(path) = &config.eigenbases_out {
        write_file(path, &to_json_string(&eigenbases(report))?)?;
    }
    Ok(())
}

pub fn cmd_spectrum(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(config)?;
    let report = report_for(config, &loaded)?;
    write_report_files(config, &loaded, &report)?;
    write!(out, "{}", spectrum_table(&report))?;
    if let Some(c) = &report.corollary {
        writeln!(
            out,
            "m_plus = {}, m_minus = {}, M_plus = {}, M_minus = {}",
            c.m_plus, c.m_minus, c.big_m_plus, c.big_m_minus
        )?;
    } else {
        writeln!(
            out,
            "m_plus = {}, m_minus = {}",
            report.m_plus, report.m_minus
        )?;
    }
    for w in &report.warnings {
        writeln!(out, "warning: {w}")?;
    }
    let failures = report.failures();
    if !failures.is_empty() {
        writeln!(out, "failed checks: {}", failures.join(", "))?;
        return Ok(EXIT_VERDICT);
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(config)?;
    let report = report_for(config, &loaded)?;
    if config.verify_lemmas {
        write!(out, "{}", verdict_lines(&report.verdicts))?;
    }
    let failures = report.failures();
    writeln!(
        out,
        "{} of {} checks passed",
        report.verdicts.len() - failures.len(),
        report.verdicts.len()
    )?;
    Ok(if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERDICT
    })
}

#[derive(Serialize)]
struct EigvecDump<'a> {
    query: String,
    items: Vec<crate::report::EigenbasisEntry<'a>>,
}

fn parse_lambda(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidConfig(format!("--lambda expects re,im, got `{s}`"));
    let mut parts = s.split(',');
    let re: f64 = parts
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

/// Matching window for user-typed eigenvalues.
const QUERY_TOL: f64 = 1e-6;

pub fn cmd_eigvec(args: &EigvecArgs, out: &mut dyn Write) -> Result<i32> {
    let config = RunConfig::from_args(&args.run)?;
    let loaded = load(&config)?;
    let report = report_for(&config, &loaded)?;
    let (query, selected): (String, Vec<_>) = match (&args.lambda, args.mu) {
        (Some(l), None) => {
            let lambda = parse_lambda(l)?;
            if (lambda.norm() - 1.0).abs() > QUERY_TOL {
                return Err(Error::InvalidConfig(format!(
                    "--lambda {l} is not on the unit circle"
                )));
            }
            let lambda = lambda / lambda.norm();
            (
                format!("lambda = {l}"),
                eigenbases(&report)
                    .into_iter()
                    .filter(|e| angular_distance(Complex64::new(e.re, e.im), lambda) <= QUERY_TOL)
                    .collect(),
            )
        }
        (None, Some(mu)) => (
            format!("mu = {mu}"),
            eigenbases(&report)
                .into_iter()
                .filter(|e| e.source_mu.is_some_and(|s| (s - mu).abs() <= QUERY_TOL))
                .collect(),
        ),
        _ => {
            return Err(Error::InvalidConfig(
                "eigvec needs exactly one of --lambda or --mu".into(),
            ))
        }
    };
    if selected.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no eigenvalue matches {query}"
        )));
    }
    let text = to_json_string(&EigvecDump {
        query,
        items: selected,
    })?;
    match &args.run.output {
        Some(path) => write_file(path, &text)?,
        None => write!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Build(a) => RunConfig::from_args(a).and_then(|c| cmd_build(&c, out)),
        Command::Spectrum(a) => RunConfig::from_args(a).and_then(|c| cmd_spectrum(&c, out)),
        Command::Verify(a) => RunConfig::from_args(a).and_then(|c| cmd_verify(&c, out)),
        Command::Eigvec(a) => cmd_eigvec(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}
