//! Command-line front end.
//!
//! Every subcommand reads its inputs, runs one library operation and
//! produces a primary artifact (printed to stdout without `--out`). With
//! `--out`, artifacts are written to disk together with a [`RunManifest`].
//! All randomness comes from `--seed` through labelled sub-streams, so equal
//! arguments and inputs give byte-identical artifacts.
//!
//! Exit codes: 0 success, 2 usage or precondition failure, 3 pipeline phase
//! failure, 4 verification failure.

mod manifest;
mod summary;

pub use manifest::{digest_file, sha256_hex, FileDigest, OutTarget, RunManifest};
pub use summary::{emit_summary, RECORD_SCHEMA_VERSION, SUBMATRIX_SCHEMA, SUBSAMPLE_SCHEMA};

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng as _;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::{certify_expander, gen_named, gen_paley, gen_random_regular, parse_graph, write_graph, BipartiteView, Graph};
use crate::hamilton::{hamilton_pipeline, verify_hamilton_cycle, HamiltonCycle, Outcome, PipelineConfig};
use crate::linalg::{parse_matrix, DenseMatrix, DEFAULT_TOL};
use crate::matching::{
    greedy_matching_avoiding, max_matching, measure_bipartite, perfect_matching_expander, verify_matching, ExpanderCaps,
    Matching, MatchingError,
};
use crate::mixing::{eml_graph_audit, AuditRecord, MatrixAuditor};
use crate::report::to_json;
use crate::rng;
use crate::sampling::{induced_subgraph_experiment, submatrix_norm_experiment, uniform_members, SubgraphConfig, SubmatrixMode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("phase failure: {0}")]
    Phase(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Precondition(_) | Self::SchemaMismatch(_) | Self::Io(_) => 2,
            Self::Phase(_) => 3,
            Self::Verification(_) => 4,
        }
    }

    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        Self::Io(format!("{}: {e}", path.display()))
    }

    pub(crate) fn csv(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

fn pre(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "expander-lab", version, about = "Spectral expander experiments and a Hamilton-cycle pipeline")]
pub struct Cli {
    /// Master seed; every random choice is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON configuration for the subcommand; unknown keys are rejected.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, or file path for the primary artifact.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatchKind {
    Perfect,
    Max,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ModeArg {
    TwoSided,
    Same,
    Uniform,
    Right,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph: `paley q`, `random_regular n d`, `complete n`,
    /// `cycle n`, `path n`, `complete_bipartite a [b]`, `petersen`.
    Gen { family: String, args: Vec<usize> },
    /// Spectral certificate of a graph file.
    Certify { graph: PathBuf },
    /// Audit the expander mixing lemma on random set pairs.
    Eml {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        graph: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Random induced subgraph experiment, one row per sigma.
    Subsample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        sigma: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Moment of the norm of a random submatrix against its bound.
    Submatrix {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Matching between two disjoint vertex sets (random halves by default).
    Match {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "perfect")]
        kind: MatchKind,
        /// Comma-separated vertices.
        #[arg(long, requires = "right")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
        /// Side size when the sides are drawn at random.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Run the Hamilton-cycle pipeline; writes the trace and the cycle.
    Hamilton { graph: PathBuf },
    /// Check that a cycle file is a Hamilton cycle of a graph.
    Verify { graph: PathBuf, cycle: PathBuf },
    /// CSV table from a directory of subsample, submatrix or trace records.
    Summary { dir: PathBuf },
}

struct Artifact {
    name: &'static str,
    text: String,
}

struct RunOutput {
    primary: Artifact,
    extra: Vec<Artifact>,
    config: serde_json::Value,
    inputs: Vec<PathBuf>,
    /// Reported after the artifacts are written.
    status: Result<(), CliError>,
}

impl RunOutput {
    fn ok(name: &'static str, text: String, inputs: Vec<PathBuf>) -> Self {
        Self { primary: Artifact { name, text }, extra: Vec::new(), config: serde_json::Value::Null, inputs, status: Ok(()) }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|e| pre(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    parse_matrix(&read(path)?).map_err(|e| pre(format!("{}: {e}", path.display())))
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    to_json(v).map_err(|e| CliError::Io(e.to_string()))
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(CliError::csv)?;
    for r in rows {
        w.write_record(r).map_err(CliError::csv)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn no_csv(cmd: &str, format: Format) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!("{cmd} has no CSV form")));
    }
    Ok(())
}

fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad vertex {t:?}"))))
        .collect()
}

use crate::report::fmt17;

#[derive(Serialize)]
struct EmlSummary {
    form: &'static str,
    n: usize,
    samples: usize,
    violations: usize,
    /// Largest `lhs / rhs` for matrices, largest `|e(S,T) - main| / epsilon`
    /// for graphs.
    worst_ratio: f64,
    first_violation: Option<AuditRecord>,
}

fn eml(graph: Option<&Path>, matrix: Option<&Path>, samples: usize, seed: u64, format: Format) -> Result<RunOutput, CliError> {
    let base = rng::stream_seed(seed, "eml");
    let draw = |i: usize, rows: usize, cols: usize| {
        let mut r = rng::rng(rng::trial_seed(base, i as u64));
        let (a, b) = (r.gen_range(1..=rows), r.gen_range(1..=cols));
        let mut s = uniform_members(&mut r, rows, a);
        let mut t = uniform_members(&mut r, cols, b);
        s.sort_unstable();
        t.sort_unstable();
        (s, t)
    };
    let (summary, input) = if let Some(path) = graph {
        let g = load_graph(path)?;
        let cert = certify_expander(&g, DEFAULT_TOL).map_err(pre)?;
        let n = g.n();
        let audits = (0..samples)
            .into_par_iter()
            .map(|i| {
                let (s, t) = draw(i, n, n);
                eml_graph_audit(&cert, &g, &s, &t).map(|a| (s, t, a))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(pre)?;
        let worst = audits
            .iter()
            .map(|(_, _, a)| if a.epsilon > 0.0 { (a.ordered_count as f64 - a.main_term).abs() / a.epsilon } else { 0.0 })
            .fold(0.0, f64::max);
        let bad: Vec<_> = audits.iter().filter(|x| !x.2.holds).collect();
        let first = bad.first().map(|(s, t, a)| AuditRecord::graph(n, s, t, a));
        (EmlSummary { form: "graph", n, samples, violations: bad.len(), worst_ratio: worst, first_violation: first }, path)
    } else {
        let path = matrix.expect("clap requires one of --graph, --matrix");
        let m = load_matrix(path)?;
        let auditor = MatrixAuditor::new(&m).map_err(pre)?;
        let audits = (0..samples)
            .into_par_iter()
            .map(|i| {
                let (s, t) = draw(i, m.rows(), m.cols());
                auditor.audit(&s, &t).map(|a| (s, t, a))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(pre)?;
        let worst = audits
            .iter()
            .map(|(_, _, a)| if a.rhs_bound > 1e-9 { a.lhs_deviation / a.rhs_bound } else { 0.0 })
            .fold(0.0, f64::max);
        let bad: Vec<_> = audits.iter().filter(|x| !x.2.holds).collect();
        let first = bad.first().map(|(s, t, a)| AuditRecord::matrix(m.rows(), s, t, a));
        (EmlSummary { form: "matrix", n: m.rows(), samples, violations: bad.len(), worst_ratio: worst, first_violation: first }, path)
    };
    let text = match format {
        Format::Json => json(&summary)?,
        Format::Csv => csv_table(
            &["form", "n", "samples", "violations", "worst_ratio"],
            &[vec![
                summary.form.into(),
                summary.n.to_string(),
                summary.samples.to_string(),
                summary.violations.to_string(),
                fmt17(summary.worst_ratio),
            ]],
        )?,
    };
    let mut out = RunOutput::ok("eml.json", text, vec![input.to_path_buf()]);
    if summary.violations > 0 {
        out.status = Err(CliError::Verification(format!("{} of {} audits violate the mixing bound", summary.violations, samples)));
    }
    Ok(out)
}

#[derive(Serialize)]
struct MatchRecord {
    kind: &'static str,
    left: Vec<usize>,
    right: Vec<usize>,
    size: usize,
    matching: Matching,
    verified: bool,
    /// Greedy only: the guaranteed size.
    guaranteed: Option<usize>,
}

fn matching_cmd(
    g: &Graph,
    kind: MatchKind,
    sides: Option<(Vec<usize>, Vec<usize>)>,
    size: Option<usize>,
    caps: ExpanderCaps,
    seed: u64,
) -> Result<MatchRecord, CliError> {
    let n = g.n();
    let (left, right) = match sides {
        Some(s) => s,
        None => {
            let m = size.unwrap_or(n / 2);
            if 2 * m > n || m == 0 {
                return Err(CliError::Usage(format!("side size {m} does not fit twice in {n} vertices")));
            }
            let mut pick = uniform_members(&mut rng::rng(rng::stream_seed(seed, "match")), n, 2 * m);
            let mut right = pick.split_off(m);
            pick.sort_unstable();
            right.sort_unstable();
            (pick, right)
        }
    };
    let view = BipartiteView::new(g, left.clone(), right.clone()).map_err(pre)?;
    let (name, matching, guaranteed) = match kind {
        MatchKind::Max => ("max", max_matching(&view), None),
        MatchKind::Perfect => {
            let params = measure_bipartite(&view, DEFAULT_TOL).map_err(pre)?;
            let m = perfect_matching_expander(&view, &params, &caps).map_err(|e| match e {
                MatchingError::TheoremFalsified { .. } => CliError::Verification(e.to_string()),
                other => pre(other),
            })?;
            ("perfect", m, None)
        }
        MatchKind::Greedy => {
            let cert = certify_expander(g, DEFAULT_TOL).map_err(pre)?;
            let gm = greedy_matching_avoiding(g, &cert, &left, &right, &[], &[]).map_err(|e| match e {
                MatchingError::FloorMissed { .. } | MatchingError::NoEdgeFound { .. } => CliError::Verification(e.to_string()),
                other => pre(other),
            })?;
            ("greedy", gm.matching, Some(gm.guaranteed))
        }
    };
    let verified = verify_matching(g, &left, &right, &matching).is_ok();
    Ok(MatchRecord { kind: name, size: matching.len(), left, right, matching, verified, guaranteed })
}

fn execute(cli: &Cli) -> Result<RunOutput, CliError> {
    let seed = cli.seed.unwrap_or(0);
    let cfg_path = cli.config.as_deref();
    let format = cli.format;
    match &cli.command {
        Command::Gen { family, args } => {
            no_csv("gen", format)?;
            let g = match family.as_str() {
                "paley" => gen_paley(*args.first().ok_or_else(|| CliError::Usage("paley needs q".into()))? as u64),
                "random_regular" => match args[..] {
                    [n, d] => gen_random_regular(n, d, rng::stream_seed(seed, "gen")),
                    _ => return Err(CliError::Usage("random_regular needs n d".into())),
                },
                name => gen_named(name, args),
            }
            .map_err(pre)?;
            Ok(RunOutput::ok("graph.txt", write_graph(&g), Vec::new()))
        }
        Command::Certify { graph } => {
            let g = load_graph(graph)?;
            let c = certify_expander(&g, DEFAULT_TOL).map_err(pre)?;
            let text = match format {
                Format::Json => json(&c)?,
                Format::Csv => csv_table(
                    &["n", "d", "gamma_hat", "lambda_hat", "residual", "seed"],
                    &[vec![c.n.to_string(), fmt17(c.d), fmt17(c.gamma_hat), fmt17(c.lambda_hat), fmt17(c.residual), c.seed.to_string()]],
                )?,
            };
            Ok(RunOutput::ok("certificate.json", text, vec![graph.clone()]))
        }
        Command::Eml { graph, matrix, samples } => eml(graph.as_deref(), matrix.as_deref(), *samples, seed, format),
        Command::Subsample { graph, sigma, trials } => {
            let g = load_graph(graph)?;
            let cert = certify_expander(&g, DEFAULT_TOL).map_err(pre)?;
            let cfg: SubgraphConfig = load_config(cfg_path)?;
            let base = rng::stream_seed(seed, "subsample");
            let experiments = sigma
                .iter()
                .enumerate()
                .map(|(i, &s)| induced_subgraph_experiment(&g, &cert, s, *trials, rng::trial_seed(base, i as u64), &cfg))
                .collect::<Result<Vec<_>, _>>()
                .map_err(pre)?;
            let text = match format {
                Format::Json => json(&serde_json::json!({
                    "schema": SUBSAMPLE_SCHEMA,
                    "schema_version": RECORD_SCHEMA_VERSION,
                    "certificate": cert,
                    "experiments": experiments,
                }))?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = experiments
                        .iter()
                        .map(|e| vec![fmt17(e.sigma), fmt17(e.success_fraction), fmt17(e.floor), e.pass.to_string()])
                        .collect();
                    csv_table(&["sigma", "success_fraction", "floor", "pass"], &rows)?
                }
            };
            let mut out = RunOutput::ok("subsample.json", text, vec![graph.clone()]);
            out.config = serde_json::to_value(cfg).expect("config serializes");
            Ok(out)
        }
        Command::Submatrix { matrix, mode, sigma, p, trials } => {
            let b = load_matrix(matrix)?;
            let mode = match mode {
                ModeArg::TwoSided => SubmatrixMode::TwoSidedBernoulli { sigma: *sigma },
                ModeArg::Same => SubmatrixMode::SameBernoulli { sigma: *sigma },
                ModeArg::Right => SubmatrixMode::RightBernoulli { sigma: *sigma },
                ModeArg::Uniform => SubmatrixMode::SymmetricUniform { m: ((sigma * b.rows() as f64).round() as usize).max(1) },
            };
            let est = submatrix_norm_experiment(&b, mode, *p, *trials, rng::stream_seed(seed, "submatrix")).map_err(pre)?;
            let holds = est.holds();
            let text = match format {
                Format::Json => json(&serde_json::json!({
                    "schema": SUBMATRIX_SCHEMA,
                    "schema_version": RECORD_SCHEMA_VERSION,
                    "mode": mode,
                    "sigma": sigma,
                    "estimate": est,
                    "holds": holds,
                    "all_batches_hold": est.all_batches_hold(),
                }))?,
                Format::Csv => csv_table(
                    &["sigma", "p", "trials", "empirical_lp", "bound", "holds"],
                    &[vec![fmt17(*sigma), fmt17(*p), trials.to_string(), fmt17(est.empirical_lp), fmt17(est.theoretical_bound), holds.to_string()]],
                )?,
            };
            Ok(RunOutput::ok("submatrix.json", text, vec![matrix.clone()]))
        }
        Command::Match { graph, kind, left, right, size } => {
            no_csv("match", format)?;
            let g = load_graph(graph)?;
            let caps: ExpanderCaps = load_config(cfg_path)?;
            let sides = match (left, right) {
                (Some(l), Some(r)) => Some((parse_list(l)?, parse_list(r)?)),
                _ => None,
            };
            let rec = matching_cmd(&g, *kind, sides, *size, caps, seed)?;
            let mut out = RunOutput::ok("matching.json", json(&rec)?, vec![graph.clone()]);
            out.config = serde_json::to_value(caps).expect("caps serialize");
            if !rec.verified {
                out.status = Err(CliError::Verification("matching failed the independent check".into()));
            }
            Ok(out)
        }
        Command::Hamilton { graph } => {
            no_csv("hamilton", format)?;
            let g = load_graph(graph)?;
            let mut cfg: PipelineConfig = load_config(cfg_path)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let run = hamilton_pipeline(&g, &cfg);
            let mut out = RunOutput::ok("trace.json", json(&run.trace)?, vec![graph.clone()]);
            out.config = serde_json::to_value(&cfg).expect("config serializes");
            if let Some(c) = &run.cycle {
                out.extra.push(Artifact { name: "cycle.txt", text: c.to_line() });
            }
            if let Outcome::Failure { phase, kind, message } = &run.trace.outcome {
                let msg = format!("{phase}: {kind}: {message}");
                out.status = Err(match phase.as_str() {
                    "config" | "certify" => CliError::Precondition(msg),
                    "verify" => CliError::Verification(msg),
                    _ => CliError::Phase(msg),
                });
            }
            Ok(out)
        }
        Command::Verify { graph, cycle } => {
            no_csv("verify", format)?;
            let g = load_graph(graph)?;
            let c = HamiltonCycle::parse(&read(cycle)?).map_err(pre)?;
            let res = verify_hamilton_cycle(&g, &c.order);
            let text = json(&serde_json::json!({ "valid": res.is_ok(), "reason": res.as_ref().err() }))?;
            let mut out = RunOutput::ok("verify.json", text, vec![graph.clone(), cycle.clone()]);
            if let Err(e) = res {
                out.status = Err(CliError::Verification(e.to_string()));
            }
            Ok(out)
        }
        Command::Summary { dir } => Ok(RunOutput::ok("summary.csv", emit_summary(dir)?, Vec::new())),
    }
}

fn write_outputs(out: &RunOutput, target: &OutTarget, argv: &[String], seed: u64, start: Instant) -> Result<(), CliError> {
    target.prepare()?;
    let mut written = Vec::new();
    let primary = target.primary(out.primary.name);
    let all = std::iter::once((primary, &out.primary)).chain(out.extra.iter().map(|a| (target.secondary(a.name), a)));
    for (path, a) in all {
        fs::write(&path, &a.text).map_err(|e| CliError::io(&path, e))?;
        written.push(FileDigest { path: path.display().to_string(), sha256: sha256_hex(a.text.as_bytes()) });
    }
    let manifest = RunManifest {
        command: argv.to_vec(),
        config: out.config.clone(),
        seed,
        version: env!("CARGO_PKG_VERSION"),
        inputs: out.inputs.iter().map(|p| digest_file(p)).collect::<Result<_, _>>()?,
        outputs: written,
        wall_time_ms: start.elapsed().as_millis(),
    };
    let path = target.manifest();
    fs::write(&path, json(&manifest)?).map_err(|e| CliError::io(&path, e))
}

/// Parses `argv` (program name first), runs the subcommand and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let start = Instant::now();
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = execute(&cli).and_then(|out| {
        match &cli.out {
            Some(p) => write_outputs(&out, &OutTarget::from_path(p), &args, cli.seed.unwrap_or(0), start)?,
            None => print!("{}", out.primary.text),
        }
        out.status
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("expander-lab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> i32 {
        run(std::iter::once("expander-lab").chain(args.iter().copied()))
    }

    fn p(dir: &Path, name: &str) -> String {
        dir.join(name).display().to_string()
    }

    #[test]
    fn gen_certify_verify_roundtrip() {
        let d = tempfile::tempdir().unwrap();
        let g = p(d.path(), "g.txt");
        assert_eq!(cli(&["gen", "paley", "13", "--out", &g]), 0);
        let graph = parse_graph(&fs::read_to_string(&g).unwrap()).unwrap();
        assert_eq!((graph.n(), graph.edge_count()), (13, 39));
        assert!(d.path().join("g.manifest.json").exists());

        let c = p(d.path(), "cert.json");
        assert_eq!(cli(&["certify", &g, "--out", &c]), 0);
        let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&c).unwrap()).unwrap();
        assert_eq!(cert["d"].as_f64(), Some(6.0));
        assert!((cert["lambda_hat"].as_f64().unwrap() - 2.302776).abs() < 1e-6);

        let bad = p(d.path(), "bad.txt");
        fs::write(&bad, "0 2 4 6 8 10 12 1 3 5 7 9 11\n").unwrap();
        assert_eq!(cli(&["verify", &g, &bad, "--out", &p(d.path(), "v")]), 4);
        let ok = p(d.path(), "ok.txt");
        fs::write(&ok, "0 1 2 3 4 5 6 7 8 9 10 11 12\n").unwrap();
        assert_eq!(cli(&["verify", &g, &ok, "--out", &p(d.path(), "v2")]), 0);
    }

    #[test]
    fn usage_and_config_errors_exit_2() {
        let d = tempfile::tempdir().unwrap();
        assert_eq!(cli(&["gen"]), 2);
        assert_eq!(cli(&["certify", &p(d.path(), "missing.txt")]), 2);
        let g = p(d.path(), "g.txt");
        assert_eq!(cli(&["gen", "paley", "13", "--out", &g]), 0);
        let cfg = p(d.path(), "cfg.json");
        fs::write(&cfg, r#"{"seed": 1, "no_such_key": 2}"#).unwrap();
        assert_eq!(cli(&["hamilton", &g, "--config", &cfg, "--out", &p(d.path(), "h")]), 2);
        assert_eq!(cli(&["gen", "paley", "13", "--format", "csv"]), 2);
    }

    #[test]
    fn summary_of_three_subsample_runs() {
        let d = tempfile::tempdir().unwrap();
        let g = p(d.path(), "g.txt");
        assert_eq!(cli(&["gen", "paley", "29", "--out", &g]), 0);
        let runs = d.path().join("runs");
        for s in ["1", "2", "3"] {
            let out = p(&runs, &format!("sub{s}.json"));
            assert_eq!(cli(&["subsample", "--graph", &g, "--sigma", "0.5", "--trials", "5", "--seed", s, "--out", &out]), 0);
        }
        let table = emit_summary(&runs).unwrap();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], "sigma,success_fraction,floor,pass");
        assert_eq!(lines.len(), 4);

        fs::create_dir(d.path().join("empty")).unwrap();
        assert!(matches!(emit_summary(&d.path().join("empty")), Err(CliError::SchemaMismatch(_))));

        fs::write(runs.join("zz.json"), r#"{"schema": "subsample", "schema_version": 2, "experiments": []}"#).unwrap();
        match emit_summary(&runs) {
            Err(CliError::SchemaMismatch(m)) => assert!(m.contains("zz.json"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
        let mut v: Vec<_> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|f| !f.to_string_lossy().ends_with("manifest.json"))
            .map(|f| (f.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&f).unwrap()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn every_subcommand_is_byte_reproducible() {
        let d = tempfile::tempdir().unwrap();
        let g = p(d.path(), "g.txt");
        assert_eq!(cli(&["gen", "random_regular", "40", "6", "--seed", "3", "--out", &g]), 0);
        let m = p(d.path(), "m.txt");
        fs::write(&m, "3 3\n2 1 0\n1 2 1\n0 1 2\n").unwrap();
        let cyc = p(d.path(), "c.txt");
        fs::write(&cyc, "0 1 2\n").unwrap();
        let cases: Vec<Vec<&str>> = vec![
            vec!["gen", "random_regular", "30", "4"],
            vec!["certify", &g, "--format", "csv"],
            vec!["eml", "--graph", &g, "--samples", "50"],
            vec!["eml", "--matrix", &m, "--samples", "50"],
            vec!["subsample", "--graph", &g, "--sigma", "0.4", "0.6", "--trials", "4"],
            vec!["submatrix", "--matrix", &m, "--mode", "two_sided", "--sigma", "0.5", "--p", "2", "--trials", "20"],
            vec!["match", "--graph", &g, "--kind", "max", "--size", "10"],
            vec!["hamilton", &g],
            vec!["verify", &g, &cyc],
        ];
        for (i, case) in cases.iter().enumerate() {
            let mut codes = Vec::new();
            let mut files = Vec::new();
            for rep in 0..2 {
                let out = p(d.path(), &format!("case{i}_{rep}"));
                let mut args = case.clone();
                args.extend(["--seed", "7", "--out", &out]);
                codes.push(cli(&args));
                files.push(outputs(Path::new(&out)));
            }
            assert_eq!(codes[0], codes[1], "{case:?}");
            assert!(!files[0].is_empty(), "{case:?}");
            assert_eq!(files[0], files[1], "{case:?}");
        }
    }
}
