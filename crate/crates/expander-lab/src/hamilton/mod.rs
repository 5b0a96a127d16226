//! Constructive Hamilton cycle for spectral expanders.
//!
//! [`hamilton_pipeline`] runs six phases on a graph:
//!
//! 1. certify the input's degree spread and `λ / d` against the configured caps;
//! 2. draw a random partition `X1, X2, Y1, Y2, R1, R2` and check P1, P2, P5;
//! 3. pick a reserve inside `R1` and build a connector on it with ports `X`, `Y`;
//! 4. split the rest into `k`-blocks and check Q1 to Q5 on them;
//! 5. chain matchings between consecutive blocks into `|X|` disjoint paths
//!    from `X` to `Y`, sending surplus paths straight to `Y1`;
//! 6. close the paths into one cycle through the reserve.
//!
//! The returned cycle has always passed [`verify_hamilton_cycle`]. Every
//! phase writes a record into the [`PipelineTrace`], which is also returned
//! on failure.

mod config;
mod cover;
mod phases;

pub use config::{Constants, GammaCaps, PipelineConfig, Sizes};
pub use cover::{close_cycle, path_cover_phase, CloseReport, CoverInput, CoverReport, MatchingMethod, SkipRecord, StepRecord};
pub use phases::{
    choose_reserve, partition_phase, repartition_phase, AttemptRecord, Blocks, OverlapReport, PairReport, PartitionChecks,
    PartitionReport, Parts, RepartitionChecks, RepartitionReport, SpectralReport, WindowReport,
};

use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extend::{build_connector, ExtendError};
use crate::graphs::{certify_expander, Graph, GraphError, SpectralCertificate};
use crate::linalg::DEFAULT_TOL;
use crate::matching::MatchingError;
use crate::rng;

pub const TRACE_SCHEMA: &str = "hamilton_trace";
pub const TRACE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{quantity} = {value} exceeds the cap {cap}")]
    CertificateOutOfRange { quantity: &'static str, value: f64, cap: f64 },
    #[error("{phase}: {property} failed on all {attempts} attempts")]
    PartitionRetriesExhausted { phase: &'static str, property: &'static str, attempts: usize },
    #[error("connector: {0}")]
    Connector(ExtendError),
    #[error("block {block} has {size} vertices outside the reserve, more than |X| = {x}")]
    BlockLargerThanX { block: usize, size: usize, x: usize },
    #[error("step {step}: skip matching of size {size} is below the floor {floor}")]
    MatchingFloorMissed { step: usize, size: usize, floor: usize },
    #[error("step {step}: skip matching has {size} edges, {need} needed")]
    MatchingShort { step: usize, size: usize, need: usize },
    #[error("step {step}: {source}")]
    PerfectMatchingFailed { step: usize, source: MatchingError },
    #[error("closing paths: {0}")]
    Close(ExtendError),
    #[error("vertex {vertex} is not on the cycle")]
    CoverageGap { vertex: usize },
    #[error("cycle rejected: {0}")]
    Verification(CycleDefect),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal: {0}")]
    Internal(String),
}

impl PipelineError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "Config",
            Self::CertificateOutOfRange { .. } => "CertificateOutOfRange",
            Self::PartitionRetriesExhausted { .. } => "PartitionRetriesExhausted",
            Self::Connector(_) => "Connector",
            Self::BlockLargerThanX { .. } => "BlockLargerThanX",
            Self::MatchingFloorMissed { .. } => "MatchingFloorMissed",
            Self::MatchingShort { .. } => "MatchingShort",
            Self::PerfectMatchingFailed { .. } => "PerfectMatchingFailed",
            Self::Close(ExtendError::ConnectFailed { .. }) => "ConnectFailed",
            Self::Close(_) => "Close",
            Self::CoverageGap { .. } => "CoverageGap",
            Self::Verification(_) => "Verification",
            Self::Graph(_) => "Graph",
            Self::Internal(_) => "Internal",
        }
    }
}

/// Why an order is not a Hamilton cycle.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CycleDefect {
    #[error("graph has {n} < 3 vertices")]
    TooSmall { n: usize },
    #[error("vertex {vertex} out of range")]
    OutOfRange { vertex: usize },
    #[error("vertex {vertex} repeated")]
    Repeat { vertex: usize },
    #[error("vertex {vertex} missing")]
    Missing { vertex: usize },
    #[error("{u} and {v} are consecutive but not adjacent")]
    MissingEdge { u: usize, v: usize },
}

/// A cyclic vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HamiltonCycle {
    pub order: Vec<usize>,
}

impl HamiltonCycle {
    /// One line of space-separated vertices.
    pub fn to_line(&self) -> String {
        let mut s: String = self.order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let order = text
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| GraphError::Parse(format!("bad vertex {tok:?}"))))
            .collect::<Result<_, _>>()?;
        Ok(Self { order })
    }
}

/// Checks that `order` lists every vertex of `g` once and that cyclically
/// consecutive vertices are adjacent.
pub fn verify_hamilton_cycle(g: &Graph, order: &[usize]) -> Result<(), CycleDefect> {
    let n = g.n();
    if n < 3 {
        return Err(CycleDefect::TooSmall { n });
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(CycleDefect::OutOfRange { vertex: v });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(CycleDefect::Repeat { vertex: v });
        }
    }
    if let Some(vertex) = seen.iter().position(|&s| !s) {
        return Err(CycleDefect::Missing { vertex });
    }
    for i in 0..n {
        let (u, v) = (order[i], order[(i + 1) % n]);
        if !g.has_edge(u, v) {
            return Err(CycleDefect::MissingEdge { u, v });
        }
    }
    Ok(())
}

pub fn is_hamilton_cycle(g: &Graph, order: &[usize]) -> bool {
    verify_hamilton_cycle(g, order).is_ok()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectorReport {
    pub reserve: Vec<usize>,
    /// Reserve vertices kept out of every block.
    pub surplus: Vec<usize>,
    pub budget: usize,
    /// `d / (expansion_divisor · λ)`; recorded, not enforced.
    pub extendability_d: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Success { cycle_length: usize },
    Failure { phase: String, kind: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineTrace {
    pub schema: &'static str,
    pub schema_version: u32,
    pub n: usize,
    pub config: PipelineConfig,
    pub sizes: Option<Sizes>,
    pub certificate: Option<SpectralCertificate>,
    /// Attempts of the phase that was running when the pipeline stopped, if
    /// it stopped in partition or repartition.
    pub failed_attempts: Vec<AttemptRecord>,
    pub partition: Option<PartitionReport>,
    pub parts: Option<Parts>,
    pub connector: Option<ConnectorReport>,
    pub repartition: Option<RepartitionReport>,
    pub blocks: Option<Blocks>,
    pub path_cover: Option<CoverReport>,
    pub closing: Option<CloseReport>,
    pub outcome: Outcome,
}

impl PipelineTrace {
    fn new(n: usize, config: &PipelineConfig) -> Self {
        Self {
            schema: TRACE_SCHEMA,
            schema_version: TRACE_SCHEMA_VERSION,
            n,
            config: config.clone(),
            sizes: None,
            certificate: None,
            failed_attempts: Vec::new(),
            partition: None,
            parts: None,
            connector: None,
            repartition: None,
            blocks: None,
            path_cover: None,
            closing: None,
            outcome: Outcome::Failure { phase: "config".into(), kind: "Internal".into(), message: "not run".into() },
        }
    }

    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, Outcome::Success { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineOutcome {
    pub cycle: Option<HamiltonCycle>,
    pub trace: PipelineTrace,
}

fn fail(trace: &mut PipelineTrace, phase: &str, e: PipelineError) {
    trace.outcome = Outcome::Failure { phase: phase.into(), kind: e.kind().into(), message: e.to_string() };
}

fn run(g: &Graph, cfg: &PipelineConfig, trace: &mut PipelineTrace) -> Result<HamiltonCycle, (&'static str, PipelineError)> {
    let n = g.n();
    let k = match cfg.k {
        Some(k) => k,
        None => Sizes::default_k(n, cfg).map_err(|e| ("config", e))?,
    };
    let sizes = Sizes::plan(n, k, cfg).map_err(|e| ("config", e))?;
    trace.sizes = Some(sizes);

    let cert = certify_expander(g, DEFAULT_TOL).map_err(|e| ("certify", e.into()))?;
    trace.certificate = Some(cert.clone());
    let c = &cfg.constants;
    if !(cert.gamma_hat <= c.gamma_cap) {
        return Err(("certify", PipelineError::CertificateOutOfRange { quantity: "gamma_hat", value: cert.gamma_hat, cap: c.gamma_cap }));
    }
    let ratio = cert.lambda_hat / cert.d;
    if !(ratio <= c.lambda_ratio_cap) {
        return Err(("certify", PipelineError::CertificateOutOfRange { quantity: "lambda / d", value: ratio, cap: c.lambda_ratio_cap }));
    }

    let (parts, report) = partition_phase(g, &cert, cfg, &sizes).map_err(|(e, attempts)| {
        trace.failed_attempts = attempts;
        ("partition", e)
    })?;
    trace.partition = Some(report);
    trace.parts = Some(parts.clone());

    let (reserve, surplus) = choose_reserve(&parts, &sizes, rng::stream_seed(cfg.seed, "reserve"));
    let connector = build_connector(g, &cert, &parts.x(), &parts.y(), &reserve, c.l_max, c.connector)
        .map_err(|e| ("connector", PipelineError::Connector(e)))?;
    trace.connector = Some(ConnectorReport {
        reserve: reserve.clone(),
        surplus: surplus.clone(),
        budget: c.l_max,
        extendability_d: cert.d / (c.expansion_divisor * cert.lambda_hat),
    });

    let (blocks, report) = repartition_phase(g, &cert, cfg, &sizes, &parts, &reserve, &surplus).map_err(|(e, attempts)| {
        trace.failed_attempts = attempts;
        ("repartition", e)
    })?;
    trace.repartition = Some(report);
    trace.blocks = Some(blocks.clone());

    let input = CoverInput { parts: &parts, blocks: &blocks, reserve: &reserve, caps: c.matching_caps, theta_scale: c.theta_scale };
    let cover = path_cover_phase(g, &input).map_err(|e| ("path_cover", e))?;
    let paths = cover.paths.clone();
    trace.path_cover = Some(cover);

    let (cycle, report) = close_cycle(g, &paths, &connector).map_err(|e| ("close", e))?;
    trace.closing = Some(report);
    verify_hamilton_cycle(g, &cycle.order).map_err(|e| ("verify", PipelineError::Verification(e)))?;
    Ok(cycle)
}

/// Runs every phase and returns the verified cycle, or `None` with the
/// failing phase recorded in the trace.
pub fn hamilton_pipeline(g: &Graph, cfg: &PipelineConfig) -> PipelineOutcome {
    let mut trace = PipelineTrace::new(g.n(), cfg);
    let result = catch_unwind(AssertUnwindSafe(|| run(g, cfg, &mut trace)));
    let cycle = match result {
        Ok(Ok(cycle)) => {
            trace.outcome = Outcome::Success { cycle_length: cycle.order.len() };
            Some(cycle)
        }
        Ok(Err((phase, e))) => {
            fail(&mut trace, phase, e);
            None
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_default();
            fail(&mut trace, "internal", PipelineError::Internal(msg));
            None
        }
    };
    PipelineOutcome { cycle, trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::ConnectorOptions;
    use crate::graphs::{gen_named, gen_paley};
    use crate::matching::ExpanderCaps;

    #[test]
    fn verifier_examples() {
        let c5 = gen_named("cycle", &[5]).unwrap();
        assert!(is_hamilton_cycle(&c5, &[0, 1, 2, 3, 4]));
        assert_eq!(verify_hamilton_cycle(&c5, &[0, 2, 1, 3, 4]), Err(CycleDefect::MissingEdge { u: 0, v: 2 }));
        let k4 = gen_named("complete", &[4]).unwrap();
        assert_eq!(verify_hamilton_cycle(&k4, &[0, 1, 2]), Err(CycleDefect::Missing { vertex: 3 }));
        assert_eq!(verify_hamilton_cycle(&k4, &[0, 1, 0, 2]), Err(CycleDefect::Repeat { vertex: 0 }));
        assert_eq!(verify_hamilton_cycle(&k4, &[0, 1, 2, 7]), Err(CycleDefect::OutOfRange { vertex: 7 }));
        let k2 = gen_named("complete", &[2]).unwrap();
        assert_eq!(verify_hamilton_cycle(&k2, &[0, 1]), Err(CycleDefect::TooSmall { n: 2 }));
    }

    #[test]
    fn cycle_line_format() {
        let c = HamiltonCycle { order: vec![3, 0, 2, 1] };
        assert_eq!(c.to_line(), "3 0 2 1\n");
        assert_eq!(HamiltonCycle::parse(&c.to_line()).unwrap(), c);
        assert!(HamiltonCycle::parse("0 x").is_err());
    }

    /// Overrides under which complete graphs of a few dozen vertices pass
    /// every check.
    fn tiny(k: usize, core_fraction: f64, seed: u64) -> PipelineConfig {
        let wide = Some(10.0);
        PipelineConfig {
            k: Some(k),
            split_fraction: 0.5,
            core_fraction,
            // q2 below 1 keeps every block's R1 share nonempty
            gamma_caps: GammaCaps { p1: wide, p2: wide, p5: wide, q2: Some(0.9), q3: wide, q4: wide, q5: wide },
            constants: Constants {
                lambda_ratio_cap: 0.5,
                p2_lambda_factor: 100.0,
                p5_lambda_factor: 100.0,
                q4_lambda_factor: 100.0,
                q5_lambda_factor: 100.0,
                q1_overlap_fraction: Some(1.0),
                matching_caps: ExpanderCaps { gamma_max: 1.0, lambda_ratio: 1.0 },
                connector: ConnectorOptions { min_reserve_ratio: 0.0, retry_cap: 20 },
                ..Constants::desk()
            },
            ..PipelineConfig::desk(seed)
        }
    }

    #[test]
    fn complete_graphs_are_hamiltonian() {
        for (n, k, core) in [(8, 2, 0.75), (12, 2, 0.7), (20, 4, 0.75)] {
            let g = gen_named("complete", &[n]).unwrap();
            let run = hamilton_pipeline(&g, &tiny(k, core, 1));
            assert!(run.trace.succeeded(), "K{n}: {:?}", run.trace.outcome);
            assert!(is_hamilton_cycle(&g, &run.cycle.unwrap().order));
        }
    }

    #[test]
    fn too_few_blocks_is_a_config_error() {
        let g = gen_named("complete", &[20]).unwrap();
        let run = hamilton_pipeline(&g, &tiny(10, 0.75, 0));
        assert!(run.cycle.is_none());
        match &run.trace.outcome {
            Outcome::Failure { phase, kind, .. } => assert_eq!((phase.as_str(), kind.as_str()), ("config", "Config")),
            o => panic!("{o:?}"),
        }
        assert!(run.trace.certificate.is_none());
    }

    #[test]
    fn disconnected_input_stops_at_certification() {
        let mut edges = Vec::new();
        for base in [0, 10] {
            for u in 0..10 {
                for v in u + 1..10 {
                    edges.push((base + u, base + v));
                }
            }
        }
        let g = Graph::from_edges(20, &edges).unwrap();
        let run = hamilton_pipeline(&g, &tiny(2, 0.75, 0));
        match &run.trace.outcome {
            Outcome::Failure { phase, kind, .. } => {
                assert_eq!((phase.as_str(), kind.as_str()), ("certify", "CertificateOutOfRange"))
            }
            o => panic!("{o:?}"),
        }
        let cert = run.trace.certificate.unwrap();
        assert!((cert.lambda_hat - cert.d).abs() < 1e-9);
    }

    #[test]
    fn sizes_follow_the_configuration() {
        let cfg = PipelineConfig::desk(0);
        let s = Sizes::plan(401, 30, &cfg).unwrap();
        assert_eq!((s.x1, s.x2, s.x, s.r1, s.r2), (15, 15, 30, 140, 201));
        assert_eq!((s.blocks, s.t, s.surplus, s.reserve), (11, 13, 11, 35));
        assert_eq!(Sizes::default_k(2029, &cfg).unwrap(), 145);
        assert_eq!(Sizes::default_k(401, &PipelineConfig::asymptotic(0)).unwrap(), 25);
        assert!(Sizes::plan(401, 30, &PipelineConfig { reserve_fraction: 0.5, ..cfg.clone() }).is_err());
    }

    #[test]
    fn partition_covers_the_vertex_set() {
        let g = gen_paley(101).unwrap();
        let cert = certify_expander(&g, DEFAULT_TOL).unwrap();
        let cfg = PipelineConfig::desk(7);
        let sizes = Sizes::plan(101, 10, &cfg).unwrap();
        let (parts, rep) = partition_phase(&g, &cert, &cfg, &sizes).unwrap();
        assert!(rep.checks.failure().is_none());
        let mut all: Vec<usize> = [&parts.x1, &parts.x2, &parts.y1, &parts.y2, &parts.r1, &parts.r2]
            .iter()
            .flat_map(|p| p.iter().copied())
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..101).collect::<Vec<_>>());
        assert_eq!((parts.x1.len(), parts.y2.len(), parts.r1.len()), (5, 5, 30));
    }

    #[test]
    fn runs_are_reproducible() {
        let g = gen_paley(101).unwrap();
        let cfg = PipelineConfig::desk(3);
        let a = serde_json::to_string(&hamilton_pipeline(&g, &cfg).trace).unwrap();
        let b = serde_json::to_string(&hamilton_pipeline(&g, &cfg).trace).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn paley_cycle_verifies() {
        let g = gen_paley(401).unwrap();
        let run = hamilton_pipeline(&g, &PipelineConfig::desk(0));
        assert!(run.trace.succeeded(), "{:?}", run.trace.outcome);
        let cover = run.trace.path_cover.as_ref().unwrap();
        for w in cover.steps.windows(2) {
            let skipped = w[0].skip.as_ref().map_or(0, |m| m.edges.len());
            assert_eq!(w[0].size - skipped, w[1].size);
            assert_eq!(w[0].perfect.len(), w[1].size);
        }
        assert!(is_hamilton_cycle(&g, &run.cycle.unwrap().order));
    }
}
