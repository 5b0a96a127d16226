//! Expander mixing lemma audits (matrix and graph forms), the one-edge
//! threshold, the expansion lemma and `m`-joinedness.
//!
//! Two counting conventions appear. For matrices `A(S, T)` is the entry sum
//! over `S x T`, i.e. ordered pairs. For graphs the audit reports both the
//! ordered count `1_S^T A 1_T` and the number of distinct edges meeting
//! `S` and `T`; the two differ by the edges inside `S ∩ T`.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::{mask, Graph, GraphError, SpectralCertificate};
use crate::linalg::{normalize, singular_values, DenseMatrix, LinalgError, NormalizedMatrix, DEFAULT_TOL};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MixingError {
    #[error("row or column subset is empty")]
    EmptySubset,
    #[error("certificate does not describe this graph: {0}")]
    CertificateMismatch(String),
    #[error("gamma_hat = {0} leaves no room below 1")]
    DegenerateGamma(f64),
    #[error("precondition {hypothesis} fails: {detail}")]
    PreconditionViolated { hypothesis: &'static str, detail: String },
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of one matrix mixing-lemma audit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingAudit {
    /// `A(S, T)`.
    pub a_st: f64,
    /// `A(S, n) A(m, T) / A(m, n)`.
    pub main_term: f64,
    /// `|A(S, T) - main_term|`.
    pub lhs_deviation: f64,
    pub rhs_bound: f64,
    pub s2_used: f64,
    pub holds: bool,
}

/// Precomputes `Ā` and `s2(Ā)` so that many `(S, T)` pairs can be audited
/// against the same matrix.
pub struct MatrixAuditor {
    normalized: NormalizedMatrix,
    matrix: DenseMatrix,
    s2: f64,
}

impl MatrixAuditor {
    pub fn new(a: &DenseMatrix) -> Result<Self, MixingError> {
        let normalized = normalize(a)?;
        let k = a.rows().min(a.cols()).min(2);
        let spectrum = singular_values(&normalized.base, k, DEFAULT_TOL)?;
        let s2 = spectrum.values.get(1).copied().unwrap_or(0.0);
        Ok(Self { normalized, matrix: a.clone(), s2 })
    }

    /// Builds an auditor around a caller-supplied `s2(Ā)`, e.g. from an
    /// independent solver.
    pub fn with_s2(a: &DenseMatrix, s2: f64) -> Result<Self, MixingError> {
        Ok(Self { normalized: normalize(a)?, matrix: a.clone(), s2 })
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn audit(&self, s: &[usize], t: &[usize]) -> Result<MixingAudit, MixingError> {
        if s.is_empty() || t.is_empty() {
            return Err(MixingError::EmptySubset);
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= self.matrix.rows()) {
            return Err(MixingError::OutOfRange(bad));
        }
        if let Some(&bad) = t.iter().find(|&&j| j >= self.matrix.cols()) {
            return Err(MixingError::OutOfRange(bad));
        }
        let total = self.normalized.total();
        let a_sn: f64 = s.iter().map(|&i| self.normalized.row_sums[i]).sum();
        let a_mt: f64 = t.iter().map(|&j| self.normalized.col_sums[j]).sum();
        let a_st: f64 = s.iter().map(|&i| t.iter().map(|&j| self.matrix.get(i, j)).sum::<f64>()).sum();
        let main_term = a_sn * a_mt / total;
        let lhs_deviation = (a_st - main_term).abs();
        let f1 = (a_sn * (1.0 - a_sn / total)).max(0.0);
        let f2 = (a_mt * (1.0 - a_mt / total)).max(0.0);
        let rhs_bound = self.s2 * (f1 * f2).sqrt();
        let slack = 1e-9 * total.max(1.0);
        Ok(MixingAudit {
            a_st,
            main_term,
            lhs_deviation,
            rhs_bound,
            s2_used: self.s2,
            holds: lhs_deviation <= rhs_bound + slack,
        })
    }
}

/// `|A(S,T) - A(S,n)A(m,T)/A(m,n)| <= s2(Ā) sqrt(A(S,n)(1 - A(S,n)/A(m,n)) A(m,T)(1 - A(m,T)/A(m,n)))`.
pub fn eml_matrix_audit(a: &DenseMatrix, s: &[usize], t: &[usize]) -> Result<MixingAudit, MixingError> {
    if s.is_empty() || t.is_empty() {
        return Err(MixingError::EmptySubset);
    }
    MatrixAuditor::new(a)?.audit(s, t)
}

/// Graph mixing audit under both counting conventions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphMixingAudit {
    /// `1_S^T A 1_T`.
    pub ordered_count: usize,
    /// Distinct edges with one endpoint in `S` and the other in `T`.
    pub edge_count: usize,
    /// `d |S||T| / n`.
    pub main_term: f64,
    /// `(1+γ)/(1-γ) λ sqrt(|S||T|)`.
    pub epsilon: f64,
    pub lower: f64,
    pub upper: f64,
    /// Window for `edge_count`, obtained by also bounding the edges inside
    /// `S ∩ T`. Equals `[lower, upper]` when `S` and `T` are disjoint.
    pub edge_lower: f64,
    pub edge_upper: f64,
    pub holds_ordered: bool,
    pub holds_edges: bool,
    pub holds: bool,
}

fn window(d: f64, gamma: f64, lambda: f64, n: f64, s: f64, t: f64) -> (f64, f64, f64, f64) {
    let main = d * s * t / n;
    let eps = (1.0 + gamma) / (1.0 - gamma) * lambda * (s * t).sqrt();
    let lo = (1.0 - gamma).powi(2) * d * s * t / ((1.0 + gamma) * n) - eps;
    let hi = (1.0 + gamma).powi(2) * d * s * t / ((1.0 - gamma) * n) + eps;
    (main, eps, lo, hi)
}

/// Checks that `cert` really describes `g` (size and degree window).
pub fn check_certificate(cert: &SpectralCertificate, g: &Graph) -> Result<(), MixingError> {
    if cert.n != g.n() {
        return Err(MixingError::CertificateMismatch(format!("certificate has n = {}, graph has {}", cert.n, g.n())));
    }
    if !cert.degrees_hold(g) {
        return Err(MixingError::CertificateMismatch("degree window does not cover the graph".into()));
    }
    Ok(())
}

pub fn eml_graph_audit(
    cert: &SpectralCertificate,
    g: &Graph,
    s: &[usize],
    t: &[usize],
) -> Result<GraphMixingAudit, MixingError> {
    check_certificate(cert, g)?;
    if cert.gamma_hat >= 1.0 {
        return Err(MixingError::DegenerateGamma(cert.gamma_hat));
    }
    let n = g.n();
    if let Some(&bad) = s.iter().chain(t).find(|&&v| v >= n) {
        return Err(MixingError::OutOfRange(bad));
    }
    let s_mask = mask(n, s);
    let t_mask = mask(n, t);
    let (ns, nt) = (s_mask.iter().filter(|&&x| x).count(), t_mask.iter().filter(|&&x| x).count());
    let s_list: Vec<usize> = (0..n).filter(|&v| s_mask[v]).collect();
    let ordered_count = g.ordered_pairs_between(&s_list, &t_mask);
    let edge_count = g.edges_between(&s_mask, &t_mask);
    let (d, gm, lam) = (cert.d, cert.gamma_hat, cert.lambda_hat);
    let (main_term, epsilon, lower, upper) = window(d, gm, lam, n as f64, ns as f64, nt as f64);
    let w = (0..n).filter(|&v| s_mask[v] && t_mask[v]).count() as f64;
    let (edge_lower, edge_upper) = if w == 0.0 {
        (lower, upper)
    } else {
        // edges inside W = S ∩ T equal half the ordered count on W x W.
        let (_, _, wlo, whi) = window(d, gm, lam, n as f64, w, w);
        (lower - whi / 2.0, upper - wlo.max(0.0) / 2.0)
    };
    let slack = 1e-9 * (upper.abs() + 1.0);
    let holds_ordered = (ordered_count as f64) >= lower - slack && (ordered_count as f64) <= upper + slack;
    let holds_edges = (edge_count as f64) >= edge_lower - slack && (edge_count as f64) <= edge_upper + slack;
    Ok(GraphMixingAudit {
        ordered_count,
        edge_count,
        main_term,
        epsilon,
        lower,
        upper,
        edge_lower,
        edge_upper,
        holds_ordered,
        holds_edges,
        holds: holds_ordered && holds_edges,
    })
}

/// `θ = (1+γ)²/(1-γ)³ · λ n / d`: disjoint `S, T` with `sqrt(|S||T|) > θ`
/// always span an edge.
pub fn one_edge_threshold(cert: &SpectralCertificate) -> Result<f64, MixingError> {
    let g = cert.gamma_hat;
    if !(g < 1.0) {
        return Err(MixingError::DegenerateGamma(g));
    }
    Ok((1.0 + g).powi(2) / (1.0 - g).powi(3) * cert.lambda_hat * cert.n as f64 / cert.d)
}

/// Constants of the expansion lemma. Defaults are the lemma's own.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExpansionConstants {
    /// Largest admissible `γ`.
    pub gamma_max: f64,
    /// `λ <= d / lambda_divisor`.
    pub lambda_divisor: f64,
    /// Every `v ∈ S` needs `deg(v, T) >= d * min_degree_fraction`.
    pub min_degree_fraction: f64,
    /// `|X| <= size_factor · λ n / d`.
    pub size_factor: f64,
    /// Guaranteed expansion `d / (expansion_divisor λ)`.
    pub expansion_divisor: f64,
}

impl Default for ExpansionConstants {
    fn default() -> Self {
        Self {
            gamma_max: 1.0 / 20.0,
            lambda_divisor: 700.0,
            min_degree_fraction: 1.0 / 6.0,
            size_factor: 4.0,
            expansion_divisor: 700.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionAudit {
    pub required: f64,
    pub actual: usize,
    pub holds: bool,
}

/// Checks `|N(X) ∩ T| >= d / (c λ) · |X|` after verifying the lemma's
/// hypotheses; a failed hypothesis is reported by name.
pub fn expansion_audit(
    cert: &SpectralCertificate,
    g: &Graph,
    s: &[usize],
    t: &[usize],
    x: &[usize],
    consts: &ExpansionConstants,
) -> Result<ExpansionAudit, MixingError> {
    check_certificate(cert, g)?;
    let n = g.n();
    let (d, gamma, lambda) = (cert.d, cert.gamma_hat, cert.lambda_hat);
    let pre = |hypothesis: &'static str, detail: String| Err(MixingError::PreconditionViolated { hypothesis, detail });
    if gamma > consts.gamma_max {
        return pre("gamma_max", format!("gamma = {gamma} > {}", consts.gamma_max));
    }
    if lambda > d / consts.lambda_divisor {
        return pre("lambda_divisor", format!("lambda = {lambda} > d / {} = {}", consts.lambda_divisor, d / consts.lambda_divisor));
    }
    if let Some(&bad) = s.iter().chain(t).chain(x).find(|&&v| v >= n) {
        return Err(MixingError::OutOfRange(bad));
    }
    let s_mask = mask(n, s);
    let t_mask = mask(n, t);
    if let Some(&v) = s.iter().find(|&&v| (g.degree_into(v, &t_mask) as f64) < d * consts.min_degree_fraction) {
        return pre(
            "min_degree_fraction",
            format!("deg({v}, T) = {} < {}", g.degree_into(v, &t_mask), d * consts.min_degree_fraction),
        );
    }
    if let Some(&v) = x.iter().find(|&&v| !s_mask[v]) {
        return pre("x_subset_of_s", format!("vertex {v} of X is not in S"));
    }
    let cap = consts.size_factor * lambda * n as f64 / d;
    if x.len() as f64 > cap {
        return pre("size_factor", format!("|X| = {} > {cap}", x.len()));
    }
    let mut hit = vec![false; n];
    for &v in x {
        for &w in g.neighbors(v) {
            if t_mask[w as usize] {
                hit[w as usize] = true;
            }
        }
    }
    let actual = hit.iter().filter(|&&h| h).count();
    let required = d / (consts.expansion_divisor * lambda) * x.len() as f64;
    Ok(ExpansionAudit { required, actual, holds: actual as f64 >= required - 1e-9 })
}

/// Result of [`joinedness_certify`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Joinedness {
    pub theta: f64,
    /// Any two disjoint sets of size `m` span an edge.
    pub m: usize,
    /// `2m > n`: no two disjoint `m`-sets exist, so the certificate says nothing.
    pub degenerate: bool,
    pub falsifier_trials: usize,
    /// A disjoint pair without edges, if the falsifier found one.
    pub counterexample: Option<(Vec<usize>, Vec<usize>)>,
}

pub const FALSIFIER_TRIALS: usize = 10_000;

/// `m = ⌊θ⌋ + 1`, then random disjoint `m`-set pairs are tried as
/// counterexamples.
pub fn joinedness_certify(
    cert: &SpectralCertificate,
    g: &Graph,
    trials: usize,
    seed: u64,
) -> Result<Joinedness, MixingError> {
    check_certificate(cert, g)?;
    let theta = one_edge_threshold(cert)?;
    let m = theta.floor() as usize + 1;
    let n = g.n();
    let degenerate = 2 * m > n;
    if degenerate {
        return Ok(Joinedness { theta, m, degenerate, falsifier_trials: 0, counterexample: None });
    }
    let counterexample = (0..trials)
        .into_par_iter()
        .find_map_first(|i| {
            let mut r = rng::rng(rng::trial_seed(seed, i as u64));
            let pick = sample(&mut r, n, 2 * m).into_vec();
            let (a, b) = pick.split_at(m);
            let b_mask = mask(n, b);
            if a.iter().all(|&v| g.degree_into(v, &b_mask) == 0) {
                let (mut a, mut b) = (a.to_vec(), b.to_vec());
                a.sort_unstable();
                b.sort_unstable();
                Some((a, b))
            } else {
                None
            }
        });
    Ok(Joinedness { theta, m, degenerate, falsifier_trials: trials, counterexample })
}

/// One serialized audit record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub kind: String,
    pub n: usize,
    pub params: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl AuditRecord {
    pub fn matrix(n: usize, s: &[usize], t: &[usize], a: &MixingAudit) -> Self {
        Self {
            kind: "eml_matrix".into(),
            n,
            params: serde_json::json!({ "S": s, "T": t, "s2": a.s2_used, "main_term": a.main_term }),
            lhs: a.lhs_deviation,
            rhs: a.rhs_bound,
            holds: a.holds,
        }
    }

    /// The graph audit as a record: `lhs` is the ordered count and `rhs` the
    /// upper end of the window; the full audit is kept in `params`.
    pub fn graph(n: usize, s: &[usize], t: &[usize], a: &GraphMixingAudit) -> Self {
        Self {
            kind: "eml_graph".into(),
            n,
            params: serde_json::json!({ "S": s, "T": t, "audit": a }),
            lhs: a.ordered_count as f64,
            rhs: a.upper,
            holds: a.holds,
        }
    }
}
