//! Bipartite matchings: maximum matchings by shortest augmenting paths, Hall
//! violators, perfect matchings in balanced bipartite expanders and the
//! greedy matching that avoids prescribed sets.

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::graphs::{
    certify_bipartite_expander, mask, second_singular_value, BipartiteOutcome, BipartiteView, Graph, GraphError,
    SpectralCertificate,
};
use crate::linalg::DEFAULT_TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error("precondition {hypothesis} violated: {detail}")]
    PreconditionViolated { hypothesis: &'static str, detail: String },
    #[error("sides have sizes {left} and {right}")]
    UnbalancedSides { left: usize, right: usize },
    /// No perfect matching although every checked hypothesis holds.
    #[error("no perfect matching under verified hypotheses (relaxed caps: {relaxed}); Hall violator {violator:?}")]
    TheoremFalsified { violator: Vec<usize>, relaxed: bool },
    /// Two residual sides above the threshold span no edge, so the
    /// certificate cannot be right.
    #[error("no edge between residual sides of sizes {left} and {right}; certificate falsified")]
    NoEdgeFound { left: usize, right: usize },
    #[error("greedy matching of size {size} is below the floor {floor}")]
    FloorMissed { size: usize, floor: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Vertex-disjoint edges `(left, right)` of a host graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
    pub left_cover: Vec<usize>,
    pub right_cover: Vec<usize>,
}

impl Matching {
    /// Sorts the edges and rebuilds both covers.
    pub fn from_edges(mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        let mut left_cover: Vec<usize> = edges.iter().map(|e| e.0).collect();
        let mut right_cover: Vec<usize> = edges.iter().map(|e| e.1).collect();
        left_cover.sort_unstable();
        right_cover.sort_unstable();
        Self { edges, left_cover, right_cover }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Partner of `v` on the other side, if matched.
    pub fn mate(&self, v: usize) -> Option<usize> {
        self.edges.iter().find_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
    }
}

/// Serialized as a sorted list of `[u, v]` pairs.
impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.edges.len()))?;
        for &(u, v) in &self.edges {
            seq.serialize_element(&[u, v])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<[usize; 2]> = Vec::deserialize(d)?;
        Ok(Self::from_edges(pairs.into_iter().map(|[u, v]| (u, v)).collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum MatchingDefect {
    SharedVertex { vertex: usize },
    MissingEdge { u: usize, v: usize },
    WrongSide { u: usize, v: usize },
    CoverMismatch,
}

/// Independent check that `m` is a matching of `g` between `left` and
/// `right` with consistent covers.
pub fn verify_matching(g: &Graph, left: &[usize], right: &[usize], m: &Matching) -> Result<(), MatchingDefect> {
    let (lm, rm) = (mask(g.n(), left), mask(g.n(), right));
    let mut used = vec![false; g.n()];
    for &(u, v) in &m.edges {
        if u >= g.n() || v >= g.n() || !lm[u] || !rm[v] {
            return Err(MatchingDefect::WrongSide { u, v });
        }
        if !g.has_edge(u, v) {
            return Err(MatchingDefect::MissingEdge { u, v });
        }
        for w in [u, v] {
            if std::mem::replace(&mut used[w], true) {
                return Err(MatchingDefect::SharedVertex { vertex: w });
            }
        }
    }
    if Matching::from_edges(m.edges.clone()) != *m {
        return Err(MatchingDefect::CoverMismatch);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Local adjacency from `from` into `to`, in the parent's sorted order.
fn local_adjacency(g: &Graph, from: &[usize], to: &[usize]) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; g.n()];
    for (j, &v) in to.iter().enumerate() {
        index[v] = j;
    }
    from.iter()
        .map(|&u| g.neighbors(u).iter().map(|&w| index[w as usize]).filter(|&j| j != usize::MAX).collect())
        .collect()
}

struct Engine {
    adj: Vec<Vec<usize>>,
    mate_l: Vec<Option<usize>>,
    mate_r: Vec<Option<usize>>,
    dist: Vec<usize>,
}

impl Engine {
    fn new(adj: Vec<Vec<usize>>, nr: usize) -> Self {
        let nl = adj.len();
        Self { adj, mate_l: vec![None; nl], mate_r: vec![None; nr], dist: vec![0; nl] }
    }

    /// Layers free left vertices; true if some free right vertex is reachable.
    fn bfs(&mut self) -> bool {
        let mut queue = std::collections::VecDeque::new();
        for (u, m) in self.mate_l.iter().enumerate() {
            if m.is_none() {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                match self.mate_r[v] {
                    None => found = true,
                    Some(w) if self.dist[w] == usize::MAX => {
                        self.dist[w] = self.dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        for i in 0..self.adj[u].len() {
            let v = self.adj[u][i];
            let ok = match self.mate_r[v] {
                None => true,
                Some(w) => self.dist[w] == self.dist[u] + 1 && self.dfs(w),
            };
            if ok {
                self.mate_l[u] = Some(v);
                self.mate_r[v] = Some(u);
                return true;
            }
        }
        self.dist[u] = usize::MAX;
        false
    }

    fn run(&mut self) {
        while self.bfs() {
            for u in 0..self.adj.len() {
                if self.mate_l[u].is_none() {
                    self.dfs(u);
                }
            }
        }
    }

    /// Left vertices reachable from free left vertices by alternating paths.
    fn reachable_left(&self) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        let mut stack: Vec<usize> = (0..self.adj.len()).filter(|&u| self.mate_l[u].is_none()).collect();
        for &u in &stack {
            seen[u] = true;
        }
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if let Some(w) = self.mate_r[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        (0..self.adj.len()).filter(|&u| seen[u]).collect()
    }
}

fn solve(g: &Graph, left: &[usize], right: &[usize]) -> Engine {
    let mut e = Engine::new(local_adjacency(g, left, right), right.len());
    e.run();
    e
}

/// Maximum-cardinality matching between the two sides of `view`.
pub fn max_matching(view: &BipartiteView<'_>) -> Matching {
    let e = solve(view.parent, &view.left, &view.right);
    let edges = e.mate_l.iter().enumerate().filter_map(|(i, m)| m.map(|j| (view.left[i], view.right[j]))).collect();
    Matching::from_edges(edges)
}

/// A set `S` on `side` with `|N(S)| < |S|`, or `None` when a maximum matching
/// saturates that side.
pub fn hall_violator(view: &BipartiteView<'_>, side: Side) -> Option<Vec<usize>> {
    let (from, to) = match side {
        Side::Left => (&view.left, &view.right),
        Side::Right => (&view.right, &view.left),
    };
    let e = solve(view.parent, from, to);
    if e.mate_l.iter().all(Option::is_some) {
        return None;
    }
    let mut s: Vec<usize> = e.reachable_left().into_iter().map(|i| from[i]).collect();
    s.sort_unstable();
    Some(s)
}

/// `N(S)` inside `other`.
pub fn neighborhood_in(g: &Graph, s: &[usize], other: &[usize]) -> Vec<usize> {
    let om = mask(g.n(), other);
    let mut seen = vec![false; g.n()];
    for &u in s {
        for &w in g.neighbors(u) {
            if om[w as usize] {
                seen[w as usize] = true;
            }
        }
    }
    (0..g.n()).filter(|&v| seen[v]).collect()
}

/// Measured parameters `(n, (1 ± γ) d, λ)` of a bipartite view: `n` and `d`
/// are the size and mean degree of the graph induced on both sides, `γ` is
/// the largest relative deviation of union degrees from `d` and of
/// cross-degrees from `d |other| / n`, and `λ = s2` of the induced graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteParams {
    pub n: usize,
    pub d: f64,
    pub gamma: f64,
    pub lambda: f64,
}

pub fn measure_bipartite(view: &BipartiteView<'_>, tol: f64) -> Result<BipartiteParams, GraphError> {
    if view.left.is_empty() || view.right.is_empty() {
        return Err(GraphError::EmptySide);
    }
    let g = view.parent;
    let union = view.union();
    let n = union.len();
    let um = mask(g.n(), &union);
    let union_deg: Vec<usize> = union.iter().map(|&v| g.degree_into(v, &um)).collect();
    let d = union_deg.iter().sum::<usize>() as f64 / n as f64;
    if d == 0.0 {
        return Ok(BipartiteParams { n, d, gamma: f64::INFINITY, lambda: 0.0 });
    }
    let mut gamma = union_deg.iter().map(|&k| (k as f64 / d - 1.0).abs()).fold(0.0, f64::max);
    let (lm, rm) = (mask(g.n(), &view.left), mask(g.n(), &view.right));
    for (set, other, len) in [(&view.left, &rm, view.right.len()), (&view.right, &lm, view.left.len())] {
        let target = d * len as f64 / n as f64;
        for &v in set.iter() {
            gamma = gamma.max((g.degree_into(v, other) as f64 / target - 1.0).abs());
        }
    }
    let (lambda, _) = second_singular_value(&g.induced(&union), tol, crate::graphs::CERTIFY_SEED)?;
    Ok(BipartiteParams { n, d, gamma, lambda })
}

/// Caps on `γ` and `λ / d` under which a balanced bipartite expander is
/// guaranteed a perfect matching.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpanderCaps {
    pub gamma_max: f64,
    pub lambda_ratio: f64,
}

impl ExpanderCaps {
    pub const LEMMA: Self = Self { gamma_max: 1.0 / 6.0, lambda_ratio: 1.0 / 200.0 };

    fn relaxed(&self) -> bool {
        self.gamma_max > Self::LEMMA.gamma_max || self.lambda_ratio > Self::LEMMA.lambda_ratio
    }
}

impl Default for ExpanderCaps {
    fn default() -> Self {
        Self::LEMMA
    }
}

/// Perfect matching of a balanced bipartite expander with parameters
/// `params`, after re-checking that the view satisfies them.
pub fn perfect_matching_expander(
    view: &BipartiteView<'_>,
    params: &BipartiteParams,
    caps: &ExpanderCaps,
) -> Result<Matching, MatchingError> {
    if view.left.len() != view.right.len() {
        return Err(MatchingError::UnbalancedSides { left: view.left.len(), right: view.right.len() });
    }
    if view.left.is_empty() {
        return Ok(Matching::default());
    }
    if !(params.gamma <= caps.gamma_max) {
        return Err(MatchingError::PreconditionViolated {
            hypothesis: "gamma_max",
            detail: format!("gamma = {} exceeds {}", params.gamma, caps.gamma_max),
        });
    }
    if !(params.lambda <= caps.lambda_ratio * params.d) {
        return Err(MatchingError::PreconditionViolated {
            hypothesis: "lambda_ratio",
            detail: format!("lambda = {} exceeds {} d = {}", params.lambda, caps.lambda_ratio, caps.lambda_ratio * params.d),
        });
    }
    let n = view.left.len() + view.right.len();
    if params.n != n {
        return Err(MatchingError::PreconditionViolated {
            hypothesis: "bipartite_expander",
            detail: format!("parameters are for n = {}, view has {n}", params.n),
        });
    }
    let slack = 1e-9;
    match certify_bipartite_expander(view, params.d, params.gamma + slack, Some(params.lambda + slack), DEFAULT_TOL)? {
        BipartiteOutcome::Pass(_) => {}
        BipartiteOutcome::Violation(v) => {
            return Err(MatchingError::PreconditionViolated {
                hypothesis: "bipartite_expander",
                detail: format!("{v:?}"),
            })
        }
    }
    let m = max_matching(view);
    if m.len() == view.left.len() {
        return Ok(m);
    }
    let violator = hall_violator(view, Side::Left).or_else(|| hall_violator(view, Side::Right)).unwrap_or_default();
    Err(MatchingError::TheoremFalsified { violator, relaxed: caps.relaxed() })
}

/// Result of the greedy avoiding-set matching.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyMatching {
    pub matching: Matching,
    /// `θ = (1+γ)²/(1-γ)³ · λ n / d`.
    pub theta: f64,
    /// `min{|V1| - k1 - θ, |V2| - k2 - θ}`.
    pub floor: f64,
    /// `ceil(floor)` clamped at 0; the size is asserted to reach it.
    pub guaranteed: usize,
}

fn edge_threshold(cert: &SpectralCertificate) -> Result<f64, MatchingError> {
    let gm = cert.gamma_hat;
    if !(gm < 1.0) || cert.d <= 0.0 {
        return Err(MatchingError::PreconditionViolated { hypothesis: "gamma", detail: format!("gamma = {gm}") });
    }
    Ok((1.0 + gm).powi(2) / (1.0 - gm).powi(3) * cert.lambda_hat * cert.n as f64 / cert.d)
}

/// Repeatedly adds the lexicographically smallest edge `(u, v)` with `u` in
/// `u1` and `v` in `u2`, removing its endpoints, until `stop` says so.
/// Returns `None` if no edge is left while `stop` is still false.
pub(crate) fn greedy_loop(
    g: &Graph,
    u1: &[usize],
    u2: &[usize],
    mut stop: impl FnMut(usize, usize, usize) -> bool,
) -> (Vec<(usize, usize)>, bool) {
    let mut left: Vec<usize> = u1.to_vec();
    left.sort_unstable();
    let mut right_mask = mask(g.n(), u2);
    let mut left_alive = vec![true; left.len()];
    let (mut r1, mut r2) = (left.len(), u2.len());
    let mut edges = Vec::new();
    while !stop(r1, r2, edges.len()) {
        let next = left.iter().enumerate().filter(|&(i, _)| left_alive[i]).find_map(|(i, &u)| {
            g.neighbors(u).iter().map(|&w| w as usize).find(|&w| right_mask[w]).map(|w| (i, u, w))
        });
        match next {
            Some((i, u, w)) => {
                left_alive[i] = false;
                right_mask[w] = false;
                r1 -= 1;
                r2 -= 1;
                edges.push((u, w));
            }
            None => return (edges, false),
        }
    }
    (edges, true)
}

/// Greedy matching between `V1 ∖ S1` and `V2 ∖ S2` that stops once either
/// residual side has at most `θ` vertices.
pub fn greedy_matching_avoiding(
    g: &Graph,
    cert: &SpectralCertificate,
    v1: &[usize],
    v2: &[usize],
    s1: &[usize],
    s2: &[usize],
) -> Result<GreedyMatching, MatchingError> {
    if cert.n != g.n() || !cert.degrees_hold(g) {
        return Err(MatchingError::PreconditionViolated {
            hypothesis: "certificate",
            detail: "certificate does not describe the graph".into(),
        });
    }
    let n = g.n();
    let (m1, m2) = (mask(n, v1), mask(n, v2));
    if v1.iter().chain(v2).any(|&v| v >= n) || v1.iter().any(|&v| m2[v]) {
        return Err(MatchingError::PreconditionViolated {
            hypothesis: "disjoint_sides",
            detail: "V1 and V2 must be disjoint vertex sets of the graph".into(),
        });
    }
    if s1.iter().any(|&v| v >= n || !m1[v]) || s2.iter().any(|&v| v >= n || !m2[v]) {
        return Err(MatchingError::PreconditionViolated {
            hypothesis: "avoid_subset",
            detail: "each S_i must lie inside V_i".into(),
        });
    }
    let theta = edge_threshold(cert)?;
    let (sm1, sm2) = (mask(n, s1), mask(n, s2));
    let k1 = (0..n).filter(|&v| sm1[v]).count();
    let k2 = (0..n).filter(|&v| sm2[v]).count();
    let (n1, n2) = ((0..n).filter(|&v| m1[v]).count(), (0..n).filter(|&v| m2[v]).count());
    for (k, size) in [(k1, n1), (k2, n2)] {
        if k as f64 > size as f64 - theta {
            return Err(MatchingError::PreconditionViolated {
                hypothesis: "avoid_size",
                detail: format!("|S| = {k} exceeds |V| - theta = {}", size as f64 - theta),
            });
        }
    }
    let u1: Vec<usize> = (0..n).filter(|&v| m1[v] && !sm1[v]).collect();
    let u2: Vec<usize> = (0..n).filter(|&v| m2[v] && !sm2[v]).collect();
    let (edges, complete) = greedy_loop(g, &u1, &u2, |a, b, _| a as f64 <= theta || b as f64 <= theta);
    if !complete {
        let size = edges.len();
        return Err(MatchingError::NoEdgeFound { left: u1.len() - size, right: u2.len() - size });
    }
    let floor = ((n1 - k1) as f64 - theta).min((n2 - k2) as f64 - theta);
    let guaranteed = floor.max(0.0).ceil() as usize;
    let matching = Matching::from_edges(edges);
    if matching.len() < guaranteed {
        return Err(MatchingError::FloorMissed { size: matching.len(), floor: guaranteed });
    }
    Ok(GreedyMatching { matching, theta, floor, guaranteed })
}
