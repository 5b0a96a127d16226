//! `(D, m)`-extendability checks and a breadth-first connector that links
//! prescribed port pairs by vertex-disjoint paths through a reserved set.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{mask, Graph, GraphError, SpectralCertificate};
use crate::rng;

/// Exhaustive checks are limited to graphs this small.
pub const EXACT_MAX_N: usize = 24;
/// and to sets of at most this size.
pub const EXACT_MAX_SET: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtendError {
    #[error("exhaustive check needs n <= {EXACT_MAX_N} and 2m <= {EXACT_MAX_SET}, got n = {n}, 2m = {set}")]
    TooLarge { n: usize, set: usize },
    #[error("subgraph has maximum degree {max_degree} above D = {cap}")]
    DegreeCap { max_degree: usize, cap: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("reserve has {reserve} vertices, at least {required} needed")]
    ReserveTooSmall { reserve: usize, required: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("could not connect pair {pair} ({x} -> {y}); {residual} reserve vertices free after {teardowns} teardowns")]
    ConnectFailed { pair: usize, x: usize, y: usize, residual: usize, teardowns: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A subgraph `S` given by its vertex set and edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Subgraph {
    /// `I(V)`: the edgeless subgraph on `vertices`.
    pub fn edgeless(vertices: Vec<usize>) -> Self {
        Self { vertices, edges: Vec::new() }
    }

    fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    fn check(&self, g: &Graph, d_cap: usize) -> Result<(Vec<bool>, Vec<usize>), ExtendError> {
        let n = g.n();
        let vm = mask(n, &self.vertices);
        if self.vertices.iter().any(|&v| v >= n) {
            return Err(ExtendError::BadParameter("subgraph vertex out of range".into()));
        }
        for &(u, v) in &self.edges {
            if u >= n || v >= n || !vm[u] || !vm[v] || !g.has_edge(u, v) {
                return Err(ExtendError::BadParameter(format!("({u}, {v}) is not an edge of G inside V(S)")));
            }
        }
        let deg = self.degrees(n);
        let max_degree = deg.iter().copied().max().unwrap_or(0);
        if max_degree > d_cap {
            return Err(ExtendError::DegreeCap { max_degree, cap: d_cap });
        }
        Ok((vm, deg))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictMethod {
    /// Every set was checked against the definition.
    Exact,
    /// Every set was checked against the neighbourhood condition, which
    /// implies extendability.
    Sufficient,
    /// Small sets were checked exhaustively, larger ones by random sampling.
    /// Not a proof.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtendabilityVerdict {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
    pub method: VerdictMethod,
    /// Whether `witness` also violates the definition itself.
    pub witness_violates_definition: Option<bool>,
    pub sets_checked: usize,
}

/// `|(N(U) ∪ U) ∖ V(S)| - ((D - 1)|U| - Σ_{u ∈ U ∩ V(S)} (d_S(u) - 1))`;
/// negative exactly when `U` violates the definition.
pub fn definition_slack(g: &Graph, s: &Subgraph, d_cap: usize, u: &[usize]) -> i64 {
    let vm = mask(g.n(), &s.vertices);
    let deg = s.degrees(g.n());
    slack_with(g, &vm, &deg, d_cap, u)
}

fn closed_outside(g: &Graph, vm: &[bool], u: &[usize], include_u: bool) -> usize {
    let mut seen: Vec<usize> = u
        .iter()
        .flat_map(|&x| g.neighbors(x).iter().map(|&w| w as usize))
        .chain(if include_u { u.to_vec() } else { Vec::new() })
        .filter(|&w| !vm[w])
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn slack_with(g: &Graph, vm: &[bool], deg: &[usize], d_cap: usize, u: &[usize]) -> i64 {
    let lhs = closed_outside(g, vm, u, true) as i64;
    let credit: i64 = u.iter().filter(|&&x| vm[x]).map(|&x| deg[x] as i64 - 1).sum();
    lhs - ((d_cap as i64 - 1) * u.len() as i64 - credit)
}

/// Calls `f` on every subset of `0..n` of size `1..=max`, by size and then
/// lexicographically, until it returns `false`.
fn for_each_subset(n: usize, max: usize, mut f: impl FnMut(&[usize]) -> bool) -> usize {
    let mut count = 0;
    for size in 1..=max.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            count += 1;
            if !f(&idx) {
                return count;
            }
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    count
}

fn check_d(d_cap: usize) -> Result<(), ExtendError> {
    if d_cap < 3 {
        return Err(ExtendError::BadParameter(format!("D = {d_cap} must be at least 3")));
    }
    Ok(())
}

/// Checks the definition on every `U` with `1 <= |U| <= 2m`.
pub fn is_extendable_exact(g: &Graph, s: &Subgraph, d_cap: usize, m: usize) -> Result<ExtendabilityVerdict, ExtendError> {
    check_d(d_cap)?;
    if g.n() > EXACT_MAX_N || 2 * m > EXACT_MAX_SET {
        return Err(ExtendError::TooLarge { n: g.n(), set: 2 * m });
    }
    let (vm, deg) = s.check(g, d_cap)?;
    let mut witness = None;
    let sets_checked = for_each_subset(g.n(), 2 * m, |u| {
        if slack_with(g, &vm, &deg, d_cap, u) < 0 {
            witness = Some(u.to_vec());
            false
        } else {
            true
        }
    });
    Ok(ExtendabilityVerdict {
        holds: witness.is_none(),
        witness_violates_definition: witness.as_ref().map(|_| true),
        witness,
        method: VerdictMethod::Exact,
        sets_checked,
    })
}

/// Checks `|N(U) ∖ V(S)| >= D |U|`: exhaustively for `|U| <= 2`, and on
/// `budget` random sets of each size `3..=2m`.
pub fn extendable_sufficient(
    g: &Graph,
    s: &Subgraph,
    d_cap: usize,
    m: usize,
    budget: usize,
    seed: u64,
) -> Result<ExtendabilityVerdict, ExtendError> {
    check_d(d_cap)?;
    let (vm, deg) = s.check(g, d_cap)?;
    let n = g.n();
    let violates = |u: &[usize]| closed_outside(g, &vm, u, false) < d_cap * u.len();
    let mut witness = None;
    let mut sets_checked = for_each_subset(n, (2 * m).min(2), |u| {
        if violates(u) {
            witness = Some(u.to_vec());
            false
        } else {
            true
        }
    });
    let exhaustive = 2 * m <= 2 || n <= 2;
    if witness.is_none() && !exhaustive {
        let mut r = rng::rng(seed);
        'sizes: for size in 3..=(2 * m).min(n) {
            for _ in 0..budget {
                let u = crate::sampling::uniform_members(&mut r, n, size);
                sets_checked += 1;
                if violates(&u) {
                    witness = Some(u);
                    break 'sizes;
                }
            }
        }
    }
    let method = if exhaustive { VerdictMethod::Sufficient } else { VerdictMethod::Sampled };
    Ok(ExtendabilityVerdict {
        holds: witness.is_none(),
        witness_violates_definition: witness.as_ref().map(|u| slack_with(g, &vm, &deg, d_cap, u) < 0),
        witness,
        method,
        sets_checked,
    })
}

/// Vertex-disjoint paths, each a vertex sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathSystem {
    pub paths: Vec<Vec<usize>>,
}

impl PathSystem {
    pub fn vertex_count(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum PathDefect {
    Empty { path: usize },
    WrongEndpoints { path: usize },
    MissingEdge { path: usize, u: usize, v: usize },
    SharedVertex { vertex: usize },
    OutsideReserve { path: usize, vertex: usize },
    TooLong { path: usize, length: usize, budget: usize },
}

/// Checks disjointness, endpoints, edges, interior containment in
/// `reserve`, and the length budget.
pub fn verify_path_system(
    g: &Graph,
    ps: &PathSystem,
    pairing: &[(usize, usize)],
    reserve: &[usize],
    budget: usize,
) -> Result<(), PathDefect> {
    let rm = mask(g.n(), reserve);
    let mut used = vec![false; g.n()];
    if ps.paths.len() != pairing.len() {
        return Err(PathDefect::WrongEndpoints { path: ps.paths.len().min(pairing.len()) });
    }
    for (i, (p, &(x, y))) in ps.paths.iter().zip(pairing).enumerate() {
        let (Some(&first), Some(&last)) = (p.first(), p.last()) else {
            return Err(PathDefect::Empty { path: i });
        };
        if first != x || last != y {
            return Err(PathDefect::WrongEndpoints { path: i });
        }
        if p.len() - 1 > budget {
            return Err(PathDefect::TooLong { path: i, length: p.len() - 1, budget });
        }
        for w in p.windows(2) {
            if w[0] >= g.n() || w[1] >= g.n() || !g.has_edge(w[0], w[1]) {
                return Err(PathDefect::MissingEdge { path: i, u: w[0], v: w[1] });
            }
        }
        for &v in &p[1..p.len() - 1] {
            if !rm[v] {
                return Err(PathDefect::OutsideReserve { path: i, vertex: v });
            }
        }
        for &v in p {
            if std::mem::replace(&mut used[v], true) {
                return Err(PathDefect::SharedVertex { vertex: v });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConnectorOptions {
    /// The reserve must have at least `ratio |X|` vertices.
    pub min_reserve_ratio: f64,
    /// Total teardowns allowed per `connect_pairs` call.
    pub retry_cap: usize,
}

impl Default for ConnectorOptions {
    fn default() -> Self {
        Self { min_reserve_ratio: 2.0, retry_cap: 50 }
    }
}

/// Reserved region with designated ports, able to link any pairing of the
/// ports by disjoint paths of length at most `budget`.
#[derive(Clone, Debug)]
pub struct Connector<'g> {
    graph: &'g Graph,
    pub reserved: Vec<usize>,
    pub left_ports: Vec<usize>,
    pub right_ports: Vec<usize>,
    pub budget: usize,
    pub options: ConnectorOptions,
    /// `d / (700 λ)` of the host certificate, recorded only.
    pub expansion_d: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConnectStats {
    pub teardowns: usize,
    pub interior_used: usize,
    pub absorbed: usize,
}

pub fn build_connector<'g>(
    g: &'g Graph,
    cert: &SpectralCertificate,
    x: &[usize],
    y: &[usize],
    reserve: &[usize],
    budget: usize,
    options: ConnectorOptions,
) -> Result<Connector<'g>, ExtendError> {
    let n = g.n();
    if cert.n != n {
        return Err(ExtendError::Precondition("certificate does not match the graph".into()));
    }
    if x.len() != y.len() {
        return Err(ExtendError::Precondition(format!("|X| = {} and |Y| = {} differ", x.len(), y.len())));
    }
    if budget == 0 {
        return Err(ExtendError::BadParameter("path length budget must be positive".into()));
    }
    let mut owner = vec![0u8; n];
    for (tag, set) in [(1u8, x), (2, y), (3, reserve)] {
        for &v in set {
            if v >= n {
                return Err(ExtendError::Precondition(format!("vertex {v} out of range")));
            }
            if owner[v] != 0 {
                return Err(ExtendError::Precondition(format!("vertex {v} lies in two of X, Y, reserve")));
            }
            owner[v] = tag;
        }
    }
    let required = (options.min_reserve_ratio * x.len() as f64).ceil() as usize;
    if reserve.len() < required {
        return Err(ExtendError::ReserveTooSmall { reserve: reserve.len(), required });
    }
    let mut reserved = reserve.to_vec();
    reserved.sort_unstable();
    Ok(Connector {
        graph: g,
        reserved,
        left_ports: x.to_vec(),
        right_ports: y.to_vec(),
        budget,
        options,
        expansion_d: cert.d / (700.0 * cert.lambda_hat),
    })
}

impl Connector<'_> {
    /// Shortest path from `s` to `t` whose interior uses only free reserve
    /// vertices outside `banned`, with at most `budget` edges.
    fn route(&self, s: usize, t: usize, free: &[bool], banned: &[usize]) -> Option<Vec<usize>> {
        let g = self.graph;
        if g.has_edge(s, t) {
            return Some(vec![s, t]);
        }
        let mut parent = vec![usize::MAX; g.n()];
        let mut depth = vec![0usize; g.n()];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if depth[u] + 1 >= self.budget {
                continue;
            }
            for &w in g.neighbors(u) {
                let w = w as usize;
                if parent[w] != usize::MAX || !free[w] || banned.contains(&w) {
                    continue;
                }
                parent[w] = u;
                depth[w] = depth[u] + 1;
                if g.has_edge(w, t) {
                    let mut path = vec![t, w];
                    let mut v = w;
                    while v != s {
                        v = parent[v];
                        path.push(v);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// Links `pairing[i].0` to `pairing[i].1` for every `i`. Pairs are routed
    /// in order by breadth-first search; when pair `i` fails, the most
    /// recently routed path not yet torn down for it is rerouted around its
    /// old interior and pair `i` is retried.
    pub fn connect_pairs(&self, pairing: &[(usize, usize)]) -> Result<(PathSystem, ConnectStats), ExtendError> {
        let n = self.graph.n();
        let (lm, rm) = (mask(n, &self.left_ports), mask(n, &self.right_ports));
        let mut seen_l = vec![false; n];
        let mut seen_r = vec![false; n];
        for &(x, y) in pairing {
            if x >= n || y >= n || !lm[x] || !rm[y] || std::mem::replace(&mut seen_l[x], true) || std::mem::replace(&mut seen_r[y], true) {
                return Err(ExtendError::Precondition(format!("({x}, {y}) is not part of a bijection X -> Y")));
            }
        }
        if pairing.len() != self.left_ports.len() {
            return Err(ExtendError::Precondition("pairing is not total on X".into()));
        }
        let mut free = mask(n, &self.reserved);
        let mut routed: Vec<Option<Vec<usize>>> = vec![None; pairing.len()];
        let mut teardowns = 0;
        let set = |free: &mut Vec<bool>, p: &[usize], value: bool| {
            for &v in &p[1..p.len() - 1] {
                free[v] = value;
            }
        };
        for i in 0..pairing.len() {
            let (x, y) = pairing[i];
            let mut back = 0;
            loop {
                if let Some(p) = self.route(x, y, &free, &[]) {
                    set(&mut free, &p, false);
                    routed[i] = Some(p);
                    break;
                }
                back += 1;
                if back > i || teardowns >= self.options.retry_cap {
                    return Err(ExtendError::ConnectFailed {
                        pair: i,
                        x,
                        y,
                        residual: free.iter().filter(|&&f| f).count(),
                        teardowns,
                    });
                }
                let j = i - back;
                let old = routed[j].take().expect("earlier pairs are routed");
                set(&mut free, &old, true);
                teardowns += 1;
                let ban = &old[1..old.len() - 1];
                let (xj, yj) = pairing[j];
                let p = if ban.is_empty() { None } else { self.route(xj, yj, &free, ban) };
                let p = p.unwrap_or(old);
                set(&mut free, &p, false);
                routed[j] = Some(p);
            }
        }
        let paths: Vec<Vec<usize>> = routed.into_iter().map(|p| p.expect("all pairs routed")).collect();
        let interior_used = paths.iter().map(|p| p.len() - 2).sum();
        Ok((PathSystem { paths }, ConnectStats { teardowns, interior_used, absorbed: 0 }))
    }

    /// Inserts unused reserve vertices into the paths: `w` goes between
    /// consecutive `a, b` when `a ~ w ~ b` and the path is below the budget.
    /// Returns the vertices that could not be placed.
    pub fn absorb_reserve(&self, ps: &mut PathSystem) -> Vec<usize> {
        let g = self.graph;
        let mut used = vec![false; g.n()];
        for p in &ps.paths {
            for &v in p {
                used[v] = true;
            }
        }
        let mut left: Vec<usize> = self.reserved.iter().copied().filter(|&v| !used[v]).collect();
        loop {
            let before = left.len();
            left.retain(|&w| {
                for p in ps.paths.iter_mut() {
                    if p.len() > self.budget {
                        continue;
                    }
                    if let Some(pos) = p.windows(2).position(|e| g.has_edge(e[0], w) && g.has_edge(w, e[1])) {
                        p.insert(pos + 1, w);
                        return false;
                    }
                }
                true
            });
            if left.is_empty() || left.len() == before {
                return left;
            }
        }
    }
}
