//! Path cover from chained matchings, and closing the paths into a cycle.

use serde::Serialize;

use super::phases::{cover_order, Blocks, Parts};
use super::{HamiltonCycle, PipelineError};
use crate::extend::{ConnectStats, Connector, PathSystem};
use crate::graphs::{mask, BipartiteView, Graph};
use crate::linalg::DEFAULT_TOL;
use crate::matching::{greedy_loop, max_matching, measure_bipartite, perfect_matching_expander, BipartiteParams, ExpanderCaps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingMethod {
    Greedy,
    /// Greedy got stuck; a maximum matching truncated to the target size.
    MaxMatching,
}

/// One `M_i`: paths leaving block `i` straight for `Y1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkipRecord {
    pub need: usize,
    pub left_size: usize,
    pub right_size: usize,
    /// `ceil(min{|L| - θ, |R| - θ})` from the measured parameters of the
    /// pair, clamped at 0.
    pub floor: usize,
    pub method: MatchingMethod,
    pub edges: Vec<(usize, usize)>,
}

/// One step of the chain: block `block` with `size` path ends.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    /// Index into [`Blocks::blocks`].
    pub block: usize,
    pub size: usize,
    pub skip: Option<SkipRecord>,
    /// Parameters of the pair the perfect matching `N_i` is taken in.
    pub params: BipartiteParams,
    pub perfect: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverReport {
    /// Block indices in path-cover order: `X`, middle blocks, `Y`.
    pub order: Vec<usize>,
    pub steps: Vec<StepRecord>,
    pub paths: PathSystem,
}

/// Inputs the path cover needs besides the graph.
pub struct CoverInput<'a> {
    pub parts: &'a Parts,
    pub blocks: &'a Blocks,
    pub reserve: &'a [usize],
    pub caps: ExpanderCaps,
    pub theta_scale: f64,
}

fn matching_floor(p: &BipartiteParams, left: usize, right: usize, scale: f64) -> usize {
    if p.d <= 0.0 || p.gamma >= 1.0 {
        return 0;
    }
    let theta = scale * (1.0 + p.gamma).powi(2) / (1.0 - p.gamma).powi(3) * p.lambda * p.n as f64 / p.d;
    let f = (left as f64 - theta).min(right as f64 - theta);
    if f <= 0.0 {
        0
    } else {
        f.ceil() as usize
    }
}

/// `need` edges between `left` and `right`.
fn skip_matching(
    g: &Graph,
    step: usize,
    left: &[usize],
    right: &[usize],
    need: usize,
    theta_scale: f64,
) -> Result<SkipRecord, PipelineError> {
    let (mut edges, _) = greedy_loop(g, left, right, |_, _, size| size == need);
    let mut method = MatchingMethod::Greedy;
    let floor = if left.is_empty() || right.is_empty() {
        0
    } else {
        let view = BipartiteView::new(g, left.to_vec(), right.to_vec())?;
        let params = measure_bipartite(&view, DEFAULT_TOL)?;
        if edges.len() < need {
            let m = max_matching(&view);
            if m.len() > edges.len() {
                edges = m.edges.into_iter().take(need).collect();
                method = MatchingMethod::MaxMatching;
            }
        }
        matching_floor(&params, left.len(), right.len(), theta_scale)
    };
    if edges.len() < need.min(floor) {
        return Err(PipelineError::MatchingFloorMissed { step, size: edges.len(), floor });
    }
    if edges.len() < need {
        return Err(PipelineError::MatchingShort { step, size: edges.len(), need });
    }
    Ok(SkipRecord { need, left_size: left.len(), right_size: right.len(), floor, method, edges })
}

/// Vertex-disjoint paths from `X` to `Y` covering `X`, `Y` and every
/// `V_i ∖ reserve`.
pub fn path_cover_phase(g: &Graph, input: &CoverInput<'_>) -> Result<CoverReport, PipelineError> {
    let n = g.n();
    let CoverInput { parts, blocks, reserve, .. } = *input;
    let t = blocks.blocks.len();
    let rm = mask(n, reserve);
    let order = cover_order(blocks, &rm);
    let x = parts.x();
    let level = |i: usize| -> Vec<usize> { blocks.blocks[i].iter().copied().filter(|&v| !rm[v]).collect() };
    for &i in &order[1..t - 1] {
        let size = level(i).len();
        if size > x.len() {
            return Err(PipelineError::BlockLargerThanX { block: i, size, x: x.len() });
        }
    }

    let mut paths: Vec<Vec<usize>> = x.iter().map(|&v| vec![v]).collect();
    let mut path_of = vec![usize::MAX; n];
    for (p, &v) in x.iter().enumerate() {
        path_of[v] = p;
    }
    let mut y_left = mask(n, &parts.y());
    let y1 = mask(n, &parts.y1);
    let mut cur = x.clone();
    let mut steps = Vec::with_capacity(t - 1);
    let mut trail: Vec<usize> = order[1..t - 1].to_vec();
    trail.push(t);
    for (s, &nb) in trail.iter().enumerate() {
        let block = order[s];
        let next: Vec<usize> =
            if nb == t { (0..n).filter(|&v| y_left[v]).collect() } else { level(nb) };
        let size = cur.len();
        let skip = if nb == t {
            None
        } else {
            let need = cur.len() - next.len();
            let first = mask(n, &blocks.first_parts[block]);
            let left: Vec<usize> = cur.iter().copied().filter(|&v| first[v]).collect();
            let right: Vec<usize> = (0..n).filter(|&v| y_left[v] && y1[v]).collect();
            let rec = skip_matching(g, s, &left, &right, need, input.theta_scale)?;
            for &(u, y) in &rec.edges {
                paths[path_of[u]].push(y);
                y_left[y] = false;
            }
            let ended = mask(n, &rec.edges.iter().map(|e| e.0).collect::<Vec<_>>());
            cur.retain(|&v| !ended[v]);
            Some(rec)
        };
        if cur.len() != next.len() {
            return Err(PipelineError::Internal(format!(
                "step {s}: {} path ends against {} next vertices",
                cur.len(),
                next.len()
            )));
        }
        let view = BipartiteView::new(g, cur.clone(), next.clone())?;
        let params = measure_bipartite(&view, DEFAULT_TOL)?;
        let m = perfect_matching_expander(&view, &params, &input.caps)
            .map_err(|source| PipelineError::PerfectMatchingFailed { step: s, source })?;
        for &(u, w) in &m.edges {
            let p = path_of[u];
            paths[p].push(w);
            path_of[w] = p;
            if nb == t {
                y_left[w] = false;
            }
        }
        steps.push(StepRecord { block, size, skip, params, perfect: m.edges.clone() });
        cur = next;
    }
    Ok(CoverReport { order, steps, paths: PathSystem { paths } })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloseReport {
    pub pairing: Vec<(usize, usize)>,
    pub stats: ConnectStats,
    pub closing_paths: PathSystem,
}

/// Joins `b_i` to `a_{i+1}` (cyclically) through the connector and splices
/// `P_1 Q_1 P_2 Q_2 ...` into one cycle. Every reserve vertex must end up
/// on a closing path.
pub fn close_cycle(
    g: &Graph,
    cover: &PathSystem,
    connector: &Connector<'_>,
) -> Result<(HamiltonCycle, CloseReport), PipelineError> {
    let p = cover.paths.len();
    if p == 0 {
        return Err(PipelineError::Internal("empty path cover".into()));
    }
    let ends = |i: usize| (cover.paths[i][0], *cover.paths[i].last().expect("nonempty path"));
    let pairing: Vec<(usize, usize)> = (0..p).map(|i| (ends((i + 1) % p).0, ends(i).1)).collect();
    let (mut closing, mut stats) = connector.connect_pairs(&pairing).map_err(PipelineError::Close)?;
    let before = closing.vertex_count();
    let left = connector.absorb_reserve(&mut closing);
    stats.absorbed = closing.vertex_count() - before;
    stats.interior_used += stats.absorbed;
    if let Some(&vertex) = left.first() {
        return Err(PipelineError::CoverageGap { vertex });
    }
    let mut order = Vec::with_capacity(g.n());
    for i in 0..p {
        order.extend_from_slice(&cover.paths[i]);
        // closing path i runs a_{i+1} -> b_i
        let q = &closing.paths[i];
        order.extend(q[1..q.len() - 1].iter().rev());
    }
    if order.len() != g.n() {
        let used = mask(g.n(), &order);
        let vertex = (0..g.n()).find(|&v| !used[v]).unwrap_or(0);
        return Err(PipelineError::CoverageGap { vertex });
    }
    Ok((HamiltonCycle { order }, CloseReport { pairing, stats, closing_paths: closing }))
}
