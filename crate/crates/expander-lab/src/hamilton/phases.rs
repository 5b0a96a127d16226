//! Random partitions of the vertex set and the properties checked on them.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{GammaCaps, PipelineConfig, Sizes};
use super::PipelineError;
use crate::graphs::{
    certify_bipartite_expander, mask, second_singular_value, BipartiteOutcome, BipartiteView, Graph, SpectralCertificate,
};
use crate::linalg::DEFAULT_TOL;
use crate::rng;

/// `V = X1 ∪ X2 ∪ Y1 ∪ Y2 ∪ R1 ∪ R2`, each part sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parts {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

impl Parts {
    pub fn x(&self) -> Vec<usize> {
        sorted_union(&self.x1, &self.x2)
    }

    pub fn y(&self) -> Vec<usize> {
        sorted_union(&self.y1, &self.y2)
    }

    /// `X ∪ Y ∪ R1`.
    pub fn core(&self) -> Vec<usize> {
        sorted_union(&sorted_union(&self.x(), &self.y()), &self.r1)
    }
}

/// Degree of every vertex into `set`.
pub(crate) fn degree_counts(g: &Graph, set: &[usize]) -> Vec<u32> {
    let mut c = vec![0u32; g.n()];
    for &u in set {
        for &w in g.neighbors(u) {
            c[w as usize] += 1;
        }
    }
    c
}

/// Largest relative deviation of `deg(v, part)` from `target` over `over`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowReport {
    pub part: String,
    pub size: usize,
    pub target: f64,
    pub width: f64,
    pub min_degree: u32,
    pub max_degree: u32,
    pub max_deviation: f64,
    pub ok: bool,
}

fn window(part: String, counts: &[u32], over: &[usize], size: usize, target: f64, width: f64) -> WindowReport {
    let (mut lo, mut hi) = (u32::MAX, 0);
    for &v in over {
        lo = lo.min(counts[v]);
        hi = hi.max(counts[v]);
    }
    if over.is_empty() {
        lo = 0;
    }
    let max_deviation = if target > 0.0 {
        (lo as f64 / target - 1.0).abs().max((hi as f64 / target - 1.0).abs())
    } else if hi == 0 {
        0.0
    } else {
        f64::INFINITY
    };
    WindowReport { part, size, target, width, min_degree: lo, max_degree: hi, max_deviation, ok: max_deviation <= width + 1e-12 }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub s2: f64,
    pub bound: f64,
    pub ok: bool,
}

/// A bipartite-expander check on a pair of vertex sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub d: f64,
    pub width: f64,
    pub lambda_bound: f64,
    pub outcome: BipartiteOutcome,
}

impl PairReport {
    pub fn ok(&self) -> bool {
        self.outcome.passed()
    }
}

/// Checks that `(a, b)` is an `(|a|+|b|, (1 ± width) d', bound)`-bipartite
/// expander with `d' = d (|a| + |b|) / n`.
pub(crate) fn pair_check(
    g: &Graph,
    cert: &SpectralCertificate,
    (i, a): (usize, &[usize]),
    (j, b): (usize, &[usize]),
    width: f64,
    lambda_bound: f64,
) -> Result<PairReport, PipelineError> {
    let d = cert.d * (a.len() + b.len()) as f64 / g.n() as f64;
    let view = BipartiteView::new(g, a.to_vec(), b.to_vec())?;
    let outcome = certify_bipartite_expander(&view, d, width, Some(lambda_bound), DEFAULT_TOL)?;
    Ok(PairReport { i, j, d, width, lambda_bound, outcome })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionChecks {
    pub p1: Vec<WindowReport>,
    pub p2_degrees: WindowReport,
    pub p2_spectral: SpectralReport,
    pub p5: PairReport,
}

impl PartitionChecks {
    /// First failing property, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.p1.iter().all(|w| w.ok) {
            Some("P1")
        } else if !(self.p2_degrees.ok && self.p2_spectral.ok) {
            Some("P2")
        } else if !self.p5.ok() {
            Some("P5")
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttemptRecord {
    pub attempt: usize,
    pub seed: u64,
    pub failed: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionReport {
    pub attempts: Vec<AttemptRecord>,
    pub checks: PartitionChecks,
}

fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rng::rng(seed));
    v
}

fn take_sorted(it: &mut impl Iterator<Item = usize>, m: usize) -> Vec<usize> {
    let mut v: Vec<usize> = it.take(m).collect();
    v.sort_unstable();
    v
}

fn draw_parts(sizes: &Sizes, seed: u64) -> Parts {
    let mut it = shuffled(sizes.n, seed).into_iter();
    let x1 = take_sorted(&mut it, sizes.x1);
    let x2 = take_sorted(&mut it, sizes.x2);
    let y1 = take_sorted(&mut it, sizes.x1);
    let y2 = take_sorted(&mut it, sizes.x2);
    let r1 = take_sorted(&mut it, sizes.r1);
    let r2 = take_sorted(&mut it, sizes.r2);
    Parts { x1, x2, y1, y2, r1, r2 }
}

fn check_partition(
    g: &Graph,
    cert: &SpectralCertificate,
    cfg: &PipelineConfig,
    parts: &Parts,
) -> Result<PartitionChecks, PipelineError> {
    let n = g.n();
    let all: Vec<usize> = (0..n).collect();
    let gh = cert.gamma_hat;
    let w1 = GammaCaps::width(cfg.gamma_caps.p1, 2.0, gh);
    let named = [
        ("X1", &parts.x1),
        ("X2", &parts.x2),
        ("Y1", &parts.y1),
        ("Y2", &parts.y2),
        ("R1", &parts.r1),
        ("R2", &parts.r2),
    ];
    let p1 = named
        .par_iter()
        .map(|(name, set)| {
            let target = cert.d * set.len() as f64 / n as f64;
            window(name.to_string(), &degree_counts(g, set), &all, set.len(), target, w1)
        })
        .collect();
    let core = parts.core();
    let w2 = GammaCaps::width(cfg.gamma_caps.p2, 2.0, gh);
    let target = cert.d * core.len() as f64 / n as f64;
    let p2_degrees = window("X u Y u R1".into(), &degree_counts(g, &core), &core, core.len(), target, w2);
    let (s2, _) = second_singular_value(&g.induced(&core), DEFAULT_TOL, crate::graphs::CERTIFY_SEED)?;
    let bound = cfg.constants.p2_lambda_factor * cert.lambda_hat;
    let p2_spectral = SpectralReport { s2, bound, ok: s2 <= bound + DEFAULT_TOL };
    let k = (parts.x1.len() + parts.x2.len()) as f64;
    let w5 = GammaCaps::width(cfg.gamma_caps.p5, 2.0, gh);
    let p5_bound = cfg.constants.p5_lambda_factor * cert.lambda_hat * k / n as f64;
    let p5 = pair_check(g, cert, (0, &parts.x()), (1, &parts.y()), w5, p5_bound)?;
    Ok(PartitionChecks { p1, p2_degrees, p2_spectral, p5 })
}

/// Draws uniformly random partitions until P1, P2 and P5 hold.
pub fn partition_phase(
    g: &Graph,
    cert: &SpectralCertificate,
    cfg: &PipelineConfig,
    sizes: &Sizes,
) -> Result<(Parts, PartitionReport), (PipelineError, Vec<AttemptRecord>)> {
    let base = rng::stream_seed(cfg.seed, "partition");
    let mut attempts = Vec::new();
    let retries = cfg.max_partition_retries.max(1);
    for a in 0..retries {
        let seed = rng::trial_seed(base, a as u64);
        let parts = draw_parts(sizes, seed);
        let checks = check_partition(g, cert, cfg, &parts).map_err(|e| (e, attempts.clone()))?;
        let failed = checks.failure();
        attempts.push(AttemptRecord { attempt: a, seed, failed });
        if failed.is_none() {
            return Ok((parts, PartitionReport { attempts, checks }));
        }
    }
    let property = attempts.last().and_then(|r| r.failed).unwrap_or("P1");
    Err((PipelineError::PartitionRetriesExhausted { phase: "partition", property, attempts: retries }, attempts))
}

/// Picks the reserve inside `R1`; the first `surplus` of its vertices (in
/// draw order) stay outside every block.
pub fn choose_reserve(parts: &Parts, sizes: &Sizes, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut r1 = parts.r1.clone();
    r1.shuffle(&mut rng::rng(seed));
    let mut surplus = r1[..sizes.surplus].to_vec();
    let mut reserve = r1[..sizes.reserve].to_vec();
    surplus.sort_unstable();
    reserve.sort_unstable();
    (reserve, surplus)
}

/// `V_1 = X`, middle blocks `V_2..V_{t-1}` in draw order, `V_t = Y`, with
/// their `R1` parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blocks {
    pub blocks: Vec<Vec<usize>>,
    /// `V_{i,1} = V_i ∩ R1`, with `V_{1,1} = X1` and `V_{t,1} = Y1`.
    pub first_parts: Vec<Vec<usize>>,
}

/// Block order used by the path cover: `X`, then middle blocks by
/// decreasing `|V_i ∖ reserve|` (ties by index), then `Y`.
pub(crate) fn cover_order(blocks: &Blocks, reserve_mask: &[bool]) -> Vec<usize> {
    let t = blocks.blocks.len();
    let mut mid: Vec<(usize, usize)> =
        (1..t - 1).map(|i| (blocks.blocks[i].iter().filter(|&&v| !reserve_mask[v]).count(), i)).collect();
    mid.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    std::iter::once(0).chain(mid.into_iter().map(|(_, i)| i)).chain(std::iter::once(t - 1)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapReport {
    pub cap: usize,
    pub overlaps: Vec<usize>,
    pub max_overlap: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepartitionChecks {
    pub q1: OverlapReport,
    pub q2: Vec<WindowReport>,
    pub q3: Vec<WindowReport>,
    pub q4: Vec<PairReport>,
    pub q5: Vec<PairReport>,
}

impl RepartitionChecks {
    pub fn failure(&self) -> Option<&'static str> {
        if !self.q1.ok {
            Some("Q1")
        } else if !self.q2.iter().all(|w| w.ok) {
            Some("Q2")
        } else if !self.q3.iter().all(|w| w.ok) {
            Some("Q3")
        } else if !self.q4.iter().all(PairReport::ok) {
            Some("Q4")
        } else if !self.q5.iter().all(PairReport::ok) {
            Some("Q5")
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepartitionReport {
    pub attempts: Vec<AttemptRecord>,
    pub checks: RepartitionChecks,
}

fn draw_blocks(parts: &Parts, surplus: &[usize], sizes: &Sizes, seed: u64) -> Blocks {
    let (sm, r1m) = (mask(sizes.n, surplus), mask(sizes.n, &parts.r1));
    let mut middle: Vec<usize> = parts.r1.iter().chain(&parts.r2).copied().filter(|&v| !sm[v]).collect();
    middle.sort_unstable();
    middle.shuffle(&mut rng::rng(seed));
    let mut blocks = vec![parts.x()];
    let mut first_parts = vec![parts.x1.clone()];
    for c in middle.chunks(sizes.k) {
        let mut b = c.to_vec();
        b.sort_unstable();
        first_parts.push(b.iter().copied().filter(|&v| r1m[v]).collect());
        blocks.push(b);
    }
    blocks.push(parts.y());
    first_parts.push(parts.y1.clone());
    Blocks { blocks, first_parts }
}

/// Pairs `(i, j)` with `i < j` on which Q4 and Q5 are checked.
fn checked_pairs(t: usize, order: &[usize], sample: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = if t <= 12 {
        (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j))).collect()
    } else {
        let all = t * (t - 1) / 2;
        let picks = rand::seq::index::sample(&mut rng::rng(seed), all, sample.min(all)).into_vec();
        let unrank = |mut r: usize| {
            let mut i = 0;
            while r >= t - 1 - i {
                r -= t - 1 - i;
                i += 1;
            }
            (i, i + 1 + r)
        };
        let mut v: Vec<(usize, usize)> = picks.into_iter().map(unrank).collect();
        v.extend(order.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))));
        // Q5 on (V_{i,1}, Y1) feeds every M_i.
        v.extend(order[..order.len() - 1].iter().map(|&i| (i.min(t - 1), i.max(t - 1))));
        v
    };
    pairs.sort_unstable();
    pairs.dedup();
    pairs.retain(|&(i, j)| i != j);
    pairs
}

fn check_blocks(
    g: &Graph,
    cert: &SpectralCertificate,
    cfg: &PipelineConfig,
    sizes: &Sizes,
    blocks: &Blocks,
    reserve: &[usize],
    pair_seed: u64,
) -> Result<RepartitionChecks, PipelineError> {
    let n = g.n();
    let t = blocks.blocks.len();
    let gh = cert.gamma_hat;
    let rm = mask(n, reserve);
    let cap = match cfg.constants.q1_overlap_fraction {
        Some(f) => (f * sizes.k as f64).floor() as usize,
        None => (2.0 * sizes.k as f64 / (n as f64).ln()).floor() as usize,
    };
    let overlaps: Vec<usize> =
        (1..t - 1).map(|i| blocks.blocks[i].iter().filter(|&&v| rm[v]).count()).collect();
    let max_overlap = overlaps.iter().copied().max().unwrap_or(0);
    // Larger middle blocks than X cannot be threaded by |X| paths.
    let fits = (1..t - 1).all(|i| blocks.blocks[i].len() - overlaps[i - 1] <= sizes.x);
    let q1 = OverlapReport { cap, overlaps, max_overlap, ok: max_overlap <= cap && fits };

    let middle_total = (sizes.n - 2 * sizes.x - sizes.surplus) as f64;
    let middle_r1 = (sizes.r1 - sizes.surplus) as f64;
    let w2 = GammaCaps::width(cfg.gamma_caps.q2, 1.0, gh);
    let mut q2 = Vec::new();
    for i in 1..t - 1 {
        let len = blocks.blocks[i].len() as f64;
        let a = blocks.first_parts[i].len() as f64;
        for (name, size, target) in [("1", a, len * middle_r1 / middle_total), ("2", len - a, len * (1.0 - middle_r1 / middle_total))] {
            let dev = if target > 0.0 { (size / target - 1.0).abs() } else { size };
            q2.push(WindowReport {
                part: format!("V{},{name}", i + 1),
                size: size as usize,
                target,
                width: w2,
                min_degree: size as u32,
                max_degree: size as u32,
                max_deviation: dev,
                ok: dev <= w2 + 1e-12,
            });
        }
    }

    let all: Vec<usize> = (0..n).collect();
    let w3 = GammaCaps::width(cfg.gamma_caps.q3, 5.0, gh);
    let r1m = mask(n, &blocks.first_parts.iter().flatten().copied().collect::<Vec<_>>());
    let q3: Vec<WindowReport> = (1..t - 1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let first = blocks.first_parts[i].clone();
            let second: Vec<usize> = blocks.blocks[i].iter().copied().filter(|&v| !r1m[v]).collect();
            [(format!("V{},1", i + 1), first), (format!("V{},2", i + 1), second)]
                .into_iter()
                .map(|(name, set)| {
                    let target = cert.d * set.len() as f64 / n as f64;
                    window(name, &degree_counts(g, &set), &all, set.len(), target, w3)
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let order = cover_order(blocks, &rm);
    let pairs = checked_pairs(t, &order, cfg.constants.pair_sample, pair_seed);
    let kn = sizes.k as f64 / n as f64;
    let w4 = GammaCaps::width(cfg.gamma_caps.q4, 5.0, gh);
    let w5 = GammaCaps::width(cfg.gamma_caps.q5, 5.0, gh);
    let b4 = cfg.constants.q4_lambda_factor * cert.lambda_hat * kn;
    let b5 = cfg.constants.q5_lambda_factor * cert.lambda_hat * kn;
    let q4 = pairs
        .par_iter()
        .map(|&(i, j)| pair_check(g, cert, (i, &blocks.blocks[i]), (j, &blocks.blocks[j]), w4, b4))
        .collect::<Result<Vec<_>, _>>()?;
    let q5 = pairs
        .par_iter()
        .filter(|&&(i, j)| !blocks.first_parts[i].is_empty() && !blocks.first_parts[j].is_empty())
        .map(|&(i, j)| pair_check(g, cert, (i, &blocks.first_parts[i]), (j, &blocks.first_parts[j]), w5, b5))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RepartitionChecks { q1, q2, q3, q4, q5 })
}

/// Splits `(R1 ∪ R2) ∖ surplus` into random `k`-sets until Q1 to Q5 hold.
pub fn repartition_phase(
    g: &Graph,
    cert: &SpectralCertificate,
    cfg: &PipelineConfig,
    sizes: &Sizes,
    parts: &Parts,
    reserve: &[usize],
    surplus: &[usize],
) -> Result<(Blocks, RepartitionReport), (PipelineError, Vec<AttemptRecord>)> {
    let base = rng::stream_seed(cfg.seed, "repartition");
    let mut attempts = Vec::new();
    let retries = cfg.max_repartition_retries.max(1);
    for a in 0..retries {
        let seed = rng::trial_seed(base, a as u64);
        let blocks = draw_blocks(parts, surplus, sizes, seed);
        let checks = check_blocks(g, cert, cfg, sizes, &blocks, reserve, rng::mix64(seed))
            .map_err(|e| (e, attempts.clone()))?;
        let failed = checks.failure();
        attempts.push(AttemptRecord { attempt: a, seed, failed });
        if failed.is_none() {
            return Ok((blocks, RepartitionReport { attempts, checks }));
        }
    }
    let property = attempts.last().and_then(|r| r.failed).unwrap_or("Q1");
    Err((PipelineError::PartitionRetriesExhausted { phase: "repartition", property, attempts: retries }, attempts))
}
