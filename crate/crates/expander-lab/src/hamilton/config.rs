use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::extend::ConnectorOptions;
use crate::matching::ExpanderCaps;

/// Half-widths of the relative degree windows checked by each property.
/// `None` uses the multiple of the certificate's `gamma_hat` that the proof
/// uses: `2γ` for P1, P2 and P5, `γ` for Q2, `5γ` for Q3 to Q5.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GammaCaps {
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p5: Option<f64>,
    pub q2: Option<f64>,
    pub q3: Option<f64>,
    pub q4: Option<f64>,
    pub q5: Option<f64>,
}

impl Default for GammaCaps {
    fn default() -> Self {
        Self { p1: None, p2: None, p5: None, q2: None, q3: None, q4: None, q5: None }
    }
}

impl GammaCaps {
    pub(crate) fn width(cap: Option<f64>, multiple: f64, gamma_hat: f64) -> f64 {
        cap.unwrap_or(multiple * gamma_hat)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    /// Input must satisfy `λ / d <= lambda_ratio_cap`.
    pub lambda_ratio_cap: f64,
    /// Input must satisfy `gamma_hat <= gamma_cap`.
    pub gamma_cap: f64,
    /// `s2(G[X ∪ Y ∪ R1]) <= p2_lambda_factor · λ`.
    pub p2_lambda_factor: f64,
    /// `s2(G[X ∪ Y]) <= p5_lambda_factor · λ k / n`.
    pub p5_lambda_factor: f64,
    /// `s2(G[V_i ∪ V_j]) <= q4_lambda_factor · λ k / n`.
    pub q4_lambda_factor: f64,
    /// `s2(G[V_{i,1} ∪ V_{j,1}]) <= q5_lambda_factor · λ k / n`.
    pub q5_lambda_factor: f64,
    /// The recorded extendability parameter is `D = d / (expansion_divisor λ)`.
    pub expansion_divisor: f64,
    /// Q1 caps `|V_i ∩ reserve|` at `q1_overlap_fraction · k`; `None` uses
    /// `2k / ln n`.
    pub q1_overlap_fraction: Option<f64>,
    /// Multiplier on `θ` in the greedy matching floor.
    pub theta_scale: f64,
    /// Caps for the perfect matchings between consecutive blocks.
    pub matching_caps: ExpanderCaps,
    /// Longest closing path, in edges.
    pub l_max: usize,
    pub connector: ConnectorOptions,
    /// Q4 and Q5 are checked on every pair when `t <= 12`, otherwise on this
    /// many random pairs plus the consecutive pairs the path cover uses.
    pub pair_sample: usize,
}

impl Constants {
    pub fn asymptotic() -> Self {
        Self {
            lambda_ratio_cap: 1.0 / 70000.0,
            gamma_cap: 1.0 / 400.0,
            p2_lambda_factor: 6.0 / 5.0,
            p5_lambda_factor: 12.0,
            q4_lambda_factor: 18.0,
            q5_lambda_factor: 18.0,
            expansion_divisor: 700.0,
            q1_overlap_fraction: None,
            theta_scale: 1.0,
            matching_caps: ExpanderCaps::LEMMA,
            l_max: 12,
            connector: ConnectorOptions::default(),
            pair_sample: 64,
        }
    }

    pub fn desk() -> Self {
        Self {
            lambda_ratio_cap: 0.2,
            p5_lambda_factor: 30.0,
            q4_lambda_factor: 30.0,
            q5_lambda_factor: 30.0,
            q1_overlap_fraction: Some(0.15),
            matching_caps: ExpanderCaps { gamma_max: 0.9, lambda_ratio: 0.6 },
            connector: ConnectorOptions { min_reserve_ratio: 1.0, retry_cap: 50 },
            ..Self::asymptotic()
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::desk()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    /// Block size; `None` picks a default from `n`.
    pub k: Option<usize>,
    /// With `k` unset, aim for this many middle blocks instead of
    /// `k = ⌈sqrt n⌉`.
    pub target_blocks: Option<usize>,
    /// Reserve size as a fraction of `|R1|`.
    pub reserve_fraction: f64,
    /// Share of `X` that goes to `X1` (and of `Y` to `Y1`).
    pub split_fraction: f64,
    /// `|X ∪ Y ∪ R1|` as a fraction of `n`.
    pub core_fraction: f64,
    pub gamma_caps: GammaCaps,
    pub constants: Constants,
    pub seed: u64,
    pub max_partition_retries: usize,
    pub max_repartition_retries: usize,
}

impl PipelineConfig {
    pub fn asymptotic(seed: u64) -> Self {
        Self {
            k: None,
            target_blocks: None,
            reserve_fraction: 0.25,
            split_fraction: 0.2,
            core_fraction: 0.2,
            gamma_caps: GammaCaps::default(),
            constants: Constants::asymptotic(),
            seed,
            max_partition_retries: 20,
            max_repartition_retries: 20,
        }
    }

    /// Constants and windows that finite Paley graphs in the hundreds to low
    /// thousands of vertices can meet.
    pub fn desk(seed: u64) -> Self {
        Self {
            target_blocks: Some(12),
            split_fraction: 0.5,
            core_fraction: 0.5,
            gamma_caps: GammaCaps {
                p1: Some(2.0),
                p2: Some(0.25),
                p5: Some(1.0),
                q2: Some(1.0),
                q3: Some(2.0),
                q4: Some(1.0),
                q5: Some(2.0),
            },
            constants: Constants::desk(),
            ..Self::asymptotic(seed)
        }
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::desk(0)
    }
}

/// Part sizes derived from `n` and the configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sizes {
    pub n: usize,
    pub k: usize,
    pub x1: usize,
    pub x2: usize,
    /// `|X| = |Y| = x1 + x2`.
    pub x: usize,
    pub r1: usize,
    pub r2: usize,
    /// Middle blocks `V_2, ..., V_{t-1}`, each of size `k`.
    pub blocks: usize,
    /// `t = blocks + 2`.
    pub t: usize,
    /// `|R1 ∪ R2| mod k`; these vertices are drawn from the reserve and left
    /// out of every block.
    pub surplus: usize,
    pub reserve: usize,
}

impl Sizes {
    pub fn plan(n: usize, k: usize, cfg: &PipelineConfig) -> Result<Self, PipelineError> {
        let bad = |msg: String| Err(PipelineError::Config(msg));
        if !(cfg.reserve_fraction > 0.0 && cfg.reserve_fraction < 0.5) {
            return bad(format!("reserve_fraction {} must lie in (0, 0.5)", cfg.reserve_fraction));
        }
        if !(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0) || !(cfg.core_fraction > 0.0 && cfg.core_fraction < 1.0) {
            return bad("split_fraction and core_fraction must lie in (0, 1)".into());
        }
        let x1 = (cfg.split_fraction * k as f64).floor() as usize;
        let x2 = ((1.0 - cfg.split_fraction) * k as f64).floor() as usize;
        if x1 == 0 || x2 == 0 {
            return bad(format!("k = {k} leaves X1 or X2 empty"));
        }
        let x = x1 + x2;
        let core = (cfg.core_fraction * n as f64).floor() as usize;
        if core <= 2 * x {
            return bad(format!("|X u Y u R1| = {core} leaves no room for R1 with |X| = {x}"));
        }
        let r1 = core - 2 * x;
        let r2 = n - core;
        let middle = n - 2 * x;
        let blocks = middle / k;
        if blocks == 0 {
            return bad(format!("t = 2: no middle block of size {k} fits in {middle} vertices"));
        }
        let surplus = middle % k;
        let reserve = ((cfg.reserve_fraction * r1 as f64).ceil() as usize).max(surplus);
        if reserve >= r1 {
            return bad(format!("reserve of {reserve} does not fit in R1 of size {r1}"));
        }
        Ok(Self { n, k, x1, x2, x, r1, r2, blocks, t: blocks + 2, surplus, reserve })
    }

    /// `⌈sqrt n⌉`, or `⌈n / (target_blocks + 2)⌉`, rounded up to a multiple
    /// of 5, then lowered in steps of 5 until the sizes are feasible, and
    /// never below 5.
    pub fn default_k(n: usize, cfg: &PipelineConfig) -> Result<usize, PipelineError> {
        let start = match cfg.target_blocks {
            Some(b) => n.div_ceil(b + 2),
            None => (n as f64).sqrt().ceil() as usize,
        };
        let mut k = start.div_ceil(5).max(1) * 5;
        loop {
            match Self::plan(n, k, cfg) {
                Ok(_) => return Ok(k),
                Err(e) if k <= 5 => return Err(e),
                Err(_) => k -= 5,
            }
        }
    }
}
