//! Random induced subgraphs of spectral expanders.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{uniform_members, SamplingError};
use crate::graphs::{mask, second_singular_value, Graph, SpectralCertificate};
use crate::rng;

/// Knobs shared by both subgraph experiments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SubgraphConfig {
    /// Degree window parameter used when the certificate's own `gamma_hat`
    /// is smaller.
    pub gamma_target: f64,
    /// The absolute constant `C` in the hypotheses.
    pub c_const: f64,
    /// Multiplier in the spectral conclusion `s2(H) <= factor σ λ`.
    pub lambda_factor: f64,
    /// Optional stricter spectral check `s2(H) <= strict σ λ`, reported
    /// separately and never part of `success`.
    pub strict_factor: Option<f64>,
    pub tol: f64,
}

impl Default for SubgraphConfig {
    fn default() -> Self {
        Self { gamma_target: 0.05, c_const: 1.0, lambda_factor: 6.0, strict_factor: None, tol: 1e-9 }
    }
}

/// Whether the theorem's hypotheses hold for the given constant `C`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hypotheses {
    pub c_const: f64,
    /// `σ d >= C γ^{-2} ln n`.
    pub degree_condition: bool,
    /// `σ λ >= C sqrt(σ d ln n)`.
    pub spectral_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub s2: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    pub degrees_ok: bool,
    pub spectral_ok: bool,
    pub strict_ok: Option<bool>,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubgraphExperiment {
    /// Total sampled fraction (`σ1 + σ2` in the bipartite experiment).
    pub sigma: f64,
    pub sample_sizes: Vec<usize>,
    pub trials: usize,
    pub gamma_target: f64,
    /// `max(gamma_hat, gamma_target)`, the `γ` of the degree window.
    pub gamma: f64,
    /// `lambda_factor σ λ`.
    pub lambda_bound: f64,
    pub hypotheses: Hypotheses,
    pub success_fraction: f64,
    pub degree_fraction: f64,
    pub spectral_fraction: f64,
    pub strict_fraction: Option<f64>,
    /// `1 - n^{-1/6}`, or `1 - n^{-1/7}` for the bipartite experiment.
    pub floor: f64,
    pub pass: bool,
    pub seed: u64,
    pub per_trial: Vec<TrialRecord>,
}

fn hypotheses(cert: &SpectralCertificate, sigma: f64, gamma: f64, c: f64) -> Hypotheses {
    let ln_n = (cert.n as f64).ln();
    let sd = sigma * cert.d;
    Hypotheses {
        c_const: c,
        degree_condition: gamma > 0.0 && sd >= c * ln_n / (gamma * gamma),
        spectral_condition: sigma * cert.lambda_hat >= c * (sd * ln_n).sqrt(),
    }
}

fn check_cert(cert: &SpectralCertificate, g: &Graph) -> Result<(), SamplingError> {
    if cert.n != g.n() || !cert.degrees_hold(g) {
        return Err(SamplingError::BadParameter("certificate does not match the graph".into()));
    }
    Ok(())
}

fn size_for(sigma: f64, n: usize) -> Result<usize, SamplingError> {
    let m = (sigma * n as f64).round();
    if !(sigma > 0.0 && sigma <= 1.0) || m < 1.0 {
        return Err(SamplingError::BadParameter(format!("sigma n = {} must be at least 1", sigma * n as f64)));
    }
    Ok(m as usize)
}

#[allow(clippy::too_many_arguments)]
fn summarize(
    sigma: f64,
    sample_sizes: Vec<usize>,
    cfg: &SubgraphConfig,
    gamma: f64,
    lambda_bound: f64,
    hypotheses: Hypotheses,
    floor: f64,
    seed: u64,
    per_trial: Vec<TrialRecord>,
) -> SubgraphExperiment {
    let t = per_trial.len() as f64;
    let frac = |f: &dyn Fn(&TrialRecord) -> bool| per_trial.iter().filter(|r| f(r)).count() as f64 / t;
    let success_fraction = frac(&|r| r.success);
    SubgraphExperiment {
        sigma,
        sample_sizes,
        trials: per_trial.len(),
        gamma_target: cfg.gamma_target,
        gamma,
        lambda_bound,
        hypotheses,
        success_fraction,
        degree_fraction: frac(&|r| r.degrees_ok),
        spectral_fraction: frac(&|r| r.spectral_ok),
        strict_fraction: cfg.strict_factor.map(|_| frac(&|r| r.strict_ok == Some(true))),
        floor,
        pass: success_fraction >= floor,
        seed,
        per_trial,
    }
}

/// Draws `X` uniformly of size `round(σ n)` and checks that `H = G[X]` has
/// all degrees in `(1 ± 2γ) σ d` and `s2(H) <= 6 σ λ`.
pub fn induced_subgraph_experiment(
    g: &Graph,
    cert: &SpectralCertificate,
    sigma: f64,
    trials: usize,
    seed: u64,
    cfg: &SubgraphConfig,
) -> Result<SubgraphExperiment, SamplingError> {
    check_cert(cert, g)?;
    if trials == 0 {
        return Err(SamplingError::BadParameter("trials must be positive".into()));
    }
    let n = g.n();
    let m = size_for(sigma, n)?;
    let gamma = cert.gamma_hat.max(cfg.gamma_target);
    let target = sigma * cert.d;
    let (lo, hi) = ((1.0 - 2.0 * gamma) * target, (1.0 + 2.0 * gamma) * target);
    let lambda_bound = cfg.lambda_factor * sigma * cert.lambda_hat;
    let strict_bound = cfg.strict_factor.map(|f| f * sigma * cert.lambda_hat);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|i| {
            let ts = rng::trial_seed(seed, i as u64);
            let x = uniform_members(&mut rng::rng(ts), n, m);
            let h = g.induced(&x);
            let degs = h.degrees();
            let (min_degree, max_degree) =
                (degs.iter().copied().min().unwrap_or(0), degs.iter().copied().max().unwrap_or(0));
            let degrees_ok = degs.iter().all(|&k| (k as f64) >= lo && (k as f64) <= hi);
            let (s2, _) = second_singular_value(&h, cfg.tol, ts)?;
            let spectral_ok = s2 <= lambda_bound;
            Ok(TrialRecord {
                trial: i,
                seed: ts,
                s2,
                min_degree,
                max_degree,
                degrees_ok,
                spectral_ok,
                strict_ok: strict_bound.map(|b| s2 <= b),
                success: degrees_ok && spectral_ok,
            })
        })
        .collect::<Result<Vec<_>, SamplingError>>()?;
    let floor = 1.0 - (n as f64).powf(-1.0 / 6.0);
    let hyp = hypotheses(cert, sigma, gamma, cfg.c_const);
    Ok(summarize(sigma, vec![m], cfg, gamma, lambda_bound, hyp, floor, seed, per_trial))
}

/// Draws disjoint uniform `X` (`σ1 n`) and `Y` (`σ2 n`) and checks
/// `deg(v, Y) ∈ (1 ± 2γ) σ2 d` on `X`, `deg(v, X) ∈ (1 ± 2γ) σ1 d` on `Y`,
/// and `s2(G[X ∪ Y]) <= 6 (σ1 + σ2) λ`.
pub fn bipartite_induced_experiment(
    g: &Graph,
    cert: &SpectralCertificate,
    sigma1: f64,
    sigma2: f64,
    trials: usize,
    seed: u64,
    cfg: &SubgraphConfig,
) -> Result<SubgraphExperiment, SamplingError> {
    check_cert(cert, g)?;
    if sigma1 + sigma2 > 1.0 {
        return Err(SamplingError::BadParameter(format!("sigma1 + sigma2 = {} exceeds 1", sigma1 + sigma2)));
    }
    if trials == 0 {
        return Err(SamplingError::BadParameter("trials must be positive".into()));
    }
    let n = g.n();
    let (m1, m2) = (size_for(sigma1, n)?, size_for(sigma2, n)?);
    if m1 + m2 > n {
        return Err(SamplingError::BadParameter("the two samples do not fit".into()));
    }
    let sigma = sigma1 + sigma2;
    let gamma = cert.gamma_hat.max(cfg.gamma_target);
    let window = |s: f64| ((1.0 - 2.0 * gamma) * s * cert.d, (1.0 + 2.0 * gamma) * s * cert.d);
    let (lo_x, hi_x) = window(sigma2);
    let (lo_y, hi_y) = window(sigma1);
    let lambda_bound = cfg.lambda_factor * sigma * cert.lambda_hat;
    let strict_bound = cfg.strict_factor.map(|f| f * sigma * cert.lambda_hat);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|i| {
            let ts = rng::trial_seed(seed, i as u64);
            let both = super::sample(&mut rng::rng(ts), n, m1 + m2).into_vec();
            let mut x = both[..m1].to_vec();
            let mut y = both[m1..].to_vec();
            x.sort_unstable();
            y.sort_unstable();
            let (xm, ym) = (mask(n, &x), mask(n, &y));
            let dx: Vec<usize> = x.iter().map(|&v| g.degree_into(v, &ym)).collect();
            let dy: Vec<usize> = y.iter().map(|&v| g.degree_into(v, &xm)).collect();
            let in_window = |ds: &[usize], lo: f64, hi: f64| ds.iter().all(|&k| (k as f64) >= lo && (k as f64) <= hi);
            let degrees_ok = in_window(&dx, lo_x, hi_x) && in_window(&dy, lo_y, hi_y);
            let all = dx.iter().chain(&dy);
            let (min_degree, max_degree) =
                (all.clone().copied().min().unwrap_or(0), all.copied().max().unwrap_or(0));
            let mut union = both;
            union.sort_unstable();
            let (s2, _) = second_singular_value(&g.induced(&union), cfg.tol, ts)?;
            let spectral_ok = s2 <= lambda_bound;
            Ok(TrialRecord {
                trial: i,
                seed: ts,
                s2,
                min_degree,
                max_degree,
                degrees_ok,
                spectral_ok,
                strict_ok: strict_bound.map(|b| s2 <= b),
                success: degrees_ok && spectral_ok,
            })
        })
        .collect::<Result<Vec<_>, SamplingError>>()?;
    let floor = 1.0 - (n as f64).powf(-1.0 / 7.0);
    let hyp = hypotheses(cert, sigma, gamma, cfg.c_const);
    Ok(summarize(sigma, vec![m1, m2], cfg, gamma, lambda_bound, hyp, floor, seed, per_trial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{certify_expander, gen_named};

    #[test]
    fn full_sample_of_complete_graph_always_succeeds() {
        let g = gen_named("complete", &[12]).unwrap();
        let c = certify_expander(&g, 1e-10).unwrap();
        let e = induced_subgraph_experiment(&g, &c, 1.0, 20, 5, &SubgraphConfig::default()).unwrap();
        assert_eq!(e.success_fraction, 1.0);
        assert!(e.per_trial.iter().all(|r| (r.s2 - 1.0).abs() < 1e-9));
    }

    #[test]
    fn tiny_sigma_rejected() {
        let g = gen_named("complete", &[12]).unwrap();
        let c = certify_expander(&g, 1e-10).unwrap();
        assert!(induced_subgraph_experiment(&g, &c, 0.01, 5, 1, &SubgraphConfig::default()).is_err());
        assert!(bipartite_induced_experiment(&g, &c, 0.6, 0.5, 5, 1, &SubgraphConfig::default()).is_err());
    }

    #[test]
    fn k8_bipartite_split() {
        let g = gen_named("complete", &[8]).unwrap();
        let c = certify_expander(&g, 1e-10).unwrap();
        let cfg = SubgraphConfig { gamma_target: 0.1, ..Default::default() };
        let e = bipartite_induced_experiment(&g, &c, 0.25, 0.25, 30, 2, &cfg).unwrap();
        assert_eq!(e.sample_sizes, vec![2, 2]);
        // Every cross-degree is 2 and σ_i d = 1.75, inside [1.4, 2.1].
        assert!(e.per_trial.iter().all(|r| r.min_degree == 2 && r.max_degree == 2 && r.success));
    }

    #[test]
    fn thread_count_does_not_matter() {
        let g = crate::graphs::gen_paley(101).unwrap();
        let c = certify_expander(&g, 1e-10).unwrap();
        let cfg = SubgraphConfig::default();
        let a = induced_subgraph_experiment(&g, &c, 0.4, 16, 9, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| induced_subgraph_experiment(&g, &c, 0.4, 16, 9, &cfg).unwrap());
        assert_eq!(a, b);
    }
}
