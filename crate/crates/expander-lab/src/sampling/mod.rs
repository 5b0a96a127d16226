//! Random subset models, hypergeometric tail bounds, and Monte Carlo
//! experiments for norms of random submatrices and random induced subgraphs.
//!
//! All experiments derive the seed of trial `i` from the master seed with
//! [`crate::rng::trial_seed`], run trials in parallel and merge them in trial
//! order, so results do not depend on the number of worker threads.
//!
//! Logarithms are natural: `q = max{p, 2 ln n}`.

mod subgraph;

pub use subgraph::{
    bipartite_induced_experiment, induced_subgraph_experiment, Hypotheses, SubgraphConfig, SubgraphExperiment,
    TrialRecord,
};

use rand::seq::index::sample;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::GraphError;
use crate::linalg::{dense_singular_values, norm_bundle, singular_values, DenseMatrix, LinalgError, DEFAULT_TOL};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("a = {a} is outside the valid range for the {side} tail")]
    BadRange { a: f64, side: &'static str },
    #[error("symmetric mode needs a symmetric matrix")]
    AsymmetricInput,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `Subset(n, σ)` or `Subset(n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum SubsetModel {
    Bernoulli { sigma: f64 },
    Uniform { m: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetSample {
    pub model: SubsetModel,
    pub universe: usize,
    pub members: Vec<usize>,
    pub seed: u64,
}

pub fn sample_subset(n: usize, model: SubsetModel, seed: u64) -> Result<SubsetSample, SamplingError> {
    let mut r = rng::rng(seed);
    let members = match model {
        SubsetModel::Bernoulli { sigma } => {
            if !(sigma > 0.0 && sigma < 1.0) {
                return Err(SamplingError::BadParameter(format!("sigma = {sigma} must lie in (0, 1)")));
            }
            bernoulli_members(&mut r, n, sigma)
        }
        SubsetModel::Uniform { m } => {
            if m == 0 || m > n {
                return Err(SamplingError::BadParameter(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
            }
            uniform_members(&mut r, n, m)
        }
    };
    Ok(SubsetSample { model, universe: n, members, seed })
}

pub(crate) fn uniform_members(r: &mut rng::Rng, n: usize, m: usize) -> Vec<usize> {
    let mut v = sample(r, n, m).into_vec();
    v.sort_unstable();
    v
}

fn bernoulli_members(r: &mut rng::Rng, n: usize, sigma: f64) -> Vec<usize> {
    (0..n).filter(|_| r.gen::<f64>() < sigma).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSide {
    Lower,
    Upper,
}

/// Chernoff bounds for `X ~ Hypergeometric(N, K, n)` with `μ = nK/N`:
/// `Pr[X < (1-a)μ] < exp(-a²μ/2)` for `a > 0` and
/// `Pr[X > (1+a)μ] < exp(-a²μ/3)` for `0 < a < 3/2`.
pub fn hypergeometric_tail(
    big_n: u64,
    big_k: u64,
    n: u64,
    a: f64,
    side: TailSide,
) -> Result<f64, SamplingError> {
    if big_k > big_n || n > big_n {
        return Err(SamplingError::BadParameter(format!("need K <= N and n <= N (N={big_n}, K={big_k}, n={n})")));
    }
    let mu = if big_n == 0 { 0.0 } else { n as f64 * big_k as f64 / big_n as f64 };
    match side {
        TailSide::Lower if a > 0.0 => Ok((-a * a * mu / 2.0).exp()),
        TailSide::Upper if a > 0.0 && a < 1.5 => Ok((-a * a * mu / 3.0).exp()),
        TailSide::Lower => Err(SamplingError::BadRange { a, side: "lower" }),
        TailSide::Upper => Err(SamplingError::BadRange { a, side: "upper" }),
    }
}

/// How the random submatrix is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SubmatrixMode {
    /// `P_I B P_I'` with independent `I, I' ~ Subset(n, σ)`.
    TwoSidedBernoulli { sigma: f64 },
    /// `P_I B P_I` with one `I ~ Subset(n, σ)`; `B` symmetric.
    SameBernoulli { sigma: f64 },
    /// `P_J B P_J` with `J ~ Subset(n, m)`; `B` symmetric.
    SymmetricUniform { m: usize },
    /// `B P_I` with `I ~ Subset(n, σ)` on the columns.
    RightBernoulli { sigma: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub p: f64,
    pub trials: usize,
    /// `(mean |X|^p)^{1/p}` over all trials.
    pub empirical_lp: f64,
    /// Standard error from batch means.
    pub std_error: f64,
    /// The `L_p` estimate of each batch.
    pub batch_lp: Vec<f64>,
    pub theoretical_bound: f64,
    /// `q = max{p, 2 ln n}` (rank in place of `n` for the one-sided mode).
    pub q: f64,
    pub seed: u64,
}

impl MomentEstimate {
    pub fn holds(&self) -> bool {
        self.empirical_lp <= self.theoretical_bound
    }

    pub fn all_batches_hold(&self) -> bool {
        self.batch_lp.iter().all(|&b| b <= self.theoretical_bound)
    }
}

pub const BATCHES: usize = 10;

/// `q = max{p, 2 ln n}`.
pub fn q_param(p: f64, n: usize) -> f64 {
    p.max(2.0 * (n.max(1) as f64).ln())
}

/// `σ‖B‖ + 3 sqrt(qσ)(‖B‖_{1→2} + ‖B^T‖_{1→2}) + 8q‖B‖_∞`.
pub fn two_sided_bound(b: &DenseMatrix, sigma: f64, p: f64) -> Result<f64, SamplingError> {
    let nb = norm_bundle(b)?;
    let q = q_param(p, b.rows().max(b.cols()));
    Ok(sigma * nb.operator + 3.0 * (q * sigma).sqrt() * (nb.one_to_two + nb.one_to_two_transpose) + 8.0 * q * nb.max_abs)
}

/// `4σ‖B‖ + 24 sqrt(qσ)‖B‖_{1→2} + 35q‖B‖_∞`.
pub fn symmetric_uniform_bound(b: &DenseMatrix, sigma: f64, p: f64) -> Result<f64, SamplingError> {
    let nb = norm_bundle(b)?;
    let q = q_param(p, b.rows());
    Ok(4.0 * sigma * nb.operator + 24.0 * (q * sigma).sqrt() * nb.one_to_two + 35.0 * q * nb.max_abs)
}

/// `2 T(B_0) + max |B_ii|`, with `T` the two-sided bound and `B_0` the
/// diagonal-free part: decoupling applied to `B_0`, the diagonal added back.
pub fn same_bernoulli_bound(b: &DenseMatrix, sigma: f64, p: f64) -> Result<f64, SamplingError> {
    let mut b0 = b.clone();
    let mut diag: f64 = 0.0;
    for i in 0..b.rows().min(b.cols()) {
        diag = diag.max(b.get(i, i).abs());
        b0.set(i, i, 0.0);
    }
    Ok(2.0 * two_sided_bound(&b0, sigma, p)? + diag)
}

fn spectral_norm(m: &DenseMatrix, seed: u64) -> Result<f64, SamplingError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    let opts = crate::linalg::SvdOptions { tol: DEFAULT_TOL, seed, ..Default::default() };
    Ok(crate::linalg::singular_values_with(m, 1, &opts)?.values[0])
}

fn max_col_norm(m: &DenseMatrix) -> f64 {
    let mut best: f64 = 0.0;
    for j in 0..m.cols() {
        let s: f64 = (0..m.rows()).map(|i| m.get(i, j).powi(2)).sum();
        best = best.max(s);
    }
    best.sqrt()
}

/// `L_p` over trials, per-batch `L_p`, and batch-means standard error.
pub(crate) fn lp_summary(values: &[f64], p: f64) -> (f64, Vec<f64>, f64) {
    let lp = |xs: &[f64]| {
        if xs.is_empty() {
            0.0
        } else {
            (xs.iter().map(|x| x.abs().powf(p)).sum::<f64>() / xs.len() as f64).powf(1.0 / p)
        }
    };
    let overall = lp(values);
    let size = values.len().div_ceil(BATCHES).max(1);
    let batch: Vec<f64> = values.chunks(size).map(lp).collect();
    let k = batch.len() as f64;
    let se = if batch.len() > 1 {
        let mean = batch.iter().sum::<f64>() / k;
        (batch.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    } else {
        0.0
    };
    (overall, batch, se)
}

/// Monte Carlo estimate of `E_p ‖random submatrix of B‖` next to the
/// matching theoretical bound.
///
/// For [`SubmatrixMode::RightBernoulli`] the bound is
/// `sqrt(σ)‖B‖ + 3 sqrt(q) E_p‖B P_I‖_{1→2}` with the last expectation
/// estimated from the same trials and `q = max{p, 2 ln rank B}`.
pub fn submatrix_norm_experiment(
    b: &DenseMatrix,
    mode: SubmatrixMode,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<MomentEstimate, SamplingError> {
    b.check_finite()?;
    if !(p >= 2.0) {
        return Err(SamplingError::BadParameter(format!("p = {p} must be at least 2")));
    }
    if trials == 0 {
        return Err(SamplingError::BadParameter("trials must be positive".into()));
    }
    let check_sigma = |sigma: f64| {
        if sigma > 0.0 && sigma < 1.0 {
            Ok(())
        } else {
            Err(SamplingError::BadParameter(format!("sigma = {sigma} must lie in (0, 1)")))
        }
    };
    let (rows, cols) = (b.rows(), b.cols());
    let (bound, q) = match mode {
        SubmatrixMode::TwoSidedBernoulli { sigma } => {
            check_sigma(sigma)?;
            (two_sided_bound(b, sigma, p)?, q_param(p, rows.max(cols)))
        }
        SubmatrixMode::SameBernoulli { sigma } => {
            check_sigma(sigma)?;
            if !b.is_symmetric() {
                return Err(SamplingError::AsymmetricInput);
            }
            (same_bernoulli_bound(b, sigma, p)?, q_param(p, rows))
        }
        SubmatrixMode::SymmetricUniform { m } => {
            if !b.is_symmetric() {
                return Err(SamplingError::AsymmetricInput);
            }
            if m == 0 || m > rows {
                return Err(SamplingError::BadParameter(format!("need 1 <= m <= n, got {m}")));
            }
            (symmetric_uniform_bound(b, m as f64 / rows as f64, p)?, q_param(p, rows))
        }
        SubmatrixMode::RightBernoulli { sigma } => {
            check_sigma(sigma)?;
            let s = dense_singular_values(b)?;
            let rank = s.iter().filter(|&&x| x > 1e-10 * s[0].max(1e-300)).count();
            (f64::NAN, q_param(p, rank))
        }
    };
    let samples: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let ts = rng::trial_seed(seed, i as u64);
            let mut r = rng::rng(ts);
            let all_rows: Vec<usize> = (0..rows).collect();
            let sub = match mode {
                SubmatrixMode::TwoSidedBernoulli { sigma } => {
                    let ri = bernoulli_members(&mut r, rows, sigma);
                    let ci = bernoulli_members(&mut r, cols, sigma);
                    b.submatrix(&ri, &ci)
                }
                SubmatrixMode::SameBernoulli { sigma } => {
                    let ii = bernoulli_members(&mut r, rows, sigma);
                    b.submatrix(&ii, &ii)
                }
                SubmatrixMode::SymmetricUniform { m } => {
                    let jj = uniform_members(&mut r, rows, m);
                    b.submatrix(&jj, &jj)
                }
                SubmatrixMode::RightBernoulli { sigma } => {
                    let ci = bernoulli_members(&mut r, cols, sigma);
                    b.submatrix(&all_rows, &ci)
                }
            };
            let norm = spectral_norm(&sub, ts)?;
            Ok((norm, max_col_norm(&sub)))
        })
        .collect::<Result<_, SamplingError>>()?;
    let norms: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let (empirical_lp, batch_lp, std_error) = lp_summary(&norms, p);
    let theoretical_bound = match mode {
        SubmatrixMode::RightBernoulli { sigma } => {
            let cols12: Vec<f64> = samples.iter().map(|s| s.1).collect();
            let (e12, _, _) = lp_summary(&cols12, p);
            sigma.sqrt() * singular_values(b, 1, DEFAULT_TOL)?.values[0] + 3.0 * q.sqrt() * e12
        }
        _ => bound,
    };
    Ok(MomentEstimate { p, trials, empirical_lp, std_error, batch_lp, theoretical_bound, q, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_models() {
        assert!(sample_subset(10, SubsetModel::Uniform { m: 0 }, 1).is_err());
        let full = sample_subset(7, SubsetModel::Uniform { m: 7 }, 3).unwrap();
        assert_eq!(full.members, (0..7).collect::<Vec<_>>());
        let s = sample_subset(50, SubsetModel::Uniform { m: 20 }, 3).unwrap();
        assert_eq!(s.members.len(), 20);
        assert!(s.members.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s, sample_subset(50, SubsetModel::Uniform { m: 20 }, 3).unwrap());
        assert!(sample_subset(5, SubsetModel::Bernoulli { sigma: 1.0 }, 1).is_err());
    }

    #[test]
    fn bernoulli_size_concentrates() {
        let n = 100_000;
        let sigma = 0.3;
        let sd = (n as f64 * sigma * (1.0 - sigma)).sqrt();
        let mean = (0..100)
            .map(|s| sample_subset(n, SubsetModel::Bernoulli { sigma }, s).unwrap().members.len() as f64)
            .sum::<f64>()
            / 100.0;
        // The mean of 100 draws has standard deviation sd / 10.
        assert!((mean - 30_000.0).abs() <= 3.0 * sd / 10.0, "{mean}");
    }

    #[test]
    fn tail_examples() {
        let lo = hypergeometric_tail(100, 40, 20, 0.5, TailSide::Lower).unwrap();
        assert!((lo - (-1.0f64).exp()).abs() < 1e-15);
        assert!((lo - 0.367879).abs() < 1e-6);
        let hi = hypergeometric_tail(100, 40, 20, 0.5, TailSide::Upper).unwrap();
        assert!((hi - 0.513417).abs() < 1e-6);
        assert_eq!(
            hypergeometric_tail(100, 40, 20, 2.0, TailSide::Upper),
            Err(SamplingError::BadRange { a: 2.0, side: "upper" })
        );
        assert!(hypergeometric_tail(100, 40, 20, 0.0, TailSide::Lower).is_err());
    }

    #[test]
    fn identity_bound_example() {
        let b = DenseMatrix::identity(8);
        let bound = two_sided_bound(&b, 0.5, 2.0).unwrap();
        let q = 2.0 * 8f64.ln();
        assert!((bound - (0.5 + 3.0 * (q * 0.5).sqrt() * 2.0 + 8.0 * q)).abs() < 1e-12);
        assert!((bound - 42.42).abs() < 0.01, "{bound}");
        let est = submatrix_norm_experiment(&b, SubmatrixMode::TwoSidedBernoulli { sigma: 0.5 }, 2.0, 200, 4).unwrap();
        assert!(est.empirical_lp <= 1.0 + 1e-12 && est.holds());
    }

    #[test]
    fn all_ones_uniform_is_exact() {
        let n = 12;
        let b = DenseMatrix::from_vec(n, n, vec![1.0; n * n]).unwrap();
        let est = submatrix_norm_experiment(&b, SubmatrixMode::SymmetricUniform { m: 5 }, 2.0, 50, 1).unwrap();
        assert!((est.empirical_lp - 5.0).abs() < 1e-9);
        assert!(est.std_error < 1e-9);
        assert!(est.holds());
    }

    #[test]
    fn symmetric_modes_reject_asymmetric() {
        let b = DenseMatrix::from_vec(2, 2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            submatrix_norm_experiment(&b, SubmatrixMode::SymmetricUniform { m: 1 }, 2.0, 5, 1),
            Err(SamplingError::AsymmetricInput)
        );
    }

    #[test]
    fn batch_means() {
        let (lp, batches, se) = lp_summary(&[1.0; 20], 2.0);
        assert_eq!((lp, batches.len(), se), (1.0, 10, 0.0));
    }
}
