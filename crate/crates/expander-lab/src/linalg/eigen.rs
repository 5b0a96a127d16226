//! Symmetric eigensolvers.
//!
//! Two independent paths are kept on purpose. [`jacobi_eigen`] is a cyclic
//! Jacobi sweep on a dense matrix, accurate to a few ulps and used for small
//! matrices and as the reference in tests. [`top_eigenpairs`] is Lanczos with
//! full reorthogonalization and locking: converged Ritz pairs are projected out
//! and the iteration restarts, which is how repeated eigenvalues are recovered.

use rand::Rng as _;

use super::LinalgError;
use crate::rng;

/// A symmetric linear map `x -> Sx` on `R^dim`.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    /// Writes `S x` into `y`. `y` has length `dim` and arbitrary contents.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Eigenpair with an explicit residual `||S x - value x||`.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub residual: f64,
    pub vector: Vec<f64>,
}

/// Solver knobs for [`top_eigenpairs`].
#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Absolute bound on the residual of every accepted pair.
    pub tol: f64,
    /// Seed for start vectors.
    pub seed: u64,
    /// Cap on Lanczos restarts (each restart locks at least one pair).
    pub max_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-9, seed: 0x5eed, max_restarts: 400 }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn project_out(w: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(q, w);
        axpy(-c, q, w);
    }
}

/// Full eigendecomposition of a dense symmetric `n x n` matrix (row-major).
///
/// Returns eigenvalues in descending order and the matching eigenvectors.
pub fn jacobi_eigen(n: usize, a: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k * n + i]).collect())
        .collect();
    (values, vectors)
}

/// Implicit QL on a symmetric tridiagonal matrix.
///
/// `d` is the diagonal, `e[i]` couples `i` and `i+1` (the last entry is
/// ignored). On return `d` holds the eigenvalues (unsorted) and `z` is the
/// row-major eigenvector matrix: column `i` is the vector for `d[i]`.
#[cfg(test)]
pub(crate) fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<(), LinalgError> {
    tridiagonal_ql_rows(d, e, z, d.len())
}

/// [`tridiagonal_ql`] accumulating only the last `rows` rows of the
/// eigenvector matrix into `z` (`rows x n`, row-major).
pub(crate) fn tridiagonal_ql_rows(d: &mut [f64], e: &mut [f64], z: &mut [f64], rows: usize) -> Result<(), LinalgError> {
    let n = d.len();
    let first = n - rows;
    z.iter_mut().for_each(|x| *x = 0.0);
    for r in 0..rows {
        z[r * n + first + r] = 1.0;
    }
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 200 {
                    return Err(LinalgError::NoConvergence { iterations: iter });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..rows {
                        let zk1 = z[k * n + i + 1];
                        let zk = z[k * n + i];
                        z[k * n + i + 1] = s * zk + c * zk1;
                        z[k * n + i] = c * zk - s * zk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Largest-magnitude eigenpairs of a symmetric operator.
///
/// Returns at least `k` pairs (fewer only if `k > dim`), sorted by
/// decreasing `|value|`, each with explicit residual `<= opts.tol`.
pub fn top_eigenpairs(
    op: &dyn SymmetricOperator,
    k: usize,
    opts: &LanczosOptions,
) -> Result<Vec<EigenPair>, LinalgError> {
    let n = op.dim();
    let k = k.min(n);
    let mut locked: Vec<EigenPair> = Vec::new();
    let mut locked_vecs: Vec<Vec<f64>> = Vec::new();
    if k == 0 {
        return Ok(locked);
    }
    let mut rng = rng::rng(opts.seed);
    let mut total_iters = 0usize;
    for _restart in 0..opts.max_restarts {
        if locked.len() >= n {
            break;
        }
        let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        project_out(&mut q, &locked_vecs);
        project_out(&mut q, &locked_vecs);
        let qn = norm(&q);
        if qn < 1e-12 {
            break;
        }
        q.iter_mut().for_each(|x| *x /= qn);

        let want = k.saturating_sub(locked.len()).max(1);
        let found = lanczos_run(op, q, &locked_vecs, want, opts, &mut total_iters)?;

        let kth = kth_magnitude(&locked, k);
        let top = found.first().map(|p| p.value.abs()).unwrap_or(0.0);
        if locked.len() >= k && top <= kth + opts.tol {
            break;
        }
        for pair in found {
            locked_vecs.push(pair.vector.clone());
            locked.push(pair);
        }
    }
    if locked.len() < k {
        return Err(LinalgError::NoConvergence { iterations: total_iters });
    }
    locked.sort_by(|a, b| b.value.abs().total_cmp(&a.value.abs()));
    Ok(locked)
}

fn kth_magnitude(locked: &[EigenPair], k: usize) -> f64 {
    if locked.len() < k {
        return f64::NEG_INFINITY;
    }
    let mut mags: Vec<f64> = locked.iter().map(|p| p.value.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    mags[k - 1]
}

/// One Lanczos run restricted to the complement of `locked`.
///
/// Returns the leading converged Ritz pairs (by magnitude, contiguous from the
/// top, at least `want` of them unless the subspace is too small).
/// Eigenvector of the tridiagonal matrix with diagonal `a` and off-diagonal
/// `b` for the (already accurate) eigenvalue `theta`, by inverse iteration.
/// The result is kept orthogonal to `cluster`, the vectors already found for
/// nearby eigenvalues.
pub(crate) fn tridiagonal_eigenvector(a: &[f64], b: &[f64], theta: f64, cluster: &[&[f64]]) -> Vec<f64> {
    let m = a.len();
    if m == 1 {
        return vec![1.0];
    }
    let scale = a.iter().chain(b).fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    // LU with partial pivoting of T - theta I: `u1`, `u2` are the first and
    // second superdiagonals of U, `l` the multipliers.
    let mut d: Vec<f64> = a.iter().map(|x| x - theta).collect();
    let mut l = b.to_vec();
    let mut u1 = b.to_vec();
    let mut u2 = vec![0.0; m.saturating_sub(2)];
    let mut swapped = vec![false; m - 1];
    for i in 0..m - 1 {
        if d[i].abs() >= l[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = l[i] / d[i];
            l[i] = f;
            d[i + 1] -= f * u1[i];
        } else {
            let f = d[i] / l[i];
            d[i] = l[i];
            l[i] = f;
            let t = u1[i];
            u1[i] = d[i + 1];
            d[i + 1] = t - f * d[i + 1];
            if i + 1 < m - 1 {
                u2[i] = u1[i + 1];
                u1[i + 1] *= -f;
            }
            swapped[i] = true;
        }
    }
    for di in d.iter_mut() {
        if di.abs() < tiny {
            *di = tiny.copysign(*di);
        }
    }
    let solve = |x: &mut [f64]| {
        for i in 0..m - 1 {
            if swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= l[i] * x[i];
        }
        for i in (0..m).rev() {
            let mut s = x[i];
            if i + 1 < m {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < m {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
    };
    let orthonormalize = |x: &mut Vec<f64>| {
        for y in cluster {
            let c = dot(y, x);
            axpy(-c, y, x);
        }
        let xn = norm(x);
        x.iter_mut().for_each(|v| *v /= xn);
    };
    // A fixed, irregular start keeps runs reproducible.
    let mut x: Vec<f64> = (0..m).map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0).collect();
    orthonormalize(&mut x);
    for _ in 0..3 {
        solve(&mut x);
        orthonormalize(&mut x);
    }
    x
}

fn lanczos_run(
    op: &dyn SymmetricOperator,
    q0: Vec<f64>,
    locked: &[Vec<f64>],
    want: usize,
    opts: &LanczosOptions,
    total_iters: &mut usize,
) -> Result<Vec<EigenPair>, LinalgError> {
    let n = op.dim();
    let max_dim = n - locked.len();
    let mut basis: Vec<Vec<f64>> = vec![q0];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut next_check = 1;
    loop {
        let j = basis.len() - 1;
        op.apply(&basis[j], &mut w);
        *total_iters += 1;
        project_out(&mut w, locked);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        // One pass, plus a second only when the first removed most of w.
        let before = norm(&w);
        project_out(&mut w, locked);
        project_out(&mut w, &basis);
        let mut b = norm(&w);
        if b < std::f64::consts::FRAC_1_SQRT_2 * before {
            project_out(&mut w, locked);
            project_out(&mut w, &basis);
            b = norm(&w);
        }
        beta.push(b);
        let m = basis.len();
        let scale = alpha.iter().chain(beta.iter()).fold(0.0f64, |s, x| s.max(x.abs())).max(1.0);
        let exhausted = m >= max_dim || b <= 1e-13 * scale;
        let check = exhausted || m >= next_check;
        if check && (exhausted || m >= want.min(max_dim)) {
            // Checks cost O(m^2) each, so space them out as the basis grows.
            next_check = m + (m / 10).max(if m < 24 { 1 } else { 4 });
            let mut d = alpha.clone();
            let mut e = beta.clone();
            let mut last = vec![0.0; m];
            tridiagonal_ql_rows(&mut d, &mut e, &mut last, 1)?;
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| d[y].abs().total_cmp(&d[x].abs()));
            let ritz_res = |i: usize| (b * last[i]).abs();
            let need = want.min(m);
            let est_ok = order[..need].iter().all(|&i| ritz_res(i) <= 0.5 * opts.tol);
            if est_ok || exhausted {
                let mut out = Vec::new();
                let mut small: Vec<(f64, Vec<f64>)> = Vec::new();
                for (rank, &i) in order.iter().enumerate() {
                    if rank >= need && ritz_res(i) > 0.5 * opts.tol {
                        break;
                    }
                    let cluster: Vec<&[f64]> =
                        small.iter().filter(|(t, _)| (t - d[i]).abs() <= 1e-3 * scale).map(|(_, y)| y.as_slice()).collect();
                    let y = tridiagonal_eigenvector(&alpha, &beta[..m - 1], d[i], &cluster);
                    let mut x = vec![0.0; n];
                    for (r, qr) in basis.iter().enumerate() {
                        axpy(y[r], qr, &mut x);
                    }
                    small.push((d[i], y));
                    let xn = norm(&x);
                    x.iter_mut().for_each(|v| *v /= xn);
                    op.apply(&x, &mut scratch);
                    axpy(-d[i], &x, &mut scratch);
                    project_out(&mut scratch, locked);
                    let res = norm(&scratch);
                    if res > opts.tol {
                        break;
                    }
                    out.push(EigenPair { value: d[i], residual: res, vector: x });
                    // Only lock a bounded block per run so later restarts see
                    // the still-hidden multiplicities.
                    if out.len() >= need + 8 {
                        break;
                    }
                }
                if out.len() >= need {
                    return Ok(out);
                }
                if exhausted {
                    if !out.is_empty() {
                        return Ok(out);
                    }
                    return Err(LinalgError::NoConvergence { iterations: *total_iters });
                }
            }
        }
        if exhausted {
            return Err(LinalgError::NoConvergence { iterations: *total_iters });
        }
        let inv = 1.0 / b;
        basis.push(w.iter().map(|x| x * inv).collect());
    }
}
