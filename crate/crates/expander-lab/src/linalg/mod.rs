//! Dense matrices, singular values, the four norms used by the random-submatrix
//! bounds, normalized matrices, best rank-one approximation and interlacing.

mod eigen;
mod io;

pub use eigen::{jacobi_eigen, top_eigenpairs, EigenPair, LanczosOptions, SymmetricOperator};
pub use io::{parse_matrix, write_matrix};

pub(crate) use eigen::{dot, norm};

use thiserror::Error;

/// Values below this are reported as exactly zero.
pub const ZERO_CUTOFF: f64 = 1e-10;
/// Default residual tolerance for singular values.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("iterative solver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("{kind} {index} sums to zero")]
    ZeroLine { kind: &'static str, index: usize },
    #[error("negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("row or column subset is empty")]
    EmptySubset,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn check_finite(&self) -> Result<(), LinalgError> {
        match self.data.iter().position(|x| !x.is_finite()) {
            Some(p) => Err(LinalgError::NonFinite { row: p / self.cols, col: p % self.cols }),
            None => Ok(()),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0.0 {
                    continue;
                }
                let src = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::Shape("dimension mismatch".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `y = M x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.rows) {
            *yi = dot(self.row(i), x);
        }
    }

    /// `y = M^T x`.
    pub fn matvec_t(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, &xi) in x.iter().enumerate().take(self.rows) {
            if xi == 0.0 {
                continue;
            }
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj += xi * a;
            }
        }
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (sj, a) in s.iter_mut().zip(self.row(i)) {
                *sj += a;
            }
        }
        s
    }
}

/// Singular values in descending order with per-value backward errors.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
}

/// A singular triple `M v = s u`, `M^T u = s v` (approximately).
#[derive(Clone, Debug)]
pub struct SingularTriple {
    pub value: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub residual: f64,
}

/// Which eigensolver backs a singular-value request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Lanczos on `M` (symmetric) or on the smaller Gram matrix.
    #[default]
    Iterative,
    /// Full Jacobi decomposition; meant for small matrices.
    Dense,
}

/// Options for [`singular_values_with`].
#[derive(Clone, Copy, Debug)]
pub struct SvdOptions {
    pub tol: f64,
    pub seed: u64,
    pub method: Method,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, seed: 0x5eed, method: Method::Iterative }
    }
}

/// Largest `k` singular values of `m` with the iterative solver.
pub fn singular_values(m: &DenseMatrix, k: usize, tol: f64) -> Result<SingularSpectrum, LinalgError> {
    singular_values_with(m, k, &SvdOptions { tol, ..SvdOptions::default() })
}

pub fn singular_values_with(
    m: &DenseMatrix,
    k: usize,
    opts: &SvdOptions,
) -> Result<SingularSpectrum, LinalgError> {
    let triples = top_singular_triples(m, k, opts)?;
    Ok(SingularSpectrum {
        values: triples.iter().map(|t| t.value).collect(),
        residuals: triples.iter().map(|t| t.residual).collect(),
        tolerance: opts.tol,
    })
}

/// Full spectrum via the dense path.
pub fn dense_singular_values(m: &DenseMatrix) -> Result<Vec<f64>, LinalgError> {
    let k = m.rows.min(m.cols);
    let opts = SvdOptions { method: Method::Dense, ..SvdOptions::default() };
    Ok(singular_values_with(m, k, &opts)?.values)
}

fn validate_k(m: &DenseMatrix, k: usize, tol: f64) -> Result<(), LinalgError> {
    m.check_finite()?;
    if k > m.rows.min(m.cols) {
        return Err(LinalgError::Shape(format!(
            "k = {k} exceeds min(rows, cols) = {}",
            m.rows.min(m.cols)
        )));
    }
    if !(tol > 0.0) {
        return Err(LinalgError::Shape("tolerance must be positive".into()));
    }
    Ok(())
}

struct DenseSym<'a>(&'a DenseMatrix);

impl SymmetricOperator for DenseSym<'_> {
    fn dim(&self) -> usize {
        self.0.rows
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.matvec(x, y);
    }
}

/// `M^T M` when `transpose` is false, otherwise `M M^T`.
struct Gram<'a> {
    m: &'a DenseMatrix,
    transpose: bool,
}

impl SymmetricOperator for Gram<'_> {
    fn dim(&self) -> usize {
        if self.transpose { self.m.rows } else { self.m.cols }
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        if self.transpose {
            let mut t = vec![0.0; self.m.cols];
            self.m.matvec_t(x, &mut t);
            self.m.matvec(&t, y);
        } else {
            let mut t = vec![0.0; self.m.rows];
            self.m.matvec(x, &mut t);
            self.m.matvec_t(&t, y);
        }
    }
}

/// Top `k` singular triples.
pub fn top_singular_triples(
    m: &DenseMatrix,
    k: usize,
    opts: &SvdOptions,
) -> Result<Vec<SingularTriple>, LinalgError> {
    validate_k(m, k, opts.tol)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut out = if m.is_symmetric() {
        let pairs = eigenpairs(&DenseSym(m), m.rows, k, opts)?;
        pairs
            .into_iter()
            .take(k)
            .map(|p| {
                let sign = if p.value < 0.0 { -1.0 } else { 1.0 };
                SingularTriple {
                    value: p.value.abs(),
                    u: p.vector.iter().map(|x| sign * x).collect(),
                    v: p.vector,
                    residual: p.residual,
                }
            })
            .collect::<Vec<_>>()
    } else {
        let transpose = m.rows < m.cols;
        let g = Gram { m, transpose };
        let dim = g.dim();
        let scale = frobenius(m).max(1.0);
        let gopts = SvdOptions { tol: opts.tol * scale, ..*opts };
        let pairs = eigenpairs(&g, dim, k, &gopts)?;
        let triples: Vec<_> = pairs.into_iter().take(k).map(|p| gram_triple(m, transpose, p.vector)).collect();
        // The triple residual is the Gram residual divided by s, so a small s
        // needs a tighter Gram solve.
        let s_min = triples.iter().map(|t| t.value).filter(|&s| s > ZERO_CUTOFF).fold(f64::INFINITY, f64::min);
        if triples.iter().any(|t| t.residual > opts.tol) && s_min.is_finite() && s_min < scale {
            let gopts = SvdOptions { tol: opts.tol * s_min, ..*opts };
            let pairs = eigenpairs(&g, dim, k, &gopts)?;
            pairs.into_iter().take(k).map(|p| gram_triple(m, transpose, p.vector)).collect()
        } else {
            triples
        }
    };
    for t in &mut out {
        if t.value < ZERO_CUTOFF {
            t.value = 0.0;
        }
    }
    out.sort_by(|a, b| b.value.total_cmp(&a.value));
    if out.iter().any(|t| t.residual > opts.tol) {
        return Err(LinalgError::NoConvergence { iterations: 0 });
    }
    Ok(out)
}

fn frobenius(m: &DenseMatrix) -> f64 {
    m.data.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Turns a Gram eigenvector into a singular triple with an explicit residual.
fn gram_triple(m: &DenseMatrix, transpose: bool, x: Vec<f64>) -> SingularTriple {
    // x is a right singular vector of M (or of M^T when transposed).
    let (rows, cols) = if transpose { (m.cols, m.rows) } else { (m.rows, m.cols) };
    let apply = |x: &[f64], y: &mut [f64]| if transpose { m.matvec_t(x, y) } else { m.matvec(x, y) };
    let apply_t = |x: &[f64], y: &mut [f64]| if transpose { m.matvec(x, y) } else { m.matvec_t(x, y) };
    let mut mx = vec![0.0; rows];
    apply(&x, &mut mx);
    let s = norm(&mx);
    let (u, residual) = if s > ZERO_CUTOFF {
        let u: Vec<f64> = mx.iter().map(|v| v / s).collect();
        let mut mtu = vec![0.0; cols];
        apply_t(&u, &mut mtu);
        let r = mtu.iter().zip(&x).map(|(a, b)| (a - s * b).powi(2)).sum::<f64>().sqrt();
        (u, r)
    } else {
        (vec![0.0; rows], s)
    };
    if transpose {
        SingularTriple { value: s, u: x, v: u, residual }
    } else {
        SingularTriple { value: s, u, v: x, residual }
    }
}

fn eigenpairs(
    op: &dyn SymmetricOperator,
    n: usize,
    k: usize,
    opts: &SvdOptions,
) -> Result<Vec<EigenPair>, LinalgError> {
    match opts.method {
        Method::Iterative => {
            let lopts = LanczosOptions { tol: opts.tol, seed: opts.seed, ..LanczosOptions::default() };
            top_eigenpairs(op, k, &lopts)
        }
        Method::Dense => {
            let mut a = vec![0.0; n * n];
            let mut e = vec![0.0; n];
            let mut col = vec![0.0; n];
            for j in 0..n {
                e.iter_mut().for_each(|v| *v = 0.0);
                e[j] = 1.0;
                op.apply(&e, &mut col);
                for i in 0..n {
                    a[i * n + j] = col[i];
                }
            }
            // Symmetrize away rounding from composed operators.
            for i in 0..n {
                for j in 0..i {
                    let s = 0.5 * (a[i * n + j] + a[j * n + i]);
                    a[i * n + j] = s;
                    a[j * n + i] = s;
                }
            }
            let (vals, vecs) = jacobi_eigen(n, &a);
            let mut pairs: Vec<EigenPair> = vals
                .into_iter()
                .zip(vecs)
                .map(|(value, vector)| {
                    let mut y = vec![0.0; n];
                    op.apply(&vector, &mut y);
                    let residual =
                        y.iter().zip(&vector).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
                    EigenPair { value, residual, vector }
                })
                .collect();
            pairs.sort_by(|a, b| b.value.abs().total_cmp(&a.value.abs()));
            pairs.truncate(k);
            Ok(pairs)
        }
    }
}

/// The four norms that enter the random-submatrix bounds.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormBundle {
    /// Largest singular value.
    pub operator: f64,
    /// Largest column l2 norm.
    pub one_to_two: f64,
    /// Largest row l2 norm.
    pub one_to_two_transpose: f64,
    /// Largest entry in absolute value.
    pub max_abs: f64,
}

pub fn norm_bundle(m: &DenseMatrix) -> Result<NormBundle, LinalgError> {
    m.check_finite()?;
    let operator = if m.rows == 0 || m.cols == 0 {
        0.0
    } else {
        singular_values(m, 1, DEFAULT_TOL)?.values[0]
    };
    let mut col_sq = vec![0.0f64; m.cols];
    let mut row_max: f64 = 0.0;
    let mut max_abs: f64 = 0.0;
    for i in 0..m.rows {
        let mut r = 0.0;
        for (j, &a) in m.row(i).iter().enumerate() {
            col_sq[j] += a * a;
            r += a * a;
            max_abs = max_abs.max(a.abs());
        }
        row_max = row_max.max(r);
    }
    let one_to_two = col_sq.iter().fold(0.0f64, |a, &b| a.max(b)).sqrt();
    Ok(NormBundle { operator, one_to_two, one_to_two_transpose: row_max.sqrt(), max_abs })
}

/// `L^{-1/2} A R^{-1/2}` together with the line sums it was built from.
#[derive(Clone, Debug)]
pub struct NormalizedMatrix {
    pub base: DenseMatrix,
    pub row_sums: Vec<f64>,
    pub col_sums: Vec<f64>,
}

impl NormalizedMatrix {
    /// Sum of all entries of the original matrix.
    pub fn total(&self) -> f64 {
        self.row_sums.iter().sum()
    }

    /// Top left singular vector `a^{-1/2} L^{1/2} 1`.
    pub fn u1(&self) -> Vec<f64> {
        let a = self.total();
        self.row_sums.iter().map(|l| (l / a).sqrt()).collect()
    }

    /// Top right singular vector `a^{-1/2} R^{1/2} 1`.
    pub fn v1(&self) -> Vec<f64> {
        let a = self.total();
        self.col_sums.iter().map(|r| (r / a).sqrt()).collect()
    }
}

pub fn normalize(a: &DenseMatrix) -> Result<NormalizedMatrix, LinalgError> {
    a.check_finite()?;
    if let Some(p) = a.data.iter().position(|&x| x < 0.0) {
        return Err(LinalgError::NegativeEntry { row: p / a.cols, col: p % a.cols });
    }
    let row_sums = a.row_sums();
    let col_sums = a.col_sums();
    if let Some(i) = row_sums.iter().position(|&s| s <= 0.0) {
        return Err(LinalgError::ZeroLine { kind: "row", index: i });
    }
    if let Some(j) = col_sums.iter().position(|&s| s <= 0.0) {
        return Err(LinalgError::ZeroLine { kind: "column", index: j });
    }
    let mut base = a.clone();
    for i in 0..a.rows {
        for j in 0..a.cols {
            let v = a.get(i, j);
            if v != 0.0 {
                base.set(i, j, v / (row_sums[i] * col_sums[j]).sqrt());
            }
        }
    }
    Ok(NormalizedMatrix { base, row_sums, col_sums })
}

/// `s1 u1 v1^T` and the operator norm of what remains.
pub fn best_rank_one_residual(m: &DenseMatrix) -> Result<(DenseMatrix, f64), LinalgError> {
    if m.rows.min(m.cols) < 2 {
        return Err(LinalgError::Shape("need at least two rows and two columns".into()));
    }
    let t = &top_singular_triples(m, 1, &SvdOptions::default())?[0];
    let mut b1 = DenseMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            b1.set(i, j, t.value * t.u[i] * t.v[j]);
        }
    }
    let rest = m.sub(&b1)?;
    let residual = singular_values(&rest, 1, DEFAULT_TOL)?.values[0];
    Ok((b1, residual))
}

/// Whether every singular value of the submatrix is at most the matching one
/// of `m` (plus `DEFAULT_TOL`). Uses the dense path on both sides.
pub fn interlace_check(
    m: &DenseMatrix,
    rows: &[usize],
    cols: &[usize],
) -> Result<bool, LinalgError> {
    if rows.is_empty() || cols.is_empty() {
        return Err(LinalgError::EmptySubset);
    }
    if rows.iter().any(|&i| i >= m.rows) || cols.iter().any(|&j| j >= m.cols) {
        return Err(LinalgError::Shape("subset index out of range".into()));
    }
    let full = dense_singular_values(m)?;
    let sub = dense_singular_values(&m.submatrix(rows, cols))?;
    Ok(sub.iter().zip(&full).all(|(b, a)| *b <= a + DEFAULT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.set(i, j, 1.0);
                }
            }
        }
        m
    }

    fn petersen() -> DenseMatrix {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        let mut m = DenseMatrix::zeros(10, 10);
        for (u, v) in edges {
            m.set(u, v, 1.0);
            m.set(v, u, 1.0);
        }
        m
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn k4_spectrum() {
        let s = singular_values(&complete(4), 4, 1e-9).unwrap();
        assert_close(&s.values, &[3.0, 1.0, 1.0, 1.0], 1e-9);
        assert!(s.residuals.iter().all(|&r| r <= 1e-9));
    }

    #[test]
    fn zero_matrix_spectrum() {
        let s = singular_values(&DenseMatrix::zeros(3, 3), 3, 1e-9).unwrap();
        assert_eq!(s.values, vec![0.0; 3]);
    }

    #[test]
    fn petersen_spectrum_both_paths() {
        let want = [3.0, 2.0, 2.0, 2.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let it = singular_values(&petersen(), 10, 1e-9).unwrap();
        assert_close(&it.values, &want, 1e-9);
        assert_close(&dense_singular_values(&petersen()).unwrap(), &want, 1e-12);
    }

    #[test]
    fn non_finite_rejected() {
        let m = DenseMatrix::from_vec(1, 2, vec![1.0, f64::NAN]).unwrap();
        assert_eq!(singular_values(&m, 1, 1e-9), Err(LinalgError::NonFinite { row: 0, col: 1 }));
    }

    #[test]
    fn rectangular_iterative_matches_dense() {
        let m = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 0.0],
            vec![0.0, -1.0, 3.0],
            vec![2.0, 2.0, 1.0],
            vec![0.5, 0.0, -1.0],
        ])
        .unwrap();
        let it = singular_values(&m, 3, 1e-9).unwrap();
        assert_close(&it.values, &dense_singular_values(&m).unwrap(), 1e-9);
        let wide = m.transpose();
        let it = singular_values(&wide, 3, 1e-9).unwrap();
        assert_close(&it.values, &dense_singular_values(&wide).unwrap(), 1e-9);
    }

    #[test]
    fn norm_bundle_examples() {
        let ones = DenseMatrix::from_vec(2, 2, vec![1.0; 4]).unwrap();
        let b = norm_bundle(&ones).unwrap();
        let r2 = 2f64.sqrt();
        assert_close(&[b.operator, b.one_to_two, b.one_to_two_transpose, b.max_abs], &[2.0, r2, r2, 1.0], 1e-12);
        let b = norm_bundle(&DenseMatrix::diag(&[3.0, -4.0])).unwrap();
        assert_close(&[b.operator, b.one_to_two, b.one_to_two_transpose, b.max_abs], &[4.0; 4], 1e-12);
    }

    #[test]
    fn normalize_examples() {
        let k4 = complete(4);
        let n = normalize(&k4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((n.base.get(i, j) - k4.get(i, j) / 3.0).abs() < 1e-15);
            }
        }
        let mut star = DenseMatrix::zeros(4, 4);
        for leaf in 1..4 {
            star.set(0, leaf, 1.0);
            star.set(leaf, 0, 1.0);
        }
        let n = normalize(&star).unwrap();
        for leaf in 1..4 {
            assert!((n.base.get(0, leaf) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        let mut z = complete(3);
        z.set(1, 0, 0.0);
        z.set(1, 2, 0.0);
        assert_eq!(normalize(&z).unwrap_err(), LinalgError::ZeroLine { kind: "row", index: 1 });
        z.set(0, 1, -1.0);
        assert!(matches!(normalize(&z), Err(LinalgError::NegativeEntry { .. })));
    }

    #[test]
    fn rank_one_examples() {
        let (_, r) = best_rank_one_residual(&complete(4)).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        let u = [1.0, -2.0, 0.5];
        let v = [3.0, 1.0];
        let m = DenseMatrix::from_vec(3, 2, u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()).unwrap();
        let (b1, r) = best_rank_one_residual(&m).unwrap();
        assert!(r < 1e-10);
        assert!(m.sub(&b1).unwrap().data().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn interlace_examples() {
        assert!(interlace_check(&complete(4), &[0, 1], &[0, 1]).unwrap());
        assert!(interlace_check(&petersen(), &[0, 2, 4, 6, 8], &[0, 2, 4, 6, 8]).unwrap());
        assert_eq!(interlace_check(&complete(4), &[], &[0]), Err(LinalgError::EmptySubset));
    }
}
