//! Plain-text matrix format: a `rows cols` header followed by row-major
//! whitespace-separated reals.

use std::fmt::Write as _;

use super::{DenseMatrix, LinalgError};

pub fn parse_matrix(text: &str) -> Result<DenseMatrix, LinalgError> {
    let mut tokens = text.split_ascii_whitespace();
    let mut header = |what: &str| -> Result<usize, LinalgError> {
        tokens
            .next()
            .ok_or_else(|| LinalgError::Parse(format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|e| LinalgError::Parse(format!("bad {what}: {e}")))
    };
    let rows = header("row count")?;
    let cols = header("column count")?;
    let data = tokens
        .map(|t| t.parse::<f64>().map_err(|e| LinalgError::Parse(format!("bad entry {t:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if data.len() != rows * cols {
        return Err(LinalgError::Parse(format!(
            "expected {} entries, found {}",
            rows * cols,
            data.len()
        )));
    }
    DenseMatrix::from_vec(rows, cols, data)
}

/// Shortest representation that parses back to the same bits.
pub fn write_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
