//! Moments of the norm of random submatrices against their bounds, for the
//! identity, the all-ones matrix and the centered Paley adjacency matrix.
//!
//! ```text
//! cargo run --release --example submatrix_norms -- 0.3 500
//! ```

use expander_lab::graphs::gen_paley;
use expander_lab::linalg::DenseMatrix;
use expander_lab::sampling::{submatrix_norm_experiment, SubmatrixMode};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sigma: f64 = args.first().and_then(|a| a.parse().ok()).unwrap_or(0.3);
    let trials: usize = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(500);

    let n = 101;
    let paley = gen_paley(n as u64).unwrap().to_dense().unwrap();
    let d = (n - 1) as f64 / 2.0;
    let centered = DenseMatrix::from_vec(n, n, paley.data().iter().map(|&a| a - d / n as f64).collect()).unwrap();
    let ones = DenseMatrix::from_vec(n, n, vec![1.0; n * n]).unwrap();
    let matrices = [("identity", DenseMatrix::identity(n)), ("all-ones", ones), ("centered Paley", centered)];
    let m = ((sigma * n as f64).round() as usize).max(1);
    let modes = [
        SubmatrixMode::TwoSidedBernoulli { sigma },
        SubmatrixMode::SameBernoulli { sigma },
        SubmatrixMode::RightBernoulli { sigma },
        SubmatrixMode::SymmetricUniform { m },
    ];

    println!("n = {n}, sigma = {sigma}, p = 2, {trials} trials");
    println!("{:<16} {:<20} {:>12} {:>12} {:>8}", "matrix", "mode", "empirical", "bound", "batches");
    for (name, b) in &matrices {
        for (i, mode) in modes.iter().enumerate() {
            let e = submatrix_norm_experiment(b, *mode, 2.0, trials, 100 + i as u64).unwrap();
            let mode = serde_json::to_value(mode).unwrap()["mode"].as_str().unwrap().to_string();
            let ok = if e.all_batches_hold() { "all ok" } else { "VIOLATED" };
            println!("{:<16} {:<20} {:>12.4} {:>12.4} {:>8}", name, mode, e.empirical_lp, e.theoretical_bound, ok);
        }
    }
}
