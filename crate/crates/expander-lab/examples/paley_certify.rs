//! Certify Paley graphs as spectral expanders and compare the measured second
//! singular value with the closed form `(1 + sqrt q) / 2`.
//!
//! ```text
//! cargo run --release --example paley_certify -- 101 1009
//! ```

use std::time::Instant;

use expander_lab::graphs::{certify_expander, gen_paley};

fn main() {
    let qs: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let qs = if qs.is_empty() { vec![5, 13, 17, 29, 101, 1009] } else { qs };
    println!("{:>6} {:>8} {:>20} {:>20} {:>10} {:>9}", "q", "d", "lambda_hat", "(1+sqrt q)/2", "residual", "ms");
    for q in qs {
        let g = match gen_paley(q) {
            Ok(g) => g,
            Err(e) => {
                println!("{q:>6} skipped: {e}");
                continue;
            }
        };
        let t = Instant::now();
        let c = certify_expander(&g, 1e-9).expect("certificate");
        let closed = (1.0 + (q as f64).sqrt()) / 2.0;
        println!(
            "{:>6} {:>8} {:>20.15} {:>20.15} {:>10.2e} {:>9}",
            q,
            c.d,
            c.lambda_hat,
            closed,
            c.residual,
            t.elapsed().as_millis()
        );
    }
}
