//! Audit the expander mixing lemma on random vertex-set pairs of a Paley
//! graph and on a random nonnegative matrix, then certify joinedness.
//!
//! ```text
//! cargo run --release --example mixing_audit -- 101 5000
//! ```

use expander_lab::graphs::{certify_expander, gen_paley};
use expander_lab::linalg::{DenseMatrix, DEFAULT_TOL};
use expander_lab::mixing::{eml_graph_audit, joinedness_certify, MatrixAuditor};
use expander_lab::rng;
use rand::seq::index::sample;
use rand::Rng;

fn random_set(r: &mut rng::Rng, n: usize) -> Vec<usize> {
    let k = r.gen_range(1..=n);
    let mut v = sample(r, n, k).into_vec();
    v.sort_unstable();
    v
}

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let q = args.first().copied().unwrap_or(101);
    let samples = args.get(1).copied().unwrap_or(5000);
    let g = gen_paley(q as u64).expect("q prime and 1 mod 4");
    let cert = certify_expander(&g, DEFAULT_TOL).unwrap();
    let mut r = rng::rng(1);

    let (mut worst, mut bad) = (0.0f64, 0);
    for _ in 0..samples {
        let (s, t) = (random_set(&mut r, q), random_set(&mut r, q));
        let a = eml_graph_audit(&cert, &g, &s, &t).unwrap();
        worst = worst.max((a.ordered_count as f64 - a.main_term).abs() / a.epsilon);
        bad += usize::from(!a.holds);
    }
    println!("Paley({q}): {samples} graph audits, {bad} violations, worst |e(S,T) - d|S||T|/n| / eps = {worst:.4}");

    let (rows, cols) = (40, 60);
    let data: Vec<f64> = (0..rows * cols).map(|_| r.gen_range(0.0..1.0)).collect();
    let m = DenseMatrix::from_vec(rows, cols, data).unwrap();
    let auditor = MatrixAuditor::new(&m).unwrap();
    let (mut worst, mut bad) = (0.0f64, 0);
    for _ in 0..samples {
        let (s, t) = (random_set(&mut r, rows), random_set(&mut r, cols));
        let a = auditor.audit(&s, &t).unwrap();
        // S or T covering a whole side makes both sides vanish up to rounding.
        if a.rhs_bound > 1e-9 {
            worst = worst.max(a.lhs_deviation / a.rhs_bound);
        }
        bad += usize::from(!a.holds);
    }
    println!("random {rows}x{cols} matrix (s2 of normalized = {:.4}): {bad} violations, worst ratio {worst:.4}", auditor.s2());

    let j = joinedness_certify(&cert, &g, 2000, 2).unwrap();
    println!(
        "joinedness: theta = {:.2}, any two disjoint {}-sets span an edge; counterexample found: {}",
        j.theta,
        j.m,
        j.counterexample.is_some()
    );
}
