//! Random induced subgraphs of a Paley graph: how often the sample keeps
//! its degrees inside the window and its second singular value below
//! `6 sigma lambda`.
//!
//! ```text
//! cargo run --release --example random_subgraph -- 1009 50
//! ```

use expander_lab::graphs::{certify_expander, gen_paley};
use expander_lab::linalg::DEFAULT_TOL;
use expander_lab::sampling::{bipartite_induced_experiment, induced_subgraph_experiment, SubgraphConfig};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let q = args.first().copied().unwrap_or(1009);
    let trials = args.get(1).copied().unwrap_or(50);
    let g = gen_paley(q as u64).expect("q prime and 1 mod 4");
    let cert = certify_expander(&g, DEFAULT_TOL).unwrap();
    let cfg = SubgraphConfig::default();

    println!("Paley({q}), {trials} trials, gamma_target {}", cfg.gamma_target);
    println!("{:>6} {:>9} {:>9} {:>9} {:>7} {:>6} {:>6}", "sigma", "success", "degrees", "spectral", "floor", "hyp d", "hyp s");
    for (i, sigma) in [0.1, 0.2, 0.3, 0.5, 0.7].into_iter().enumerate() {
        let e = induced_subgraph_experiment(&g, &cert, sigma, trials, i as u64, &cfg).unwrap();
        println!(
            "{:>6} {:>9.3} {:>9.3} {:>9.3} {:>7.3} {:>6} {:>6}",
            sigma,
            e.success_fraction,
            e.degree_fraction,
            e.spectral_fraction,
            e.floor,
            e.hypotheses.degree_condition,
            e.hypotheses.spectral_condition
        );
    }

    let e = bipartite_induced_experiment(&g, &cert, 0.2, 0.3, trials, 99, &cfg).unwrap();
    println!(
        "bipartite (0.2, 0.3): success {:.3}, degrees {:.3}, spectral {:.3}, floor {:.3}",
        e.success_fraction, e.degree_fraction, e.spectral_fraction, e.floor
    );
}
