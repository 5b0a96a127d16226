//! Extendability of small subgraphs, checked exactly and through the
//! neighbourhood condition, followed by the reserve connector linking port
//! pairs of a Paley graph by disjoint paths.
//!
//! ```text
//! cargo run --release --example extendability
//! ```

use expander_lab::extend::{
    build_connector, extendable_sufficient, is_extendable_exact, verify_path_system, ConnectorOptions, Subgraph,
};
use expander_lab::graphs::{certify_expander, gen_named, gen_paley};
use expander_lab::linalg::DEFAULT_TOL;

fn main() {
    for (name, g) in [("Paley(13)", gen_paley(13).unwrap()), ("Petersen", gen_named("petersen", &[]).unwrap())] {
        let s = Subgraph { vertices: vec![0, 1], edges: vec![(0, 1)] };
        for d_cap in [3, 4] {
            let exact = is_extendable_exact(&g, &s, d_cap, 1).unwrap();
            let suff = extendable_sufficient(&g, &s, d_cap, 1, 200, 0).unwrap();
            println!(
                "{name}, S = edge 01, D = {d_cap}, m = 1: exact {} ({} sets), sufficient condition {}, witness {:?}",
                exact.holds, exact.sets_checked, suff.holds, exact.witness
            );
        }
    }

    let g = gen_paley(401).unwrap();
    let cert = certify_expander(&g, DEFAULT_TOL).unwrap();
    let k = 20;
    let x: Vec<usize> = (0..k).collect();
    let y: Vec<usize> = (k..2 * k).collect();
    let reserve: Vec<usize> = (2 * k..2 * k + 60).collect();
    let conn = build_connector(&g, &cert, &x, &y, &reserve, 6, ConnectorOptions::default()).unwrap();
    let pairing: Vec<(usize, usize)> = (0..k).map(|i| (x[i], y[(i * 7) % k])).collect();
    let (mut ps, stats) = conn.connect_pairs(&pairing).unwrap();
    let ok = verify_path_system(&g, &ps, &pairing, &reserve, 6).is_ok();
    println!(
        "\nPaley(401) connector: {k} pairs through 60 reserve vertices, {} interior vertices, {} teardowns, verified {ok}",
        stats.interior_used, stats.teardowns
    );
    let left = conn.absorb_reserve(&mut ps);
    println!("absorbing the rest of the reserve: {} of 60 covered, {} left over", ps.vertex_count() - 2 * k, left.len());
}
