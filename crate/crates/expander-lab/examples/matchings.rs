//! Matchings in Paley graphs: a perfect matching between random halves of a
//! sample, maximum matchings with a Hall violator when one exists, and the
//! greedy matching that avoids prescribed sets.
//!
//! ```text
//! cargo run --release --example matchings
//! ```

use expander_lab::graphs::{certify_expander, gen_named, gen_paley, BipartiteView};
use expander_lab::linalg::DEFAULT_TOL;
use expander_lab::matching::{
    greedy_matching_avoiding, hall_violator, max_matching, measure_bipartite, perfect_matching_expander, verify_matching,
    ExpanderCaps, Side,
};
use expander_lab::rng;
use rand::seq::SliceRandom;

fn main() {
    let g = gen_paley(1009).unwrap();
    let caps = ExpanderCaps { gamma_max: 0.9, lambda_ratio: 0.6 };
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut rng::rng(5));
    for size in [50, 150, 300] {
        let (left, right) = (order[..size].to_vec(), order[size..2 * size].to_vec());
        let view = BipartiteView::new(&g, left.clone(), right.clone()).unwrap();
        let params = measure_bipartite(&view, DEFAULT_TOL).unwrap();
        let m = perfect_matching_expander(&view, &params, &caps).unwrap();
        println!(
            "Paley(1009) halves of {size}: d = {:.1}, gamma = {:.3}, lambda/d = {:.3}, perfect matching of {} ({})",
            params.d,
            params.gamma,
            params.lambda / params.d,
            m.len(),
            if verify_matching(&g, &left, &right, &m).is_ok() { "verified" } else { "INVALID" }
        );
    }

    // A star has no perfect matching between its centre plus one leaf and
    // two other leaves.
    let star = gen_named("complete_bipartite", &[1, 5]).unwrap();
    let view = BipartiteView::new(&star, vec![1, 2], vec![0, 3]).unwrap();
    println!("\nstar K(1,5): max matching {}, Hall violator {:?}", max_matching(&view).len(), hall_violator(&view, Side::Left));

    let g = gen_paley(101).unwrap();
    let cert = certify_expander(&g, DEFAULT_TOL).unwrap();
    let (v1, v2): (Vec<usize>, Vec<usize>) = ((0..50).collect(), (50..101).collect());
    let (s1, s2): (Vec<usize>, Vec<usize>) = ((0..5).collect(), (50..53).collect());
    let gm = greedy_matching_avoiding(&g, &cert, &v1, &v2, &s1, &s2).unwrap();
    println!(
        "Paley(101) greedy avoiding 5 + 3 vertices: theta = {:.2}, floor = {:.2}, size {}",
        gm.theta,
        gm.floor,
        gm.matching.len()
    );
}
