//! Top singular values of small fixtures from the iterative solver next to a
//! full dense decomposition, plus the norms used by the submatrix bounds.
//!
//! ```text
//! cargo run --release --example spectrum
//! ```

use expander_lab::graphs::{gen_named, gen_paley, gen_random_regular, Graph};
use expander_lab::linalg::{dense_singular_values, norm_bundle, singular_values, DEFAULT_TOL};

fn main() {
    let fixtures: Vec<(&str, Graph)> = vec![
        ("K10", gen_named("complete", &[10]).unwrap()),
        ("C12", gen_named("cycle", &[12]).unwrap()),
        ("Petersen", gen_named("petersen", &[]).unwrap()),
        ("Paley(29)", gen_paley(29).unwrap()),
        ("Paley(61)", gen_paley(61).unwrap()),
        ("RR(64,5)", gen_random_regular(64, 5, 7).unwrap()),
    ];
    println!("{:<10} {:>4} {:>12} {:>12} {:>12} {:>10}", "graph", "n", "s1", "s2", "s3", "max |diff|");
    for (name, g) in fixtures {
        let a = g.to_dense().unwrap();
        let it = singular_values(&a, 3, DEFAULT_TOL).unwrap().values;
        let dense = dense_singular_values(&a).unwrap();
        let diff = it.iter().zip(&dense).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        println!("{:<10} {:>4} {:>12.8} {:>12.8} {:>12.8} {:>10.1e}", name, g.n(), it[0], it[1], it[2], diff);
    }

    let a = gen_paley(29).unwrap().to_dense().unwrap();
    let nb = norm_bundle(&a).unwrap();
    println!(
        "\nPaley(29) adjacency: operator {:.6}, max column norm {:.6}, max row norm {:.6}, max entry {}",
        nb.operator, nb.one_to_two, nb.one_to_two_transpose, nb.max_abs
    );
}
