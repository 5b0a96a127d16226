//! Independent oracles for the library's solvers: nalgebra for spectra,
//! brute force for matchings and extendability, pmf summation for
//! hypergeometric tails.

use expander_lab::extend::{extendable_sufficient, is_extendable_exact, Subgraph, VerdictMethod};
use expander_lab::graphs::{gen_named, gen_paley, BipartiteView, Graph};
use expander_lab::linalg::{singular_values, DenseMatrix};
use expander_lab::matching::{hall_violator, max_matching, neighborhood_in, verify_matching, Side};
use expander_lab::sampling::{hypergeometric_tail, TailSide};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn nalgebra_singular_values(m: &DenseMatrix) -> Vec<f64> {
    let a = DMatrix::from_row_slice(m.rows(), m.cols(), m.data());
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut it = bits.iter();
    for u in 0..n {
        for v in u + 1..n {
            if *it.next().unwrap_or(&false) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

#[test]
fn named_fixtures_match_nalgebra() {
    let fixtures = [
        gen_named("complete", &[9]).unwrap(),
        gen_named("cycle", &[16]).unwrap(),
        gen_named("petersen", &[]).unwrap(),
        gen_paley(37).unwrap(),
        gen_paley(61).unwrap(),
    ];
    for g in &fixtures {
        let a = g.to_dense().unwrap();
        let ours = singular_values(&a, 2, 1e-10).unwrap().values;
        let theirs = nalgebra_singular_values(&a);
        for i in 0..2 {
            assert!((ours[i] - theirs[i]).abs() < 1e-8, "n = {}: s{} {} vs {}", g.n(), i + 1, ours[i], theirs[i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_graph_spectra_match_nalgebra(n in 3usize..30, bits in prop::collection::vec(any::<bool>(), 435)) {
        let g = graph_from_bits(n, &bits);
        let a = g.to_dense().unwrap();
        let ours = singular_values(&a, 2, 1e-10).unwrap().values;
        let theirs = nalgebra_singular_values(&a);
        prop_assert!((ours[0] - theirs[0]).abs() < 1e-8);
        prop_assert!((ours[1] - theirs[1]).abs() < 1e-8);
    }

    #[test]
    fn rectangular_spectra_match_nalgebra(
        rows in 1usize..12,
        cols in 1usize..12,
        data in prop::collection::vec(-3.0f64..3.0, 144),
    ) {
        let m = DenseMatrix::from_vec(rows, cols, data[..rows * cols].to_vec()).unwrap();
        let k = rows.min(cols).min(3);
        let ours = singular_values(&m, k, 1e-10).unwrap().values;
        let theirs = nalgebra_singular_values(&m);
        for i in 0..k {
            prop_assert!((ours[i] - theirs[i]).abs() < 1e-8, "s{}: {} vs {}", i + 1, ours[i], theirs[i]);
        }
    }
}

/// Largest matching by trying every partner (or none) for each left vertex.
fn brute_max_matching(adj: &[Vec<usize>], i: usize, used: &mut Vec<bool>) -> usize {
    if i == adj.len() {
        return 0;
    }
    let mut best = brute_max_matching(adj, i + 1, used);
    for &j in &adj[i] {
        if !used[j] {
            used[j] = true;
            best = best.max(1 + brute_max_matching(adj, i + 1, used));
            used[j] = false;
        }
    }
    best
}

fn bipartite(a: usize, b: usize, bits: &[bool]) -> (Graph, Vec<usize>, Vec<usize>) {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            if bits[i * 8 + j] {
                edges.push((i, a + j));
            }
        }
    }
    (Graph::from_edges(a + b, &edges).unwrap(), (0..a).collect(), (a..a + b).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn max_matching_equals_brute_force(a in 1usize..=8, b in 1usize..=8, bits in prop::collection::vec(any::<bool>(), 64)) {
        let (g, left, right) = bipartite(a, b, &bits);
        let view = BipartiteView::new(&g, left.clone(), right.clone()).unwrap();
        let m = max_matching(&view);
        prop_assert!(verify_matching(&g, &left, &right, &m).is_ok());
        let adj: Vec<Vec<usize>> = (0..a).map(|i| (0..b).filter(|&j| bits[i * 8 + j]).collect()).collect();
        prop_assert_eq!(m.len(), brute_max_matching(&adj, 0, &mut vec![false; b]));
    }

    #[test]
    fn hall_violator_exists_exactly_when_a_side_is_unsaturated(
        a in 1usize..=8,
        b in 1usize..=8,
        bits in prop::collection::vec(any::<bool>(), 64),
    ) {
        let (g, left, right) = bipartite(a, b, &bits);
        let view = BipartiteView::new(&g, left.clone(), right.clone()).unwrap();
        let m = max_matching(&view).len();
        for (side, from, to) in [(Side::Left, &left, &right), (Side::Right, &right, &left)] {
            match hall_violator(&view, side) {
                None => prop_assert_eq!(m, from.len()),
                Some(s) => {
                    prop_assert!(m < from.len());
                    prop_assert!(s.iter().all(|v| from.contains(v)));
                    prop_assert!(neighborhood_in(&g, &s, to).len() < s.len());
                }
            }
        }
    }

    #[test]
    fn sufficient_condition_implies_extendability(
        n in 4usize..=8,
        bits in prop::collection::vec(prop::bool::weighted(0.7), 28),
        members in prop::collection::vec(any::<bool>(), 8),
        d_cap in 3usize..=4,
    ) {
        let g = graph_from_bits(n, &bits);
        let vertices: Vec<usize> = (0..n).filter(|&v| members[v]).collect();
        // a matching inside V(S) keeps d_S <= 1
        let mut edges = Vec::new();
        let mut taken = vec![false; n];
        for &u in &vertices {
            for &v in &vertices {
                if u < v && !taken[u] && !taken[v] && g.has_edge(u, v) {
                    taken[u] = true;
                    taken[v] = true;
                    edges.push((u, v));
                }
            }
        }
        let s = Subgraph { vertices, edges };
        let suff = extendable_sufficient(&g, &s, d_cap, 1, 0, 0).unwrap();
        let exact = is_extendable_exact(&g, &s, d_cap, 1).unwrap();
        prop_assert_eq!(suff.method, VerdictMethod::Sufficient);
        if suff.holds {
            prop_assert!(exact.holds);
        }
        if !exact.holds {
            prop_assert!(!suff.holds);
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Pr[X = x]` for `X ~ Hypergeometric(N, K, n)`.
fn pmf(big_n: u64, big_k: u64, n: u64, x: u64) -> f64 {
    (binomial(big_k, x) * binomial(big_n - big_k, n - x)) as f64 / binomial(big_n, n) as f64
}

#[test]
fn hypergeometric_bounds_dominate_exact_tails() {
    let alphas = [0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.49];
    let mut checked = 0;
    for big_n in (1..=60u64).step_by(3) {
        for big_k in 0..=big_n {
            for n in 0..=big_n {
                let mu = n as f64 * big_k as f64 / big_n as f64;
                let lo = big_k.saturating_add(n).saturating_sub(big_n);
                let hi = big_k.min(n);
                for &a in &alphas {
                    let lower: f64 = (lo..=hi).filter(|&x| (x as f64) < (1.0 - a) * mu).map(|x| pmf(big_n, big_k, n, x)).sum();
                    let upper: f64 = (lo..=hi).filter(|&x| (x as f64) > (1.0 + a) * mu).map(|x| pmf(big_n, big_k, n, x)).sum();
                    let bl = hypergeometric_tail(big_n, big_k, n, a, TailSide::Lower).unwrap();
                    let bu = hypergeometric_tail(big_n, big_k, n, a, TailSide::Upper).unwrap();
                    assert!(lower <= bl + 1e-12, "lower N={big_n} K={big_k} n={n} a={a}: {lower} > {bl}");
                    assert!(upper <= bu + 1e-12, "upper N={big_n} K={big_k} n={n} a={a}: {upper} > {bu}");
                    checked += 2;
                }
            }
        }
    }
    assert!(checked > 10_000);
}
