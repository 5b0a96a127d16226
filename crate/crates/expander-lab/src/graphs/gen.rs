use rand::Rng as _;

use super::{Graph, GraphError};
use crate::rng;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Paley graph on `Z_q`: `a ~ b` iff `a - b` is a nonzero square mod `q`.
pub fn gen_paley(q: u64) -> Result<Graph, GraphError> {
    if !is_prime(q) {
        return Err(GraphError::NotPrime(q));
    }
    if q % 4 != 1 {
        return Err(GraphError::BadResidueClass(q));
    }
    let n = q as usize;
    let mut square = vec![false; n];
    for x in 1..q {
        square[((x * x) % q) as usize] = true;
    }
    let lists = (0..n)
        .map(|a| (0..n).filter(|&b| square[(a + n - b) % n]).map(|b| b as u32).collect())
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}

/// Random `d`-regular graph on `n` vertices from the pairing model.
///
/// Points are paired one random pair at a time; a pair forming a loop or a
/// repeated edge is rejected and redrawn. If no admissible pair remains the
/// round restarts. At most `100 n d` draws are made in total.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 {
        return Err(GraphError::ParityViolation { n, d });
    }
    if d >= n {
        return Err(GraphError::BadParameter(format!("degree {d} must be below n = {n}")));
    }
    let cap = (100 * n * d).max(100);
    let mut rng = rng::rng(seed);
    let mut attempts = 0usize;
    'round: while attempts < cap {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        let mut lists: Vec<Vec<u32>> = vec![Vec::with_capacity(d); n];
        while !points.is_empty() {
            let mut misses = 0usize;
            loop {
                if attempts >= cap {
                    break 'round;
                }
                attempts += 1;
                let i = rng.gen_range(0..points.len());
                let j = rng.gen_range(0..points.len());
                let (u, v) = (points[i], points[j]);
                if i != j && u != v && !lists[u].contains(&(v as u32)) {
                    lists[u].push(v as u32);
                    lists[v].push(u as u32);
                    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                    points.swap_remove(hi);
                    points.swap_remove(lo);
                    break;
                }
                misses += 1;
                if misses > 4 * points.len() && !admissible_pair_exists(&points, &lists) {
                    continue 'round;
                }
            }
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        return Ok(Graph::from_sorted_lists(lists));
    }
    Err(GraphError::RetryExhausted { attempts })
}

fn admissible_pair_exists(points: &[usize], lists: &[Vec<u32>]) -> bool {
    let mut vs: Vec<usize> = points.to_vec();
    vs.sort_unstable();
    vs.dedup();
    vs.iter().enumerate().any(|(a, &u)| vs[a + 1..].iter().any(|&v| !lists[u].contains(&(v as u32))))
}

/// Named fixtures: `complete n`, `cycle n`, `path n`, `complete_bipartite a [b]`,
/// `petersen`.
pub fn gen_named(name: &str, args: &[usize]) -> Result<Graph, GraphError> {
    let arg = |i: usize| {
        args.get(i).copied().ok_or_else(|| GraphError::BadParameter(format!("{name} needs argument {}", i + 1)))
    };
    let edges: (usize, Vec<(usize, usize)>) = match name {
        "complete" => {
            let n = arg(0)?;
            (n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect())
        }
        "cycle" => {
            let n = arg(0)?;
            if n < 3 {
                return Err(GraphError::BadParameter("a cycle needs at least 3 vertices".into()));
            }
            (n, (0..n).map(|u| (u.min((u + 1) % n), u.max((u + 1) % n))).collect())
        }
        "path" => {
            let n = arg(0)?;
            (n, (1..n).map(|v| (v - 1, v)).collect())
        }
        "complete_bipartite" => {
            let a = arg(0)?;
            let b = args.get(1).copied().unwrap_or(a);
            (a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect())
        }
        "petersen" => (
            10,
            vec![
                (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
            ],
        ),
        other => return Err(GraphError::UnknownName(other.to_string())),
    };
    Graph::from_edges(edges.0, &edges.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::certify_expander;

    #[test]
    fn paley_small_cases() {
        let c5 = gen_paley(5).unwrap();
        assert_eq!(c5, gen_named("cycle", &[5]).unwrap());
        let p13 = gen_paley(13).unwrap();
        assert_eq!(p13.edge_count(), 39);
        assert!(p13.degrees().iter().all(|&d| d == 6));
        p13.validate().unwrap();
        assert_eq!(gen_paley(7), Err(GraphError::BadResidueClass(7)));
        assert_eq!(gen_paley(21), Err(GraphError::NotPrime(21)));
    }

    #[test]
    fn random_regular_examples() {
        for seed in 0..20 {
            assert_eq!(gen_random_regular(4, 3, seed).unwrap(), gen_named("complete", &[4]).unwrap());
        }
        let g = gen_random_regular(10, 3, 1).unwrap();
        g.validate().unwrap();
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert_eq!(gen_random_regular(5, 3, 0), Err(GraphError::ParityViolation { n: 5, d: 3 }));
        assert_eq!(gen_random_regular(30, 4, 9).unwrap(), gen_random_regular(30, 4, 9).unwrap());
    }

    #[test]
    fn named_fixtures() {
        let c6 = gen_named("cycle", &[6]).unwrap();
        assert!((certify_expander(&c6, 1e-9).unwrap().lambda_hat - 2.0).abs() < 1e-9);
        let p = gen_named("petersen", &[]).unwrap();
        assert_eq!((p.n(), p.edge_count()), (10, 15));
        assert!(p.degrees().iter().all(|&d| d == 3));
        assert_eq!(gen_named("complete", &[4]).unwrap().edge_count(), 6);
        assert_eq!(gen_named("complete_bipartite", &[2, 3]).unwrap().edge_count(), 6);
        assert!(matches!(gen_named("heawood", &[]), Err(GraphError::UnknownName(_))));
    }
}
