use serde::{Deserialize, Serialize};

use super::{mask, Graph, GraphError};
use crate::linalg::{top_eigenpairs, LanczosOptions};

/// Default start-vector seed for spectral certificates.
pub const CERTIFY_SEED: u64 = 0xC3A7;

/// Witness that a graph is an `(n, (1 ± gamma_hat) d, lambda_hat)`-graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralCertificate {
    pub n: usize,
    /// Mean degree.
    pub d: f64,
    /// `max_v |deg(v) - d| / d`.
    pub gamma_hat: f64,
    /// Second largest singular value of the adjacency matrix.
    pub lambda_hat: f64,
    /// Largest residual of the two eigenpairs behind `lambda_hat`.
    pub residual: f64,
    pub seed: u64,
}

impl SpectralCertificate {
    /// Re-checks the degree window against `g`.
    pub fn degrees_hold(&self, g: &Graph) -> bool {
        let lo = (1.0 - self.gamma_hat) * self.d - 1e-9;
        let hi = (1.0 + self.gamma_hat) * self.d + 1e-9;
        g.n() == self.n && g.degrees().iter().all(|&x| (x as f64) >= lo && (x as f64) <= hi)
    }
}

pub fn certify_expander(g: &Graph, tol: f64) -> Result<SpectralCertificate, GraphError> {
    certify_expander_seeded(g, tol, CERTIFY_SEED)
}

pub fn certify_expander_seeded(g: &Graph, tol: f64, seed: u64) -> Result<SpectralCertificate, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::BadParameter("empty graph".into()));
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(GraphError::IsolatedVertex(v));
    }
    let d = g.mean_degree();
    let gamma_hat = g.degrees().iter().map(|&x| (x as f64 - d).abs() / d).fold(0.0, f64::max);
    let (lambda_hat, residual) = second_singular_value(g, tol, seed)?;
    Ok(SpectralCertificate { n, d, gamma_hat, lambda_hat, residual, seed })
}

/// `s2` of the adjacency matrix and the residual behind it.
pub fn second_singular_value(g: &Graph, tol: f64, seed: u64) -> Result<(f64, f64), GraphError> {
    if g.n() < 2 {
        return Ok((0.0, 0.0));
    }
    let opts = LanczosOptions { tol, seed, ..LanczosOptions::default() };
    let pairs = top_eigenpairs(g, 2, &opts)?;
    let residual = pairs[0].residual.max(pairs[1].residual);
    let s2 = pairs[1].value.abs();
    Ok((if s2 < crate::linalg::ZERO_CUTOFF { 0.0 } else { s2 }, residual))
}

/// The bipartite graph between two disjoint vertex sets of a parent graph.
#[derive(Clone, Debug)]
pub struct BipartiteView<'a> {
    pub parent: &'a Graph,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl<'a> BipartiteView<'a> {
    pub fn new(parent: &'a Graph, left: Vec<usize>, right: Vec<usize>) -> Result<Self, GraphError> {
        let mut seen = vec![0u8; parent.n()];
        for (side, set) in [(1u8, &left), (2u8, &right)] {
            for &v in set.iter() {
                if v >= parent.n() {
                    return Err(GraphError::Invalid(format!("vertex {v} out of range")));
                }
                if seen[v] != 0 {
                    return Err(GraphError::Invalid(format!("vertex {v} listed twice")));
                }
                seen[v] = side;
            }
        }
        Ok(Self { parent, left, right })
    }

    /// Neighbors of `v` on the opposite side, in increasing order.
    pub fn cross_neighbors(&self, v: usize, other_mask: &[bool]) -> Vec<usize> {
        self.parent.neighbors(v).iter().map(|&w| w as usize).filter(|&w| other_mask[w]).collect()
    }

    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.left.iter().chain(&self.right).copied().collect();
        all.sort_unstable();
        all
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteCertificate {
    pub n: usize,
    pub d: f64,
    pub gamma: f64,
    pub left_size: usize,
    pub right_size: usize,
    /// Largest `|deg_H(v) / (d |other side| / n) - 1|` over both sides.
    pub max_cross_deviation: f64,
    pub s2: f64,
    pub lambda_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BipartiteViolation {
    /// Degree of `vertex` into the other side is outside `[lo, hi]`.
    CrossDegree { vertex: usize, side: u8, degree: usize, lo: f64, hi: f64 },
    /// Degree of `vertex` inside `V1 ∪ V2` is outside `[lo, hi]`.
    UnionDegree { vertex: usize, degree: usize, lo: f64, hi: f64 },
    /// `s2` of the graph induced on `V1 ∪ V2` exceeds the bound.
    Spectral { s2: f64, bound: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BipartiteOutcome {
    Pass(BipartiteCertificate),
    Violation(BipartiteViolation),
}

impl BipartiteOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Pass(_))
    }
}

/// Checks that the view is an `(n, (1 ± gamma) d, lambda)`-bipartite expander
/// with `n = |V1| + |V2|`: cross-degrees are `(1 ± gamma) d |V_other| / n`,
/// degrees inside `V1 ∪ V2` are `(1 ± gamma) d`, and, when a bound is given,
/// `s2(G[V1 ∪ V2]) <= lambda`. Reports the first failure found.
pub fn certify_bipartite_expander(
    view: &BipartiteView<'_>,
    d: f64,
    gamma: f64,
    lambda: Option<f64>,
    tol: f64,
) -> Result<BipartiteOutcome, GraphError> {
    if view.left.is_empty() || view.right.is_empty() {
        return Err(GraphError::EmptySide);
    }
    let g = view.parent;
    let n = view.left.len() + view.right.len();
    let left_mask = mask(g.n(), &view.left);
    let right_mask = mask(g.n(), &view.right);
    let slack = 1e-12 * d.abs().max(1.0);
    let mut max_dev: f64 = 0.0;
    for (side, set, other, other_len) in [
        (1u8, &view.left, &right_mask, view.right.len()),
        (2u8, &view.right, &left_mask, view.left.len()),
    ] {
        let target = d * other_len as f64 / n as f64;
        let (lo, hi) = ((1.0 - gamma) * target, (1.0 + gamma) * target);
        for &v in set.iter() {
            let degree = g.degree_into(v, other);
            let x = degree as f64;
            if x < lo - slack || x > hi + slack {
                return Ok(BipartiteOutcome::Violation(BipartiteViolation::CrossDegree {
                    vertex: v,
                    side,
                    degree,
                    lo,
                    hi,
                }));
            }
            max_dev = max_dev.max((x / target - 1.0).abs());
        }
    }
    let union = view.union();
    let union_mask = mask(g.n(), &union);
    let (lo, hi) = ((1.0 - gamma) * d, (1.0 + gamma) * d);
    for &v in &union {
        let degree = g.degree_into(v, &union_mask);
        if (degree as f64) < lo - slack || (degree as f64) > hi + slack {
            return Ok(BipartiteOutcome::Violation(BipartiteViolation::UnionDegree { vertex: v, degree, lo, hi }));
        }
    }
    let (s2, _) = second_singular_value(&g.induced(&union), tol, CERTIFY_SEED)?;
    if let Some(bound) = lambda {
        if s2 > bound + tol {
            return Ok(BipartiteOutcome::Violation(BipartiteViolation::Spectral { s2, bound }));
        }
    }
    Ok(BipartiteOutcome::Pass(BipartiteCertificate {
        n,
        d,
        gamma,
        left_size: view.left.len(),
        right_size: view.right.len(),
        max_cross_deviation: max_dev,
        s2,
        lambda_bound: lambda,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{gen_named, gen_paley};

    #[test]
    fn certificates_for_fixtures() {
        let c = certify_expander(&gen_named("complete", &[4]).unwrap(), 1e-9).unwrap();
        assert_eq!((c.n, c.d, c.gamma_hat), (4, 3.0, 0.0));
        assert!((c.lambda_hat - 1.0).abs() < 1e-9);
        let c = certify_expander(&gen_paley(13).unwrap(), 1e-9).unwrap();
        assert!((c.lambda_hat - (1.0 + 13f64.sqrt()) / 2.0).abs() < 1e-9);
        assert_eq!(c.d, 6.0);
        let p = gen_named("petersen", &[]).unwrap();
        let c = certify_expander(&p, 1e-9).unwrap();
        assert!((c.lambda_hat - 2.0).abs() < 1e-9);
        assert!(c.degrees_hold(&p));
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(certify_expander(&g, 1e-9), Err(GraphError::IsolatedVertex(2)));
    }

    #[test]
    fn k4_split_needs_slack() {
        let k4 = gen_named("complete", &[4]).unwrap();
        let view = BipartiteView::new(&k4, vec![0, 1], vec![2, 3]).unwrap();
        match certify_bipartite_expander(&view, 3.0, 0.0, None, 1e-9).unwrap() {
            BipartiteOutcome::Violation(BipartiteViolation::CrossDegree { vertex, degree, lo, .. }) => {
                assert_eq!((vertex, degree), (0, 2));
                assert_eq!(lo, 1.5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(certify_bipartite_expander(&view, 3.0, 0.5, Some(1.0), 1e-9).unwrap().passed());
        let empty = BipartiteView::new(&k4, vec![], vec![2, 3]).unwrap();
        assert_eq!(certify_bipartite_expander(&empty, 3.0, 0.5, None, 1e-9), Err(GraphError::EmptySide));
    }
}
