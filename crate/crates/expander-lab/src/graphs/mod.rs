//! Simple undirected graphs in compressed adjacency form, fixture generators
//! and spectral certificates.

mod certify;
mod gen;
mod io;

pub use certify::{
    certify_bipartite_expander, certify_expander, certify_expander_seeded, BipartiteCertificate,
    second_singular_value, BipartiteOutcome, BipartiteView, BipartiteViolation, SpectralCertificate, CERTIFY_SEED,
};
pub use gen::{gen_named, gen_paley, gen_random_regular, is_prime};
pub use io::{parse_graph, write_graph};

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{DenseMatrix, LinalgError, SymmetricOperator};

/// Largest vertex count for which [`Graph::to_dense`] is allowed.
pub const DENSIFY_CAP: usize = 4000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not 1 mod 4")]
    BadResidueClass(u64),
    #[error("n*d = {n}*{d} is odd")]
    ParityViolation { n: usize, d: usize },
    #[error("pairing model exhausted {attempts} attempts")]
    RetryExhausted { attempts: usize },
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("one side of the bipartite view is empty")]
    EmptySide,
    #[error("graph has {n} vertices, above the densify cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Simple undirected graph; immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::Invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(GraphError::Invalid(format!("self-loop at {u}")));
            }
            lists[u].push(v as u32);
            lists[v].push(u as u32);
        }
        for (v, l) in lists.iter_mut().enumerate() {
            l.sort_unstable();
            if l.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::Invalid(format!("duplicate edge at vertex {v}")));
            }
        }
        Ok(Self::from_sorted_lists(lists))
    }

    /// Caller guarantees sorted, symmetric, loop-free lists.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for l in lists {
            targets.extend_from_slice(&l);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u).iter().map(|&v| v as usize).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.targets.len() as f64 / self.n() as f64
        }
    }

    /// Number of neighbors of `v` inside `mask`.
    pub fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.neighbors(v).iter().filter(|&&w| mask[w as usize]).count()
    }

    /// Induced subgraph on `vertices`; vertex `i` of the result is
    /// `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![u32::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let lists = vertices
            .iter()
            .map(|&v| {
                let mut l: Vec<u32> =
                    self.neighbors(v).iter().map(|&w| index[w as usize]).filter(|&i| i != u32::MAX).collect();
                l.sort_unstable();
                l
            })
            .collect();
        Graph::from_sorted_lists(lists)
    }

    /// Dense adjacency matrix, refused above [`DENSIFY_CAP`] vertices.
    pub fn to_dense(&self) -> Result<DenseMatrix, GraphError> {
        let n = self.n();
        if n > DENSIFY_CAP {
            return Err(GraphError::TooLarge { n, cap: DENSIFY_CAP });
        }
        let mut m = DenseMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            m.set(u, v, 1.0);
            m.set(v, u, 1.0);
        }
        Ok(m)
    }

    /// Number of ordered pairs `(s, t)` with `s` in `s_set`, `t` in `t_set` and
    /// `st` an edge. Overlapping vertices contribute edges twice, as in
    /// `1_S^T A 1_T`.
    pub fn ordered_pairs_between(&self, s_set: &[usize], t_mask: &[bool]) -> usize {
        s_set.iter().map(|&s| self.degree_into(s, t_mask)).sum()
    }

    /// Number of edges with one endpoint in `S` and the other in `T`, each
    /// edge counted once.
    pub fn edges_between(&self, s_mask: &[bool], t_mask: &[bool]) -> usize {
        self.edges()
            .filter(|&(u, v)| (s_mask[u] && t_mask[v]) || (s_mask[v] && t_mask[u]))
            .count()
    }

    /// Internal consistency: sorted, symmetric, loop-free.
    pub fn validate(&self) -> Result<(), GraphError> {
        for v in 0..self.n() {
            let l = self.neighbors(v);
            if l.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::Invalid(format!("neighbors of {v} not strictly sorted")));
            }
            for &w in l {
                let w = w as usize;
                if w == v {
                    return Err(GraphError::Invalid(format!("self-loop at {v}")));
                }
                if w >= self.n() || !self.has_edge(w, v) {
                    return Err(GraphError::Invalid(format!("edge {v}-{w} is not symmetric")));
                }
            }
        }
        Ok(())
    }
}

/// Build a boolean vertex mask.
pub fn mask(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vertices {
        m[v] = true;
    }
    m
}

const PARALLEL_WORK: usize = 1 << 16;

impl SymmetricOperator for Graph {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let row = |v: usize| self.neighbors(v).iter().map(|&w| x[w as usize]).sum::<f64>();
        if self.targets.len() >= PARALLEL_WORK {
            y.par_iter_mut().enumerate().for_each(|(v, yv)| *yv = row(v));
        } else {
            y.iter_mut().enumerate().for_each(|(v, yv)| *yv = row(v));
        }
    }
}

/// `D^{-1/2} A D^{-1/2}` of a graph without isolated vertices.
pub struct NormalizedAdjacency<'a> {
    graph: &'a Graph,
    inv_sqrt_deg: Vec<f64>,
}

impl<'a> NormalizedAdjacency<'a> {
    pub fn new(graph: &'a Graph) -> Result<Self, GraphError> {
        if let Some(v) = (0..graph.n()).find(|&v| graph.degree(v) == 0) {
            return Err(GraphError::IsolatedVertex(v));
        }
        let inv_sqrt_deg = graph.degrees().iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
        Ok(Self { graph, inv_sqrt_deg })
    }

    /// Unit top eigenvector `D^{1/2} 1 / sqrt(2e)`.
    pub fn top_vector(&self) -> Vec<f64> {
        let total = 2.0 * self.graph.edge_count() as f64;
        self.inv_sqrt_deg.iter().map(|s| 1.0 / (s * total.sqrt())).collect()
    }
}

impl SymmetricOperator for NormalizedAdjacency<'_> {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let scaled: Vec<f64> = x.iter().zip(&self.inv_sqrt_deg).map(|(a, b)| a * b).collect();
        self.graph.apply(&scaled, y);
        y.iter_mut().zip(&self.inv_sqrt_deg).for_each(|(a, b)| *a *= b);
    }
}

/// Normalized adjacency with its top component removed:
/// `B = Ā - (1/a) D^{1/2} 1 1^T D^{1/2}`, so that `||B|| = s2(Ā)`.
pub struct CenteredNormalized<'a> {
    inner: NormalizedAdjacency<'a>,
    top: Vec<f64>,
}

impl<'a> CenteredNormalized<'a> {
    pub fn new(graph: &'a Graph) -> Result<Self, GraphError> {
        let inner = NormalizedAdjacency::new(graph)?;
        let top = inner.top_vector();
        Ok(Self { inner, top })
    }
}

impl SymmetricOperator for CenteredNormalized<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.inner.apply(x, y);
        let c = crate::linalg::dot(&self.top, x);
        y.iter_mut().zip(&self.top).for_each(|(a, t)| *a -= c * t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn basic_queries() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degrees(), vec![2, 2, 3, 1]);
        assert!(g.has_edge(2, 0) && !g.has_edge(0, 3));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2), (2, 3)]);
        let h = g.induced(&[2, 0, 3]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
        g.validate().unwrap();
    }

    #[test]
    fn pair_counts_follow_both_conventions() {
        let g = gen_named("complete", &[4]).unwrap();
        let s = [0, 1, 2];
        let t = mask(4, &[1, 2, 3]);
        // Ordered: 1_S^T A 1_T over S = {0,1,2}, T = {1,2,3}.
        assert_eq!(g.ordered_pairs_between(&s, &t), 7);
        assert_eq!(g.edges_between(&mask(4, &s), &t), 6);
    }
}
