//! Edge-list format: an `n m` header, then `m` lines `u v` with `u < v`,
//! sorted lexicographically.

use super::{Graph, GraphError};

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| GraphError::Parse("missing header".into()))?;
    let (n, m) = pair(header)?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let (u, v) = pair(line)?;
        if u >= v {
            return Err(GraphError::Parse(format!("edge line {line:?} must have u < v")));
        }
        if edges.last().is_some_and(|&last| last >= (u, v)) {
            return Err(GraphError::Parse(format!("edge {u} {v} is out of order")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse(format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, &edges)
}

fn pair(line: &str) -> Result<(usize, usize), GraphError> {
    let mut it = line.split_ascii_whitespace().map(|t| {
        t.parse::<usize>().map_err(|e| GraphError::Parse(format!("bad integer {t:?}: {e}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(GraphError::Parse(format!("expected two integers, got {line:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::gen_paley;

    #[test]
    fn round_trip() {
        let g = gen_paley(13).unwrap();
        let text = write_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_graph("3 1\n1 0\n").is_err());
        assert!(parse_graph("3 2\n0 2\n0 1\n").is_err());
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 5\n").is_err());
    }
}
