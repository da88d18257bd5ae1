//! Sparse undirected graph storage, ingestion, and matrix-vector kernels.
//!
//! Graphs are simple (no self-loops, no multi-edges), unweighted, and
//! immutable once built. Adjacency is stored in compressed sparse row form so
//! neighbor scans and matvecs run in O(degree) and O(m) respectively.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Simple undirected graph over dense node ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// CSR offsets, length n+1.
    offsets: Vec<usize>,
    /// Concatenated sorted neighbor lists, length m.
    adjacency: Vec<u32>,
}

impl Graph {
    /// Builds a graph on `n` nodes from an undirected edge list. Self-loops
    /// are dropped and duplicate or reversed repeats collapse to one edge;
    /// the two counters are returned alongside the graph.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<(Graph, usize, usize)> {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut self_loops = 0usize;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                self_loops += 1;
                continue;
            }
            lists[u].push(v as u32);
            lists[v].push(u as u32);
        }
        let mut duplicates = 0usize;
        for list in &mut lists {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            duplicates += before - list.len();
        }
        // Each duplicated undirected edge was counted once per endpoint.
        duplicates /= 2;

        let mut offsets = Vec::with_capacity(n + 1);
        let mut adjacency = Vec::new();
        offsets.push(0);
        for list in &lists {
            adjacency.extend_from_slice(list);
            offsets.push(adjacency.len());
        }
        Ok((
            Graph {
                n,
                offsets,
                adjacency,
            },
            self_loops,
            duplicates,
        ))
    }

    /// Node count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total degree m = sum of all node degrees (twice the edge count).
    pub fn total_degree(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Per-node degrees as f64, handy for spectral scalings.
    pub fn degrees_f64(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.degree(i) as f64).collect()
    }

    /// Empirical average degree m/n.
    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.total_degree() as f64 / self.n as f64
        }
    }

    /// y = A x for the 0/1 adjacency matrix, in O(m).
    pub fn adjacency_matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            for &j in self.neighbors(i) {
                acc += x[j as usize];
            }
            y[i] = acc;
        }
        Ok(y)
    }

    /// Subgraph induced on the largest connected component, together with the
    /// mapping from new ids to original ids (ascending in original id).
    ///
    /// Ties between equally large components go to the one containing the
    /// smallest original node id.
    pub fn largest_connected_component(&self) -> Result<(Graph, Vec<usize>)> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut component = vec![usize::MAX; self.n];
        let mut sizes = Vec::new();
        for start in 0..self.n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0usize;
            let mut queue = VecDeque::from([start]);
            component[start] = id;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if component[v] == usize::MAX {
                        component[v] = id;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        // Components are discovered in order of their minimum original id, so
        // the first maximum implements the tie rule.
        let best = sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(id, _)| id)
            .expect("nonempty graph has at least one component");

        let mapping: Vec<usize> = (0..self.n).filter(|&i| component[i] == best).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (new, &old) in mapping.iter().enumerate() {
            new_id[old] = new;
        }
        let mut edges = Vec::new();
        for &old in &mapping {
            for &v in self.neighbors(old) {
                let v = v as usize;
                if old < v {
                    edges.push((new_id[old], new_id[v]));
                }
            }
        }
        let (sub, _, _) = Graph::from_edges(mapping.len(), &edges)?;
        Ok((sub, mapping))
    }

    /// Writes the edge list in the same text format `load_edge_list` reads:
    /// one `u v` pair per line with u < v, ascending.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for i in 0..self.n {
            for &j in self.neighbors(i) {
                let j = j as usize;
                if i < j {
                    writeln!(w, "{i} {j}")?;
                }
            }
        }
        Ok(())
    }
}

/// Result of parsing an edge-list text source.
#[derive(Debug)]
pub struct EdgeListLoad {
    pub graph: Graph,
    /// Self-loop lines that were dropped.
    pub self_loops: usize,
    /// Duplicate (or reversed-repeat) edges that were collapsed.
    pub duplicates: usize,
}

/// Parses an edge list: each non-comment line holds two whitespace-separated
/// integer node ids; `#` starts a comment. Node count is `max id + 1`.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<EdgeListLoad> {
    let mut edges = Vec::new();
    let mut max_id = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let mut it = body.split_whitespace();
        let (Some(a), b) = (it.next(), it.next()) else {
            if body.trim().is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line: idx + 1,
                msg: "expected two node ids".into(),
            });
        };
        let Some(b) = b else {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "expected two node ids".into(),
            });
        };
        if it.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "expected exactly two node ids".into(),
            });
        }
        let parse = |tok: &str, idx: usize| -> Result<usize> {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("invalid node id {tok:?}"),
            })
        };
        let (u, v) = (parse(a, idx)?, parse(b, idx)?);
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty edge list".into(),
        });
    }
    let (graph, self_loops, duplicates) = Graph::from_edges(max_id + 1, &edges)?;
    Ok(EdgeListLoad {
        graph,
        self_loops,
        duplicates,
    })
}

/// `load_edge_list` over a file path, wrapping IO errors with the path.
pub fn load_edge_list_path(path: &str) -> Result<EdgeListLoad> {
    let file = std::fs::File::open(path).map_err(|source| Error::File {
        path: path.to_string(),
        source,
    })?;
    load_edge_list(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        load_edge_list("0 1\n1 2\n2 0\n".as_bytes()).unwrap().graph
    }

    #[test]
    fn triangle_counts() {
        let g = triangle();
        assert_eq!(g.n(), 3);
        assert_eq!(g.total_degree(), 6);
        assert_eq!(g.edge_count(), 3);
        for i in 0..3 {
            assert_eq!(g.degree(i), 2);
        }
    }

    #[test]
    fn dedup_and_self_loop() {
        let load = load_edge_list("0 1\n1 0\n0 0\n".as_bytes()).unwrap();
        assert_eq!(load.graph.n(), 2);
        assert_eq!(load.graph.total_degree(), 2);
        assert_eq!(load.self_loops, 1);
        assert_eq!(load.duplicates, 1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let load = load_edge_list("# header\n\n0 1  # inline\n 1 2 \n".as_bytes()).unwrap();
        assert_eq!(load.graph.edge_count(), 2);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = load_edge_list("0 1\nx 2\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = load_edge_list("0 1\n2\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(load_edge_list("".as_bytes()).is_err());
        assert!(load_edge_list("# only comments\n".as_bytes()).is_err());
    }

    #[test]
    fn matvec_examples() {
        let g = triangle();
        assert_eq!(
            g.adjacency_matvec(&[1.0, 1.0, 1.0]).unwrap(),
            vec![2.0, 2.0, 2.0]
        );
        let (edge, _, _) = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(edge.adjacency_matvec(&[3.0, 5.0]).unwrap(), vec![5.0, 3.0]);
        assert!(g.adjacency_matvec(&[1.0]).is_err());
    }

    #[test]
    fn matvec_matches_dense_product() {
        // Seeded pseudo-random graph on 50 nodes vs. an O(n^2) dense multiply.
        let n = 50;
        let mut edges = Vec::new();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for i in 0..n {
            for j in (i + 1)..n {
                if next() % 5 == 0 {
                    edges.push((i, j));
                }
            }
        }
        let (g, _, _) = Graph::from_edges(n, &edges).unwrap();
        let mut dense = vec![vec![0.0; n]; n];
        for &(i, j) in &edges {
            dense[i][j] = 1.0;
            dense[j][i] = 1.0;
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let y = g.adjacency_matvec(&x).unwrap();
        for i in 0..n {
            let want: f64 = (0..n).map(|j| dense[i][j] * x[j]).sum();
            assert!((y[i] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn matvec_of_ones_is_degree_vector() {
        let g = triangle();
        let ones = vec![1.0; g.n()];
        let deg = g.adjacency_matvec(&ones).unwrap();
        for i in 0..g.n() {
            assert_eq!(deg[i], g.degree(i) as f64);
        }
        assert_eq!(g.total_degree() % 2, 0);
    }

    #[test]
    fn lcc_with_isolated_node() {
        let (g, _, _) = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let (sub, mapping) = g.largest_connected_component().unwrap();
        assert_eq!(sub.n(), 3);
        assert_eq!(mapping, vec![0, 1, 2]);
    }

    #[test]
    fn lcc_tie_goes_to_smaller_min_id() {
        let (g, _, _) =
            Graph::from_edges(6, &[(3, 4), (4, 5), (5, 3), (0, 1), (1, 2), (2, 0)]).unwrap();
        let (_, mapping) = g.largest_connected_component().unwrap();
        assert_eq!(mapping, vec![0, 1, 2]);
    }

    #[test]
    fn lcc_empty_graph_errors() {
        let (g, _, _) = Graph::from_edges(0, &[]).unwrap();
        assert!(g.largest_connected_component().is_err());
    }

    #[test]
    fn edge_list_round_trips() {
        let load = load_edge_list("0 3\n3 1\n1 0\n2 3\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        load.graph.write_edge_list(&mut buf).unwrap();
        let again = load_edge_list(buf.as_slice()).unwrap();
        assert_eq!(load.graph, again.graph);
    }
}
