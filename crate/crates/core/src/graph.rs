//! Simple undirected graphs, validated trees, and the distance machinery the
//! rest of the crate builds on.
//!
//! Vertex ids are dense integers `0..n`. Adjacency lists are kept sorted so
//! that two graphs with the same edge set compare equal.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, NotATree, Result};

/// Largest graph for which a dense distance matrix will be materialized.
pub const MAX_DENSE_VERTICES: usize = 8_192;

/// Largest tree any explicit construction is allowed to produce.
pub const MAX_EXPLICIT_VERTICES: usize = 1_000_000;

/// Simple undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph on `n` vertices, rejecting loops, repeats and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::Parameter(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Parameter(format!("duplicate edge ({u}, {})", w[0])));
            }
        }
        Ok(Graph { adj })
    }

    /// Wraps adjacency lists produced by a trusted builder; sorts each list.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Checks simplicity, symmetry and id range.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n();
        for (u, list) in self.adj.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Parameter(format!(
                        "adjacency of {u} not strictly sorted"
                    )));
                }
            }
            for &v in list {
                if v >= n || v == u {
                    return Err(Error::Parameter(format!("bad neighbor {v} of {u}")));
                }
                if self.adj[v].binary_search(&u).is_err() {
                    return Err(Error::Parameter(format!("asymmetric edge {u} -> {v}")));
                }
            }
        }
        Ok(())
    }

    /// Hop distances from `source`; `None` marks unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// First vertex not reachable from 0, if any.
    pub fn first_unreachable(&self) -> Option<usize> {
        if self.n() == 0 {
            return None;
        }
        self.bfs(0).iter().position(Option::is_none)
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for u in 0..self.n() {
            if self.adj[u].is_empty() {
                let _ = writeln!(out, "  {u};");
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// A connected acyclic graph with at least one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    graph: Graph,
}

impl Tree {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.n() - 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.graph.degree(u)
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    /// Wraps output of a growth operation. Debug builds re-check every invariant.
    pub(crate) fn from_grown(adj: Vec<Vec<usize>>) -> Self {
        let graph = Graph::from_adjacency(adj);
        debug_assert!(graph.check_invariants().is_ok());
        debug_assert!(validate_tree(&graph).is_ok());
        Tree { graph }
    }
}

impl AsRef<Graph> for Tree {
    fn as_ref(&self) -> &Graph {
        &self.graph
    }
}

impl TryFrom<Graph> for Tree {
    type Error = Error;

    fn try_from(g: Graph) -> Result<Self> {
        validate_tree(&g)?;
        Ok(Tree { graph: g })
    }
}

/// Dense matrix of hop distances, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn max(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// Sum over ordered pairs, i.e. twice the Wiener index.
    pub fn total(&self) -> u64 {
        self.d.iter().map(|&x| u64::from(x)).sum()
    }
}

pub fn build_path(n: usize) -> Result<Tree> {
    if n < 2 {
        return Err(Error::InvalidSeed(format!(
            "path needs at least 2 vertices, got {n}"
        )));
    }
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Tree::try_from(Graph::from_edges(n, &edges)?)
}

/// Star with center 0 and `n - 1` leaves.
pub fn build_star(n: usize) -> Result<Tree> {
    if n < 2 {
        return Err(Error::InvalidSeed(format!(
            "star needs at least 2 vertices, got {n}"
        )));
    }
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Tree::try_from(Graph::from_edges(n, &edges)?)
}

/// Uniform random attachment tree: vertex `v` joins a uniformly chosen
/// earlier vertex. Fully determined by `seed`.
pub fn random_tree(n: usize, seed: u64) -> Result<Tree> {
    if n < 2 {
        return Err(Error::InvalidSeed(format!(
            "tree needs at least 2 vertices, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Tree::try_from(Graph::from_edges(n, &edges)?)
}

/// Parses one `u v` pair per line. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut max_id: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_err(format!(
                "expected 2 vertex ids, found {}",
                tokens.len()
            )));
        }
        let mut ids = [0usize; 2];
        for (slot, tok) in ids.iter_mut().zip(&tokens) {
            *slot = tok
                .parse()
                .map_err(|_| parse_err(format!("`{tok}` is not a nonnegative integer")))?;
        }
        let [u, v] = ids;
        if u == v {
            return Err(parse_err(format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(format!("duplicate edge {u} {v}")));
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = max_id.map_or(0, |m| m + 1);
    let g = Graph::from_edges(n, &edges)?;
    if let Some(vertex) = (0..n).find(|&u| g.degree(u) == 0) {
        return Err(Error::MissingVertex { vertex, n });
    }
    Ok(g)
}

pub fn validate_tree(g: &Graph) -> Result<Tree> {
    if g.n() < 2 {
        return Err(Error::NotATree(NotATree::TooSmall));
    }
    if !g.is_connected() {
        return Err(Error::NotATree(NotATree::Disconnected));
    }
    if g.edge_count() != g.n() - 1 {
        return Err(Error::NotATree(NotATree::Cyclic));
    }
    Ok(Tree { graph: g.clone() })
}

/// Exact hop distances via one BFS per source.
pub fn all_pairs_distances(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.n();
    if n > MAX_DENSE_VERTICES {
        return Err(Error::TooLarge {
            what: "dense distance matrix",
            n: n.to_string(),
            cap: MAX_DENSE_VERTICES,
        });
    }
    let rows: Vec<Vec<Option<u32>>> = (0..n).into_par_iter().map(|s| g.bfs(s)).collect();
    let mut d = Vec::with_capacity(n * n);
    for row in rows {
        for (v, x) in row.into_iter().enumerate() {
            d.push(x.ok_or(Error::Disconnected { unreached: v })?);
        }
    }
    Ok(DistanceMatrix { n, d })
}

/// Line graph of a tree; vertex `i` is the `i`-th edge in lexicographic order.
pub fn line_graph(t: &Tree) -> Graph {
    let g = t.graph();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
    }
    let mut adj = vec![Vec::new(); edges.len()];
    for list in &incident {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    // Two tree edges share at most one endpoint, so no duplicates arise.
    Graph::from_adjacency(adj)
}

pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|u| g.degree(u)).collect()
}
