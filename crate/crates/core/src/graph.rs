//! Weighted undirected graphs and their Laplacians.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SeededRng;

/// An undirected edge between 0-based nodes `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Weighted undirected graph without self-loops or parallel edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    pairs: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(node_count: usize) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        Ok(Graph {
            node_count,
            edges: Vec::new(),
            pairs: BTreeSet::new(),
        })
    }

    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut g = Graph::new(node_count)?;
        for (i, j, w) in edges {
            g.add_edge(i, j, w)?;
        }
        Ok(g)
    }

    /// Adds the edge `{i, j}` (0-based) with a positive finite weight.
    pub fn add_edge(&mut self, i: usize, j: usize, weight: f64) -> Result<()> {
        let n = self.node_count;
        if i >= n || j >= n {
            return Err(Error::InvalidGraph(format!(
                "edge ({i}, {j}) references a node outside 0..{n}"
            )));
        }
        if i == j {
            return Err(Error::InvalidGraph(format!("self-loop at node {i}")));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidGraph(format!(
                "edge ({i}, {j}) has non-positive or non-finite weight {weight}"
            )));
        }
        let key = (i.min(j), i.max(j));
        if !self.pairs.insert(key) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
        }
        self.edges.push(Edge {
            i: key.0,
            j: key.1,
            weight,
        });
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn adjacency(&self) -> Matrix {
        let mut a = Matrix::zeros(self.node_count, self.node_count);
        for e in &self.edges {
            a[(e.i, e.j)] = e.weight;
            a[(e.j, e.i)] = e.weight;
        }
        a
    }

    /// `L = D − A`, with each diagonal entry set to the negated sum of the
    /// off-diagonal entries of its row.
    pub fn laplacian(&self) -> Matrix {
        let n = self.node_count;
        let mut l = self.adjacency().scale(-1.0);
        for i in 0..n {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| l[(i, j)]).sum();
            l[(i, i)] = -off;
        }
        l
    }

    /// Same topology with every weight multiplied by `alpha > 0`.
    pub fn scaled(&self, alpha: f64) -> Result<Graph> {
        Graph::from_edges(
            self.node_count,
            self.edges.iter().map(|e| (e.i, e.j, e.weight * alpha)),
        )
    }

    /// Node `v` becomes `perm[v]`; `perm` must be a permutation of `0..N`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.node_count {
            return Err(Error::DimensionMismatch {
                what: "permutation",
                expected: self.node_count,
                found: perm.len(),
            });
        }
        Graph::from_edges(
            self.node_count,
            self.edges.iter().map(|e| (perm[e.i], perm[e.j], e.weight)),
        )
    }

    /// Unweighted cycle `C_N`, `N ≥ 3`.
    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidGraph("a cycle needs at least 3 nodes".into()));
        }
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)))
    }

    /// Unweighted path `P_N`.
    pub fn path(n: usize) -> Result<Graph> {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i, 1.0)))
    }

    /// Star `K_{1,N−1}` centred on node 0, `N ≥ 2`.
    pub fn star(n: usize) -> Result<Graph> {
        if n < 2 {
            return Err(Error::InvalidGraph("a star needs at least 2 nodes".into()));
        }
        Graph::from_edges(n, (1..n).map(|i| (0, i, 1.0)))
    }

    /// Complete graph `K_N`.
    pub fn complete(n: usize) -> Result<Graph> {
        let mut g = Graph::new(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(i, j, 1.0)?;
            }
        }
        Ok(g)
    }

    /// Complete bipartite `K_{a,b}`: nodes `0..a` on one side, `a..a+b` on the other.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidGraph("both parts must be non-empty".into()));
        }
        let mut g = Graph::new(a + b)?;
        for i in 0..a {
            for j in a..(a + b) {
                g.add_edge(i, j, 1.0)?;
            }
        }
        Ok(g)
    }

    /// Random connected graph: a random spanning tree plus each remaining
    /// pair with probability `extra_edge_prob`. Weights are 1, or uniform in
    /// `[0.5, 2)` when `weighted`.
    pub fn random_connected(
        n: usize,
        extra_edge_prob: f64,
        weighted: bool,
        rng: &mut SeededRng,
    ) -> Result<Graph> {
        let mut g = Graph::new(n)?;
        let weight = |rng: &mut SeededRng| if weighted { rng.uniform(0.5, 2.0) } else { 1.0 };
        for v in 1..n {
            let parent = rng.below(v);
            let w = weight(rng);
            g.add_edge(parent, v, w)?;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !g.pairs.contains(&(i, j)) && rng.next_f64() < extra_edge_prob {
                    let w = weight(rng);
                    g.add_edge(i, j, w)?;
                }
            }
        }
        Ok(g)
    }
}
