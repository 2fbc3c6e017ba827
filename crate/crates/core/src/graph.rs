//! Undirected simple graph over agent indices, with Erdős–Rényi
//! generation and the red agent's rewiring move.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("vertex {vertex} out of range for graph of {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// Adjacency-set graph. No self-loops, no duplicate edges. Sets are
/// ordered so that iteration (and hence seeded random choice) is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentGraph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl AgentGraph {
    pub fn empty(n: usize) -> Self {
        AgentGraph {
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    /// G(n, p): each unordered pair becomes an edge independently with
    /// probability `p`, in a fixed pair order so equal seeds give equal
    /// graphs.
    pub fn random<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewVertices(n));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::BadProbability(p));
        }
        let mut graph = AgentGraph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(p) {
                    graph.add_edge(i, j);
                }
            }
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i).is_some_and(|s| s.contains(&j))
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j, "self-loops are not allowed");
        assert!(i < self.vertex_count() && j < self.vertex_count());
        self.adjacency[i].insert(j);
        self.adjacency[j].insert(i);
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.adjacency[i].remove(&j);
        self.adjacency[j].remove(&i);
    }

    pub fn neighbors(&self, i: usize) -> Result<&BTreeSet<usize>, GraphError> {
        self.adjacency.get(i).ok_or(GraphError::VertexOutOfRange {
            vertex: i,
            n: self.vertex_count(),
        })
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// All edges as ordered pairs (i < j), sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs.iter().filter(|&&j| j > i) {
                out.push((i, j));
            }
        }
        out
    }

    /// Edge-list dump, one `i j` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (i, j) in self.edges() {
            writeln!(s, "{i} {j}").unwrap();
        }
        s
    }

    /// The red agent's shaping move, conserving the edge count:
    /// pick a blue neighbour `a_i` of red, pick a blue neighbour `a_j` of
    /// `a_i` (not red), break `a_i`–`a_j`, and connect red to `a_j`. If red
    /// is already connected to `a_j`, the new endpoint is redrawn among
    /// blue agents not adjacent to red. Whenever a choice has no
    /// candidates the graph is left untouched.
    ///
    /// Blue agents are every vertex other than `red` and `leader`; the
    /// leader's edges are never rewired.
    pub fn rewire_red<R: Rng>(&mut self, red: usize, leader: usize, rng: &mut R) {
        assert!(red != leader);
        assert!(red < self.vertex_count() && leader < self.vertex_count());
        let is_blue = |v: usize| v != red && v != leader;

        let a_i_candidates: Vec<usize> = self.adjacency[red]
            .iter()
            .copied()
            .filter(|&v| is_blue(v))
            .collect();
        let Some(&a_i) = choose(&a_i_candidates, rng) else {
            return;
        };

        let a_j_candidates: Vec<usize> = self.adjacency[a_i]
            .iter()
            .copied()
            .filter(|&v| is_blue(v))
            .collect();
        let Some(&a_j) = choose(&a_j_candidates, rng) else {
            return;
        };

        let new_endpoint = if self.has_edge(red, a_j) {
            let detached: Vec<usize> = (0..self.vertex_count())
                .filter(|&v| is_blue(v) && !self.has_edge(red, v))
                .collect();
            match choose(&detached, rng) {
                Some(&v) => v,
                None => return,
            }
        } else {
            a_j
        };

        self.remove_edge(a_i, a_j);
        self.add_edge(red, new_endpoint);
    }
}

fn choose<'a, T, R: Rng>(candidates: &'a [T], rng: &mut R) -> Option<&'a T> {
    if candidates.is_empty() {
        None
    } else {
        Some(&candidates[rng.gen_range(0..candidates.len())])
    }
}
