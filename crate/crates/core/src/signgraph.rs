//! Positive and negative sign graphs, and the threshold test they must pass
//! for a matrix in the orbit of the ordered class.

use serde::{Deserialize, Serialize};

use crate::matrix::SymMatrix;
use crate::tol::Tolerances;

/// Simple undirected graph on `0..n` stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n && u != v, "bad edge ({u}, {v})");
            if !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        Graph { n, adjacency }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, adj) in self.adjacency.iter().enumerate() {
            out.extend(adj.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, &edges)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            s.push_str(&format!("  {u} -- {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignGraphs {
    pub n: usize,
    pub positive: Graph,
    pub negative: Graph,
}

/// Entries within `eps_ord` of zero belong to neither graph.
pub fn extract_sign_graphs(a: &SymMatrix, tol: &Tolerances) -> SignGraphs {
    let n = a.n();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (i, j, v) in a.off_diagonal().filter(|(i, j, _)| i < j) {
        if v > tol.eps_ord {
            pos.push((i, j));
        } else if v < -tol.eps_ord {
            neg.push((i, j));
        }
    }
    SignGraphs {
        n,
        positive: Graph::from_edges(n, &pos),
        negative: Graph::from_edges(n, &neg),
    }
}

/// Vertex removed at one elimination step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Elimination {
    Isolated(usize),
    Dominating(usize),
}

/// Repeatedly removes an isolated or dominating vertex. Returns the removal
/// order when the graph empties, `None` when it gets stuck.
pub fn threshold_elimination(g: &Graph) -> Option<Vec<Elimination>> {
    let n = g.n;
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = g.adjacency.iter().map(Vec::len).collect();
    let mut order = Vec::with_capacity(n);
    for remaining in (1..=n).rev() {
        let v = (0..n).find(|&v| alive[v] && (degree[v] == 0 || degree[v] == remaining - 1))?;
        order.push(if degree[v] == 0 {
            Elimination::Isolated(v)
        } else {
            Elimination::Dominating(v)
        });
        alive[v] = false;
        for &u in &g.adjacency[v] {
            degree[u] -= 1;
        }
    }
    Some(order)
}

pub fn is_threshold(g: &Graph) -> bool {
    threshold_elimination(g).is_some()
}

/// Both sign graphs threshold. `false` rules out the orbit; `true` decides
/// nothing.
pub fn orbit_necessary_filter(a: &SymMatrix, tol: &Tolerances) -> bool {
    let g = extract_sign_graphs(a, tol);
    is_threshold(&g.positive) && is_threshold(&g.negative)
}
