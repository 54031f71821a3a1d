//! Ray adjacency graph of a cone and its vertex connectivity.

use petgraph::algo::ford_fulkerson;
use petgraph::Graph;

use super::{dual_description, HCone, Ray};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Skeleton {
    pub rays: Vec<Ray>,
    /// Pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl Skeleton {
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn connectivity(&self) -> usize {
        vertex_connectivity(self.rays.len(), &self.edges)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
    }
    true
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

pub fn skeleton_graph(cone: &HCone) -> Result<Skeleton> {
    let rays = dual_description(cone)?;
    let mut edges = Vec::new();
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let common = intersect(&rays[i].incidence, &rays[j].incidence);
            let blocked = rays
                .iter()
                .enumerate()
                .any(|(k, r)| k != i && k != j && is_subset(&common, &r.incidence));
            if !blocked {
                edges.push((i, j));
            }
        }
    }
    Ok(Skeleton { rays, edges })
}

/// Maximum number of internally disjoint `s`–`t` paths (vertex splitting
/// plus max-flow).
fn local_connectivity(n: usize, edges: &[(usize, usize)], s: usize, t: usize) -> usize {
    let mut g: Graph<(), u32> = Graph::new();
    let nodes: Vec<_> = (0..2 * n).map(|_| g.add_node(())).collect();
    let big = n as u32 + 1;
    for v in 0..n {
        let cap = if v == s || v == t { big } else { 1 };
        g.add_edge(nodes[2 * v], nodes[2 * v + 1], cap);
    }
    for &(a, b) in edges {
        g.add_edge(nodes[2 * a + 1], nodes[2 * b], big);
        g.add_edge(nodes[2 * b + 1], nodes[2 * a], big);
    }
    let (flow, _) = ford_fulkerson(&g, nodes[2 * s + 1], nodes[2 * t]);
    flow as usize
}

/// Vertex connectivity of an undirected graph (Even's algorithm); a complete
/// graph on `n` vertices has connectivity `n - 1`.
pub fn vertex_connectivity(n: usize, edges: &[(usize, usize)]) -> usize {
    if n <= 1 {
        return 0;
    }
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut k = n - 1;
    let mut i = 0;
    while i <= k && i < n {
        for j in i + 1..n {
            if !adj[i][j] {
                k = k.min(local_connectivity(n, edges, i, j));
            }
        }
        i += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::test_cones::*;
    use rand::Rng;

    #[test]
    fn square_is_a_four_cycle() {
        let sk = skeleton_graph(&square()).unwrap();
        assert_eq!(sk.edges.len(), 4);
        assert!((0..4).all(|i| sk.neighbors(i).len() == 2));
        assert_eq!(sk.connectivity(), 2);
    }

    #[test]
    fn simplicial_is_complete() {
        let sk = skeleton_graph(&simplicial(5)).unwrap();
        assert_eq!(sk.edges.len(), 10);
        assert_eq!(sk.connectivity(), 4);
    }

    #[test]
    fn connectivity_of_known_graphs() {
        // path a-b-c has connectivity 1, two disjoint edges 0
        assert_eq!(vertex_connectivity(3, &[(0, 1), (1, 2)]), 1);
        assert_eq!(vertex_connectivity(4, &[(0, 1), (2, 3)]), 0);
        // cube graph is 3-connected
        let cube: Vec<(usize, usize)> = (0..8usize)
            .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
            .filter(|(a, b)| a < b)
            .collect();
        assert_eq!(vertex_connectivity(8, &cube), 3);
    }

    #[test]
    fn balinski_on_random_cones() {
        let mut r = rng(17);
        for _ in 0..25 {
            let m = r.gen_range(6..=12);
            let c = random_cone(&mut r, 5, m);
            let sk = skeleton_graph(&c).unwrap();
            assert!(sk.connectivity() >= 4);
        }
    }
}
