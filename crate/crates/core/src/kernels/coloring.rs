//! Greedy first-fit vertex coloring.

use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub color: Vec<u32>,
    pub num_colors: u32,
}

impl Coloring {
    /// Vertex ids grouped by color, each group ascending.
    pub fn classes(&self) -> Vec<Vec<u32>> {
        let mut classes = vec![Vec::new(); self.num_colors as usize];
        for (v, &c) in self.color.iter().enumerate() {
            classes[c as usize].push(v as u32);
        }
        classes
    }

    /// True when no edge of `g` joins two vertices of the same color.
    /// Self-loops are ignored.
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.color.len() == g.num_vertices()
            && g.edges()
                .all(|(u, v, _)| u == v || self.color[u as usize] != self.color[v as usize])
    }
}

/// Visits vertices in ascending id order and gives each the smallest color
/// not used by an already-colored neighbor. Uses at most `max_deg + 1`
/// colors. On a directed graph both edge directions constrain the result
/// when the inverse CSR is present; otherwise only out-edges are seen, so
/// callers should pass a symmetric pattern.
pub fn greedy_coloring(g: &Graph) -> Coloring {
    let n = g.num_vertices();
    const NONE: u32 = u32::MAX;
    let mut color = vec![NONE; n];
    // mark[c] == v + 1 means color c is taken by a neighbor of v
    let mut mark: Vec<usize> = Vec::new();
    let mut num_colors = 0;
    let incoming = if g.is_directed() { g.in_csr() } else { None };
    for v in 0..n {
        let mut take = |u: u32| {
            let c = color[u as usize];
            if u as usize != v && c != NONE {
                mark[c as usize] = v + 1;
            }
        };
        g.neighbors(v).iter().for_each(|&u| take(u));
        if let Some(inc) = incoming {
            inc.neighbors(v).iter().for_each(|&u| take(u));
        }
        let c = (0..)
            .find(|&c| c >= mark.len() || mark[c] != v + 1)
            .unwrap();
        if c == mark.len() {
            mark.push(0);
        }
        color[v] = c as u32;
        num_colors = num_colors.max(c as u32 + 1);
    }
    Coloring { color, num_colors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_rmat, gen_uniform, RmatParams};
    use crate::graph::{build_graph, degree_stats, BuildOptions, EdgeList};

    fn undirected(n: usize, pairs: &[(u32, u32)]) -> Graph {
        build_graph(&EdgeList::from_pairs(n, pairs), BuildOptions::undirected()).unwrap()
    }

    #[test]
    fn path_uses_two_colors() {
        let c = greedy_coloring(&undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]));
        assert_eq!(c.color, vec![0, 1, 0, 1, 0]);
        assert_eq!(c.num_colors, 2);
    }

    #[test]
    fn triangle_uses_three() {
        let c = greedy_coloring(&undirected(3, &[(0, 1), (1, 2), (0, 2)]));
        assert_eq!(c.num_colors, 3);
        assert_eq!(c.classes(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn empty_graph() {
        let c = greedy_coloring(&undirected(0, &[]));
        assert_eq!(c.num_colors, 0);
        assert!(c.color.is_empty());
    }

    #[test]
    fn random_graphs_are_properly_colored_within_bound() {
        for seed in 0..5 {
            let g = build_graph(
                &gen_uniform(300, 3000, seed).unwrap(),
                BuildOptions::undirected(),
            )
            .unwrap();
            let c = greedy_coloring(&g);
            assert!(c.is_proper(&g));
            assert!(c.num_colors as usize <= degree_stats(&g).unwrap().max_deg + 1);
            assert_eq!(c.num_colors, c.color.iter().max().unwrap() + 1);
        }
        let g = build_graph(
            &gen_rmat(&RmatParams::new(10, 8, 3)).unwrap(),
            BuildOptions::undirected(),
        )
        .unwrap();
        assert!(greedy_coloring(&g).is_proper(&g));
    }

    #[test]
    fn self_loops_do_not_block_a_color() {
        let g = build_graph(
            &EdgeList::from_weighted(2, &[(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 4.0)]),
            BuildOptions::matrix(),
        )
        .unwrap();
        let c = greedy_coloring(&g);
        assert_eq!(c.color, vec![0, 1]);
        assert!(c.is_proper(&g));
    }
}
