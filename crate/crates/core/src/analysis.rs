//! Connectivity and isolation predicates.

use std::mem;

use crate::sampler::SampledGraph;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let grandparent = self.parent[self.parent[x]];
            self.parent[x] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Returns `true` when `x` and `y` were in different sets.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let mut rx = self.find(x);
        let mut ry = self.find(y);
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx;
        self.size[rx] += self.size[ry];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn largest_set(&self) -> usize {
        (0..self.parent.len())
            .filter(|&x| self.parent[x] == x)
            .map(|x| self.size[x])
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentSummary {
    pub component_count: usize,
    pub isolated_count: usize,
    pub largest_component: usize,
}

pub fn summarize(graph: &SampledGraph) -> ComponentSummary {
    let n = graph.node_count();
    let mut uf = UnionFind::new(n);
    for &(u, v) in graph.edges() {
        uf.union(u as usize, v as usize);
        if uf.set_count() == 1 {
            break;
        }
    }
    ComponentSummary {
        component_count: uf.set_count(),
        isolated_count: graph.degrees().iter().filter(|&&d| d == 0).count(),
        largest_component: uf.largest_set(),
    }
}

/// A single node counts as connected.
pub fn is_connected(graph: &SampledGraph) -> bool {
    summarize(graph).component_count == 1
}

pub fn has_no_isolated(graph: &SampledGraph) -> bool {
    graph.degrees().iter().all(|&d| d > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> SampledGraph {
        SampledGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn empty_graph() {
        let s = summarize(&SampledGraph::empty(5));
        assert_eq!(
            s,
            ComponentSummary {
                component_count: 5,
                isolated_count: 5,
                largest_component: 1
            }
        );
        assert!(!has_no_isolated(&SampledGraph::empty(5)));
    }

    #[test]
    fn path_and_matching() {
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let s = summarize(&path);
        assert_eq!((s.component_count, s.isolated_count), (1, 0));
        assert_eq!(s.largest_component, 4);

        let two = graph(4, &[(0, 1), (2, 3)]);
        let s = summarize(&two);
        assert_eq!((s.component_count, s.isolated_count), (2, 0));
    }

    #[test]
    fn connectivity_predicates() {
        assert!(is_connected(&SampledGraph::empty(1)));

        let complete: Vec<_> = (0..10)
            .flat_map(|u| ((u + 1)..10).map(move |v| (u, v)))
            .collect();
        let k10 = graph(10, &complete);
        assert!(is_connected(&k10));
        assert!(has_no_isolated(&k10));

        let with_isolated = graph(4, &[(0, 1), (1, 2)]);
        assert!(!is_connected(&with_isolated));

        let matching = graph(6, &[(0, 1), (2, 3), (4, 5)]);
        assert!(has_no_isolated(&matching));
        assert!(!is_connected(&matching));
    }

    #[test]
    fn edge_order_does_not_matter() {
        let a = graph(6, &[(0, 1), (3, 4), (1, 2), (4, 5)]);
        let b = graph(6, &[(5, 4), (2, 1), (4, 3), (1, 0)]);
        assert_eq!(summarize(&a), summarize(&b));
    }
}
