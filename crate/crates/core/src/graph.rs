//! Graphs, matchings and vertex covers.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Vertex index in `[0, n)` of the owning graph.
pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge<W> {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: W,
}

impl<W: Weight> Edge<W> {
    pub fn new(u: VertexId, v: VertexId, weight: W) -> Self {
        Edge { u, v, weight }
    }

    pub fn unit(u: VertexId, v: VertexId) -> Self {
        Edge { u, v, weight: W::one() }
    }

    /// Endpoints with the smaller index first.
    pub fn key(&self) -> (VertexId, VertexId) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Side assignment of every vertex of a bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    sides: Vec<Side>,
}

impl Bipartition {
    /// Vertices `[0, left)` on the left, `[left, n)` on the right.
    pub fn split(n: usize, left: usize) -> Self {
        let sides = (0..n)
            .map(|v| if v < left { Side::Left } else { Side::Right })
            .collect();
        Bipartition { sides }
    }

    pub fn from_sides(sides: Vec<Side>) -> Self {
        Bipartition { sides }
    }

    pub fn side(&self, v: VertexId) -> Side {
        self.sides[v]
    }

    pub fn is_left(&self, v: VertexId) -> bool {
        self.sides[v] == Side::Left
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn left_count(&self) -> usize {
        self.sides.iter().filter(|s| **s == Side::Left).count()
    }

    /// Left count when the left side is exactly the prefix `[0, left)`.
    pub fn prefix_split(&self) -> Option<usize> {
        let left = self.left_count();
        self.sides[..left].iter().all(|s| *s == Side::Left).then_some(left)
    }

    pub fn crosses<W: Weight>(&self, e: &Edge<W>) -> bool {
        self.sides[e.u] != self.sides[e.v]
    }
}

/// Immutable undirected multigraph with positive integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph<W> {
    n: usize,
    edges: Vec<Edge<W>>,
    bipartition: Option<Bipartition>,
}

impl<W: Weight> Graph<W> {
    pub fn new(n: usize, edges: Vec<Edge<W>>) -> Result<Self> {
        Self::build(n, edges, None)
    }

    pub fn bipartite(n: usize, bipartition: Bipartition, edges: Vec<Edge<W>>) -> Result<Self> {
        if bipartition.len() != n {
            return Err(Error::InvalidGraph(format!(
                "bipartition covers {} vertices, graph has {n}",
                bipartition.len()
            )));
        }
        Self::build(n, edges, Some(bipartition))
    }

    fn build(n: usize, edges: Vec<Edge<W>>, bipartition: Option<Bipartition>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} ({}, {}) out of range for n = {n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("edge {i} is a self-loop on {}", e.u)));
            }
            if e.weight.is_zero() {
                return Err(Error::InvalidGraph(format!("edge {i} has weight 0")));
            }
            if let Some(b) = &bipartition {
                if !b.crosses(e) {
                    return Err(Error::InvalidGraph(format!(
                        "edge {i} ({}, {}) does not cross the bipartition",
                        e.u, e.v
                    )));
                }
            }
        }
        Ok(Graph { n, edges, bipartition })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn bipartition(&self) -> Option<&Bipartition> {
        self.bipartition.as_ref()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_some()
    }

    pub fn total_weight(&self) -> u128 {
        self.edges.iter().map(|e| e.weight.wide()).sum()
    }

    pub fn max_weight(&self) -> Option<W> {
        self.edges.iter().map(|e| e.weight).max()
    }
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching<W> {
    edges: Vec<Edge<W>>,
}

impl<W: Weight> Matching<W> {
    pub fn new(edges: Vec<Edge<W>>) -> Self {
        Matching { edges }
    }

    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    /// Matching formed by the given edge indices of `g`.
    pub fn from_indices(g: &Graph<W>, indices: &[usize]) -> Self {
        Matching {
            edges: indices.iter().map(|&i| g.edges()[i]).collect(),
        }
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self) -> u128 {
        self.edges.iter().map(|e| e.weight.wide()).sum()
    }
}

/// Vertex set, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexCover {
    members: Vec<VertexId>,
}

impl VertexCover {
    pub fn new(mut members: Vec<VertexId>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexCover { members }
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            if v < n {
                mask[v] = true;
            }
        }
        mask
    }
}

/// True iff the edges of `m` are pairwise vertex-disjoint and each one is an
/// edge of `g` (same endpoints and weight, counted with multiplicity).
pub fn validate_matching<W: Weight>(g: &Graph<W>, m: &Matching<W>) -> bool {
    let mut used = vec![false; g.n()];
    for e in m.edges() {
        if e.u >= g.n() || e.v >= g.n() || e.u == e.v {
            return false;
        }
        if used[e.u] || used[e.v] {
            return false;
        }
        used[e.u] = true;
        used[e.v] = true;
    }
    let mut available: HashMap<(VertexId, VertexId, W), usize> = HashMap::new();
    for e in g.edges() {
        let (a, b) = e.key();
        *available.entry((a, b, e.weight)).or_default() += 1;
    }
    m.edges().iter().all(|e| {
        let (a, b) = e.key();
        match available.get_mut(&(a, b, e.weight)) {
            Some(c) if *c > 0 => {
                *c -= 1;
                true
            }
            _ => false,
        }
    })
}

pub fn is_vertex_cover<W: Weight>(g: &Graph<W>, cover: &VertexCover) -> bool {
    if cover.members().iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mask = cover.to_mask(g.n());
    g.edges().iter().all(|e| mask[e.u] || mask[e.v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph<u64> {
        Graph::new(3, vec![Edge::unit(0, 1), Edge::unit(1, 2), Edge::unit(0, 2)]).unwrap()
    }

    #[test]
    fn empty_matching_is_valid() {
        let g: Graph<u64> = Graph::new(0, vec![]).unwrap();
        assert!(validate_matching(&g, &Matching::empty()));
    }

    #[test]
    fn shared_endpoint_is_invalid() {
        let g = triangle();
        let m = Matching::new(vec![Edge::unit(0, 1), Edge::unit(1, 2)]);
        assert!(!validate_matching(&g, &m));
    }

    #[test]
    fn single_path_edge_is_valid() {
        let g: Graph<u64> = Graph::new(3, vec![Edge::unit(0, 1), Edge::unit(1, 2)]).unwrap();
        assert!(validate_matching(&g, &Matching::new(vec![Edge::unit(1, 0)])));
    }

    #[test]
    fn foreign_edge_is_invalid() {
        let g: Graph<u64> = Graph::new(3, vec![Edge::unit(0, 1)]).unwrap();
        assert!(!validate_matching(&g, &Matching::new(vec![Edge::unit(1, 2)])));
        // same endpoints, different weight
        assert!(!validate_matching(&g, &Matching::new(vec![Edge::new(0, 1, 2)])));
    }

    #[test]
    fn vertex_cover_examples() {
        let g: Graph<u64> = Graph::new(2, vec![Edge::unit(0, 1)]).unwrap();
        assert!(is_vertex_cover(&g, &VertexCover::new(vec![0])));
        assert!(!is_vertex_cover(&g, &VertexCover::new(vec![])));

        let star: Graph<u64> = Graph::new(6, (1..6).map(|v| Edge::unit(0, v)).collect()).unwrap();
        assert!(is_vertex_cover(&star, &VertexCover::new(vec![0])));
        assert!(!is_vertex_cover(&star, &VertexCover::new(vec![1, 2, 3, 4])));
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(Graph::<u64>::new(2, vec![Edge::unit(1, 1)]).is_err());
        assert!(Graph::<u64>::new(2, vec![Edge::unit(0, 2)]).is_err());
        assert!(Graph::<u64>::new(2, vec![Edge::new(0, 1, 0)]).is_err());
        let b = Bipartition::split(4, 2);
        assert!(Graph::<u64>::bipartite(4, b.clone(), vec![Edge::unit(0, 1)]).is_err());
        assert!(Graph::<u64>::bipartite(4, b, vec![Edge::unit(0, 3)]).is_ok());
    }

    #[test]
    fn parallel_edges_are_kept() {
        let g: Graph<u32> = Graph::new(2, vec![Edge::unit(0, 1), Edge::unit(1, 0)]).unwrap();
        assert_eq!(g.m(), 2);
        let m = Matching::new(vec![Edge::unit(0, 1), Edge::unit(0, 1)]);
        assert!(!validate_matching(&g, &m));
    }
}
