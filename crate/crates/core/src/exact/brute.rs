//! Exhaustive reference solvers for small instances.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Weight;

pub const MAX_BRUTE_EDGES: usize = 24;
pub const MAX_BRUTE_VERTICES: usize = 20;

/// Exact maximum matching weight (cardinality for unit weights) by
/// enumerating edge subsets, pruning subsets that reuse a vertex.
pub fn brute_force_matching<W: Weight>(g: &Graph<W>) -> Result<u128> {
    if g.m() > MAX_BRUTE_EDGES {
        return Err(Error::TooLarge(format!("{} edges, limit {MAX_BRUTE_EDGES}", g.m())));
    }
    fn go<W: Weight>(edges: &[crate::graph::Edge<W>], i: usize, used: &mut [bool]) -> u128 {
        if i == edges.len() {
            return 0;
        }
        let skip = go(edges, i + 1, used);
        let e = &edges[i];
        if used[e.u] || used[e.v] {
            return skip;
        }
        used[e.u] = true;
        used[e.v] = true;
        let take = e.weight.wide() + go(edges, i + 1, used);
        used[e.u] = false;
        used[e.v] = false;
        skip.max(take)
    }
    Ok(go(g.edges(), 0, &mut vec![false; g.n()]))
}

/// Exact minimum vertex cover size by enumerating vertex subsets.
pub fn brute_force_vertex_cover<W: Weight>(g: &Graph<W>) -> Result<usize> {
    let n = g.n();
    if n > MAX_BRUTE_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices, limit {MAX_BRUTE_VERTICES}")));
    }
    let masks: Vec<u32> = g.edges().iter().map(|e| (1 << e.u) | (1 << e.v)).collect();
    let best = (0u32..1 << n)
        .filter(|s| masks.iter().all(|m| s & m != 0))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(0);
    Ok(best)
}
