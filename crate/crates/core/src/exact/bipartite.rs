//! Hopcroft-Karp maximum bipartite matching and the König vertex cover.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph, Matching, VertexCover, VertexId};
use crate::scalar::Weight;

const UNREACHED: usize = usize::MAX;

/// Per-vertex matched edge index of a maximum matching. Adjacency is
/// scanned by ascending neighbour index, then ascending edge index.
pub(crate) fn hopcroft_karp<W: Weight>(g: &Graph<W>) -> Result<Vec<Option<usize>>> {
    let sides = g.bipartition().ok_or(Error::NotBipartite)?;
    let n = g.n();
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        let (l, r) = if sides.is_left(e.u) { (e.u, e.v) } else { (e.v, e.u) };
        adj[l].push((r, i));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let left: Vec<VertexId> = (0..n).filter(|&v| sides.is_left(v)).collect();

    // mate[v] = matched edge index, for both sides
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let other = |e: usize, x: VertexId| {
        let e = &g.edges()[e];
        if e.u == x {
            e.v
        } else {
            e.u
        }
    };

    let mut dist = vec![UNREACHED; n];
    let mut cursor = vec![0usize; n];
    let mut queue = VecDeque::new();
    loop {
        // BFS layering from free left vertices
        queue.clear();
        for &l in &left {
            if mate[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = UNREACHED;
            }
        }
        let mut free_layer = UNREACHED;
        while let Some(l) = queue.pop_front() {
            if dist[l] >= free_layer {
                continue;
            }
            for &(r, _) in &adj[l] {
                match mate[r] {
                    None => free_layer = free_layer.min(dist[l] + 1),
                    Some(e) => {
                        let l2 = other(e, r);
                        if dist[l2] == UNREACHED {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if free_layer == UNREACHED {
            break;
        }

        // layered DFS, iterative; stack holds (left vertex, edge taken to reach next)
        cursor.iter_mut().for_each(|c| *c = 0);
        for &root in &left {
            if mate[root].is_some() {
                continue;
            }
            let mut stack: Vec<VertexId> = vec![root];
            let mut taken: Vec<usize> = Vec::new();
            while let Some(&l) = stack.last() {
                if cursor[l] == adj[l].len() {
                    dist[l] = UNREACHED;
                    stack.pop();
                    taken.pop();
                    continue;
                }
                let (r, e) = adj[l][cursor[l]];
                cursor[l] += 1;
                match mate[r] {
                    None if dist[l] + 1 == free_layer => {
                        taken.push(e);
                        // flip the path
                        for (&x, &ex) in stack.iter().zip(&taken) {
                            let y = other(ex, x);
                            mate[x] = Some(ex);
                            mate[y] = Some(ex);
                        }
                        break;
                    }
                    Some(em) => {
                        let l2 = other(em, r);
                        if dist[l2] != UNREACHED && dist[l2] == dist[l] + 1 {
                            taken.push(e);
                            stack.push(l2);
                        }
                    }
                    None => {}
                }
            }
        }
    }
    Ok(mate)
}

fn matched_edges(mate: &[Option<usize>], sides: &Bipartition) -> Vec<usize> {
    let mut out: Vec<usize> = mate
        .iter()
        .enumerate()
        .filter(|(v, _)| sides.is_left(*v))
        .filter_map(|(_, e)| *e)
        .collect();
    out.sort_unstable();
    out
}

/// Edge indices of a maximum-cardinality matching of a bipartite graph.
pub fn max_bipartite_matching_indices<W: Weight>(g: &Graph<W>) -> Result<Vec<usize>> {
    let mate = hopcroft_karp(g)?;
    Ok(matched_edges(&mate, g.bipartition().expect("checked by hopcroft_karp")))
}

pub fn max_bipartite_matching<W: Weight>(g: &Graph<W>) -> Result<Matching<W>> {
    let idx = max_bipartite_matching_indices(g)?;
    Ok(Matching::from_indices(g, &idx))
}

/// König cover from a maximum matching: with `Z` the vertices reachable from
/// free left vertices by alternating paths, returns `(L \ Z) ∪ (R ∩ Z)`.
///
/// Fails if `m` is not a matching of `g` or if an augmenting path exists.
pub fn min_vertex_cover_bipartite<W: Weight>(g: &Graph<W>, m: &Matching<W>) -> Result<VertexCover> {
    let sides = g.bipartition().ok_or(Error::NotBipartite)?;
    if !crate::graph::validate_matching(g, m) {
        return Err(Error::Certificate("input is not a matching of the graph".into()));
    }
    let n = g.n();
    let mut partner: Vec<Option<VertexId>> = vec![None; n];
    for e in m.edges() {
        partner[e.u] = Some(e.v);
        partner[e.v] = Some(e.u);
    }
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; n];
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for v in 0..n {
        if sides.is_left(v) && partner[v].is_none() {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            if seen[r] || partner[l] == Some(r) {
                continue;
            }
            seen[r] = true;
            match partner[r] {
                None => {
                    return Err(Error::Certificate(format!(
                        "augmenting path ends at free right vertex {r}; matching is not maximum"
                    )))
                }
                Some(l2) => {
                    if !seen[l2] {
                        seen[l2] = true;
                        queue.push_back(l2);
                    }
                }
            }
        }
    }
    let members = (0..n)
        .filter(|&v| if sides.is_left(v) { !seen[v] } else { seen[v] })
        .collect();
    Ok(VertexCover::new(members))
}
