//! Exact in-memory solvers run on each round's sample, their certificate
//! checks, and brute-force oracles.

mod bipartite;
mod blossom;
mod brute;

pub use bipartite::{max_bipartite_matching, max_bipartite_matching_indices, min_vertex_cover_bipartite};
pub use blossom::{max_weight_matching_indices, max_weight_matching_with_duals};
pub use brute::{brute_force_matching, brute_force_vertex_cover, MAX_BRUTE_EDGES, MAX_BRUTE_VERTICES};

use crate::cover::OddSetCover;
use crate::error::{Error, Result};
use crate::graph::{is_vertex_cover, validate_matching, Graph, Matching, VertexCover};
use crate::scalar::Weight;

/// Maximum matching (as edge indices of the solved graph) with a vertex
/// cover of equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteSolution {
    pub matched: Vec<usize>,
    pub cover: VertexCover,
}

/// Maximum-weight matching (edge indices) with an optimal odd-set cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSolution<W> {
    pub matched: Vec<usize>,
    pub duals: OddSetCover<W>,
}

/// Solver for the per-round bipartite subproblem. An approximate solver can
/// stand in as long as it returns a valid matching and a valid cover.
pub trait BipartiteSolver<W: Weight> {
    fn solve(&self, g: &Graph<W>) -> Result<BipartiteSolution>;
}

/// Solver for the per-round weighted subproblem.
pub trait WeightedSolver<W: Weight> {
    fn solve(&self, g: &Graph<W>) -> Result<WeightedSolution<W>>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HopcroftKarp;

impl<W: Weight> BipartiteSolver<W> for HopcroftKarp {
    fn solve(&self, g: &Graph<W>) -> Result<BipartiteSolution> {
        let matched = max_bipartite_matching_indices(g)?;
        let cover = min_vertex_cover_bipartite(g, &Matching::from_indices(g, &matched))?;
        Ok(BipartiteSolution { matched, cover })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Blossom;

impl<W: Weight> WeightedSolver<W> for Blossom {
    fn solve(&self, g: &Graph<W>) -> Result<WeightedSolution<W>> {
        let (matched, duals) = max_weight_matching_indices(g)?;
        Ok(WeightedSolution { matched, duals })
    }
}

/// König certificate: valid matching, valid cover, equal sizes.
pub fn certify_konig<W: Weight>(g: &Graph<W>, sol: &BipartiteSolution) -> Result<()> {
    let m = Matching::from_indices(g, &sol.matched);
    if !validate_matching(g, &m) {
        return Err(Error::Certificate("bipartite solution is not a matching".into()));
    }
    if !is_vertex_cover(g, &sol.cover) {
        return Err(Error::Certificate("bipartite cover leaves an edge uncovered".into()));
    }
    if sol.cover.len() != m.len() {
        return Err(Error::Certificate(format!(
            "cover size {} differs from matching size {}",
            sol.cover.len(),
            m.len()
        )));
    }
    Ok(())
}

/// Odd-set cover certificate: valid matching, duals feasible on every edge,
/// and cover value equal to `scale * w(M)`. Laminarity and odd set sizes are
/// enforced when the cover is constructed.
pub fn certify_duals<W: Weight>(g: &Graph<W>, sol: &WeightedSolution<W>) -> Result<()> {
    let m = Matching::from_indices(g, &sol.matched);
    if !validate_matching(g, &m) {
        return Err(Error::Certificate("weighted solution is not a matching".into()));
    }
    let bad = sol.duals.violations(g);
    if bad > 0 {
        return Err(Error::Certificate(format!("duals leave {bad} edges uncovered")));
    }
    let value = sol.duals.value();
    let target = sol.duals.scale() as u128 * m.weight();
    if value != target {
        return Err(Error::Certificate(format!(
            "cover value {value} differs from scaled matching weight {target}"
        )));
    }
    Ok(())
}
