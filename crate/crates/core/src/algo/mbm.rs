//! Bipartite cardinality matching by repeated sampling and exact solving.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact::{certify_konig, BipartiteSolution, BipartiteSolver, HopcroftKarp};
use crate::graph::{Edge, Graph, Matching};
use crate::metrics::{PotentialRecord, RoundMetrics, RunMetrics};
use crate::sampler::{potential_pass, sample_pass, CoverHistory, Potential, Rescale};
use crate::scalar::Weight;
use crate::stream::EdgeStream;

use super::{check_epsilon, check_eta, close_previous_round, id_bits, order_name, round_count, RoundCover, RunOutcome};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MbmConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub rounds_override: Option<usize>,
    /// Oversampling factor; misses multiply importance by `1 + eta`.
    pub eta: u64,
    /// Keep every round's cover in the outcome.
    pub trace_covers: bool,
}

impl MbmConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        MbmConfig {
            epsilon,
            seed,
            rounds_override: None,
            eta: 1,
            trace_covers: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_eta(self.eta)?;
        if self.rounds_override == Some(0) {
            return Err(Error::Config("rounds override must be positive".into()));
        }
        Ok(())
    }
}

/// `ceil(4 log2(m) / (eps * max(1, log2(1 + eta))))`, at least 1.
pub fn mbm_rounds(m: usize, epsilon: f64, eta: u64) -> usize {
    round_count(m as f64, epsilon, eta)
}

pub fn run_mbm<W: Weight>(s: &mut EdgeStream<W>, cfg: &MbmConfig) -> Result<RunOutcome<W>> {
    run_mbm_with(s, cfg, &HopcroftKarp)
}

pub fn run_mbm_with<W: Weight, S: BipartiteSolver<W>>(
    s: &mut EdgeStream<W>,
    cfg: &MbmConfig,
    solver: &S,
) -> Result<RunOutcome<W>> {
    cfg.validate()?;
    let start = Instant::now();
    let sides = s.bipartition().cloned().ok_or(Error::NotBipartite)?;
    let (n, m) = (s.n(), s.m());
    let mut history = CoverHistory::bipartite(n, 1 + cfg.eta);
    let rounds = if m == 0 {
        0
    } else {
        cfg.rounds_override
            .unwrap_or_else(|| mbm_rounds(m, cfg.epsilon, cfg.eta))
    };
    let rate = cfg.eta as f64 * 2.0 * n as f64 / cfg.epsilon;

    let mut records: Vec<RoundMetrics> = Vec::with_capacity(rounds);
    let mut best: Option<(usize, Vec<Edge<W>>, RoundCover<W>)> = None;
    let mut round_covers = Vec::new();
    let mut prev_q: Option<Potential> = None;
    let mut prev: Option<(Vec<usize>, BipartiteSolution)> = None;
    let mut violations = 0;
    let mut warned = false;

    for r in 1..=rounds {
        let pot = potential_pass(s, &history, Rescale::IDENTITY)?;
        if let Some(pq) = &prev_q {
            if !close_previous_round(&mut records, pq, &pot, cfg.epsilon) {
                violations += 1;
            }
        }
        let sample = sample_pass(s, &history, &pot.q, rate, cfg.seed, r as u64, Rescale::IDENTITY)?;
        if !warned && sample.expected_size > m as f64 / 2.0 {
            log::warn!(
                "expected sample size {:.0} exceeds half the stream ({m} edges); rounds reduce to exact solving",
                sample.expected_size
            );
            warned = true;
        }
        let ordinals: Vec<usize> = sample.edges.iter().map(|se| se.ordinal).collect();
        let reused = matches!(&prev, Some((o, _)) if *o == ordinals);
        if !reused {
            let g = Graph::bipartite(n, sides.clone(), sample.edges.iter().map(|se| se.effective).collect())?;
            let sol = solver.solve(&g)?;
            certify_konig(&g, &sol)?;
            prev = Some((ordinals, sol));
        }
        let (_, sol) = prev.as_ref().expect("solution present");
        s.record_storage(
            sample.edges.len(),
            history.stored_bits() + sample.edges.len() as u64 * 2 * id_bits(n),
        );

        let size = sol.matched.len();
        if best.as_ref().is_none_or(|(_, b, _)| size > b.len()) {
            let edges = sol.matched.iter().map(|&i| sample.edges[i].original).collect();
            best = Some((r, edges, RoundCover::Vertex(sol.cover.clone())));
        }
        if cfg.trace_covers {
            round_covers.push(RoundCover::Vertex(sol.cover.clone()));
        }
        records.push(RoundMetrics {
            round: r,
            potential: PotentialRecord::from(&pot.q),
            sample_size: sample.edges.len(),
            expected_sample_size: sample.expected_size,
            solution_value: size as u128,
            cover_value: sol.cover.len() as u128,
            rescaled_value: None,
            growth_ok: None,
            uncovered_mass: None,
            reused,
        });
        history.push_vertex_cover(&sol.cover);
        prev_q = Some(pot.q);
    }

    let stats = s.stats();
    let (best_round, edges, best_cover) = match best {
        Some((r, e, c)) => (r, e, Some(c)),
        None => (0, Vec::new(), None),
    };
    let matching = Matching::new(edges);
    let metrics = RunMetrics {
        algorithm: "mbm".into(),
        epsilon: cfg.epsilon,
        internal_epsilon: cfg.epsilon,
        eta: cfg.eta,
        seed: cfg.seed,
        order: order_name(s.order()),
        n,
        m,
        rounds,
        passes_used: stats.passes_used,
        sampling_rate: rate,
        best_value: matching.len() as u128,
        best_round,
        peak_stored_edges: stats.peak_stored_edges,
        peak_stored_bits: stats.peak_stored_bits_estimate,
        growth_violations: violations,
        preprocess: None,
        per_round: records,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok(RunOutcome {
        matching,
        metrics,
        history,
        best_cover,
        round_covers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GeneratorSpec};
    use crate::graph::{validate_matching, Bipartition};

    #[test]
    fn single_edge() {
        let g: Graph<u64> = Graph::bipartite(2, Bipartition::split(2, 1), vec![Edge::unit(0, 1)]).unwrap();
        let mut s = EdgeStream::from_graph(&g);
        let out = run_mbm(&mut s, &MbmConfig::new(0.5, 3)).unwrap();
        assert_eq!(out.matching.len(), 1);
        assert_eq!(out.metrics.rounds, 1);
        assert_eq!(out.metrics.passes_used, 2);
        assert_eq!(out.metrics.per_round[0].sample_size, 1);
    }

    #[test]
    fn empty_stream() {
        let g: Graph<u64> = Graph::bipartite(4, Bipartition::split(4, 2), vec![]).unwrap();
        let mut s = EdgeStream::from_graph(&g);
        let out = run_mbm(&mut s, &MbmConfig::new(0.5, 3)).unwrap();
        assert!(out.matching.is_empty());
        assert_eq!((out.metrics.rounds, out.metrics.passes_used), (0, 0));
    }

    #[test]
    fn rejects_general_graph_and_bad_config() {
        let g: Graph<u64> = Graph::new(2, vec![Edge::unit(0, 1)]).unwrap();
        let mut s = EdgeStream::from_graph(&g);
        assert!(matches!(
            run_mbm(&mut s, &MbmConfig::new(0.5, 0)),
            Err(Error::NotBipartite)
        ));
        assert!(matches!(
            run_mbm(&mut s, &MbmConfig::new(1.5, 0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn sparse_sampling_still_finds_large_matching() {
        // rate 2n/eps = 400 against m = 2000 edges, so rounds really sample
        let spec = GeneratorSpec::PlantedPerfectBipartite {
            n_side: 100,
            noise_deg: 19,
        };
        let g = generate(&spec, 9).unwrap();
        let mut s = EdgeStream::from_graph(&g);
        let out = run_mbm(&mut s, &MbmConfig::new(0.5, 21)).unwrap();
        assert!(validate_matching(&g, &out.matching));
        assert!(out.matching.len() >= 50, "got {}", out.matching.len());
        assert_eq!(out.metrics.passes_used, 2 * out.metrics.rounds as u64);
        assert!(out.metrics.per_round.iter().any(|r| r.sample_size < g.m()));
        let best = out.metrics.per_round.iter().map(|r| r.solution_value).max().unwrap();
        assert_eq!(best, out.metrics.best_value);
    }
}
