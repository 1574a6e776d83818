//! General weighted matching by repeated sampling and exact solving, with
//! weight preprocessing.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact::{certify_duals, Blossom, WeightedSolution, WeightedSolver};
use crate::graph::{Edge, Graph, Matching};
use crate::metrics::{PotentialRecord, PreprocessInfo, RoundMetrics, RunMetrics};
use crate::sampler::{potential_pass, sample_pass, CoverHistory, Potential, Rescale};
use crate::scalar::Weight;
use crate::stream::EdgeStream;

use super::{check_epsilon, check_eta, close_previous_round, id_bits, order_name, round_count, RoundCover, RunOutcome};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MwmConfig {
    /// Approximation target; the rounds run with `epsilon / 4`.
    pub epsilon: f64,
    pub seed: u64,
    pub eta: u64,
    pub rounds_override: Option<usize>,
    pub preprocess: bool,
    pub trace_covers: bool,
}

impl MwmConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        MwmConfig {
            epsilon,
            seed,
            eta: 1,
            rounds_override: None,
            preprocess: true,
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

    pub fn internal_epsilon(&self) -> f64 {
        self.epsilon / 4.0
    }
}

/// `ceil(4 log2(W) / (eps * max(1, log2(1 + eta))))`, at least 1.
pub fn mwm_rounds(total_weight: u128, epsilon: f64, eta: u64) -> usize {
    round_count(total_weight as f64, epsilon, eta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreprocessResult {
    pub w_max: u128,
    /// Smallest retained weight.
    pub threshold: u128,
    /// Divisor `t` applied to retained weights.
    pub scale: u128,
    pub kept_edges: usize,
    /// Sum of retained, rescaled weights.
    pub total_weight: u128,
}

impl PreprocessResult {
    pub fn rescale(&self) -> Rescale {
        Rescale {
            threshold: self.threshold,
            divisor: self.scale,
        }
    }
}

fn rule(n: usize, epsilon: f64, w_max: u128) -> Rescale {
    let cut = epsilon * w_max as f64 / n.max(1) as f64;
    Rescale {
        threshold: (cut.ceil() as u128).max(1),
        divisor: (cut.floor() as u128).max(1),
    }
}

/// One pass for the maximum weight; returns it with the drop-and-rescale
/// rule. Zero-edge streams give `w_max = 0` and the identity.
pub fn scan_rescale<W: Weight>(s: &mut EdgeStream<W>, epsilon: f64) -> Result<(u128, Rescale)> {
    let mut w_max = 0u128;
    s.for_each_pass(|_, e| w_max = w_max.max(e.weight.wide()))?;
    Ok((w_max, rule(s.n(), epsilon, w_max)))
}

/// Standalone preprocessing: the maximum-weight pass plus one more pass to
/// total the retained, rescaled weights.
pub fn preprocess_weights<W: Weight>(s: &mut EdgeStream<W>, epsilon: f64) -> Result<PreprocessResult> {
    let (w_max, rescale) = scan_rescale(s, epsilon)?;
    let (mut kept, mut total) = (0usize, 0u128);
    s.for_each_pass(|_, e| {
        if let Some(e) = rescale.apply(e) {
            kept += 1;
            total += e.weight.wide();
        }
    })?;
    Ok(PreprocessResult {
        w_max,
        threshold: rescale.threshold,
        scale: rescale.divisor,
        kept_edges: kept,
        total_weight: total,
    })
}

/// Round, original weight, matched edges, and cover of the best round.
type Best<W> = (usize, u128, Vec<Edge<W>>, RoundCover<W>);

pub fn run_mwm<W: Weight>(s: &mut EdgeStream<W>, cfg: &MwmConfig) -> Result<RunOutcome<W>> {
    run_mwm_with(s, cfg, &Blossom)
}

/// The total retained weight `W` needed for the round count comes out of the
/// first round's potential pass, so a run uses `1 + 2R` passes with
/// preprocessing and `2R` without.
pub fn run_mwm_with<W: Weight, S: WeightedSolver<W>>(
    s: &mut EdgeStream<W>,
    cfg: &MwmConfig,
    solver: &S,
) -> Result<RunOutcome<W>> {
    cfg.validate()?;
    let start = Instant::now();
    let eps = cfg.internal_epsilon();
    let n = s.n();
    let (w_max, rescale) = if cfg.preprocess {
        let (w_max, rescale) = scan_rescale(s, eps)?;
        (Some(w_max), rescale)
    } else {
        (None, Rescale::IDENTITY)
    };
    let mut history = CoverHistory::general(n, 1 + cfg.eta);

    let mut records: Vec<RoundMetrics> = Vec::new();
    let mut best: Option<Best<W>> = None;
    let mut round_covers = Vec::new();
    let mut prev_q: Option<Potential> = None;
    let mut prev: Option<(Vec<usize>, WeightedSolution<W>)> = None;
    let mut violations = 0;
    let mut warned = false;
    let mut rounds = 0usize;
    let mut rate = 0.0;
    let mut preprocess = None;

    let mut r = 1;
    loop {
        if r > 1 && r > rounds {
            break;
        }
        let pot = potential_pass(s, &history, rescale)?;
        if r == 1 {
            let total = pot.kept_weight;
            if let Some(w_max) = w_max {
                preprocess = Some(PreprocessInfo {
                    w_max,
                    threshold: rescale.threshold,
                    scale: rescale.divisor,
                    kept_edges: pot.kept_edges,
                    total_weight: total,
                });
            }
            if total == 0 {
                break;
            }
            rounds = cfg.rounds_override.unwrap_or_else(|| mwm_rounds(total, eps, cfg.eta));
            rate = cfg.eta as f64 * 8.0 * n as f64 * (n as f64 * total as f64).ln() / eps;
        }
        if let Some(pq) = &prev_q {
            if !close_previous_round(&mut records, pq, &pot, eps) {
                violations += 1;
            }
        }
        let sample = sample_pass(s, &history, &pot.q, rate, cfg.seed, r as u64, rescale)?;
        if !warned && sample.expected_size > s.m() as f64 / 2.0 {
            log::warn!(
                "expected sample size {:.0} exceeds half the stream ({} edges); rounds reduce to exact solving",
                sample.expected_size,
                s.m()
            );
            warned = true;
        }
        let ordinals: Vec<usize> = sample.edges.iter().map(|se| se.ordinal).collect();
        let reused = matches!(&prev, Some((o, _)) if *o == ordinals);
        if !reused {
            let g = Graph::new(n, sample.edges.iter().map(|se| se.effective).collect())?;
            let sol = solver.solve(&g)?;
            certify_duals(&g, &sol)?;
            prev = Some((ordinals, sol));
        }
        let (_, sol) = prev.as_ref().expect("solution present");
        let heaviest = sample
            .edges
            .iter()
            .map(|se| se.original.weight.wide())
            .max()
            .unwrap_or(0);
        let wbits = 128 - heaviest.leading_zeros() as u64;
        s.record_storage(
            sample.edges.len(),
            history.stored_bits() + sample.edges.len() as u64 * (2 * id_bits(n) + wbits),
        );

        let original: u128 = sol
            .matched
            .iter()
            .map(|&i| sample.edges[i].original.weight.wide())
            .sum();
        let rescaled: u128 = sol
            .matched
            .iter()
            .map(|&i| sample.edges[i].effective.weight.wide())
            .sum();
        if best.as_ref().is_none_or(|(_, v, _, _)| original > *v) {
            let edges = sol.matched.iter().map(|&i| sample.edges[i].original).collect();
            best = Some((r, original, edges, RoundCover::OddSet(sol.duals.clone())));
        }
        if cfg.trace_covers {
            round_covers.push(RoundCover::OddSet(sol.duals.clone()));
        }
        records.push(RoundMetrics {
            round: r,
            potential: PotentialRecord::from(&pot.q),
            sample_size: sample.edges.len(),
            expected_sample_size: sample.expected_size,
            solution_value: original,
            cover_value: sol.duals.value(),
            rescaled_value: Some(rescaled),
            growth_ok: None,
            uncovered_mass: None,
            reused,
        });
        history.push_odd_set_cover(sol.duals.clone());
        prev_q = Some(pot.q);
        r += 1;
    }

    let stats = s.stats();
    let (best_round, best_value, edges, best_cover) = match best {
        Some((r, v, e, c)) => (r, v, e, Some(c)),
        None => (0, 0, Vec::new(), None),
    };
    let metrics = RunMetrics {
        algorithm: "mwm".into(),
        epsilon: cfg.epsilon,
        internal_epsilon: eps,
        eta: cfg.eta,
        seed: cfg.seed,
        order: order_name(s.order()),
        n,
        m: s.m(),
        rounds,
        passes_used: stats.passes_used,
        sampling_rate: rate,
        best_value,
        best_round,
        peak_stored_edges: stats.peak_stored_edges,
        peak_stored_bits: stats.peak_stored_bits_estimate,
        growth_violations: violations,
        preprocess,
        per_round: records,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok(RunOutcome {
        matching: Matching::new(edges),
        metrics,
        history,
        best_cover,
        round_covers,
    })
}
