//! Round drivers: sample-and-solve with multiplicative importance updates.

mod mbm;
mod mwm;

pub use mbm::{mbm_rounds, run_mbm, run_mbm_with, MbmConfig};
pub use mwm::{mwm_rounds, preprocess_weights, run_mwm, run_mwm_with, scan_rescale, MwmConfig, PreprocessResult};

use crate::cover::OddSetCover;
use crate::error::{Error, Result};
use crate::graph::{Matching, VertexCover};
use crate::metrics::{RoundMetrics, RunMetrics};
use crate::sampler::{CoverHistory, Potential, PotentialSummary};
use crate::stream::OrderMode;

/// The dual solution a round produced on its sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundCover<W> {
    Vertex(VertexCover),
    OddSet(OddSetCover<W>),
}

#[derive(Clone, Debug)]
pub struct RunOutcome<W> {
    /// Best matching over all rounds, as edges of the input stream.
    pub matching: Matching<W>,
    pub metrics: RunMetrics,
    pub history: CoverHistory<W>,
    /// Cover of the best round's sample.
    pub best_cover: Option<RoundCover<W>>,
    /// Every round's cover, when tracing was requested.
    pub round_covers: Vec<RoundCover<W>>,
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Config(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

pub(crate) fn check_eta(eta: u64) -> Result<()> {
    if eta == 0 {
        return Err(Error::Config("eta must be an integer >= 1".into()));
    }
    Ok(())
}

/// `max(1, ceil(4 log2(x) / (eps * max(1, log2(1 + eta)))))`.
pub(crate) fn round_count(x: f64, eps: f64, eta: u64) -> usize {
    let speedup = ((1 + eta) as f64).log2().max(1.0);
    let r = (4.0 * x.log2() / (eps * speedup)).ceil();
    if r.is_finite() && r >= 1.0 {
        r as usize
    } else {
        1
    }
}

pub(crate) fn order_name(order: OrderMode) -> String {
    match order {
        OrderMode::AsGiven => "as-given".into(),
        OrderMode::Shuffled { seed } => format!("shuffled:{seed}"),
        OrderMode::AdversarialFixed { seed } => format!("adversarial-fixed:{seed}"),
    }
}

/// Fills in the previous round's growth check and uncovered mass once the
/// new potential is known. Returns false on a growth violation.
pub(crate) fn close_previous_round(
    records: &mut [RoundMetrics],
    prev: &Potential,
    pot: &PotentialSummary,
    eps: f64,
) -> bool {
    let Some(last) = records.last_mut() else { return true };
    let ok = pot.q.grew_within(prev, eps);
    last.growth_ok = Some(ok);
    last.uncovered_mass = Some(pot.last_uncovered.to_string());
    if !ok {
        log::warn!(
            "round {}: potential grew from 2^{:.3} to 2^{:.3}, above the 1 + eps/2 bound",
            last.round,
            prev.log2(),
            pot.q.log2()
        );
    }
    ok
}

pub(crate) fn id_bits(n: usize) -> u64 {
    (usize::BITS - n.leading_zeros()).max(1) as u64
}
