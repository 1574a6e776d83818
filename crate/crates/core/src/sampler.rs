//! Implicit edge importances, the potential, and importance sampling.
//!
//! Nothing per-edge is stored between passes. The importance of an edge in
//! round `r` is `factor^c(e, r)`, where `c(e, r)` counts the earlier rounds
//! whose stored cover missed the edge; it is recomputed from the
//! [`CoverHistory`] every time the edge streams by.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cover::OddSetCover;
use crate::error::Result;
use crate::graph::{Edge, VertexCover, VertexId};
use crate::scalar::Weight;
use crate::stream::EdgeStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HistoryMode {
    Bipartite,
    General,
}

#[derive(Clone, Debug)]
enum Rounds<W> {
    /// `member[v]` bit `r` is set when `v` belonged to round `r`'s vertex
    /// cover. This is the per-round bit row `b(., r)` stored column-wise.
    Bipartite { member: Vec<Vec<u64>> },
    /// Distinct covers with the contiguous rounds `[start, start + len)`
    /// that produced them.
    General {
        covers: Vec<(OddSetCover<W>, usize, usize)>,
    },
}

/// Per-round dual solutions from which importances are reconstructed.
#[derive(Clone, Debug)]
pub struct CoverHistory<W> {
    n: usize,
    factor: u64,
    rounds: usize,
    store: Rounds<W>,
}

impl<W: Weight> CoverHistory<W> {
    /// `factor` is the importance multiplier applied per miss (2 in the
    /// basic scheme, `1 + eta` with oversampling).
    pub fn bipartite(n: usize, factor: u64) -> Self {
        CoverHistory {
            n,
            factor,
            rounds: 0,
            store: Rounds::Bipartite {
                member: vec![Vec::new(); n],
            },
        }
    }

    pub fn general(n: usize, factor: u64) -> Self {
        CoverHistory {
            n,
            factor,
            rounds: 0,
            store: Rounds::General { covers: Vec::new() },
        }
    }

    pub fn mode(&self) -> HistoryMode {
        match self.store {
            Rounds::Bipartite { .. } => HistoryMode::Bipartite,
            Rounds::General { .. } => HistoryMode::General,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factor(&self) -> u64 {
        self.factor
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Appends a round's vertex cover. Panics in general mode.
    pub fn push_vertex_cover(&mut self, cover: &VertexCover) {
        let Rounds::Bipartite { member } = &mut self.store else {
            panic!("vertex cover pushed onto a general-mode history");
        };
        let (word, bit) = (self.rounds / 64, self.rounds % 64);
        for row in member.iter_mut() {
            if row.len() <= word {
                row.push(0);
            }
        }
        for &v in cover.members() {
            member[v][word] |= 1 << bit;
        }
        self.rounds += 1;
    }

    /// Appends a round's odd-set cover. Panics in bipartite mode.
    pub fn push_odd_set_cover(&mut self, cover: OddSetCover<W>) {
        let r = self.rounds;
        let Rounds::General { covers } = &mut self.store else {
            panic!("odd-set cover pushed onto a bipartite-mode history");
        };
        match covers.last_mut() {
            Some((last, _, len)) if *last == cover => *len += 1,
            _ => covers.push((cover, r, 1)),
        }
        self.rounds += 1;
    }

    /// Membership of `v` in round `r`'s vertex cover.
    pub fn in_cover(&self, v: VertexId, r: usize) -> Option<bool> {
        match &self.store {
            Rounds::Bipartite { member } if r < self.rounds => Some(member[v][r / 64] >> (r % 64) & 1 == 1),
            _ => None,
        }
    }

    /// Round `r`'s odd-set cover.
    pub fn odd_set_cover(&self, r: usize) -> Option<&OddSetCover<W>> {
        match &self.store {
            Rounds::General { covers } => covers
                .iter()
                .find(|(_, start, len)| (*start..start + len).contains(&r))
                .map(|(c, _, _)| c),
            _ => None,
        }
    }

    /// Whether round `r`'s cover covers `e` (with `e` carrying the weight the
    /// cover was solved for).
    pub fn covered_in(&self, e: &Edge<W>, r: usize) -> Option<bool> {
        match self.mode() {
            HistoryMode::Bipartite => Some(self.in_cover(e.u, r)? || self.in_cover(e.v, r)?),
            HistoryMode::General => Some(self.odd_set_cover(r)?.covers(e)),
        }
    }

    /// `c(e, k)`: how many of the first `k` rounds missed `e`.
    pub fn exponent_prefix(&self, e: &Edge<W>, k: usize) -> u32 {
        let k = k.min(self.rounds);
        match &self.store {
            Rounds::Bipartite { member } => {
                let (a, b) = (&member[e.u], &member[e.v]);
                let full = k / 64;
                let mut covered: u32 = (0..full).map(|i| (a[i] | b[i]).count_ones()).sum();
                if !k.is_multiple_of(64) {
                    let mask = (1u64 << (k % 64)) - 1;
                    covered += ((a[full] | b[full]) & mask).count_ones();
                }
                k as u32 - covered
            }
            Rounds::General { covers } => covers
                .iter()
                .take_while(|(_, start, _)| *start < k)
                .filter(|(c, _, _)| !c.covers(e))
                .map(|(_, start, len)| ((start + len).min(k) - start) as u32)
                .sum(),
        }
    }

    /// `c(e, r)` over every stored round.
    pub fn exponent(&self, e: &Edge<W>) -> u32 {
        self.exponent_prefix(e, self.rounds)
    }

    /// Distinct covers held in general mode.
    pub fn distinct_covers(&self) -> usize {
        match &self.store {
            Rounds::Bipartite { .. } => self.rounds,
            Rounds::General { covers } => covers.len(),
        }
    }

    /// Rough size of the stored history in bits.
    pub fn stored_bits(&self) -> u64 {
        match &self.store {
            Rounds::Bipartite { .. } => (self.n * self.rounds) as u64,
            Rounds::General { covers } => covers
                .iter()
                .map(|(c, _, _)| {
                    let wbits = |w: &W| 128 - w.wide().leading_zeros() as u64;
                    let ybits = c.y().iter().map(wbits).max().unwrap_or(0);
                    let idbits = usize::BITS as u64 - self.n.leading_zeros() as u64;
                    let zbits: u64 = c.z().iter().map(wbits).sum();
                    let setbits: u64 = c.laminar().sets().iter().map(|s| s.len() as u64 * idbits).sum();
                    self.n as u64 * ybits + zbits + setbits
                })
                .sum(),
        }
    }
}

pub fn importance_exponent<W: Weight>(e: &Edge<W>, h: &CoverHistory<W>) -> u32 {
    h.exponent(e)
}

/// Drop-and-rescale applied to weights on the fly: edges lighter than
/// `threshold` are ignored, the rest map to `w / divisor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rescale {
    pub threshold: u128,
    pub divisor: u128,
}

impl Rescale {
    pub const IDENTITY: Rescale = Rescale {
        threshold: 1,
        divisor: 1,
    };

    pub fn apply<W: Weight>(&self, e: &Edge<W>) -> Option<Edge<W>> {
        let w = e.weight.wide();
        if w < self.threshold {
            return None;
        }
        let scaled = W::narrow(w / self.divisor).expect("rescaled weight fits");
        Some(Edge { weight: scaled, ..*e })
    }
}

impl Default for Rescale {
    fn default() -> Self {
        Rescale::IDENTITY
    }
}

/// Arbitrary-precision potential `Q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Potential(pub BigUint);

impl Potential {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn log2(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.0.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.0 >> shift).to_f64().unwrap();
        top.log2() + shift as f64
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// `self <= (1 + eps/2) * prev`.
    pub fn grew_within(&self, prev: &Potential, eps: f64) -> bool {
        if prev.is_zero() {
            return self.is_zero();
        }
        ratio_f64(&self.0, &prev.0) <= 1.0 + eps / 2.0
    }
}

impl std::fmt::Display for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `num / den` rounded to `f64` from a 64-bit truncated quotient.
pub(crate) fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let q = q.to_f64().unwrap();
    // split the scaling so large shifts do not overflow powi
    let half = shift / 2;
    q * 2f64.powi(-(half as i32)) * 2f64.powi(-((shift - half) as i32))
}

/// Result of a potential pass.
#[derive(Clone, Debug, Default)]
pub struct PotentialSummary {
    pub q: Potential,
    /// Retained mass (1 or `w'`) grouped by importance exponent.
    pub mass_by_exponent: Vec<u128>,
    /// Edges surviving the rescale.
    pub kept_edges: usize,
    /// `sum w'` over kept edges.
    pub kept_weight: u128,
    /// Importance-weighted mass of edges missed by the latest stored cover,
    /// measured at that round's importances.
    pub last_uncovered: Potential,
}

fn pow_table(factor: u64, max_exp: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(max_exp + 1);
    let mut cur = BigUint::from(1u32);
    for _ in 0..=max_exp {
        out.push(cur.clone());
        cur *= factor;
    }
    out
}

fn mass_term<W: Weight>(mode: HistoryMode, e: &Edge<W>) -> u128 {
    match mode {
        HistoryMode::Bipartite => 1,
        HistoryMode::General => e.weight.wide(),
    }
}

/// One pass computing `Q = sum mass_e * factor^c(e)` exactly, where the mass
/// is 1 in bipartite mode and the rescaled weight in general mode.
pub fn potential_pass<W: Weight>(
    s: &mut EdgeStream<W>,
    h: &CoverHistory<W>,
    rescale: Rescale,
) -> Result<PotentialSummary> {
    let mode = h.mode();
    let rounds = h.rounds();
    let mut by_exp = vec![0u128; rounds + 1];
    let mut missed_by_exp = vec![0u128; rounds + 1];
    let mut kept = 0usize;
    let mut kept_weight = 0u128;
    s.for_each_pass(|_, e| {
        let Some(e) = rescale.apply(e) else { return };
        let c = h.exponent(&e) as usize;
        let mass = mass_term(mode, &e);
        by_exp[c] += mass;
        kept += 1;
        kept_weight += e.weight.wide();
        if rounds > 0 && h.covered_in(&e, rounds - 1) == Some(false) {
            missed_by_exp[c - 1] += mass;
        }
    })?;
    let pows = pow_table(h.factor(), rounds);
    let total = |hist: &[u128]| -> BigUint {
        hist.iter()
            .zip(&pows)
            .filter(|(m, _)| **m != 0)
            .map(|(m, p)| p * BigUint::from(*m))
            .sum()
    };
    Ok(PotentialSummary {
        q: Potential(total(&by_exp)),
        last_uncovered: Potential(total(&missed_by_exp)),
        mass_by_exponent: by_exp,
        kept_edges: kept,
        kept_weight,
    })
}

/// An edge retained by a sample pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampledEdge<W> {
    pub ordinal: usize,
    /// As read from the stream.
    pub original: Edge<W>,
    /// After rescaling; what the per-round solver sees.
    pub effective: Edge<W>,
}

#[derive(Clone, Debug, Default)]
pub struct Sample<W> {
    /// Sorted by ordinal.
    pub edges: Vec<SampledEdge<W>>,
    /// `sum_e min(1, p_e)`.
    pub expected_size: f64,
}

/// Counter-based uniform draws keyed on `(seed, round, ordinal)`.
pub struct RetentionDraws {
    rng: ChaCha8Rng,
}

impl RetentionDraws {
    pub fn new(seed: u64, round: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(round);
        RetentionDraws { rng }
    }

    pub fn draw(&mut self, ordinal: usize) -> u64 {
        self.rng.set_word_pos(2 * ordinal as u128);
        self.rng.next_u64()
    }

    /// Bernoulli(p) for the given ordinal; no draw is consumed when `p` is
    /// 0 or at least 1.
    pub fn retain(&mut self, ordinal: usize, p: f64) -> bool {
        if p >= 1.0 {
            return true;
        }
        if p <= 0.0 {
            return false;
        }
        let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
        self.draw(ordinal) < threshold
    }
}

const FIXED_ONE: f64 = (1u64 << 52) as f64;

/// One pass retaining each edge independently with probability
/// `min(1, rate * mass_e * factor^c(e) / Q)`.
#[allow(clippy::too_many_arguments)]
pub fn sample_pass<W: Weight>(
    s: &mut EdgeStream<W>,
    h: &CoverHistory<W>,
    potential: &Potential,
    rate: f64,
    seed: u64,
    round: u64,
    rescale: Rescale,
) -> Result<Sample<W>> {
    let mode = h.mode();
    let pows = pow_table(h.factor(), h.rounds());
    // factor^c / Q per exponent
    let ratio: Vec<f64> = pows.iter().map(|p| ratio_f64(p, potential.value())).collect();
    let mut draws = RetentionDraws::new(seed, round);
    let mut edges = Vec::new();
    // fixed point so the total does not depend on visit order
    let mut expected: u128 = 0;
    s.for_each_pass(|ordinal, e| {
        let Some(eff) = rescale.apply(e) else { return };
        if potential.is_zero() {
            return;
        }
        let c = h.exponent(&eff) as usize;
        let p = (rate * mass_term(mode, &eff) as f64 * ratio[c]).min(1.0);
        expected += (p * FIXED_ONE) as u128;
        if draws.retain(ordinal, p) {
            edges.push(SampledEdge {
                ordinal,
                original: *e,
                effective: eff,
            });
        }
    })?;
    edges.sort_by_key(|se| se.ordinal);
    Ok(Sample {
        edges,
        expected_size: expected as f64 / FIXED_ONE,
    })
}
