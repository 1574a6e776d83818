#![allow(dead_code)]

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semistream_matching::algo::{RoundCover, RunOutcome};
use semistream_matching::graph::{Bipartition, Edge, Graph};
use semistream_matching::sampler::Rescale;

/// Random bipartite graph with `n_left + n_right <= max_n` vertices and at
/// most `max_m` distinct edges.
pub fn small_bipartite(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> Graph<u64> {
    let n = rng.gen_range(2..=max_n);
    let left = rng.gen_range(1..n);
    let p: f64 = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for u in 0..left {
        for v in left..n {
            if edges.len() < max_m && rng.gen_bool(p) {
                edges.push(Edge::unit(u, v));
            }
        }
    }
    Graph::bipartite(n, Bipartition::split(n, left), edges).unwrap()
}

/// Random general graph on `<= max_n` vertices with weights in
/// `1..=w_max` and at most `max_m` edges.
pub fn small_general(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, w_max: u64) -> Graph<u64> {
    let n = rng.gen_range(1..=max_n);
    let p: f64 = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if edges.len() < max_m && rng.gen_bool(p) {
                edges.push(Edge::new(u, v, rng.gen_range(1..=w_max)));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Weights `2^k` with `k` uniform in `0..=max_exp`, so a few heavy edges
/// dominate the total and light edges are genuinely subsampled.
pub fn heavy_tailed_general(n: usize, avg_deg: f64, max_exp: u32, seed: u64) -> Graph<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = avg_deg / (n - 1) as f64;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge::new(u, v, 1u64 << rng.gen_range(0..=max_exp)));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sum of `z` over sets holding both endpoints, by plain enumeration.
fn enumerated_coverage(c: &semistream_matching::cover::OddSetCover<u64>, e: &Edge<u64>) -> u128 {
    let sets: u128 = c
        .laminar()
        .sets()
        .iter()
        .zip(c.z())
        .filter(|(s, _)| s.contains(&e.u) && s.contains(&e.v))
        .map(|(_, z)| *z as u128)
        .sum();
    c.y()[e.u] as u128 + c.y()[e.v] as u128 + sets
}

fn shadow_covers(cover: &RoundCover<u64>, e: &Edge<u64>) -> bool {
    match cover {
        RoundCover::Vertex(vc) => vc.contains(e.u) || vc.contains(e.v),
        RoundCover::OddSet(c) => enumerated_coverage(c, e) >= c.scale() as u128 * e.weight as u128,
    }
}

/// Replays a traced run with an explicit per-edge importance table and checks
/// that every round's potential and every per-edge mass agree exactly with
/// what the stored history reconstructs. Returns the number of rounds in
/// which at least one edge was missed, or a description of the first
/// disagreement.
pub fn shadow_check(g: &Graph<u64>, out: &RunOutcome<u64>) -> Result<usize, String> {
    let metrics = &out.metrics;
    let weighted = metrics.algorithm == "mwm";
    let rescale = match &metrics.preprocess {
        Some(p) => Rescale {
            threshold: p.threshold,
            divisor: p.scale,
        },
        None => Rescale::IDENTITY,
    };
    let kept: Vec<Edge<u64>> = g.edges().iter().filter_map(|e| rescale.apply(e)).collect();
    let factor = BigUint::from(1 + metrics.eta);
    let mut importance: Vec<BigUint> = vec![BigUint::from(1u32); kept.len()];
    let mut prev_exp = vec![0u32; kept.len()];
    if out.round_covers.len() != metrics.rounds || out.history.rounds() != metrics.rounds {
        return Err("trace does not cover every round".into());
    }
    let mut rounds_with_misses = 0;
    for r in 1..=metrics.rounds {
        let mut q = BigUint::from(0u32);
        for (i, e) in kept.iter().enumerate() {
            let mass = if weighted {
                &importance[i] * e.weight
            } else {
                importance[i].clone()
            };
            let exp = out.history.exponent_prefix(e, r - 1);
            if exp < prev_exp[i] || exp > prev_exp[i] + 1 {
                return Err(format!(
                    "round {r}: exponent of edge {i} jumped {} -> {exp}",
                    prev_exp[i]
                ));
            }
            prev_exp[i] = exp;
            let implicit = factor.pow(exp) * if weighted { e.weight } else { 1 };
            if implicit != mass {
                return Err(format!(
                    "round {r}: edge {i} mass {implicit} from history, {mass} explicit"
                ));
            }
            q += mass;
        }
        let reported = &metrics.per_round[r - 1].potential.q_decimal;
        if q.to_string() != *reported {
            return Err(format!("round {r}: Q {q} explicit, {reported} reported"));
        }
        let cover = &out.round_covers[r - 1];
        let mut missed = false;
        for (i, e) in kept.iter().enumerate() {
            if !shadow_covers(cover, e) {
                importance[i] *= &factor;
                missed = true;
            }
        }
        rounds_with_misses += usize::from(missed);
    }
    Ok(rounds_with_misses)
}
