//! Seeded random instance generators.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// `n_side + n_side` vertices, every cross pair present independently
    /// with probability `avg_deg / n_side`.
    RandomBipartite { n_side: usize, avg_deg: f64 },
    /// A hidden perfect matching plus `noise_deg` distinct extra right
    /// neighbours per left vertex. The maximum matching has size `n_side`.
    PlantedPerfectBipartite { n_side: usize, noise_deg: usize },
    /// `G(n, p)` with `p = avg_deg / (n - 1)` and weights uniform in
    /// `1..=w_max`.
    RandomGeneralWeighted { n: usize, avg_deg: f64, w_max: u64 },
}

impl GeneratorSpec {
    /// Maximum matching size guaranteed by construction, if any.
    pub fn planted_matching(&self) -> Option<usize> {
        match *self {
            GeneratorSpec::PlantedPerfectBipartite { n_side, .. } => Some(n_side),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        match *self {
            GeneratorSpec::RandomBipartite { n_side, avg_deg } => {
                if n_side == 0 {
                    return bad("n_side must be positive".into());
                }
                if !(0.0..=n_side as f64).contains(&avg_deg) {
                    return bad(format!("avg_deg {avg_deg} outside [0, {n_side}]"));
                }
            }
            GeneratorSpec::PlantedPerfectBipartite { n_side, noise_deg } => {
                if n_side == 0 {
                    return bad("n_side must be positive".into());
                }
                if noise_deg >= n_side {
                    return bad(format!("noise_deg {noise_deg} must be below n_side {n_side}"));
                }
            }
            GeneratorSpec::RandomGeneralWeighted { n, avg_deg, w_max } => {
                if n == 0 {
                    return bad("n must be positive".into());
                }
                if !(avg_deg >= 0.0 && avg_deg < n as f64) {
                    return bad(format!("avg_deg {avg_deg} outside [0, {n})"));
                }
                if w_max == 0 {
                    return bad("w_max must be at least 1".into());
                }
            }
        }
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Graph<u64>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *spec {
        GeneratorSpec::RandomBipartite { n_side, avg_deg } => {
            let p = avg_deg / n_side as f64;
            let mut edges = Vec::new();
            for l in 0..n_side {
                for r in 0..n_side {
                    if rng.gen_bool(p) {
                        edges.push(Edge::unit(l, n_side + r));
                    }
                }
            }
            Graph::bipartite(2 * n_side, Bipartition::split(2 * n_side, n_side), edges)
        }
        GeneratorSpec::PlantedPerfectBipartite { n_side, noise_deg } => {
            let mut plant: Vec<usize> = (0..n_side).collect();
            plant.shuffle(&mut rng);
            let mut edges = Vec::with_capacity(n_side * (noise_deg + 1));
            for (l, &r) in plant.iter().enumerate() {
                edges.push(Edge::unit(l, n_side + r));
                // noise neighbours drawn from the other n_side - 1 right vertices
                for k in index::sample(&mut rng, n_side - 1, noise_deg) {
                    let r2 = if k >= r { k + 1 } else { k };
                    edges.push(Edge::unit(l, n_side + r2));
                }
            }
            edges.shuffle(&mut rng);
            Graph::bipartite(2 * n_side, Bipartition::split(2 * n_side, n_side), edges)
        }
        GeneratorSpec::RandomGeneralWeighted { n, avg_deg, w_max } => {
            let mut edges = Vec::new();
            if n >= 2 {
                let p = avg_deg / (n - 1) as f64;
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen_bool(p) {
                            edges.push(Edge::new(u, v, rng.gen_range(1..=w_max)));
                        }
                    }
                }
            }
            Graph::new(n, edges)
        }
    }
}
