//! Laminar families and fractional odd-set covers.
//!
//! An odd-set cover is a pair `(y, z)` with `y` on vertices and `z` on odd
//! vertex sets such that every edge `(u, v)` satisfies
//! `y_u + y_v + sum_{S ∋ u, v} z_S >= scale * w(e)`. Covers produced by the
//! blossom solver use `scale = 2` so that all duals stay integral; covers
//! written by hand usually use `scale = 1`.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};
use crate::scalar::Weight;

/// True iff every pair of sets is disjoint or nested.
pub fn is_laminar(sets: &[Vec<VertexId>]) -> bool {
    let sorted: Vec<Vec<VertexId>> = sets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            let common = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
            if common != 0 && common != a.len() && common != b.len() {
                return false;
            }
        }
    }
    true
}

/// Laminar family over `[0, n)` with parent links and per-vertex innermost
/// set pointers for containment-chain walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarFamily {
    n: usize,
    sets: Vec<Vec<VertexId>>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    innermost: Vec<Option<usize>>,
}

impl LaminarFamily {
    pub fn empty(n: usize) -> Self {
        LaminarFamily {
            n,
            sets: Vec::new(),
            parent: Vec::new(),
            depth: Vec::new(),
            innermost: vec![None; n],
        }
    }

    /// Builds the family, rejecting empty, duplicate or crossing sets and
    /// families with more than `2n - 1` members.
    pub fn new(n: usize, sets: Vec<Vec<VertexId>>) -> Result<Self> {
        let sets: Vec<Vec<VertexId>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        if sets.len() > (2 * n).saturating_sub(1) {
            return Err(Error::InvalidGraph(format!(
                "laminar family of {} sets over {n} vertices",
                sets.len()
            )));
        }
        for s in &sets {
            if s.is_empty() {
                return Err(Error::InvalidGraph("empty set in laminar family".into()));
            }
            if let Some(&x) = s.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGraph(format!("vertex {x} out of range")));
            }
        }

        // Largest sets first; every set then sits directly below the
        // innermost already-placed set containing any one of its members.
        let mut order: Vec<usize> = (0..sets.len()).collect();
        order.sort_by(|&a, &b| sets[b].len().cmp(&sets[a].len()).then(a.cmp(&b)));

        let mut innermost: Vec<Option<usize>> = vec![None; n];
        let mut parent = vec![None; sets.len()];
        let mut depth = vec![0; sets.len()];
        for &s in &order {
            let members = &sets[s];
            let p = innermost[members[0]];
            if members.iter().any(|&x| innermost[x] != p) {
                return Err(Error::InvalidGraph(format!("set {s} crosses another set")));
            }
            if let Some(p) = p {
                if sets[p].len() == members.len() {
                    return Err(Error::InvalidGraph(format!("sets {p} and {s} are identical")));
                }
                depth[s] = depth[p] + 1;
            }
            parent[s] = p;
            for &x in members {
                innermost[x] = Some(s);
            }
        }
        Ok(LaminarFamily {
            n,
            sets,
            parent,
            depth,
            innermost,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<VertexId>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[VertexId] {
        &self.sets[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn innermost(&self, v: VertexId) -> Option<usize> {
        self.innermost[v]
    }

    /// Smallest set containing both `u` and `v`.
    pub fn smallest_common(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let mut a = self.innermost[u]?;
        let mut b = self.innermost[v]?;
        while self.depth[a] > self.depth[b] {
            a = self.parent[a]?;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b]?;
        }
        while a != b {
            a = self.parent[a]?;
            b = self.parent[b]?;
        }
        Some(a)
    }
}

/// Fractional odd-set cover with integral duals in units of `scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddSetCover<W> {
    y: Vec<W>,
    laminar: LaminarFamily,
    z: Vec<W>,
    scale: u32,
    /// `z` summed along each set's ancestor chain (itself included).
    z_chain: Vec<u128>,
}

impl<W: Weight> OddSetCover<W> {
    pub fn new(y: Vec<W>, laminar: LaminarFamily, z: Vec<W>, scale: u32) -> Result<Self> {
        if y.len() != laminar.n() {
            return Err(Error::InvalidGraph(format!(
                "y has {} entries for {} vertices",
                y.len(),
                laminar.n()
            )));
        }
        if z.len() != laminar.len() {
            return Err(Error::InvalidGraph(format!(
                "z has {} entries for {} sets",
                z.len(),
                laminar.len()
            )));
        }
        if scale == 0 {
            return Err(Error::InvalidGraph("cover scale must be positive".into()));
        }
        for (i, s) in laminar.sets().iter().enumerate() {
            if s.len() < 3 || s.len() % 2 == 0 {
                return Err(Error::InvalidGraph(format!(
                    "set {i} has size {}, expected odd and >= 3",
                    s.len()
                )));
            }
            if z[i].is_zero() {
                return Err(Error::InvalidGraph(format!("set {i} stored with z = 0")));
            }
        }
        // Parents always precede children in depth order; fill by depth.
        let mut order: Vec<usize> = (0..laminar.len()).collect();
        order.sort_by_key(|&i| laminar.depth[i]);
        let mut z_chain = vec![0u128; laminar.len()];
        for i in order {
            z_chain[i] = z[i].wide() + laminar.parent(i).map_or(0, |p| z_chain[p]);
        }
        Ok(OddSetCover {
            y,
            laminar,
            z,
            scale,
            z_chain,
        })
    }

    /// Vertex-only cover.
    pub fn from_vertex_duals(y: Vec<W>, scale: u32) -> Result<Self> {
        let n = y.len();
        Self::new(y, LaminarFamily::empty(n), Vec::new(), scale)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn y(&self) -> &[W] {
        &self.y
    }

    pub fn z(&self) -> &[W] {
        &self.z
    }

    pub fn laminar(&self) -> &LaminarFamily {
        &self.laminar
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// `sum_v y_v + sum_S (|S| - 1)/2 * z_S`, in units of `scale`.
    pub fn value(&self) -> u128 {
        let ys: u128 = self.y.iter().map(|y| y.wide()).sum();
        let zs: u128 = self
            .laminar
            .sets()
            .iter()
            .zip(&self.z)
            .map(|(s, z)| (s.len() as u128 - 1) / 2 * z.wide())
            .sum();
        ys + zs
    }

    /// Left-hand side of the covering inequality for `(u, v)`.
    pub fn coverage(&self, u: VertexId, v: VertexId) -> u128 {
        let sets = self.laminar.smallest_common(u, v).map_or(0, |s| self.z_chain[s]);
        self.y[u].wide() + self.y[v].wide() + sets
    }

    pub fn covers(&self, e: &Edge<W>) -> bool {
        self.coverage(e.u, e.v) >= self.scale as u128 * e.weight.wide()
    }

    /// Number of edges of `g` violating the covering inequality.
    pub fn violations(&self, g: &Graph<W>) -> usize {
        g.edges().iter().filter(|e| !self.covers(e)).count()
    }
}

pub fn cover_value<W: Weight>(c: &OddSetCover<W>) -> u128 {
    c.value()
}

pub fn is_covered<W: Weight>(e: &Edge<W>, c: &OddSetCover<W>) -> bool {
    c.covers(e)
}
