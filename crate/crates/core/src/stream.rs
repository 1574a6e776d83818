//! Replayable edge streams with pass accounting, and the edge-list format.
//!
//! Format (ASCII, whitespace separated, `#` starts a comment line):
//!
//! ```text
//! p <n> [<m>] [bip <left>]
//! <u> <v> [<w>]
//! ...
//! ```
//!
//! Vertex ids are 0-based, the weight defaults to 1. With `bip <left>` the
//! vertices `[0, left)` form the left side and every edge must cross.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Edge, Graph};
use crate::scalar::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub n: usize,
    pub m: Option<usize>,
    pub left: Option<usize>,
}

impl Header {
    fn parse(line_no: usize, tokens: &[&str]) -> Result<Header> {
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let num = |t: &str| -> Result<usize> {
            t.parse::<usize>()
                .map_err(|_| err(format!("expected a non-negative integer, found `{t}`")))
        };
        if tokens.first() != Some(&"p") {
            return Err(err("expected header `p <n> [<m>] [bip <left>]`".into()));
        }
        let n = num(tokens.get(1).ok_or_else(|| err("missing vertex count".into()))?)?;
        let mut rest = &tokens[2..];
        let mut m = None;
        if let Some(t) = rest.first() {
            if *t != "bip" {
                m = Some(num(t)?);
                rest = &rest[1..];
            }
        }
        let mut left = None;
        match rest {
            [] => {}
            ["bip", l] => {
                let l = num(l)?;
                if l > n {
                    return Err(err(format!("left side {l} exceeds n = {n}")));
                }
                left = Some(l);
            }
            _ => return Err(err(format!("unexpected header tokens: {}", rest.join(" ")))),
        }
        Ok(Header { n, m, left })
    }

    pub fn bipartition(&self) -> Option<Bipartition> {
        self.left.map(|l| Bipartition::split(self.n, l))
    }
}

fn is_blank(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

fn parse_edge<W: Weight>(line_no: usize, line: &str, header: &Header) -> Result<Edge<W>> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let err = |msg: String| Error::Parse { line: line_no, msg };
    if tokens.len() < 2 || tokens.len() > 3 {
        return Err(err(format!("expected `u v [w]`, found `{}`", line.trim())));
    }
    let vertex = |t: &str| -> Result<usize> {
        let v = t
            .parse::<usize>()
            .map_err(|_| err(format!("invalid vertex id `{t}`")))?;
        if v >= header.n {
            return Err(err(format!("vertex {v} out of range for n = {}", header.n)));
        }
        Ok(v)
    };
    let u = vertex(tokens[0])?;
    let v = vertex(tokens[1])?;
    let weight = match tokens.get(2) {
        Some(t) => t.parse::<W>().map_err(|_| err(format!("invalid weight `{t}`")))?,
        None => W::one(),
    };
    if weight.is_zero() {
        return Err(err("edge weight must be at least 1".into()));
    }
    if u == v {
        return Err(Error::SelfLoop {
            line: line_no,
            vertex: u,
        });
    }
    if let Some(left) = header.left {
        if (u < left) == (v < left) {
            return Err(Error::BipartitionViolation { line: line_no, u, v });
        }
    }
    Ok(Edge { u, v, weight })
}

/// Streaming reader over edge-list text. Yields `(line number, edge)`.
struct EdgeLines<R> {
    reader: R,
    header: Header,
    line_no: usize,
    buf: String,
}

impl<R: BufRead> EdgeLines<R> {
    fn open(mut reader: R) -> Result<Self> {
        let mut buf = String::new();
        let mut line_no = 0;
        loop {
            buf.clear();
            if reader.read_line(&mut buf)? == 0 {
                return Err(Error::Parse {
                    line: line_no + 1,
                    msg: "missing header".into(),
                });
            }
            line_no += 1;
            if !is_blank(&buf) {
                break;
            }
        }
        let tokens: Vec<&str> = buf.split_whitespace().collect();
        let header = Header::parse(line_no, &tokens)?;
        Ok(EdgeLines {
            reader,
            header,
            line_no,
            buf,
        })
    }

    fn next_edge<W: Weight>(&mut self) -> Result<Option<(usize, Edge<W>)>> {
        loop {
            self.buf.clear();
            if self.reader.read_line(&mut self.buf)? == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            if is_blank(&self.buf) {
                continue;
            }
            return parse_edge(self.line_no, &self.buf, &self.header).map(|e| Some((self.line_no, e)));
        }
    }
}

/// Parses a complete edge list into a graph.
pub fn read_graph<W: Weight, R: BufRead>(reader: R) -> Result<Graph<W>> {
    let mut lines = EdgeLines::open(reader)?;
    let mut edges = Vec::new();
    while let Some((_, e)) = lines.next_edge()? {
        edges.push(e);
    }
    let header = lines.header;
    check_count(&header, edges.len(), lines.line_no)?;
    graph_from_parts(header, edges)
}

pub fn parse_graph<W: Weight>(text: &str) -> Result<Graph<W>> {
    read_graph(text.as_bytes())
}

pub fn load_graph<W: Weight>(path: impl AsRef<Path>) -> Result<Graph<W>> {
    read_graph(BufReader::new(File::open(path)?))
}

fn check_count(header: &Header, found: usize, last_line: usize) -> Result<()> {
    match header.m {
        Some(m) if m != found => Err(Error::Parse {
            line: last_line,
            msg: format!("header declares {m} edges, found {found}"),
        }),
        _ => Ok(()),
    }
}

fn graph_from_parts<W: Weight>(header: Header, edges: Vec<Edge<W>>) -> Result<Graph<W>> {
    match header.bipartition() {
        Some(b) => Graph::bipartite(header.n, b, edges),
        None => Graph::new(header.n, edges),
    }
}

/// Serializes a graph. Weights are written only when some weight differs
/// from 1.
pub fn write_graph<W: Weight, T: Write>(g: &Graph<W>, mut out: T) -> Result<()> {
    let mut header = format!("p {} {}", g.n(), g.m());
    if let Some(b) = g.bipartition() {
        let left = b
            .prefix_split()
            .ok_or_else(|| Error::InvalidGraph("left side must be a vertex prefix to serialize".into()))?;
        write!(header, " bip {left}").unwrap();
    }
    writeln!(out, "{header}")?;
    let weighted = g.edges().iter().any(|e| !e.weight.is_one());
    for e in g.edges() {
        if weighted {
            writeln!(out, "{} {} {}", e.u, e.v, e.weight)?;
        } else {
            writeln!(out, "{} {}", e.u, e.v)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn save_graph<W: Weight>(g: &Graph<W>, path: impl AsRef<Path>) -> Result<()> {
    write_graph(g, std::io::BufWriter::new(File::create(path)?))
}

/// Edge visit order within a pass. Ordinals always refer to the as-given
/// position of an edge, whatever the visit order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    AsGiven,
    /// A fresh permutation for every pass, derived from `(seed, pass index)`.
    Shuffled {
        seed: u64,
    },
    /// One seeded permutation reused for every pass.
    AdversarialFixed {
        seed: u64,
    },
}

fn permutation(len: usize, seed: u64, stream: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(&mut rng);
    idx
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StreamStats {
    /// Completed traversals, including a counting pass when the header
    /// lacked `m`.
    pub passes_used: u64,
    pub edges_per_pass: usize,
    pub peak_stored_edges: usize,
    pub peak_stored_bits_estimate: u64,
}

#[derive(Clone, Debug)]
enum Source<W> {
    Memory(Arc<[Edge<W>]>),
    File(PathBuf),
}

/// Replayable edge sequence; the only access path to the input during a
/// streaming run.
#[derive(Clone, Debug)]
pub struct EdgeStream<W> {
    source: Source<W>,
    n: usize,
    m: usize,
    bipartition: Option<Bipartition>,
    order: OrderMode,
    stats: StreamStats,
}

impl<W: Weight> EdgeStream<W> {
    pub fn from_graph(g: &Graph<W>) -> Self {
        EdgeStream {
            source: Source::Memory(g.edges().into()),
            n: g.n(),
            m: g.m(),
            bipartition: g.bipartition().cloned(),
            order: OrderMode::AsGiven,
            stats: StreamStats {
                edges_per_pass: g.m(),
                ..Default::default()
            },
        }
    }

    /// Opens a file-backed stream. The file is validated once up front;
    /// that scan is charged as a pass only when the header omits `m` and the
    /// scan is needed to count edges.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut lines = EdgeLines::open(BufReader::new(File::open(&path)?))?;
        let mut count = 0usize;
        while lines.next_edge::<W>()?.is_some() {
            count += 1;
        }
        let header = lines.header;
        check_count(&header, count, lines.line_no)?;
        let counting_passes = u64::from(header.m.is_none());
        Ok(EdgeStream {
            source: Source::File(path),
            n: header.n,
            m: count,
            bipartition: header.bipartition(),
            order: OrderMode::AsGiven,
            stats: StreamStats {
                passes_used: counting_passes,
                edges_per_pass: count,
                ..Default::default()
            },
        })
    }

    pub fn with_order(mut self, order: OrderMode) -> Self {
        self.order = order;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bipartition(&self) -> Option<&Bipartition> {
        self.bipartition.as_ref()
    }

    pub fn order(&self) -> OrderMode {
        self.order
    }

    pub fn passes(&self) -> u64 {
        self.stats.passes_used
    }

    pub fn stats(&self) -> StreamStats {
        self.stats
    }

    /// Records storage held by the consumer; keeps the running peak.
    pub fn record_storage(&mut self, edges: usize, bits: u64) {
        self.stats.peak_stored_edges = self.stats.peak_stored_edges.max(edges);
        self.stats.peak_stored_bits_estimate = self.stats.peak_stored_bits_estimate.max(bits);
    }

    /// One full traversal. `visit` receives the as-given ordinal and the
    /// edge, once per edge occurrence.
    pub fn for_each_pass<F>(&mut self, mut visit: F) -> Result<()>
    where
        F: FnMut(usize, &Edge<W>),
    {
        let pass = self.stats.passes_used;
        let perm = match self.order {
            OrderMode::AsGiven => None,
            OrderMode::Shuffled { seed } => Some(permutation(self.m, seed, pass)),
            OrderMode::AdversarialFixed { seed } => Some(permutation(self.m, seed, u64::MAX)),
        };
        match (&self.source, perm) {
            (Source::Memory(edges), None) => {
                for (i, e) in edges.iter().enumerate() {
                    visit(i, e);
                }
            }
            (Source::Memory(edges), Some(perm)) => {
                for i in perm {
                    visit(i, &edges[i]);
                }
            }
            (Source::File(path), perm) => {
                let mut lines = EdgeLines::open(BufReader::new(File::open(path)?))?;
                match perm {
                    None => {
                        let mut i = 0;
                        while let Some((_, e)) = lines.next_edge::<W>()? {
                            visit(i, &e);
                            i += 1;
                        }
                    }
                    Some(perm) => {
                        // reordering a file-backed pass buffers that pass
                        let mut buffered = Vec::with_capacity(self.m);
                        while let Some((_, e)) = lines.next_edge::<W>()? {
                            buffered.push(e);
                        }
                        for i in perm {
                            visit(i, &buffered[i]);
                        }
                    }
                }
            }
        }
        self.stats.passes_used += 1;
        Ok(())
    }
}

/// Opens the stream at `path`.
pub fn open_stream<W: Weight>(path: impl AsRef<Path>) -> Result<EdgeStream<W>> {
    EdgeStream::open(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};

    fn temp_file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn opens_bipartite_file() {
        let f = temp_file("# sample\np 4 3 bip 2\n0 2\n0 3\n1 3\n");
        let s: EdgeStream<u64> = open_stream(f.path()).unwrap();
        assert_eq!(s.n(), 4);
        assert_eq!(s.m(), 3);
        assert_eq!(s.passes(), 0);
        assert_eq!(s.bipartition().unwrap().left_count(), 2);
    }

    #[test]
    fn self_loop_is_rejected() {
        let f = temp_file("p 4 1\n1 1 5\n");
        match open_stream::<u64>(f.path()) {
            Err(Error::SelfLoop { line: 2, vertex: 1 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_edge_section() {
        let f = temp_file("p 5 0\n");
        let mut s: EdgeStream<u64> = open_stream(f.path()).unwrap();
        assert_eq!((s.n(), s.m()), (5, 0));
        let mut count = 0;
        s.for_each_pass(|_, _| count += 1).unwrap();
        assert_eq!(count, 0);
        assert_eq!(s.passes(), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_graph::<u64>("p 3 2\n0 1\n\n0 x\n") {
            Err(Error::Parse { line: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_graph::<u64>("p 4 1 bip 2\n0 1\n") {
            Err(Error::BipartitionViolation { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_graph::<u64>("p 3 2\n0 1\n").is_err());
        assert!(parse_graph::<u64>("p 3 1\n0 1 0\n").is_err());
        assert!(parse_graph::<u64>("p 3 1\n0 3\n").is_err());
        assert!(parse_graph::<u64>("0 1\n").is_err());
    }

    #[test]
    fn missing_edge_count_costs_a_pass() {
        let f = temp_file("p 4 bip 2\n0 2\n1 3\n");
        let mut s: EdgeStream<u64> = open_stream(f.path()).unwrap();
        assert_eq!(s.m(), 2);
        assert_eq!(s.passes(), 1);
        s.for_each_pass(|_, _| {}).unwrap();
        assert_eq!(s.stats().passes_used, 2);
    }

    #[test]
    fn passes_are_counted() {
        let g: Graph<u64> = Graph::new(4, vec![Edge::unit(0, 1), Edge::unit(1, 2), Edge::unit(2, 3)]).unwrap();
        let mut s = EdgeStream::from_graph(&g);
        let mut count = 0;
        s.for_each_pass(|_, _| count += 1).unwrap();
        assert_eq!((count, s.passes()), (3, 1));
        s.for_each_pass(|_, _| {}).unwrap();
        assert_eq!(s.passes(), 2);
    }

    fn visit_order(s: &mut EdgeStream<u64>) -> Vec<usize> {
        let mut order = Vec::new();
        s.for_each_pass(|i, _| order.push(i)).unwrap();
        order
    }

    #[test]
    fn shuffled_replay_is_deterministic() {
        let edges = (0..50).map(|i| Edge::unit(i, i + 50)).collect();
        let g: Graph<u64> = Graph::new(100, edges).unwrap();
        let mode = OrderMode::Shuffled { seed: 9 };
        let mut a = EdgeStream::from_graph(&g).with_order(mode);
        let mut b = EdgeStream::from_graph(&g).with_order(mode);
        let (a1, a2) = (visit_order(&mut a), visit_order(&mut a));
        let (b1, b2) = (visit_order(&mut b), visit_order(&mut b));
        assert_eq!(a1, b1);
        assert_eq!(a2, b2);
        assert_ne!(a1, a2);

        let mut fixed = EdgeStream::from_graph(&g).with_order(OrderMode::AdversarialFixed { seed: 9 });
        assert_eq!(visit_order(&mut fixed), visit_order(&mut fixed));
    }

    fn multiset_hash(s: &mut EdgeStream<u64>) -> u64 {
        let mut seen = Vec::new();
        s.for_each_pass(|_, e| seen.push(*e)).unwrap();
        seen.sort();
        let mut h = DefaultHasher::new();
        seen.hash(&mut h);
        h.finish()
    }

    #[test]
    fn multiset_is_pass_invariant_for_every_mode() {
        let g: Graph<u64> = crate::generate::generate(
            &crate::generate::GeneratorSpec::RandomGeneralWeighted {
                n: 30,
                avg_deg: 4.0,
                w_max: 9,
            },
            3,
        )
        .unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        save_graph(&g, f.path()).unwrap();
        for mode in [
            OrderMode::AsGiven,
            OrderMode::Shuffled { seed: 1 },
            OrderMode::AdversarialFixed { seed: 1 },
        ] {
            let mut mem = EdgeStream::from_graph(&g).with_order(mode);
            let mut file = open_stream::<u64>(f.path()).unwrap().with_order(mode);
            let h = multiset_hash(&mut mem);
            assert_eq!(h, multiset_hash(&mut mem));
            assert_eq!(h, multiset_hash(&mut file));
            assert_eq!(h, multiset_hash(&mut file));
        }
    }

    #[test]
    fn write_then_read_preserves_graph() {
        let b = Bipartition::split(4, 2);
        let g: Graph<u64> = Graph::bipartite(4, b, vec![Edge::new(0, 2, 3), Edge::new(1, 3, 1)]).unwrap();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p 4 2 bip 2\n"));
        assert_eq!(parse_graph::<u64>(&text).unwrap(), g);
    }
}
