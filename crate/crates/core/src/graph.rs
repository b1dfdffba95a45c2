//! Undirected simple graphs on vertex ids `0..n` and the vertex-set type the
//! rest of the crate builds on.
//!
//! Graphs are stored as sorted adjacency lists; vertex sets are fixed-width
//! bitsets, so equal sets have equal representations and can serve directly
//! as hash keys. Everything here iterates in ascending vertex order, which
//! keeps downstream algorithms deterministic.

use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

pub type Vertex = usize;

/// Errors produced while reading an edge-list description of a graph.
#[derive(Debug, Error)]
pub enum GraphParseError {
    #[error("line {line}: expected {expected}, got {got:?}")]
    Malformed {
        line: usize,
        expected: &'static str,
        got: String,
    },
    #[error("line {line}: vertex {vertex} out of range, n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("edge list ended after {got} of {expected} edges")]
    TooFewEdges { expected: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A subset of the vertices `0..n`, stored as a bitset.
///
/// Two sets over the same universe compare and hash by content, and `iter`
/// always yields ascending vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet::new(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = Vertex>>(n: usize, verts: I) -> Self {
        let mut s = VertexSet::new(n);
        for v in verts {
            s.insert(v);
        }
        s
    }

    /// Size of the universe this set lives in (not the cardinality).
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        debug_assert!(v < self.n);
        self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn insert(&mut self, v: Vertex) {
        assert!(v < self.n, "vertex {v} outside universe {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: Vertex) {
        assert!(v < self.n, "vertex {v} outside universe {}", self.n);
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn toggle(&mut self, v: Vertex) {
        assert!(v < self.n, "vertex {v} outside universe {}", self.n);
        self.words[v / 64] ^= 1 << (v % 64);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.subtract(other);
        s
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet::full(self.n);
        s.subtract(self);
        s
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<Vertex> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints panic, since programmatic callers control
    /// their input (text input goes through [`Graph::parse`] instead).
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Inserts the edge `{u, v}`. Idempotent for already-present edges.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        let n = self.n();
        assert!(u < n && v < n, "edge ({u}, {v}) outside universe {n}");
        assert_ne!(u, v, "self-loop at vertex {u}");
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
            self.m += 1;
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Reads the `n m` header line followed by one `u v` line per edge.
    /// Blank lines and `#` comment lines are skipped. Duplicate edges
    /// collapse; self-loops and out-of-range ids are reported with their
    /// line number.
    pub fn parse<R: BufRead>(reader: R) -> Result<Graph, GraphParseError> {
        let mut lines = reader.lines().enumerate();
        let (header_line, header) = loop {
            match lines.next() {
                None => {
                    return Err(GraphParseError::Malformed {
                        line: 1,
                        expected: "header line `n m`",
                        got: String::new(),
                    })
                }
                Some((i, line)) => {
                    let line = line?;
                    let t = line.trim();
                    if !t.is_empty() && !t.starts_with('#') {
                        break (i + 1, t.to_string());
                    }
                }
            }
        };
        let mut parts = header.split_whitespace();
        let n: usize = parse_field(&mut parts, header_line, "header line `n m`", &header)?;
        let m: usize = parse_field(&mut parts, header_line, "header line `n m`", &header)?;
        if parts.next().is_some() {
            return Err(GraphParseError::Malformed {
                line: header_line,
                expected: "header line `n m`",
                got: header,
            });
        }

        let mut g = Graph::new(n);
        let mut seen = 0usize;
        for (i, line) in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if seen == m {
                return Err(GraphParseError::Malformed {
                    line: i + 1,
                    expected: "end of input after the declared edge count",
                    got: t.to_string(),
                });
            }
            let mut parts = t.split_whitespace();
            let u: usize = parse_field(&mut parts, i + 1, "edge line `u v`", t)?;
            let v: usize = parse_field(&mut parts, i + 1, "edge line `u v`", t)?;
            if parts.next().is_some() {
                return Err(GraphParseError::Malformed {
                    line: i + 1,
                    expected: "edge line `u v`",
                    got: t.to_string(),
                });
            }
            for &x in &[u, v] {
                if x >= n {
                    return Err(GraphParseError::VertexOutOfRange {
                        line: i + 1,
                        vertex: x,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphParseError::SelfLoop {
                    line: i + 1,
                    vertex: u,
                });
            }
            g.add_edge(u, v);
            seen += 1;
        }
        if seen < m {
            return Err(GraphParseError::TooFewEdges {
                expected: m,
                got: seen,
            });
        }
        Ok(g)
    }

    /// Writes the canonical edge-list form: header, then edges sorted
    /// lexicographically with `u < v`. `parse(write(g)) == g`.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n(), self.m())?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    /// Connected components of the graph induced on `V \ removed`, each as a
    /// vertex set, ordered by their smallest member.
    pub fn components_avoiding(&self, removed: &VertexSet) -> Vec<VertexSet> {
        debug_assert_eq!(removed.universe(), self.n());
        let n = self.n();
        let mut seen = removed.clone();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::new(n);
            comp.insert(start);
            seen.insert(start);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if !seen.contains(v) {
                        seen.insert(v);
                        comp.insert(v);
                        queue.push_back(v);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Connected components of the subgraph induced on `within`.
    pub fn components_of(&self, within: &VertexSet) -> Vec<VertexSet> {
        self.components_avoiding(&within.complement())
    }

    /// Components of the whole graph.
    pub fn components(&self) -> Vec<VertexSet> {
        self.components_avoiding(&VertexSet::new(self.n()))
    }

    /// The open neighborhood of `s`: vertices outside `s` adjacent to some
    /// member of `s`.
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n());
        for v in s.iter() {
            for &u in self.neighbors(v) {
                if !s.contains(u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    /// Whether `s` induces a connected subgraph. The empty set counts as
    /// disconnected, a singleton as connected.
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        let Some(start) = s.first() else { return false };
        let mut seen = VertexSet::new(self.n());
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if s.contains(v) && !seen.contains(v) {
                    seen.insert(v);
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == s.len()
    }

    /// The subgraph induced on `keep`, relabeled to `0..keep.len()`, together
    /// with the map from new ids back to original ids.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<Vertex>) {
        let map: Vec<Vertex> = keep.to_vec();
        let mut back = vec![usize::MAX; self.n()];
        for (new, &old) in map.iter().enumerate() {
            back[old] = new;
        }
        let mut g = Graph::new(map.len());
        for (new, &old) in map.iter().enumerate() {
            for &nbr in self.neighbors(old) {
                if nbr > old && keep.contains(nbr) {
                    g.add_edge(new, back[nbr]);
                }
            }
        }
        (g, map)
    }

    /// Enumerates every vertex set of the given size that induces a connected
    /// subgraph, each exactly once, lazily.
    ///
    /// The walk grows each set from its smallest vertex and only ever extends
    /// with larger vertices through exclusive new neighbors, so no set is
    /// produced twice and consumption can stop early at no cost.
    pub fn connected_subgraphs(&self, size: usize) -> ConnectedSubgraphs<'_> {
        ConnectedSubgraphs::new(self, size)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges=[", self.n(), self.m())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

fn parse_field<'a, T: std::str::FromStr>(
    parts: &mut impl Iterator<Item = &'a str>,
    line: usize,
    expected: &'static str,
    full: &str,
) -> Result<T, GraphParseError> {
    parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| GraphParseError::Malformed {
            line,
            expected,
            got: full.to_string(),
        })
}

/// Lazy enumerator behind [`Graph::connected_subgraphs`].
pub struct ConnectedSubgraphs<'a> {
    g: &'a Graph,
    size: usize,
    root: Vertex,
    stack: Vec<Frame>,
}

struct Frame {
    sub: Vec<Vertex>,
    ext: Vec<Vertex>,
    cursor: usize,
}

impl<'a> ConnectedSubgraphs<'a> {
    fn new(g: &'a Graph, size: usize) -> Self {
        let mut it = ConnectedSubgraphs {
            g,
            size,
            root: 0,
            stack: Vec::new(),
        };
        if size > 0 {
            it.push_root();
        }
        it
    }

    fn push_root(&mut self) {
        if self.root < self.g.n() {
            let v = self.root;
            let ext: Vec<Vertex> = self.g.neighbors(v).iter().copied().filter(|&u| u > v).collect();
            self.stack.push(Frame {
                sub: vec![v],
                ext,
                cursor: 0,
            });
        }
    }

    fn in_sub_or_adjacent(&self, sub: &[Vertex], u: Vertex) -> bool {
        sub.iter().any(|&s| s == u || self.g.has_edge(s, u))
    }
}

impl Iterator for ConnectedSubgraphs<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        loop {
            let Some(frame) = self.stack.last_mut() else {
                // Current root exhausted; advance to the next one.
                self.root += 1;
                if self.root >= self.g.n() {
                    return None;
                }
                self.push_root();
                continue;
            };
            if self.size == 1 {
                // Singleton special case: each root is itself the set.
                let set = VertexSet::from_iter(self.g.n(), frame.sub.iter().copied());
                self.stack.pop();
                return Some(set);
            }
            if frame.cursor >= frame.ext.len() {
                self.stack.pop();
                continue;
            }
            let w = frame.ext[frame.cursor];
            frame.cursor += 1;
            let sub = frame.sub.clone();
            if sub.len() + 1 == self.size {
                let mut set = VertexSet::from_iter(self.g.n(), sub.iter().copied());
                set.insert(w);
                return Some(set);
            }
            // Children may extend with the untried part of the extension list
            // plus exclusive neighbors of w: larger than the root and new to
            // the subgraph's closed neighborhood.
            let mut child_ext: Vec<Vertex> = frame.ext[frame.cursor..].to_vec();
            let root = self.root;
            for &u in self.g.neighbors(w) {
                if u > root && u != w && !self.in_sub_or_adjacent(&sub, u) {
                    child_ext.push(u);
                }
            }
            let mut child_sub = sub;
            child_sub.push(w);
            self.stack.push(Frame {
                sub: child_sub,
                ext: child_ext,
                cursor: 0,
            });
        }
    }
}
