//! Simple undirected graphs on at most 128 vertices with bitset adjacency rows.
//!
//! Vertex sets are a single `u128`, so an independent set, a neighborhood and a
//! family member are all the same fixed-width type. Graphs are immutable once
//! built; every constructor checks symmetry and the absence of loops.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 128;

/// A set of vertex indices below 128.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u128) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u128 << v)
    }

    /// `{0, 1, ..., n-1}`.
    #[inline]
    pub fn prefix(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && (self.0 >> v) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u128 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u128 << v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | (1u128 << v))
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u128 << v))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest element.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element.
    #[inline]
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// Ascending iterator over the elements of a [`VertexSet`].
#[derive(Clone)]
pub struct VertexIter(u128);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for VertexIter {}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VertexSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("vertex set `{s}` must be written as {{a,b,...}}")))?;
        let mut set = VertexSet::EMPTY;
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex `{tok}` in `{s}`")))?;
            if v >= MAX_VERTICES {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: MAX_VERTICES,
                });
            }
            set.insert(v);
        }
        Ok(set)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&v) = items.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(items.into_iter().collect())
    }
}

/// Writes a family as one `{a,b,c}` line per member.
pub fn format_family(family: &[VertexSet]) -> String {
    let mut out = String::new();
    for s in family {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

/// Parses the line-per-member family format produced by [`format_family`].
pub fn parse_family(text: &str) -> Result<Vec<VertexSet>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(VertexSet::from_str)
        .collect()
}

/// Immutable simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u128>,
    label: Option<String>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .field("label", &self.label)
            .finish()
    }
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_order(n)?;
        let mut adj = vec![0u128; n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u] |= 1u128 << v;
            adj[v] |= 1u128 << u;
        }
        Ok(Graph { n, adj, label: None })
    }

    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(n, std::iter::empty())
    }

    /// Builds a graph from adjacency rows, validating symmetry and irreflexivity.
    pub fn from_rows(rows: Vec<VertexSet>) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let all = VertexSet::prefix(n);
        for (u, row) in rows.iter().enumerate() {
            if !row.is_subset(all) {
                let vertex = row.difference(all).first().unwrap_or(n);
                return Err(Error::VertexOutOfRange { vertex, n });
            }
            if row.contains(u) {
                return Err(Error::SelfLoop(u));
            }
            for v in row.iter() {
                if !rows[v].contains(u) {
                    return Err(Error::Parse(format!("adjacency is not symmetric at ({u},{v})")));
                }
            }
        }
        Ok(Graph {
            n,
            adj: rows.into_iter().map(VertexSet::bits).collect(),
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::prefix(self.n)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Closed neighborhood `N[v]`.
    #[inline]
    pub fn closed_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | (1u128 << v))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.adj[u] >> v) & 1 == 1
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !((2u128 << u).wrapping_sub(1)))
                .iter()
                .map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Vertices of degree exactly one.
    pub fn leaves(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Vertices of degree at least three.
    pub fn split_vertices(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.degree(v) >= 3).collect()
    }

    pub fn is_independent(&self, set: VertexSet) -> bool {
        set.iter().all(|v| !self.neighbors(v).intersects(set))
    }

    pub fn component_count(&self) -> usize {
        let mut seen = VertexSet::EMPTY;
        let mut count = 0;
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            count += 1;
            let mut frontier = VertexSet::singleton(s);
            seen.insert(s);
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.neighbors(v));
                }
                frontier = next.difference(seen);
                seen = seen.union(frontier);
            }
        }
        count
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n && self.component_count() == 1
    }

    /// Hop distance, or `None` when `u` and `v` lie in different components.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.bfs_distances(u)[v])
    }

    /// Distances from `source` to every vertex.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0) + 1;
            for y in self.neighbors(x).iter() {
                if dist[y].is_none() {
                    dist[y] = Some(d);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Subgraph induced on `keep`, relabelled to `0..keep.len()` in ascending
    /// order. Returns the graph and the new-to-old index map.
    pub fn induced(&self, keep: VertexSet) -> Result<(Graph, Vec<usize>)> {
        let keep = keep.intersection(self.vertices());
        let old: Vec<usize> = keep.iter().collect();
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| keep.contains(u) && keep.contains(v))
            .map(|(u, v)| (new_of[u], new_of[v]))
            .collect::<Vec<_>>();
        Ok((Graph::new(old.len(), edges)?, old))
    }

    /// Copy of this graph with extra edges.
    pub fn with_edges<I>(&self, extra: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(self.n, self.edges().chain(extra))?;
        g.label = self.label.clone();
        Ok(g)
    }

    /// Decodes one graph6 line (no `>>graph6<<` header, optional trailing newline).
    pub fn from_graph6(text: &[u8]) -> Result<Graph> {
        let text = text.strip_suffix(b"\n").unwrap_or(text);
        let text = text.strip_suffix(b"\r").unwrap_or(text);
        if text.is_empty() {
            return Err(Error::Graph6Empty);
        }
        for (offset, &byte) in text.iter().enumerate() {
            if !(63..=126).contains(&byte) {
                return Err(Error::Graph6Byte { offset, byte });
            }
        }
        let (n, header) = if text[0] != 126 {
            ((text[0] - 63) as usize, 1)
        } else if text.len() >= 4 && text[1] != 126 {
            let n = text[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            if n < 63 {
                return Err(Error::Graph6Header);
            }
            (n, 4)
        } else if text.len() >= 8 && text[1] == 126 {
            let n = text[2..8].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            if n < 258_048 {
                return Err(Error::Graph6Header);
            }
            (n, 8)
        } else {
            return Err(Error::Graph6Header);
        };
        if n > MAX_VERTICES {
            return Err(Error::Graph6TooLarge(n));
        }
        if n == 0 {
            return Err(Error::VertexCount(0));
        }
        let bits = n * (n - 1) / 2;
        let expected = bits.div_ceil(6);
        let data = &text[header..];
        if data.len() < expected {
            return Err(Error::Graph6Truncated {
                expected,
                found: data.len(),
            });
        }
        if data.len() > expected {
            return Err(Error::Graph6Trailing(header + expected));
        }
        let bit = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        if (bits..expected * 6).any(bit) {
            return Err(Error::Graph6Padding);
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::new(n, edges)
    }

    /// Canonical graph6 encoding (shortest size header).
    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }

    /// Parses a whitespace-separated edge list (`u v` per line, 0-indexed).
    ///
    /// Blank lines and `#` comments are skipped. A line holding a single index
    /// declares that vertex without edges, which is how trailing isolated
    /// vertices are expressed.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut n = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| Error::EdgeList { line: idx + 1, reason };
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| err(format!("`{t}` is not a vertex index")))
                })
                .collect::<Result<Vec<_>>>()?;
            match nums.as_slice() {
                [v] => n = n.max(v + 1),
                [u, v] => {
                    n = n.max(u + 1).max(v + 1);
                    edges.push((*u, *v));
                }
                _ => return Err(err(format!("expected `u v`, found {} fields", nums.len()))),
            }
            if n > MAX_VERTICES {
                return Err(Error::VertexCount(n));
            }
        }
        Graph::new(n, edges)
    }

    /// Edge list text accepted by [`Graph::from_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        if self.n > 0 && self.degree(self.n - 1) == 0 {
            out.push_str(&format!("{}\n", self.n - 1));
        }
        out
    }
}

fn check_order(n: usize) -> Result<()> {
    if (1..=MAX_VERTICES).contains(&n) {
        Ok(())
    } else {
        Err(Error::VertexCount(n))
    }
}

/// Reads a catalog: one graph6 graph per line, or a single edge list.
///
/// A file is treated as graph6 when every non-blank line consists only of
/// bytes in `63..=126`; edge lists always contain digits, which fall outside
/// that range.
pub fn parse_catalog(text: &str) -> Result<Vec<Graph>> {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let is_g6 = !lines.is_empty() && lines.iter().all(|l| l.bytes().all(|b| (63..=126).contains(&b)));
    if is_g6 {
        lines
            .iter()
            .map(|l| Graph::from_graph6(l.as_bytes()).map(|g| g.with_label(*l)))
            .collect()
    } else {
        Ok(vec![Graph::from_edge_list(text)?])
    }
}
