//! Path-joining surgeries on spiders and trees.
//!
//! Deleting the split vertices of a tree leaves a disjoint union of paths.
//! Joining those paths end to end adds edges, so every independent set of the
//! joined path is independent in the union, which turns path counts into lower
//! bounds for star sizes. The joined path is stored with its vertices
//! relabeled in path order.

use crate::error::{Error, Result};
use crate::generate::SpiderSpec;
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeMode {
    /// Join the legs of `S - w`.
    WithoutW,
    /// Join the legs of `S - N[w]`.
    WithW,
}

/// A disjoint union of paths and the single path obtained by joining them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinedPath {
    /// Path `0 - 1 - ... - (m-1)`.
    pub path: Graph,
    /// Same vertex labels, junction edges removed.
    pub pieces: Graph,
    /// `original[i]` is the vertex of the source graph at path position `i`.
    pub original: Vec<usize>,
    /// Junction `j` is the added edge between positions `junctions[j]` and
    /// `junctions[j] + 1`.
    pub junctions: Vec<usize>,
    /// Path position of the tracked leaf, when there is one.
    pub leaf: Option<usize>,
}

impl JoinedPath {
    fn from_pieces(pieces: Vec<Vec<usize>>, leaf: Option<usize>) -> Result<Self> {
        let original: Vec<usize> = pieces.iter().flatten().copied().collect();
        let m = original.len();
        if m == 0 {
            return Err(Error::VertexCount(0));
        }
        let mut junctions = Vec::with_capacity(pieces.len().saturating_sub(1));
        let mut piece_edges = Vec::new();
        let mut start = 0;
        for piece in &pieces {
            let end = start + piece.len();
            piece_edges.extend((start..end - 1).map(|i| (i, i + 1)));
            if end < m {
                junctions.push(end - 1);
            }
            start = end;
        }
        let path = Graph::new(m, (0..m - 1).map(|i| (i, i + 1)))?;
        let pieces = Graph::new(m, piece_edges)?;
        let leaf = leaf.map(|v| {
            original
                .iter()
                .position(|&x| x == v)
                .expect("tracked leaf is on the path")
        });
        Ok(JoinedPath {
            path,
            pieces,
            original,
            junctions,
            leaf,
        })
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    /// True when the tracked leaf sits at either end of the joined path.
    pub fn leaf_is_endpoint(&self) -> bool {
        self.leaf.is_some_and(|p| p == 0 || p + 1 == self.len())
    }

    /// Translate a set of path positions back to source-graph vertices.
    pub fn to_original(&self, set: VertexSet) -> VertexSet {
        set.iter().map(|i| self.original[i]).collect()
    }

    /// The two path positions joined by junction `j`.
    pub fn junction(&self, j: usize) -> Result<(usize, usize)> {
        let &p = self.junctions.get(j).ok_or(Error::Junction {
            index: j,
            count: self.junctions.len(),
        })?;
        Ok((p, p + 1))
    }
}

/// Leg `i` of the spider (spider order), each from its leaf inward, minus the
/// vertices removed by `mode`.
fn spider_pieces(spec: &SpiderSpec, mode: MergeMode) -> Result<Vec<Vec<usize>>> {
    let skip = match mode {
        MergeMode::WithoutW => 0,
        MergeMode::WithW => {
            if spec.legs().iter().any(|&l| l < 2) {
                return Err(Error::ShortLeg);
            }
            1
        }
    };
    Ok(spec
        .order()
        .iter()
        .map(|&leg| spec.leg_vertices(leg).into_iter().skip(skip).rev().collect())
        .collect())
}

/// Join the legs with the edges `u_i v_{i+1}` (or `u'_i v_{i+1}`), legs taken
/// in spider order. The tracked leaf is `v_k`, the leaf of the last leg.
pub fn merge_paths(spec: &SpiderSpec, mode: MergeMode) -> Result<JoinedPath> {
    let pieces = spider_pieces(spec, mode)?;
    let last = *spec.order().last().expect("spider has legs");
    JoinedPath::from_pieces(pieces, Some(spec.leaf(last)))
}

/// Join the same legs the other way round, with edges `v_i u_{i+1}`, so that
/// `v_k` ends the path.
pub fn merge_paths_leaf_end(spec: &SpiderSpec, mode: MergeMode) -> Result<JoinedPath> {
    let pieces = spider_pieces(spec, mode)?
        .into_iter()
        .map(|mut p| {
            p.reverse();
            p
        })
        .collect();
    let last = *spec.order().last().expect("spider has legs");
    JoinedPath::from_pieces(pieces, Some(spec.leaf(last)))
}

/// Join the paths of `T - W`, where `W` is the set of split vertices.
///
/// Pieces are ordered by their smallest vertex and each runs from its smaller
/// endpoint. If `leaf` is given, its piece goes first and starts at `leaf`, so
/// the leaf is an endpoint of the joined path.
pub fn split_merge(t: &Graph, leaf: Option<usize>) -> Result<JoinedPath> {
    if !t.is_tree() {
        return Err(Error::NotTree);
    }
    let w = t.split_vertices();
    if w.len() < 2 {
        return Err(Error::TooFewSplitVertices(w.len()));
    }
    if let Some(v) = leaf {
        t.check_vertex(v)?;
        if t.degree(v) > 1 {
            return Err(Error::Parse(format!("vertex {v} is not a leaf")));
        }
    }
    let rest = t.vertices().difference(w);
    let mut seen = VertexSet::EMPTY;
    let mut pieces = Vec::new();
    for v in rest.iter() {
        if seen.contains(v) {
            continue;
        }
        // Component of `v` in T - W, then walk it from one end.
        let mut comp = VertexSet::singleton(v);
        let mut frontier = VertexSet::singleton(v);
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for x in frontier.iter() {
                next = next.union(t.neighbors(x).intersection(rest));
            }
            frontier = next.difference(comp);
            comp = comp.union(frontier);
        }
        seen = seen.union(comp);
        let ends: Vec<usize> = comp
            .iter()
            .filter(|&x| t.neighbors(x).intersection(comp).len() <= 1)
            .collect();
        let start = match leaf {
            Some(l) if comp.contains(l) => l,
            _ => ends[0],
        };
        let mut piece = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(nx) = t.neighbors(cur).intersection(comp).iter().find(|&y| y != prev) {
            piece.push(nx);
            prev = cur;
            cur = nx;
        }
        pieces.push(piece);
    }
    if let Some(l) = leaf {
        let first = pieces.iter().position(|p| p[0] == l).expect("leaf starts its piece");
        let p = pieces.remove(first);
        pieces.insert(0, p);
    }
    JoinedPath::from_pieces(pieces, leaf)
}

/// The injection `A -> A'` across junction `j`: drop the member of `A`
/// nearest `u'` and the member of the remainder nearest `u''`, then add both
/// junction endpoints. Distances are along the joined path; ties go to the
/// member on the same side of the junction as the endpoint.
///
/// The result is independent in the pieces but contains the junction edge, so
/// it is not independent in the joined path.
pub fn splitstar_witness(joined: &JoinedPath, j: usize, a: VertexSet) -> Result<VertexSet> {
    if !joined.path.is_independent(a) || !a.is_subset(joined.path.vertices()) {
        return Err(Error::NotIndependent(a.to_string()));
    }
    if a.len() < 2 {
        return Err(Error::SetSize {
            r: a.len(),
            min: 2,
            max: joined.len(),
        });
    }
    let (u1, u2) = joined.junction(j)?;
    // (distance, side-rank) where side-rank 0 means the preferred side.
    let nearest = |set: VertexSet, target: usize, low_side: bool| {
        set.iter()
            .min_by_key(|&x| {
                let on_low = x <= u1;
                (x.abs_diff(target), on_low != low_side)
            })
            .expect("set is nonempty")
    };
    let a1 = nearest(a, u1, true);
    let a2 = nearest(a.without(a1), u2, false);
    Ok(a.without(a1).without(a2).with(u1).with(u2))
}
