//! Exact graph parameters: independence number, smallest maximal independent
//! set, degree census.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest graph for which `alpha` and `mu` are computed exactly.
pub const EXACT_LIMIT: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphParams {
    pub n: usize,
    pub alpha: usize,
    pub mu: usize,
    pub max_degree: usize,
    pub split_count: usize,
    pub edge_count: usize,
}

pub fn params(g: &Graph) -> Result<GraphParams> {
    Ok(GraphParams {
        n: g.n(),
        alpha: independence_number(g)?,
        mu: min_maximal_independent(g)?,
        max_degree: g.max_degree(),
        split_count: g.split_vertices().len(),
        edge_count: g.edge_count(),
    })
}

fn check_limit(g: &Graph) -> Result<()> {
    if g.n() > EXACT_LIMIT {
        Err(Error::SearchLimit {
            n: g.n(),
            limit: EXACT_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// `alpha(G)`.
pub fn independence_number(g: &Graph) -> Result<usize> {
    check_limit(g)?;
    Ok(max_independent_set(g).len())
}

/// A maximum independent set (the search itself has no size limit; callers
/// that need a guaranteed-fast answer go through [`independence_number`]).
pub fn max_independent_set(g: &Graph) -> VertexSet {
    fn rec(g: &Graph, avail: VertexSet, cur: VertexSet, best: &mut VertexSet) {
        if cur.len() + avail.len() <= best.len() {
            return;
        }
        // Vertex of maximum degree inside `avail`; if it is isolated there,
        // every remaining vertex can be taken.
        let (v, deg) = avail
            .iter()
            .map(|v| (v, g.neighbors(v).intersection(avail).len()))
            .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
            .map_or((usize::MAX, 0), |x| x);
        if v == usize::MAX || deg == 0 {
            let full = cur.union(avail);
            if full.len() > best.len() {
                *best = full;
            }
            return;
        }
        if deg == 1 {
            // A vertex with one remaining neighbor lies in some maximum set.
            rec(g, avail.difference(g.closed_neighbors(v)), cur.with(v), best);
            return;
        }
        rec(g, avail.difference(g.closed_neighbors(v)), cur.with(v), best);
        rec(g, avail.without(v), cur, best);
    }
    let mut best = VertexSet::EMPTY;
    rec(g, g.vertices(), VertexSet::EMPTY, &mut best);
    best
}

/// `mu(G)`: the size of a smallest maximal independent set, equivalently the
/// smallest independent dominating set.
pub fn min_maximal_independent(g: &Graph) -> Result<usize> {
    check_limit(g)?;
    Ok(min_independent_dominating_set(g).len())
}

pub fn min_independent_dominating_set(g: &Graph) -> VertexSet {
    struct Search<'a> {
        g: &'a Graph,
        best: VertexSet,
        max_closed: usize,
    }
    impl Search<'_> {
        // `undominated`: vertices outside N[chosen]. `banned`: undominated
        // vertices ruled out by earlier sibling branches.
        fn rec(&mut self, chosen: VertexSet, undominated: VertexSet, banned: VertexSet) {
            if undominated.is_empty() {
                if chosen.len() < self.best.len() {
                    self.best = chosen;
                }
                return;
            }
            let lower = undominated.len().div_ceil(self.max_closed);
            if chosen.len() + lower >= self.best.len() {
                return;
            }
            // The undominated vertex with the fewest admissible dominators.
            let mut pick: Option<VertexSet> = None;
            for u in undominated.iter() {
                let cands = self.g.closed_neighbors(u).intersection(undominated).difference(banned);
                if cands.is_empty() {
                    return;
                }
                if pick.is_none_or(|p| cands.len() < p.len()) {
                    pick = Some(cands);
                }
            }
            let mut banned = banned;
            for y in pick.unwrap_or_default().iter() {
                self.rec(
                    chosen.with(y),
                    undominated.difference(self.g.closed_neighbors(y)),
                    banned.difference(self.g.closed_neighbors(y)),
                );
                banned.insert(y);
            }
        }
    }
    let mut s = Search {
        g,
        best: g.vertices(),
        max_closed: g.max_degree() + 1,
    };
    // A greedy maximal independent set seeds the incumbent.
    let mut greedy = VertexSet::EMPTY;
    let mut free = g.vertices();
    while let Some(v) = free
        .iter()
        .max_by_key(|&v| (g.neighbors(v).intersection(free).len(), std::cmp::Reverse(v)))
    {
        greedy.insert(v);
        free = free.difference(g.closed_neighbors(v));
    }
    s.best = greedy;
    s.rec(VertexSet::EMPTY, g.vertices(), VertexSet::EMPTY);
    s.best
}
