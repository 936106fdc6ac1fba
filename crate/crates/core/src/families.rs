//! Independent r-sets: ordered enumeration, counting, and star sizes
//! `s_r(v) = |I_v^r(G)|` by two independent routes.
//!
//! Enumeration yields sets in ascending order of their bitset integer. The
//! generator picks the largest element first (smallest candidates first) and
//! recurses below it, which is exactly that order.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::binom::{binom, serialize_count, BigCount};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Independent r-sets of `graph`, optionally restricted to those containing
/// `anchor` and avoiding `forbidden`.
#[derive(Debug, Clone, Copy)]
pub struct FamilyQuery<'g> {
    pub graph: &'g Graph,
    pub r: usize,
    pub anchor: Option<usize>,
    pub forbidden: VertexSet,
}

impl<'g> FamilyQuery<'g> {
    pub fn new(graph: &'g Graph, r: usize) -> Self {
        FamilyQuery {
            graph,
            r,
            anchor: None,
            forbidden: VertexSet::EMPTY,
        }
    }

    pub fn anchor(mut self, v: usize) -> Self {
        self.anchor = Some(v);
        self
    }

    pub fn forbid(mut self, set: VertexSet) -> Self {
        self.forbidden = self.forbidden.union(set);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.graph.n();
        if self.r > n {
            return Err(Error::SetSize {
                r: self.r,
                min: 0,
                max: n,
            });
        }
        if let Some(v) = self.anchor {
            self.graph.check_vertex(v)?;
            if self.forbidden.contains(v) {
                return Err(Error::Parse(format!("anchor {v} is also forbidden")));
            }
        }
        Ok(())
    }

    /// Starting state: vertices still available, vertices already fixed, and
    /// how many more are needed. `None` when no set can qualify.
    fn seed(&self) -> Option<(VertexSet, VertexSet, usize)> {
        let g = self.graph;
        let avail = g.vertices().difference(self.forbidden);
        match self.anchor {
            None => Some((avail, VertexSet::EMPTY, self.r)),
            Some(_) if self.r == 0 => None,
            Some(v) => Some((
                avail.difference(g.closed_neighbors(v)),
                VertexSet::singleton(v),
                self.r - 1,
            )),
        }
    }

    pub fn iter(&self) -> Result<IndependentSets<'g>> {
        self.validate()?;
        let mut stack = Vec::new();
        if let Some((avail, acc, need)) = self.seed() {
            stack.push(Frame {
                remaining: avail,
                avail,
                acc,
                need,
            });
        }
        Ok(IndependentSets {
            graph: self.graph,
            stack,
        })
    }

    pub fn collect(&self) -> Result<Vec<VertexSet>> {
        Ok(self.iter()?.collect())
    }

    /// Number of qualifying sets without materializing them. The top level is
    /// split by the largest element and summed in parallel.
    pub fn count(&self) -> Result<u128> {
        self.validate()?;
        let Some((avail, _, need)) = self.seed() else {
            return Ok(0);
        };
        let g = self.graph;
        if need <= 1 || avail.len() < 24 {
            return Ok(count_rec(g, avail, need));
        }
        let tops: Vec<usize> = avail.iter().collect();
        Ok(tops
            .par_iter()
            .map(|&m| {
                let below = VertexSet::prefix(m).intersection(avail);
                count_rec(g, below.difference(g.neighbors(m)), need - 1)
            })
            .sum())
    }
}

fn count_rec(g: &Graph, avail: VertexSet, need: usize) -> u128 {
    match need {
        0 => 1,
        1 => avail.len() as u128,
        _ if avail.len() < need => 0,
        _ => {
            let mut total = 0u128;
            for m in avail.iter() {
                let below = VertexSet::prefix(m).intersection(avail);
                if below.len() + 1 < need {
                    continue;
                }
                total += count_rec(g, below.difference(g.neighbors(m)), need - 1);
            }
            total
        }
    }
}

#[derive(Debug, Clone)]
struct Frame {
    avail: VertexSet,
    remaining: VertexSet,
    acc: VertexSet,
    need: usize,
}

/// Stream of independent sets in ascending bitset order; see [`FamilyQuery::iter`].
pub struct IndependentSets<'g> {
    graph: &'g Graph,
    stack: Vec<Frame>,
}

impl Iterator for IndependentSets<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        while let Some(top) = self.stack.last_mut() {
            if top.need == 0 {
                let acc = top.acc;
                self.stack.pop();
                return Some(acc);
            }
            let Some(m) = top.remaining.first() else {
                self.stack.pop();
                continue;
            };
            top.remaining.remove(m);
            let below = VertexSet::prefix(m).intersection(top.avail);
            if below.len() + 1 < top.need {
                continue;
            }
            let sub = below.difference(self.graph.neighbors(m));
            let frame = Frame {
                avail: sub,
                remaining: sub,
                acc: top.acc.with(m),
                need: top.need - 1,
            };
            self.stack.push(frame);
        }
        None
    }
}

/// `I^r(G)` in ascending order.
pub fn independent_rsets(g: &Graph, r: usize) -> Vec<VertexSet> {
    FamilyQuery::new(g, r).collect().unwrap_or_default()
}

/// `|I^r(P_m)| = C(m - r + 1, r)`.
pub fn count_path_rsets(m: usize, r: usize) -> BigCount {
    binom(m as i64 - r as i64 + 1, r as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Enumeration,
    TreeDp,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "serialize_count")]
    pub count: BigCount,
    pub method: CountMethod,
}

/// `s_r(v)`, by tree DP on forests and by enumeration otherwise.
pub fn star_size(g: &Graph, v: usize, r: usize) -> Result<CountResult> {
    if g.is_forest() {
        star_size_tree_dp(g, v, r)
    } else {
        star_size_enumeration(g, v, r)
    }
}

pub fn star_size_enumeration(g: &Graph, v: usize, r: usize) -> Result<CountResult> {
    g.check_vertex(v)?;
    let count = if r > g.n() {
        0
    } else {
        FamilyQuery::new(g, r).anchor(v).count()?
    };
    Ok(CountResult {
        count: BigUint::from(count),
        method: CountMethod::Enumeration,
    })
}

pub fn star_size_tree_dp(t: &Graph, v: usize, r: usize) -> Result<CountResult> {
    t.check_vertex(v)?;
    let profile = star_profile(t, v, r)?;
    Ok(CountResult {
        count: BigUint::from(profile[r]),
        method: CountMethod::TreeDp,
    })
}

/// `[s_0(v), s_1(v), ..., s_rmax(v)]` on a forest.
///
/// Roots `v`'s component at `v` and runs the include/exclude DP, each node
/// carrying two size-indexed count vectors truncated at `rmax`. Other
/// components contribute their full independence polynomial.
pub fn star_profile(t: &Graph, v: usize, rmax: usize) -> Result<Vec<u128>> {
    t.check_vertex(v)?;
    if !t.is_forest() {
        return Err(Error::NotForest);
    }
    let n = t.n();
    let len = rmax + 1;
    let mut visited = VertexSet::EMPTY;
    let mut total = vec![0u128; len];
    total[0] = 1;
    let roots = std::iter::once(v).chain((0..n).filter(|&x| x != v));
    for root in roots {
        if visited.contains(root) {
            continue;
        }
        let (inc, exc) = rooted_dp(t, root, len, &mut visited);
        let factor = if root == v {
            inc
        } else {
            inc.iter().zip(&exc).map(|(a, b)| a + b).collect()
        };
        total = convolve(&total, &factor, len);
    }
    Ok(total)
}

/// `s_r(x)` for every vertex of a forest, for all `r <= rmax`.
pub fn star_profiles(t: &Graph, rmax: usize) -> Result<Vec<Vec<u128>>> {
    (0..t.n()).map(|v| star_profile(t, v, rmax)).collect()
}

fn rooted_dp(t: &Graph, root: usize, len: usize, visited: &mut VertexSet) -> (Vec<u128>, Vec<u128>) {
    // Iterative DFS: parents listed before children, processed in reverse.
    let mut order = Vec::new();
    let mut parent = vec![usize::MAX; t.n()];
    let mut stack = vec![root];
    visited.insert(root);
    while let Some(x) = stack.pop() {
        order.push(x);
        for y in t.neighbors(x).iter() {
            if !visited.contains(y) {
                visited.insert(y);
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut inc: Vec<Vec<u128>> = vec![Vec::new(); t.n()];
    let mut exc: Vec<Vec<u128>> = vec![Vec::new(); t.n()];
    for &x in order.iter().rev() {
        let mut with_x = vec![0u128; len];
        if len > 1 {
            with_x[1] = 1;
        }
        let mut without_x = vec![0u128; len];
        without_x[0] = 1;
        for y in t.neighbors(x).iter().filter(|&y| parent[y] == x) {
            with_x = convolve(&with_x, &exc[y], len);
            let either: Vec<u128> = inc[y].iter().zip(&exc[y]).map(|(a, b)| a + b).collect();
            without_x = convolve(&without_x, &either, len);
        }
        inc[x] = with_x;
        exc[x] = without_x;
    }
    (std::mem::take(&mut inc[root]), std::mem::take(&mut exc[root]))
}

fn convolve(a: &[u128], b: &[u128], len: usize) -> Vec<u128> {
    let mut out = vec![0u128; len];
    for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
        for (j, &y) in b.iter().take(len - i).enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, path};

    fn brute_rsets(g: &Graph, r: usize) -> Vec<VertexSet> {
        (0u128..(1u128 << g.n()))
            .map(VertexSet::from_bits)
            .filter(|s| s.len() == r && g.is_independent(*s))
            .collect()
    }

    #[test]
    fn path_four_pairs() {
        let p4 = path(4).unwrap();
        let sets = independent_rsets(&p4, 2);
        let shown: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["{0,2}", "{0,3}", "{1,3}"]);
    }

    #[test]
    fn empty_set_is_the_only_zero_set() {
        let g = generate("cycle:5").unwrap();
        assert_eq!(independent_rsets(&g, 0), vec![VertexSet::EMPTY]);
        assert_eq!(FamilyQuery::new(&g, 0).count().unwrap(), 1);
        assert_eq!(FamilyQuery::new(&g, 0).anchor(1).count().unwrap(), 0);
    }

    #[test]
    fn anchored_in_k33() {
        let g = generate("kpartite:3,3").unwrap();
        let sets = FamilyQuery::new(&g, 2).anchor(4).collect().unwrap();
        let shown: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["{3,4}", "{4,5}"]);
    }

    #[test]
    fn forbidden_vertices_are_avoided() {
        let p5 = path(5).unwrap();
        let q = FamilyQuery::new(&p5, 2).forbid(VertexSet::singleton(0));
        let sets = q.collect().unwrap();
        assert!(sets.iter().all(|s| !s.contains(0)));
        assert_eq!(sets.len(), 3);
        assert!(FamilyQuery::new(&p5, 2)
            .anchor(0)
            .forbid(VertexSet::singleton(0))
            .validate()
            .is_err());
        assert!(FamilyQuery::new(&p5, 6).validate().is_err());
    }

    #[test]
    fn enumeration_matches_brute_force_in_order() {
        for spec in ["cycle:8", "spider:1,2,3", "kpartite:2,2,3", "tristar:1", "empty:6"] {
            let g = generate(spec).unwrap();
            for r in 0..=g.n() {
                let fast = independent_rsets(&g, r);
                assert_eq!(fast, brute_rsets(&g, r), "{spec} r={r}");
                assert_eq!(FamilyQuery::new(&g, r).count().unwrap(), fast.len() as u128);
            }
        }
    }

    #[test]
    fn path_closed_form() {
        assert_eq!(count_path_rsets(4, 2), BigUint::from(3u32));
        assert_eq!(count_path_rsets(5, 2), BigUint::from(6u32));
        for m in 0..10 {
            assert_eq!(count_path_rsets(m, 0), BigUint::from(1u32));
        }
    }

    #[test]
    fn star_size_examples() {
        let k13 = generate("star:3").unwrap();
        assert_eq!(star_size(&k13, 1, 2).unwrap().count, binom(2, 1));
        let sp = generate("spider:2,2,2").unwrap();
        assert_eq!(star_size_enumeration(&sp, 2, 2).unwrap().count, BigUint::from(5u32));
        let p10 = path(10).unwrap();
        assert_eq!(star_size(&p10, 0, 3).unwrap().count, BigUint::from(21u32));
        let c5 = generate("cycle:5").unwrap();
        assert_eq!(star_size(&c5, 0, 2).unwrap().method, CountMethod::Enumeration);
        assert_eq!(star_size(&p10, 0, 3).unwrap().method, CountMethod::TreeDp);
        assert!(star_size(&p10, 10, 1).is_err());
    }

    #[test]
    fn tree_dp_examples() {
        let p4 = path(4).unwrap();
        assert_eq!(star_size_tree_dp(&p4, 0, 2).unwrap().count, BigUint::from(2u32));
        let t1 = generate("tristar:1").unwrap();
        assert_eq!(star_size_tree_dp(&t1, 0, 2).unwrap().count, BigUint::from(6u32));
        for v in 0..t1.n() {
            assert_eq!(star_size_tree_dp(&t1, v, 1).unwrap().count, BigUint::from(1u32));
            assert_eq!(star_size_tree_dp(&t1, v, 0).unwrap().count, BigUint::from(0u32));
        }
        let c4 = generate("cycle:4").unwrap();
        assert_eq!(star_size_tree_dp(&c4, 0, 1), Err(Error::NotForest));
    }

    #[test]
    fn tree_dp_on_forests() {
        let f = Graph::new(7, [(0, 1), (1, 2), (3, 4), (5, 6)]).unwrap();
        for v in 0..7 {
            for r in 0..=4 {
                assert_eq!(
                    star_size_tree_dp(&f, v, r).unwrap().count,
                    star_size_enumeration(&f, v, r).unwrap().count,
                    "v={v} r={r}"
                );
            }
        }
    }

    #[test]
    fn double_counting() {
        for spec in ["cycle:9", "spider:3,1,2", "kpartite:1,2,3"] {
            let g = generate(spec).unwrap();
            for r in 0..=4 {
                let total: u128 = (0..g.n())
                    .map(|v| FamilyQuery::new(&g, r).anchor(v).count().unwrap())
                    .sum();
                assert_eq!(total, r as u128 * FamilyQuery::new(&g, r).count().unwrap());
            }
        }
    }
}
