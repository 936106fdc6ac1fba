//! Verdict engines: r-EKR, strictly r-EKR, non-star maxima and the
//! non-uniform variant over all independent sets.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::binom::{serialize_count, serialize_count_map, BigCount};
use crate::clique::{max_family, twin_classes, FamilyConstraint};
use crate::error::{Error, Result};
use crate::families::{star_profiles, FamilyQuery};
use crate::generate::SpiderSpec;
use crate::graph::{Graph, VertexSet};
use crate::params::max_independent_set;

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    /// Size of a family the caller knows to exist; used to seed pruning.
    pub max_family_size_hint: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: DEFAULT_MAX_NODES,
            max_family_size_hint: None,
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::Budget(max_nodes));
        }
        Ok(SearchBudget {
            max_nodes,
            max_family_size_hint: None,
        })
    }

    pub fn with_hint(mut self, size: usize) -> Self {
        self.max_family_size_hint = Some(size);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ekr,
    NotEkr,
    StrictlyEkr,
    BudgetExceeded,
}

impl Verdict {
    pub fn is_ekr(self) -> bool {
        matches!(self, Verdict::Ekr | Verdict::StrictlyEkr)
    }
}

/// Outcome of a maximum intersecting family search. Field order is the
/// serialized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EkrReport {
    /// Set size; `None` for the non-uniform check.
    pub r: Option<usize>,
    pub verdict: Verdict,
    pub max_star_vertex: usize,
    #[serde(serialize_with = "serialize_count")]
    pub max_star_size: BigCount,
    /// Exact unless `verdict` is `BudgetExceeded`, in which case it is the
    /// best size found so far.
    #[serde(serialize_with = "serialize_count")]
    pub max_intersecting_size: BigCount,
    pub witness: Vec<VertexSet>,
    pub nodes_explored: u64,
}

impl EkrReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Largest intersecting family with empty total intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonStarReport {
    pub r: usize,
    /// False when the budget ran out; `max_nonstar_size` is then a lower bound.
    pub complete: bool,
    pub max_nonstar_size: usize,
    pub witness: Vec<VertexSet>,
    pub max_star_vertex: usize,
    #[serde(serialize_with = "serialize_count")]
    pub max_star_size: BigCount,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarCheck {
    /// The empty family has no well-defined center.
    EmptyFamily,
    /// Smallest element common to every member.
    Center(usize),
    NotStar,
}

pub fn is_star(family: &[VertexSet]) -> StarCheck {
    let Some((first, rest)) = family.split_first() else {
        return StarCheck::EmptyFamily;
    };
    let common = rest.iter().fold(*first, |acc, s| acc.intersection(*s));
    common.first().map_or(StarCheck::NotStar, StarCheck::Center)
}

pub fn is_intersecting(family: &[VertexSet]) -> bool {
    family
        .iter()
        .enumerate()
        .all(|(i, a)| family[i + 1..].iter().all(|b| a.intersects(*b)))
}

/// `s_r(x)` for every vertex, by tree DP on forests and enumeration otherwise.
pub fn star_sizes(g: &Graph, r: usize) -> Result<Vec<u128>> {
    if g.is_forest() {
        Ok(star_profiles(g, r)?.into_iter().map(|p| p[r]).collect())
    } else {
        (0..g.n()).map(|v| FamilyQuery::new(g, r).anchor(v).count()).collect()
    }
}

/// Candidates `I^r(G)` after checking `1 <= r <= alpha(G)`.
fn candidates(g: &Graph, r: usize) -> Result<Vec<VertexSet>> {
    if r == 0 {
        return Err(Error::SetSize { r, min: 1, max: g.n() });
    }
    let sets = if r <= g.n() {
        FamilyQuery::new(g, r).collect()?
    } else {
        Vec::new()
    };
    if sets.is_empty() {
        let alpha = max_independent_set(g).len();
        return Err(Error::SetSize { r, min: 1, max: alpha });
    }
    Ok(sets)
}

/// Largest full star: smallest vertex attaining the maximum count.
fn best_star(sets: &[VertexSet], n: usize) -> (usize, usize) {
    let mut counts = vec![0usize; n];
    for s in sets {
        for v in s.iter() {
            counts[v] += 1;
        }
    }
    let max = counts.iter().copied().max().unwrap_or(0);
    let v = counts.iter().position(|&c| c == max).unwrap_or(0);
    (v, max)
}

struct Maximum {
    star_vertex: usize,
    star_size: usize,
    size: usize,
    witness: Vec<VertexSet>,
    nodes: u64,
    complete: bool,
}

fn maximize(g: &Graph, sets: &[VertexSet], budget: SearchBudget) -> Maximum {
    let (star_vertex, star_size) = best_star(sets, g.n());
    let symmetry = twin_classes(g);
    let star: Vec<VertexSet> = sets.iter().copied().filter(|s| s.contains(star_vertex)).collect();
    let mut nodes = 0;
    // A hint above the star seeds a tighter bound; if nothing reaches it the
    // search is rerun from the star.
    if let Some(hint) = budget.max_family_size_hint.filter(|&h| h > star_size + 1) {
        let out = max_family(
            sets,
            FamilyConstraint::Intersecting,
            hint - 1,
            budget.max_nodes,
            &symmetry,
        );
        nodes += out.nodes;
        if out.improved || out.exhausted {
            let witness: Vec<VertexSet> = out.best.iter().map(|&i| sets[i]).collect();
            return Maximum {
                star_vertex,
                star_size,
                size: witness.len().max(star_size),
                witness: if out.improved { witness } else { star },
                nodes,
                complete: !out.exhausted,
            };
        }
    }
    let out = max_family(
        sets,
        FamilyConstraint::Intersecting,
        star_size,
        budget.max_nodes.saturating_sub(nodes).max(1),
        &symmetry,
    );
    nodes += out.nodes;
    let witness = if out.improved {
        out.best.iter().map(|&i| sets[i]).collect()
    } else {
        star
    };
    Maximum {
        star_vertex,
        star_size,
        size: witness.len(),
        witness,
        nodes,
        complete: !out.exhausted,
    }
}

/// Maximum intersecting subfamily of `I^r(G)` with its EKR verdict.
pub fn max_intersecting_family(g: &Graph, r: usize, budget: SearchBudget) -> Result<EkrReport> {
    let sets = candidates(g, r)?;
    let m = maximize(g, &sets, budget);
    let verdict = if !m.complete {
        Verdict::BudgetExceeded
    } else if m.size == m.star_size {
        Verdict::Ekr
    } else {
        Verdict::NotEkr
    };
    Ok(EkrReport {
        r: Some(r),
        verdict,
        max_star_vertex: m.star_vertex,
        max_star_size: BigUint::from(m.star_size),
        max_intersecting_size: BigUint::from(m.size),
        witness: m.witness,
        nodes_explored: m.nodes,
    })
}

pub fn is_r_ekr(g: &Graph, r: usize, budget: SearchBudget) -> Result<EkrReport> {
    max_intersecting_family(g, r, budget)
}

/// Largest intersecting non-star subfamily of `I^r(G)`.
pub fn max_nonstar_intersecting(g: &Graph, r: usize, budget: SearchBudget) -> Result<NonStarReport> {
    let sets = candidates(g, r)?;
    let (star_vertex, star_size) = best_star(&sets, g.n());
    let out = max_family(&sets, FamilyConstraint::NonStar, 0, budget.max_nodes, &twin_classes(g));
    let witness: Vec<VertexSet> = out.best.iter().map(|&i| sets[i]).collect();
    Ok(NonStarReport {
        r,
        complete: !out.exhausted,
        max_nonstar_size: witness.len(),
        witness,
        max_star_vertex: star_vertex,
        max_star_size: BigUint::from(star_size),
        nodes_explored: out.nodes,
    })
}

/// Strict check: `G` is strictly r-EKR when it is r-EKR and no maximum
/// intersecting family other than a full star exists.
///
/// A maximum family with a center `x` is contained in the intersecting full
/// star at `x`, so it equals that star. The counter-witness search therefore
/// only needs non-star families of the maximum size.
pub fn is_strictly_r_ekr(g: &Graph, r: usize, budget: SearchBudget) -> Result<EkrReport> {
    let mut report = max_intersecting_family(g, r, budget)?;
    if report.verdict != Verdict::Ekr {
        return Ok(report);
    }
    let sets = candidates(g, r)?;
    let target: usize = usize::try_from(&report.max_intersecting_size).expect("family size fits usize");
    let remaining = budget.max_nodes.saturating_sub(report.nodes_explored).max(1);
    let out = max_family(
        &sets,
        FamilyConstraint::NonStar,
        target - 1,
        remaining,
        &twin_classes(g),
    );
    report.nodes_explored += out.nodes;
    report.verdict = if out.exhausted {
        Verdict::BudgetExceeded
    } else if out.improved {
        // A non-star family of maximum size is the more informative witness.
        report.witness = out.best.iter().map(|&i| sets[i]).collect();
        Verdict::Ekr
    } else {
        Verdict::StrictlyEkr
    };
    Ok(report)
}

/// Non-uniform check over all independent sets: compares the largest
/// intersecting subfamily of `I(G)` with the largest `|I_x(G)|`.
///
/// The empty set meets nothing, so it can only form a family on its own; it
/// is left out of the candidates.
pub fn nonuniform_ekr(g: &Graph, budget: SearchBudget) -> Result<EkrReport> {
    let mut sets = Vec::new();
    for r in 1..=g.n() {
        let layer = FamilyQuery::new(g, r).collect()?;
        if layer.is_empty() {
            break;
        }
        sets.extend(layer);
    }
    let m = maximize(g, &sets, budget);
    let verdict = if !m.complete {
        Verdict::BudgetExceeded
    } else if m.size == m.star_size {
        Verdict::Ekr
    } else {
        Verdict::NotEkr
    };
    let mut witness = m.witness;
    witness.sort_by_key(|s| (s.len(), *s));
    Ok(EkrReport {
        r: None,
        verdict,
        max_star_vertex: m.star_vertex,
        max_star_size: BigUint::from(m.star_size),
        max_intersecting_size: BigUint::from(m.size),
        witness,
        nodes_explored: m.nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HkReport {
    pub r: usize,
    pub best_vertex: usize,
    pub best_is_leaf: bool,
    #[serde(serialize_with = "serialize_count_map")]
    pub per_vertex: BTreeMap<usize, BigCount>,
}

fn check_tree_r(t: &Graph, r: usize) -> Result<()> {
    if !t.is_tree() {
        return Err(Error::NotTree);
    }
    let alpha = max_independent_set(t).len();
    if r == 0 || r > alpha {
        return Err(Error::SetSize { r, min: 1, max: alpha });
    }
    Ok(())
}

/// Whether `s_r` attains its maximum at a leaf of the tree `t`.
///
/// `best_vertex` is the smallest leaf attaining the maximum if one does,
/// otherwise the smallest vertex attaining it. A single-vertex tree counts
/// its vertex as a leaf.
pub fn is_r_hk(t: &Graph, r: usize) -> Result<HkReport> {
    check_tree_r(t, r)?;
    let sizes = star_sizes(t, r)?;
    let max = sizes.iter().copied().max().unwrap_or(0);
    let leaves = t.leaves();
    let is_leaf = |v: usize| leaves.contains(v) || t.n() == 1;
    let attaining = || (0..t.n()).filter(|&v| sizes[v] == max);
    let best_vertex = attaining()
        .find(|&v| is_leaf(v))
        .or_else(|| attaining().next())
        .unwrap_or(0);
    Ok(HkReport {
        r,
        best_vertex,
        best_is_leaf: is_leaf(best_vertex),
        per_vertex: sizes.iter().enumerate().map(|(v, &c)| (v, BigUint::from(c))).collect(),
    })
}

/// One failed inequality `s_r(smaller) <= s_r(larger)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    /// Which of the three inequality families failed (1, 2 or 3).
    pub part: u8,
    pub smaller: usize,
    pub larger: usize,
    pub s_smaller: u128,
    pub s_larger: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpiderOrderReport {
    pub r: usize,
    /// Leg lengths in spider order.
    pub ordered_legs: Vec<usize>,
    /// Leaves `v_1, ..., v_k` in spider order.
    pub leaves: Vec<usize>,
    pub comparisons: usize,
    pub violations: Vec<OrderViolation>,
}

impl SpiderOrderReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks on a spider with legs in spider order `v_1, ..., v_k`:
/// (1) `s_r(w) <= s_r(v_i)`; (2) `s_r(u) <= s_r(v_i)` for `u` on leg `i`;
/// (3) `s_r(v_j) <= s_r(v_i)` for `i < j`.
pub fn spider_order_check(spec: &SpiderSpec, r: usize) -> Result<SpiderOrderReport> {
    let g = spec.graph()?;
    check_tree_r(&g, r)?;
    let s = star_sizes(&g, r)?;
    let legs: Vec<usize> = spec.order().to_vec();
    let leaves: Vec<usize> = legs.iter().map(|&l| spec.leaf(l)).collect();
    let mut comparisons = 0;
    let mut violations = Vec::new();
    let mut check = |part: u8, smaller: usize, larger: usize| {
        comparisons += 1;
        if s[smaller] > s[larger] {
            violations.push(OrderViolation {
                part,
                smaller,
                larger,
                s_smaller: s[smaller],
                s_larger: s[larger],
            });
        }
    };
    for (&leg, &v) in legs.iter().zip(&leaves) {
        check(1, spec.center(), v);
        for u in spec.leg_vertices(leg) {
            if u != v {
                check(2, u, v);
            }
        }
    }
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            check(3, leaves[j], leaves[i]);
        }
    }
    Ok(SpiderOrderReport {
        r,
        ordered_legs: spec.ordered_legs(),
        leaves,
        comparisons,
        violations,
    })
}
