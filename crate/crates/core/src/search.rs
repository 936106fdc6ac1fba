//! Counterexample search over labeled trees and graph catalogs.
//!
//! Labeled trees come from Prüfer sequences. Isomorphic copies are collapsed
//! by a canonical certificate before any verdict runs, so a sweep costs one
//! verdict per isomorphism class.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::binom::{serialize_count, BigCount};
use crate::error::{Error, Result};
use crate::families::star_profiles;
use crate::graph::{Graph, VertexSet};
use crate::verify::{is_r_ekr, SearchBudget, Verdict};

/// The tree with Prüfer sequence `seq` on `seq.len() + 2` vertices.
pub fn prufer_decode(seq: &[usize]) -> Result<Graph> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&x| x >= n) {
        return Err(Error::VertexOutOfRange { vertex: bad, n });
    }
    let mut remaining = vec![0usize; n];
    for &x in seq {
        remaining[x] += 1;
    }
    let mut leaves: u128 = (0..n).filter(|&v| remaining[v] == 0).fold(0, |acc, v| acc | 1 << v);
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = leaves.trailing_zeros() as usize;
        leaves &= !(1 << leaf);
        edges.push((leaf, x));
        remaining[x] -= 1;
        if remaining[x] == 0 {
            leaves |= 1 << x;
        }
    }
    let a = leaves.trailing_zeros() as usize;
    let b = (leaves & !(1 << a)).trailing_zeros() as usize;
    edges.push((a, b));
    Graph::new(n, edges)
}

/// Every sequence in `[0, n)^{n-2}` in lexicographic order.
pub fn prufer_sequences(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let len = n.saturating_sub(2);
    let mut next = if n >= 2 { Some(vec![0usize; len]) } else { None };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = len;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < n {
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    })
}

/// Canonical form of a tree: the smallest parenthesised rooted encoding over
/// its one or two centers. Two trees share a certificate iff they are
/// isomorphic.
pub fn tree_certificate(t: &Graph) -> Result<String> {
    if !t.is_tree() {
        return Err(Error::NotTree);
    }
    Ok(centers(t)
        .into_iter()
        .map(|c| rooted_code(t, c))
        .min()
        .expect("a tree has a center"))
}

fn centers(t: &Graph) -> Vec<usize> {
    let mut alive = t.vertices();
    while alive.len() > 2 {
        let leaves: VertexSet = alive
            .iter()
            .filter(|&v| t.neighbors(v).intersection(alive).len() <= 1)
            .collect();
        alive = alive.difference(leaves);
    }
    alive.to_vec()
}

fn rooted_code(t: &Graph, root: usize) -> String {
    fn rec(t: &Graph, v: usize, parent: Option<usize>) -> String {
        let mut kids: Vec<String> = t
            .neighbors(v)
            .iter()
            .filter(|&c| Some(c) != parent)
            .map(|c| rec(t, c, Some(v)))
            .collect();
        kids.sort_unstable();
        format!("({})", kids.concat())
    }
    rec(t, root, None)
}

/// One representative of every isomorphism class of trees on `n` vertices,
/// sorted by certificate. Built by attaching a leaf to every vertex of every
/// tree on `n - 1` vertices.
pub fn free_trees(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 128 {
        return Err(Error::VertexCount(n));
    }
    let mut level = vec![Graph::empty(1)?];
    for m in 2..=n {
        let mut seen = BTreeMap::new();
        for t in &level {
            for v in 0..t.n() {
                let edges: Vec<(usize, usize)> = t.edges().chain(std::iter::once((v, m - 1))).collect();
                let g = Graph::new(m, edges)?;
                seen.entry(tree_certificate(&g)?).or_insert(g);
            }
        }
        level = seen.into_values().collect();
    }
    Ok(level)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKind {
    Hk,
    Ekr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub kind: SearchKind,
    pub r_min: usize,
    pub r_max: usize,
    pub budget: SearchBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FindingDetail {
    /// `s_r` peaks only at non-leaves.
    Hk {
        best_vertex: usize,
        max_value: u128,
        best_leaf_value: u128,
    },
    Ekr {
        #[serde(serialize_with = "serialize_count")]
        max_star_size: BigCount,
        #[serde(serialize_with = "serialize_count")]
        max_intersecting_size: BigCount,
        witness: Vec<VertexSet>,
    },
}

/// A tree (or catalog graph) failing the requested property at one `r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub certificate: String,
    pub n: usize,
    pub r: usize,
    pub graph6: String,
    pub detail: FindingDetail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub kind: SearchKind,
    /// Graphs read, counting isomorphic copies.
    pub instances: u64,
    /// Distinct graphs after certificate deduplication.
    pub distinct: usize,
    /// `(graph, r)` pairs decided.
    pub checks: u64,
    /// `(graph, r)` pairs abandoned on budget.
    pub budget_exceeded: u64,
    /// Inputs that could not be checked, with the reason.
    pub skipped: Vec<String>,
    /// Sorted by certificate, then `r`.
    pub findings: Vec<Finding>,
}

struct Outcome {
    checks: u64,
    budget_exceeded: u64,
    findings: Vec<Finding>,
}

fn certificate_of(g: &Graph) -> String {
    // Non-trees only arrive from catalogs; their graph6 serves as identity.
    tree_certificate(g).unwrap_or_else(|_| format!("g6:{}", g.to_graph6()))
}

fn check_graph(g: &Graph, cert: &str, cfg: &SearchConfig) -> Result<Outcome> {
    let mut out = Outcome {
        checks: 0,
        budget_exceeded: 0,
        findings: Vec::new(),
    };
    let finding = |r, detail| Finding {
        certificate: cert.to_string(),
        n: g.n(),
        r,
        graph6: g.to_graph6(),
        detail,
    };
    match cfg.kind {
        SearchKind::Hk => {
            let profiles = star_profiles(g, cfg.r_max)?;
            let leaves = g.leaves();
            let is_leaf = |v: usize| leaves.contains(v) || g.n() == 1;
            for r in cfg.r_min.max(1)..=cfg.r_max {
                let max = profiles.iter().map(|p| p[r]).max().unwrap_or(0);
                if max == 0 {
                    break;
                }
                out.checks += 1;
                let leaf_max = (0..g.n())
                    .filter(|&v| is_leaf(v))
                    .map(|v| profiles[v][r])
                    .max()
                    .unwrap_or(0);
                if leaf_max < max {
                    let best_vertex = (0..g.n()).find(|&v| profiles[v][r] == max).expect("max is attained");
                    out.findings.push(finding(
                        r,
                        FindingDetail::Hk {
                            best_vertex,
                            max_value: max,
                            best_leaf_value: leaf_max,
                        },
                    ));
                }
            }
        }
        SearchKind::Ekr => {
            for r in cfg.r_min.max(1)..=cfg.r_max {
                let rep = match is_r_ekr(g, r, cfg.budget) {
                    Ok(rep) => rep,
                    Err(Error::SetSize { .. }) => break,
                    Err(e) => return Err(e),
                };
                match rep.verdict {
                    Verdict::BudgetExceeded => out.budget_exceeded += 1,
                    Verdict::NotEkr => {
                        out.checks += 1;
                        out.findings.push(finding(
                            r,
                            FindingDetail::Ekr {
                                max_star_size: rep.max_star_size,
                                max_intersecting_size: rep.max_intersecting_size,
                                witness: rep.witness,
                            },
                        ));
                    }
                    _ => out.checks += 1,
                }
            }
        }
    }
    Ok(out)
}

fn run(cfg: &SearchConfig, instances: u64, graphs: Vec<(String, Graph)>, mut skipped: Vec<String>) -> SearchSummary {
    let results: Vec<(String, Result<Outcome>)> = graphs
        .par_iter()
        .map(|(cert, g)| (cert.clone(), check_graph(g, cert, cfg)))
        .collect();
    let mut checks = 0;
    let mut budget_exceeded = 0;
    let mut findings = Vec::new();
    for (cert, res) in results {
        match res {
            Ok(o) => {
                checks += o.checks;
                budget_exceeded += o.budget_exceeded;
                findings.extend(o.findings);
            }
            Err(e) => skipped.push(format!("{cert}: {e}")),
        }
    }
    findings.sort();
    skipped.sort();
    SearchSummary {
        kind: cfg.kind,
        instances,
        distinct: graphs.len(),
        checks,
        budget_exceeded,
        skipped,
        findings,
    }
}

/// Sweep every labeled tree on `n_min..=n_max` vertices.
pub fn search_prufer(cfg: &SearchConfig, n_min: usize, n_max: usize) -> Result<SearchSummary> {
    if n_max > 10 {
        return Err(Error::SearchLimit { n: n_max, limit: 10 });
    }
    let mut instances = 0u64;
    let mut distinct = BTreeMap::new();
    for n in n_min.max(1)..=n_max {
        if n == 1 {
            instances += 1;
            let g = Graph::empty(1)?;
            distinct.entry(certificate_of(&g)).or_insert(g);
            continue;
        }
        // Split the sweep by leading symbol; each worker keeps its own
        // certificate set and the sets are merged afterwards.
        let len = n - 2;
        let parts: Vec<BTreeMap<String, Graph>> = (0..if len == 0 { 1 } else { n })
            .into_par_iter()
            .map(|lead| {
                let mut local = BTreeMap::new();
                let mut seq = vec![0usize; len];
                if len > 0 {
                    seq[0] = lead;
                }
                loop {
                    let g = prufer_decode(&seq).expect("symbols are in range");
                    local.entry(certificate_of(&g)).or_insert(g);
                    // Advance the tail odometer, leaving the lead fixed.
                    let mut i = len;
                    let mut carried = true;
                    while i > 1 && carried {
                        i -= 1;
                        seq[i] += 1;
                        carried = seq[i] == n;
                        if carried {
                            seq[i] = 0;
                        }
                    }
                    if carried || len <= 1 {
                        break;
                    }
                }
                local
            })
            .collect();
        instances += (n as u64).pow(len as u32);
        for part in parts {
            for (cert, g) in part {
                distinct.entry(cert).or_insert(g);
            }
        }
    }
    Ok(run(cfg, instances, distinct.into_iter().collect(), Vec::new()))
}

/// Check every graph of a catalog. HK checks need trees; other graphs are
/// skipped with a note.
pub fn search_catalog(cfg: &SearchConfig, graphs: &[Graph]) -> SearchSummary {
    let mut skipped = Vec::new();
    let mut distinct = BTreeMap::new();
    for (i, g) in graphs.iter().enumerate() {
        if cfg.kind == SearchKind::Hk && !g.is_tree() {
            skipped.push(format!("entry {i} ({}): {}", g.to_graph6(), Error::NotTree));
            continue;
        }
        distinct.entry(certificate_of(g)).or_insert_with(|| g.clone());
    }
    run(cfg, graphs.len() as u64, distinct.into_iter().collect(), skipped)
}

/// Certificates of all trees on `n` vertices reached by the Prüfer sweep.
pub fn prufer_certificates(n: usize) -> Result<BTreeSet<String>> {
    if n == 1 {
        return Ok(BTreeSet::from([tree_certificate(&Graph::empty(1)?)?]));
    }
    prufer_sequences(n)
        .map(|s| prufer_decode(&s).and_then(|g| tree_certificate(&g)))
        .collect()
}
