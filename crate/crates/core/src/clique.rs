//! Maximum intersecting subfamily search.
//!
//! Candidates are vertices of a compatibility graph (two sets are compatible
//! when they intersect), so a maximum intersecting family is a maximum clique.
//!
//! Two layers:
//!
//! * a bitset branch-and-bound in the style of MCQ/BBMC: greedy colouring of
//!   the candidate set bounds every node, candidates are ordered by
//!   descending compatibility degree, and only vertices whose colour can
//!   still beat the incumbent are branched on;
//! * orbital branching on top of it while symmetry remains. Vertices of the
//!   host graph with identical neighbourhoods (twins) may be permuted freely,
//!   so the group acting on candidates is a product of symmetric groups on
//!   twin classes. With chosen sets `C`, the stabiliser is the product of
//!   symmetric groups on the cells of the twin classes refined by membership
//!   in each member of `C`, and the orbit of a candidate is determined by how
//!   many elements it takes from each cell. At such a node we branch
//!   "include one representative of orbit `O`" / "exclude all of `O`" in turn;
//!   excluded sets are unions of orbits, so the stabiliser of the included
//!   sets is still the full node group. Once every cell is a singleton the
//!   plain search takes over.
//!
//! Both constraints (intersecting, and intersecting with empty total
//! intersection) are invariant under graph automorphisms, which is what makes
//! the orbit reduction exact.

use std::collections::BTreeMap;

use crate::graph::{Graph, VertexSet};

/// Which families count as solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyConstraint {
    /// Any intersecting family.
    Intersecting,
    /// Intersecting with empty total intersection (not a star).
    NonStar,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Best family found, as indices into the candidate slice, ascending.
    /// Empty unless `improved`.
    pub best: Vec<usize>,
    /// True when a family larger than the seeded lower bound was found.
    pub improved: bool,
    pub nodes: u64,
    /// True when the node budget ran out before the search finished.
    pub exhausted: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    #[cfg(test)]
    fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.words[i].trailing_zeros() as usize)
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    fn and_into(&self, other: &Bits, out: &mut Bits) {
        for ((o, a), b) in out.words.iter_mut().zip(&self.words).zip(&other.words) {
            *o = a & b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Scratch buffers for one recursion depth.
#[derive(Default)]
struct Level {
    p: Vec<u64>,
    uncoloured: Vec<u64>,
    q: Vec<u64>,
    list: Vec<(u32, u32)>,
}

struct Search {
    sets: Vec<VertexSet>,
    compat: Vec<Bits>,
    words: usize,
    constraint: FamilyConstraint,
    best: Vec<usize>,
    best_len: usize,
    improved: bool,
    nodes: u64,
    max_nodes: u64,
    exhausted: bool,
    clique: Vec<usize>,
    levels: Vec<Level>,
}

impl Search {
    fn accepts(&self, inter: VertexSet) -> bool {
        match self.constraint {
            FamilyConstraint::Intersecting => true,
            FamilyConstraint::NonStar => inter.is_empty(),
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted = true;
        }
        !self.exhausted
    }

    /// False when no completion can reach an empty total intersection.
    fn nonstar_feasible(&self, p: &[u64], inter: VertexSet) -> bool {
        if self.constraint != FamilyConstraint::NonStar || inter.is_empty() {
            return true;
        }
        let mut common = inter;
        for (wi, &w) in p.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let i = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                common = common.intersection(self.sets[i]);
                if common.is_empty() {
                    return true;
                }
            }
        }
        false
    }

    fn record(&mut self, inter: VertexSet) {
        if self.clique.len() > self.best_len && self.accepts(inter) {
            self.best.clone_from(&self.clique);
            self.best_len = self.best.len();
            self.improved = true;
        }
    }

    fn level(&mut self, depth: usize) -> Level {
        if self.levels.len() <= depth {
            self.levels.resize_with(depth + 1, Level::default);
        }
        let mut lv = std::mem::take(&mut self.levels[depth]);
        for buf in [&mut lv.p, &mut lv.uncoloured, &mut lv.q] {
            buf.clear();
            buf.resize(self.words, 0);
        }
        lv.list.clear();
        lv
    }

    /// Greedy colouring of `p` into classes of pairwise disjoint sets. Pushes
    /// `(vertex, colour)` for colours `>= kmin` onto `lv.list` and returns the
    /// number of classes used.
    fn colour(&self, lv: &mut Level, kmin: usize) -> usize {
        lv.uncoloured.copy_from_slice(&lv.p);
        let mut k = 0;
        while lv.uncoloured.iter().any(|&w| w != 0) {
            k += 1;
            lv.q.copy_from_slice(&lv.uncoloured);
            let mut wi = 0;
            while wi < lv.q.len() {
                let w = lv.q[wi];
                if w == 0 {
                    wi += 1;
                    continue;
                }
                let v = wi * 64 + w.trailing_zeros() as usize;
                lv.q[wi] &= w - 1;
                lv.uncoloured[wi] &= !(1u64 << (v % 64));
                for (a, b) in lv.q[wi..].iter_mut().zip(&self.compat[v].words[wi..]) {
                    *a &= !b;
                }
                if k >= kmin {
                    lv.list.push((v as u32, k as u32));
                }
            }
        }
        k
    }

    /// Plain colouring branch-and-bound over the candidates in `seed`.
    fn expand(&mut self, depth: usize, seed: &[u64], inter: VertexSet) {
        if !self.tick() || !self.nonstar_feasible(seed, inter) {
            return;
        }
        let mut lv = self.level(depth);
        lv.p.copy_from_slice(seed);
        let kmin = (self.best_len + 1).saturating_sub(self.clique.len()).max(1);
        self.colour(&mut lv, kmin);
        let mut next = vec![0u64; self.words];
        for idx in (0..lv.list.len()).rev() {
            let (v, k) = lv.list[idx];
            let (v, k) = (v as usize, k as usize);
            if self.clique.len() + k <= self.best_len {
                break;
            }
            let new_inter = inter.intersection(self.sets[v]);
            self.clique.push(v);
            self.record(new_inter);
            let mut any = false;
            for ((o, a), b) in next.iter_mut().zip(&lv.p).zip(&self.compat[v].words) {
                *o = a & b;
                any |= *o != 0;
            }
            if any {
                self.expand(depth + 1, &next, new_inter);
            }
            self.clique.pop();
            lv.p[v / 64] &= !(1u64 << (v % 64));
            if self.exhausted {
                break;
            }
        }
        self.levels[depth] = lv;
    }

    /// Orbital branching while the node group is nontrivial. `cells` are the
    /// cells of size at least two.
    fn orbital(&mut self, depth: usize, cells: &[VertexSet], p: Bits, inter: VertexSet) {
        if cells.is_empty() {
            return self.expand(depth, &p.words, inter);
        }
        if !self.tick() || !self.nonstar_feasible(&p.words, inter) {
            return;
        }
        let fixed = cells
            .iter()
            .fold(VertexSet::prefix(crate::graph::MAX_VERTICES), |acc, c| {
                acc.difference(*c)
            });
        let mut orbits: BTreeMap<(u128, Vec<u8>), Vec<usize>> = BTreeMap::new();
        for i in p.iter() {
            let s = self.sets[i];
            let key = (
                s.intersection(fixed).bits(),
                cells.iter().map(|c| s.intersection(*c).len() as u8).collect(),
            );
            orbits.entry(key).or_default().push(i);
        }
        if orbits.len() == p.count() {
            return self.expand(depth, &p.words, inter);
        }
        // Largest orbits first: excluding them early shrinks later branches most.
        let mut orbits: Vec<Vec<usize>> = orbits.into_values().collect();
        orbits.sort_by_key(|o| (std::cmp::Reverse(o.len()), o[0]));
        let mut p = p;
        for orbit in orbits {
            let mut lv = self.level(depth);
            lv.p.copy_from_slice(&p.words);
            let bound = self.colour(&mut lv, usize::MAX);
            self.levels[depth] = lv;
            if self.clique.len() + bound <= self.best_len {
                return;
            }
            let v = orbit[0];
            let new_inter = inter.intersection(self.sets[v]);
            self.clique.push(v);
            self.record(new_inter);
            let mut next = Bits::zeros(self.sets.len());
            p.and_into(&self.compat[v], &mut next);
            if !next.is_empty() {
                let refined = refine(cells, self.sets[v]);
                self.orbital(depth + 1, &refined, next, new_inter);
            }
            self.clique.pop();
            for &u in &orbit {
                p.clear(u);
            }
            if self.exhausted || p.is_empty() {
                return;
            }
            if !self.nonstar_feasible(&p.words, inter) {
                return;
            }
        }
    }
}

/// Splits every cell by membership in `set`, dropping singletons.
fn refine(cells: &[VertexSet], set: VertexSet) -> Vec<VertexSet> {
    cells
        .iter()
        .flat_map(|&c| [c.intersection(set), c.difference(set)])
        .filter(|c| c.len() >= 2)
        .collect()
}

/// Twin classes of `g` with at least two members: maximal sets of vertices
/// sharing the same open neighbourhood (non-adjacent twins) or the same
/// closed neighbourhood (adjacent twins). Transpositions inside a class are
/// automorphisms.
pub fn twin_classes(g: &Graph) -> Vec<VertexSet> {
    let mut open: BTreeMap<u128, VertexSet> = BTreeMap::new();
    let mut closed: BTreeMap<u128, VertexSet> = BTreeMap::new();
    for v in 0..g.n() {
        open.entry(g.neighbors(v).bits()).or_default().insert(v);
        closed.entry(g.closed_neighbors(v).bits()).or_default().insert(v);
    }
    open.into_values()
        .chain(closed.into_values())
        .filter(|c| c.len() >= 2)
        .collect()
}

/// Finds a largest family of `candidates` satisfying `constraint` whose size
/// exceeds `lower_bound`.
///
/// `symmetry` lists vertex classes whose internal permutations preserve both
/// the candidate list and the constraint (normally [`twin_classes`] of the
/// host graph); pass an empty slice to disable orbit pruning. Candidates must
/// be nonempty sets. The search is deterministic.
pub fn max_family(
    candidates: &[VertexSet],
    constraint: FamilyConstraint,
    lower_bound: usize,
    max_nodes: u64,
    symmetry: &[VertexSet],
) -> SearchOutcome {
    let m = candidates.len();
    let degree: Vec<usize> = candidates
        .iter()
        .enumerate()
        .map(|(i, a)| {
            candidates
                .iter()
                .enumerate()
                .filter(|&(j, b)| i != j && a.intersects(*b))
                .count()
        })
        .collect();
    // Search order: descending compatibility degree, ties by candidate index.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(degree[i]), i));
    let sets: Vec<VertexSet> = order.iter().map(|&i| candidates[i]).collect();
    let mut compat = vec![Bits::zeros(m); m];
    for i in 0..m {
        for j in 0..m {
            if i != j && sets[i].intersects(sets[j]) {
                compat[i].set(j);
            }
        }
    }
    let mut search = Search {
        sets,
        compat,
        words: m.div_ceil(64),
        constraint,
        best: Vec::new(),
        best_len: lower_bound,
        improved: false,
        nodes: 0,
        max_nodes,
        exhausted: false,
        clique: Vec::new(),
        levels: Vec::new(),
    };
    if m > 0 {
        let mut all = Bits::zeros(m);
        for i in 0..m {
            all.set(i);
        }
        let full = VertexSet::prefix(crate::graph::MAX_VERTICES);
        search.orbital(0, symmetry, all, full);
    }
    let mut best: Vec<usize> = if search.improved {
        search.best.iter().map(|&i| order[i]).collect()
    } else {
        Vec::new()
    };
    best.sort_unstable();
    SearchOutcome {
        best,
        improved: search.improved,
        nodes: search.nodes,
        exhausted: search.exhausted,
    }
}
