//! Graph families used throughout the toolkit, and the generator DSL
//! (`kind:params`) that names them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

/// Parsed generator string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Empty(usize),
    Path(usize),
    Cycle(usize),
    /// `K_{1,k}` with the center at vertex 0.
    Star(usize),
    Spider(Vec<usize>),
    /// Complete multipartite graph; parts are consecutive index blocks.
    Multipartite(Vec<usize>),
    /// Center joined to the roots of three complete binary trees of depth `h`.
    Tristar(u32),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        let g = match self {
            GraphSpec::Empty(n) => Graph::empty(*n)?,
            GraphSpec::Path(n) => path(*n)?,
            GraphSpec::Cycle(n) => {
                if *n < 3 {
                    return Err(self.bad("a cycle needs at least 3 vertices"));
                }
                Graph::new(*n, (0..*n).map(|i| (i, (i + 1) % n)))?
            }
            GraphSpec::Star(k) => {
                if *k == 0 {
                    return Err(self.bad("a star needs at least one leaf"));
                }
                Graph::new(k + 1, (1..=*k).map(|i| (0, i)))?
            }
            GraphSpec::Spider(legs) => SpiderSpec::new(legs.clone())?.graph()?,
            GraphSpec::Multipartite(parts) => multipartite(parts).map_err(|e| match e {
                Error::VertexCount(_) | Error::VertexOutOfRange { .. } => e,
                _ => self.bad("part sizes must be positive"),
            })?,
            GraphSpec::Tristar(h) => tristar(*h)?,
        };
        Ok(g.with_label(self.to_string()))
    }

    fn bad(&self, reason: &str) -> Error {
        Error::GeneratorParams {
            spec: self.to_string(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            GraphSpec::Empty(n) => write!(f, "empty:{n}"),
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Star(k) => write!(f, "star:{k}"),
            GraphSpec::Spider(legs) => write!(f, "spider:{}", join(legs)),
            GraphSpec::Multipartite(parts) => write!(f, "kpartite:{}", join(parts)),
            GraphSpec::Tristar(h) => write!(f, "tristar:{h}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))?;
        let bad = |reason: &str| Error::GeneratorParams {
            spec: s.to_string(),
            reason: reason.into(),
        };
        let list = || -> Result<Vec<usize>> {
            args.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| bad("expected non-negative integers"))
                })
                .collect()
        };
        let single = || -> Result<usize> {
            match list()?.as_slice() {
                [x] => Ok(*x),
                _ => Err(bad("expected exactly one parameter")),
            }
        };
        match kind.trim() {
            "empty" => Ok(GraphSpec::Empty(single()?)),
            "path" => Ok(GraphSpec::Path(single()?)),
            "cycle" => Ok(GraphSpec::Cycle(single()?)),
            "star" => Ok(GraphSpec::Star(single()?)),
            "spider" => Ok(GraphSpec::Spider(list()?)),
            "kpartite" => Ok(GraphSpec::Multipartite(list()?)),
            "tristar" => {
                let h = single()?;
                u32::try_from(h)
                    .map(GraphSpec::Tristar)
                    .map_err(|_| bad("depth too large"))
            }
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }
}

/// Parses and builds a generator string such as `spider:2,2,2`.
pub fn generate(spec: &str) -> Result<Graph> {
    spec.parse::<GraphSpec>()?.build()
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Result<Graph> {
    Graph::new(n, (1..n).map(|i| (i - 1, i)))
}

pub fn multipartite(parts: &[usize]) -> Result<Graph> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::GeneratorParams {
            spec: format!("kpartite:{parts:?}"),
            reason: "part sizes must be positive".into(),
        });
    }
    let n: usize = parts.iter().sum();
    if n > MAX_VERTICES {
        return Err(Error::VertexCount(n));
    }
    let mut part_of = Vec::with_capacity(n);
    for (p, &size) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, size));
    }
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| part_of[u] != part_of[v]);
    Graph::new(n, edges)
}

/// `T(h)`: vertex 0 is the center; tree `i` occupies a contiguous block laid
/// out in heap order, its root adjacent to the center.
pub fn tristar(h: u32) -> Result<Graph> {
    let size = (1usize << (h.min(40) + 1)) - 1;
    let n = 1 + 3 * size;
    if n > MAX_VERTICES {
        return Err(Error::VertexCount(n));
    }
    let mut edges = Vec::with_capacity(n - 1);
    for t in 0..3 {
        let base = 1 + t * size;
        edges.push((0, base));
        for i in 1..size {
            edges.push((base + (i - 1) / 2, base + i));
        }
    }
    Graph::new(n, edges)
}

/// Spider order of a list of leg lengths: indices of odd lengths ascending,
/// then even lengths descending, stable among equal lengths.
pub fn spider_order(legs: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..legs.len()).collect();
    idx.sort_by_key(|&i| {
        let l = legs[i];
        if l % 2 == 1 {
            (0, l as isize)
        } else {
            (1, -(l as isize))
        }
    });
    idx
}

/// A spider `S(l_1, ..., l_k)` with its spider-order permutation.
///
/// Vertex numbering of the realized graph: the split vertex `w` is 0, then the
/// legs follow in input order, each listed from `u_i` (adjacent to `w`) out to
/// the leaf `v_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiderSpec {
    legs: Vec<usize>,
    order: Vec<usize>,
}

impl SpiderSpec {
    pub fn new(legs: Vec<usize>) -> Result<Self> {
        if legs.len() < 3 {
            return Err(Error::SpiderLegs(legs.len()));
        }
        if legs.contains(&0) {
            return Err(Error::ZeroLeg);
        }
        let n = 1 + legs.iter().sum::<usize>();
        if n > MAX_VERTICES {
            return Err(Error::VertexCount(n));
        }
        let order = spider_order(&legs);
        Ok(SpiderSpec { legs, order })
    }

    /// Leg lengths in input order.
    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    /// Permutation of leg indices into spider order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn ordered_legs(&self) -> Vec<usize> {
        self.order.iter().map(|&i| self.legs[i]).collect()
    }

    pub fn k(&self) -> usize {
        self.legs.len()
    }

    pub fn n(&self) -> usize {
        1 + self.legs.iter().sum::<usize>()
    }

    pub fn center(&self) -> usize {
        0
    }

    /// Vertex at distance `offset` (1-based) from `w` along leg `leg`.
    pub fn vertex(&self, leg: usize, offset: usize) -> usize {
        assert!(offset >= 1 && offset <= self.legs[leg], "offset outside leg");
        1 + self.legs[..leg].iter().sum::<usize>() + offset - 1
    }

    /// `u_i`: the neighbor of `w` on leg `i`.
    pub fn u(&self, leg: usize) -> usize {
        self.vertex(leg, 1)
    }

    /// `v_i`: the leaf of leg `i`.
    pub fn leaf(&self, leg: usize) -> usize {
        self.vertex(leg, self.legs[leg])
    }

    /// All vertices of leg `i`, from `u_i` outward.
    pub fn leg_vertices(&self, leg: usize) -> Vec<usize> {
        (1..=self.legs[leg]).map(|o| self.vertex(leg, o)).collect()
    }

    pub fn graph(&self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.n() - 1);
        for leg in 0..self.k() {
            let vs = self.leg_vertices(leg);
            edges.push((0, vs[0]));
            edges.extend(vs.windows(2).map(|w| (w[0], w[1])));
        }
        let label = format!(
            "spider:{}",
            self.legs.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(Graph::new(self.n(), edges)?.with_label(label))
    }
}

/// True when `lengths` satisfies all three spider-order conditions pairwise.
pub fn is_spider_ordered(lengths: &[usize]) -> bool {
    for i in 0..lengths.len() {
        for j in 0..lengths.len() {
            let (a, b) = (lengths[i], lengths[j]);
            let (odd_a, odd_b) = (a % 2 == 1, b % 2 == 1);
            if odd_a && odd_b && a < b && i >= j {
                return false;
            }
            if !odd_a && !odd_b && a < b && i <= j {
                return false;
            }
            if odd_a && !odd_b && i >= j {
                return false;
            }
        }
    }
    true
}

/// Every ordered leg-length composition of `total` into at least 3 positive parts.
pub fn spider_compositions(total: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            if cur.len() >= 3 {
                out.push(cur.clone());
            }
            return;
        }
        for part in 1..=remaining {
            cur.push(part);
            rec(remaining - part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, &mut Vec::new(), &mut out);
    out
}

/// Every leg-length multiset (non-increasing partition of `total`, at least 3 parts).
pub fn spider_partitions(total: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            if cur.len() >= 3 {
                out.push(cur.clone());
            }
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tristar_one() {
        let g = generate("tristar:1").unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.degree(0), 3);
        for root in [1, 4, 7] {
            assert_eq!(g.degree(root), 3);
        }
        assert!(g.is_tree());
    }

    #[test]
    fn tristar_split_census() {
        for h in 0..=4 {
            let g = tristar(h).unwrap();
            assert_eq!(g.n(), 1 + 3 * ((1 << (h + 1)) - 1));
            assert!(g.is_tree());
            // Every vertex except the leaves of the binary trees has degree 3.
            let census = g.degrees().iter().filter(|&&d| d >= 3).count();
            let leaves = g.leaves().len();
            assert_eq!(census + leaves, g.n());
        }
        assert!(tristar(5).is_err());
    }

    #[test]
    fn spider_two_two_two() {
        let g = generate("spider:2,2,2").unwrap();
        assert_eq!(g.n(), 7);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.split_vertices().to_vec(), vec![0]);
        assert_eq!(g.leaves().to_vec(), vec![2, 4, 6]);
        assert_eq!(g.label(), Some("spider:2,2,2"));
    }

    #[test]
    fn degenerate_specs() {
        assert_eq!(generate("spider:1,1"), Err(Error::SpiderLegs(2)));
        assert_eq!(generate("spider:1,0,2"), Err(Error::ZeroLeg));
        assert!(matches!(generate("wheel:5"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(generate("path"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(generate("path:x"), Err(Error::GeneratorParams { .. })));
        assert!(matches!(generate("cycle:2"), Err(Error::GeneratorParams { .. })));
        assert_eq!(generate("empty:129"), Err(Error::VertexCount(129)));
        assert_eq!(generate("path:200"), Err(Error::VertexCount(200)));
        assert!(generate("kpartite:100,100").is_err());
        assert!(generate("kpartite:3,0").is_err());
    }

    #[test]
    fn multipartite_parts() {
        let g = generate("kpartite:3,3").unwrap();
        assert_eq!(g.edge_count(), 9);
        assert!(!g.has_edge(0, 2));
        assert!(g.has_edge(0, 3));
    }

    #[test]
    fn spider_order_examples() {
        let reorder = |legs: &[usize]| spider_order(legs).iter().map(|&i| legs[i]).collect::<Vec<_>>();
        assert_eq!(reorder(&[2, 1, 3]), vec![1, 3, 2]);
        assert_eq!(reorder(&[4, 2, 6]), vec![6, 4, 2]);
        assert_eq!(spider_order(&[1, 1, 1]), vec![0, 1, 2]);
        assert_eq!(spider_order(&[2, 5, 2, 1]), vec![3, 1, 0, 2]);
    }

    #[test]
    fn spider_coordinates() {
        let s = SpiderSpec::new(vec![1, 3, 2]).unwrap();
        assert_eq!(s.leg_vertices(1), vec![2, 3, 4]);
        assert_eq!(s.leaf(2), 6);
        assert_eq!(s.u(2), 5);
        assert_eq!(s.ordered_legs(), vec![1, 3, 2]);
        let g = s.graph().unwrap();
        assert_eq!(g.distance(0, s.leaf(1)).unwrap(), Some(3));
    }

    #[test]
    fn composition_counts() {
        // Compositions of m into >= 3 parts: 2^(m-1) - 1 - (m-1).
        for m in 3..12 {
            assert_eq!(spider_compositions(m).len(), (1 << (m - 1)) - m);
        }
        assert_eq!(spider_partitions(6).len(), 7);
    }
}
