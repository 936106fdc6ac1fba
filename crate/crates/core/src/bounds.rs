//! Closed-form bounds, hypothesis thresholds, inequality checks, grid sweeps
//! and degree peeling.
//!
//! Binomials follow the convention of [`crate::binom`]. Comparisons that
//! involve `ln`, `exp` or `sqrt` run in [`Fixed`] arithmetic; threshold
//! verdicts refuse anything within `1e-9` of the boundary.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::binom::{binom, serialize_count, BigCount};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::hiprec::Fixed;

fn b(a: usize, k: usize) -> BigCount {
    binom(a as i64, k as i64)
}

fn bs(a: i64, k: i64) -> BigCount {
    binom(a, k)
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn serialize_ratio<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ratio_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundValue {
    #[serde(serialize_with = "serialize_count")]
    pub value: BigCount,
    /// Whether `(n, r)` lies in the range where the bound is a theorem.
    pub in_range: bool,
}

/// `C(n-1, r-1)`; in range when `r <= n/2`.
pub fn ekr_bound(n: usize, r: usize) -> BoundValue {
    BoundValue {
        value: bs(n as i64 - 1, r as i64 - 1),
        in_range: 2 * r <= n,
    }
}

/// `C(n-1, r-1) - C(n-r-1, r-1) + 1`; in range when `r <= n/2`.
pub fn hm_bound(n: usize, r: usize) -> BoundValue {
    let (n, r) = (n as i64, r as i64);
    let value = bs(n - 1, r - 1) + 1u32 - bs(n - r - 1, r - 1);
    BoundValue {
        value,
        in_range: 2 * r <= n,
    }
}

/// `C(n-3, r-2)`, the bound on the sets missing the common element; in range
/// when `r < n/72`.
pub fn frankl_bound(n: usize, r: usize) -> BoundValue {
    BoundValue {
        value: bs(n as i64 - 3, r as i64 - 2),
        in_range: 72 * r < n,
    }
}

/// `C(n-1,r-1) - C(n-r-1,r-1) + 1 = 1 + sum_{j=2}^{r+1} C(n-j, r-2)`.
pub fn hm_identity_check(n: usize, r: usize) -> Result<bool> {
    if r == 0 || n < r + 1 {
        return Err(Error::Domain {
            check: "hm-identity",
            reason: format!("need n >= r + 1 >= 2, got n={n}, r={r}"),
        });
    }
    let lhs = hm_bound(n, r).value;
    let rhs = (2..=r as i64 + 1).fold(BigUint::one(), |acc, j| acc + bs(n as i64 - j, r as i64 - 2));
    Ok(lhs == rhs)
}

/// Lower bound `(1/(r-1)!) * prod_{i=1}^{r-1} (n - i d)` on every star size of
/// a graph with maximum degree below `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimBound {
    #[serde(serialize_with = "serialize_ratio")]
    pub exact: BigRational,
    #[serde(serialize_with = "serialize_count")]
    pub ceiling: BigCount,
}

pub fn claim_star_lower(n: usize, d: usize, r: usize) -> Result<ClaimBound> {
    if r == 0 {
        return Err(Error::Domain {
            check: "claim-star",
            reason: "r must be at least 1".into(),
        });
    }
    let factors: Vec<i64> = (1..r as i64).map(|i| n as i64 - i * d as i64).collect();
    if factors.iter().any(|&f| f <= 0) {
        return Ok(ClaimBound {
            exact: BigRational::zero(),
            ceiling: BigUint::zero(),
        });
    }
    let num: BigInt = factors.iter().map(|&f| BigInt::from(f)).product();
    let den: BigInt = (1..r as i64).map(BigInt::from).product();
    let exact = BigRational::new(num, den);
    let ceiling = exact.ceil().to_integer().to_biguint().expect("positive product");
    Ok(ClaimBound { exact, ceiling })
}

/// `C(n-r-1, r-1) + C(n-k-r-2, r-2)`, the star-size bound at a spider leaf.
pub fn spider_star_lower(n: usize, k: usize, r: usize) -> BigCount {
    let (n, k, r) = (n as i64, k as i64, r as i64);
    bs(n - r - 1, r - 1) + bs(n - k - r - 2, r - 2)
}

/// `C(n-r-s, r-1) + 1`, the star-size bound at a leaf of a tree with `s`
/// split vertices.
pub fn split_star_lower(n: usize, s: usize, r: usize) -> BigCount {
    bs(n as i64 - r as i64 - s as i64, r as i64 - 1) + 1u32
}

/// Parameters read by the threshold and estimate checks. Each check reads
/// only the fields it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundQuery {
    pub n: Option<usize>,
    pub r: Option<usize>,
    /// Strict upper bound on the maximum degree.
    pub d: Option<usize>,
    /// Edge density: at most `c_density * n` edges.
    pub c_density: Option<f64>,
    /// Number of split vertices.
    pub s: Option<usize>,
    pub k: Option<usize>,
    pub x: Option<f64>,
    pub y: Option<f64>,
}

impl BoundQuery {
    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c_density = Some(c);
        self
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    /// `c = 2 - 2s/r`, exact. `None` unless both `s` and a positive `r` are set.
    pub fn c_split(&self) -> Option<BigRational> {
        match (self.s, self.r) {
            (Some(s), Some(r)) if r > 0 => Some(ratio(2, 1) - ratio(2 * s as i64, r as i64)),
            _ => None,
        }
    }
}

fn need<T: Copy>(theorem: &'static str, field: &'static str, v: Option<T>) -> Result<T> {
    v.ok_or(Error::MissingField { theorem, field })
}

fn real(theorem: &'static str, field: &'static str, v: Option<f64>) -> Result<BigRational> {
    let x = need(theorem, field, v)?;
    BigRational::from_float(x).ok_or(Error::Domain {
        check: theorem,
        reason: format!("{field} must be finite"),
    })
}

/// The theorem hypotheses whose ranges are evaluated here. The string ids
/// are the interface names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hypothesis {
    /// `n > 27/8 d r^2`, maximum degree below `d`.
    BoundedDegree,
    /// `n > 18 c r^3` with `c >= e/36`, at most `cn` edges.
    AverageDegree,
    /// Spiders with `r <= sqrt(n ln 2) - (ln 2)/2`.
    Spider,
    /// Trees with `s > 1` split vertices, `s < r/2` and
    /// `r <= sqrt(n ln c) - (ln c)/2` where `c = 2 - 2s/r`.
    SplitTree,
    /// The side condition `r < n/72` of Frankl's bound.
    Frankl,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 5] = [
        Hypothesis::BoundedDegree,
        Hypothesis::AverageDegree,
        Hypothesis::Spider,
        Hypothesis::SplitTree,
        Hypothesis::Frankl,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Hypothesis::BoundedDegree => "T3",
            Hypothesis::AverageDegree => "T2-avg",
            Hypothesis::Spider => "T5",
            Hypothesis::SplitTree => "T6",
            Hypothesis::Frankl => "T8",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Hypothesis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Hypothesis::ALL
            .into_iter()
            .find(|h| h.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

impl Serialize for Hypothesis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Applicability {
    pub theorem: Hypothesis,
    pub applicable: bool,
    /// Evaluated threshold quantities, for display.
    pub thresholds: BTreeMap<&'static str, f64>,
    /// Names of the conditions that failed.
    pub failed: Vec<&'static str>,
}

/// `sqrt(n ln c) - (ln c)/2` for `c > 1`.
fn log_root_bound(n: usize, c: &BigRational) -> Fixed {
    let lc = if c == &ratio(2, 1) {
        Fixed::ln2()
    } else {
        Fixed::from_ratio(c).ln()
    };
    let root = (&Fixed::from_int(n as i64) * &lc).sqrt();
    &root - &(&lc / &Fixed::from_int(2))
}

/// `r <= bound`, refusing values of `bound` less than the margin above `r`.
fn within(r: usize, bound: &Fixed) -> bool {
    bound.cmp_with_margin(&Fixed::from_int(r as i64)) == Ordering::Greater
}

pub fn hypothesis(h: Hypothesis, q: &BoundQuery) -> Result<Applicability> {
    let id = h.id();
    let mut thresholds = BTreeMap::new();
    let mut failed = Vec::new();
    let n = need(id, "n", q.n)?;
    let r = need(id, "r", q.r)?;
    if r == 0 {
        failed.push("r >= 1");
    }
    match h {
        Hypothesis::BoundedDegree => {
            let d = need(id, "d", q.d)?;
            let n_min = ratio(27 * (d * r * r) as i64, 8);
            thresholds.insert("n_min", ratio_f64(&n_min));
            if d == 0 {
                failed.push("d >= 1");
            }
            if ratio(n as i64, 1) <= n_min {
                failed.push("n > 27/8 d r^2");
            }
        }
        Hypothesis::AverageDegree => {
            let c = real(id, "c_density", q.c_density)?;
            let n_min = &c * ratio(18 * (r * r * r) as i64, 1);
            let c_min = &Fixed::e() / &Fixed::from_int(36);
            thresholds.insert("n_min", ratio_f64(&n_min));
            thresholds.insert("c_min", c_min.to_f64());
            if Fixed::from_ratio(&c).cmp_with_margin(&c_min) != Ordering::Greater {
                failed.push("c >= e/36");
            }
            if ratio(n as i64, 1) <= n_min {
                failed.push("n > 18 c r^3");
            }
        }
        Hypothesis::Spider => {
            let bound = log_root_bound(n, &ratio(2, 1));
            thresholds.insert("r_bound", bound.to_f64());
            if !within(r, &bound) {
                failed.push("r <= sqrt(n ln 2) - (ln 2)/2");
            }
        }
        Hypothesis::SplitTree => {
            let s = need(id, "s", q.s)?;
            thresholds.insert("s_limit", r as f64 / 2.0);
            if s < 2 {
                failed.push("s > 1");
            }
            if 2 * s >= r {
                failed.push("s < r/2");
            }
            match q.c_split() {
                Some(c) if c > BigRational::one() => {
                    let bound = log_root_bound(n, &c);
                    thresholds.insert("c_split", ratio_f64(&c));
                    thresholds.insert("r_bound", bound.to_f64());
                    if !within(r, &bound) {
                        failed.push("r <= sqrt(n ln c) - (ln c)/2");
                    }
                }
                _ => failed.push("c = 2 - 2s/r > 1"),
            }
        }
        Hypothesis::Frankl => {
            thresholds.insert("r_limit", n as f64 / 72.0);
            if 72 * r >= n {
                failed.push("r < n/72");
            }
        }
    }
    Ok(Applicability {
        theorem: h,
        applicable: failed.is_empty(),
        thresholds,
        failed,
    })
}

/// Every `r >= 1` for which [`hypothesis`] holds, with the other fields of `q`.
pub fn rmax(h: Hypothesis, q: &BoundQuery) -> Result<BTreeSet<usize>> {
    let n = need(h.id(), "n", q.n)?;
    // Beyond `cap` every hypothesis fails.
    let cap = match h {
        Hypothesis::BoundedDegree => {
            let d = need(h.id(), "d", q.d)?.max(1);
            (8 * n / (27 * d)).sqrt() + 1
        }
        Hypothesis::AverageDegree => {
            let c = need(h.id(), "c_density", q.c_density)?;
            if c > 0.0 {
                ((n as f64 / (18.0 * c)).cbrt() as usize) + 2
            } else {
                n
            }
        }
        // ln c < 1, so the bound is below sqrt(n).
        Hypothesis::Spider | Hypothesis::SplitTree => n.sqrt() + 1,
        Hypothesis::Frankl => n / 72 + 1,
    };
    let mut out = BTreeSet::new();
    for r in 1..=cap {
        if hypothesis(
            h,
            &BoundQuery {
                r: Some(r),
                ..q.clone()
            },
        )?
        .applicable
        {
            out.insert(r);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Holds,
    Fails,
    /// Both sides are equal at the edge of the domain, where only the weak
    /// inequality is claimed to survive.
    BoundaryEquality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateCheck {
    pub check: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub status: CheckStatus,
}

fn fixed_check(check: &'static str, lhs: Fixed, rhs: Fixed, at_zero: bool) -> EstimateCheck {
    let status = if at_zero {
        CheckStatus::BoundaryEquality
    } else if lhs < rhs {
        CheckStatus::Holds
    } else {
        CheckStatus::Fails
    };
    EstimateCheck {
        check,
        lhs: lhs.to_f64(),
        rhs: rhs.to_f64(),
        status,
    }
}

/// `e^{-x} < 1 - (k/(k+1)) x` for `0 <= x <= 2k/(k+1)^2`, `k >= 1`.
pub fn exp_linear_check(x: &BigRational, k: usize) -> Result<EstimateCheck> {
    let name = "exp-linear";
    let k = k as i64;
    if k < 1 || x.is_negative() || x > &ratio(2 * k, (k + 1) * (k + 1)) {
        return Err(Error::Domain {
            check: name,
            reason: format!("need k >= 1 and 0 <= x <= 2k/(k+1)^2, got x={x}, k={k}"),
        });
    }
    let lhs = (-&Fixed::from_ratio(x)).exp();
    let rhs = Fixed::from_ratio(&(BigRational::one() - ratio(k, k + 1) * x));
    Ok(fixed_check(name, lhs, rhs, x.is_zero()))
}

/// `e^{-((k+1)/k) y} < 1 - y` for `0 <= y <= 2k^2/(k+1)^3`, `k >= 1`.
pub fn exp_linear_scaled_check(y: &BigRational, k: usize) -> Result<EstimateCheck> {
    let name = "exp-linear-scaled";
    let k = k as i64;
    if k < 1 || y.is_negative() || y > &ratio(2 * k * k, (k + 1).pow(3)) {
        return Err(Error::Domain {
            check: name,
            reason: format!("need k >= 1 and 0 <= y <= 2k^2/(k+1)^3, got y={y}, k={k}"),
        });
    }
    let lhs = (-&Fixed::from_ratio(&(ratio(k + 1, k) * y))).exp();
    let rhs = Fixed::from_ratio(&(BigRational::one() - y));
    Ok(fixed_check(name, lhs, rhs, y.is_zero()))
}

/// Exact check of `prod_{i=1}^{r-1} (1 - (r + i d)/n) > r/n` for `r >= 2`,
/// `d >= 2`, `n >= 27 d r^2 / 8`. Reported with `lhs` the product.
pub fn product_check(r: usize, d: usize, n: usize) -> Result<EstimateCheck> {
    let name = "product";
    if r < 2 || d < 2 || 8 * n < 27 * d * r * r {
        return Err(Error::Domain {
            check: name,
            reason: format!("need r >= 2, d >= 2, n >= 27dr^2/8, got r={r}, d={d}, n={n}"),
        });
    }
    let (lhs, rhs) = product_sides(r, d, n);
    let status = if lhs > rhs {
        CheckStatus::Holds
    } else {
        CheckStatus::Fails
    };
    Ok(EstimateCheck {
        check: name,
        lhs: ratio_f64(&lhs),
        rhs: ratio_f64(&rhs),
        status,
    })
}

fn product_sides(r: usize, d: usize, n: usize) -> (BigRational, BigRational) {
    let (r, d, n) = (r as i64, d as i64, n as i64);
    let lhs = (1..r).fold(BigRational::one(), |acc, i| acc * ratio(n - r - i * d, n));
    (lhs, ratio(r, n))
}

/// The star-size lower bound `n^{r-1}/(r-1)! * e^{-(r-1) 2k/(k+1)^2}` for a
/// graph on at least `n(1 - 1/3r)` vertices with maximum degree below `d`,
/// valid when `1/(3r) + rd/n <= 2k^2/(k+1)^3`.
pub fn big_star_lower(n: usize, r: usize, d: usize, k: usize) -> Result<f64> {
    let name = "big-star";
    if n == 0 || r == 0 || k == 0 {
        return Err(Error::Domain {
            check: name,
            reason: "n, r and k must be positive".into(),
        });
    }
    let (ni, ri, di, ki) = (n as i64, r as i64, d as i64, k as i64);
    let y = ratio(1, 3 * ri) + ratio(ri * di, ni);
    if y > ratio(2 * ki * ki, (ki + 1).pow(3)) {
        return Err(Error::Domain {
            check: name,
            reason: format!("1/(3r) + rd/n = {y} exceeds 2k^2/(k+1)^3"),
        });
    }
    let power = BigRational::from_integer(BigInt::from(n).pow(r as u32 - 1));
    let fact: BigInt = (1..ri).map(BigInt::from).product();
    let lead = Fixed::from_ratio(&(power / BigRational::from_integer(fact)));
    let expo = Fixed::from_ratio(&ratio(-(ri - 1) * 2 * ki, (ki + 1) * (ki + 1)));
    Ok((&lead * &expo.exp()).to_f64())
}

/// One line of [`estimate_checks`]: the evaluated check, or why it was not
/// evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateEntry {
    pub check: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<EstimateCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs every estimate whose fields are present in `q`.
pub fn estimate_checks(q: &BoundQuery) -> Vec<EstimateEntry> {
    fn entry(check: &'static str, r: Result<EstimateCheck>) -> EstimateEntry {
        match r {
            Ok(c) => EstimateEntry {
                check,
                result: Some(c),
                value: None,
                error: None,
            },
            Err(e) => EstimateEntry {
                check,
                result: None,
                value: None,
                error: Some(e.to_string()),
            },
        }
    }
    let mut out = Vec::new();
    if let (Some(x), Some(k)) = (q.x, q.k) {
        let r = real("exp-linear", "x", Some(x)).and_then(|x| exp_linear_check(&x, k));
        out.push(entry("exp-linear", r));
    }
    if let (Some(y), Some(k)) = (q.y, q.k) {
        let r = real("exp-linear-scaled", "y", Some(y)).and_then(|y| exp_linear_scaled_check(&y, k));
        out.push(entry("exp-linear-scaled", r));
    }
    if let (Some(r), Some(d), Some(n)) = (q.r, q.d, q.n) {
        out.push(entry("product", product_check(r, d, n)));
        if let Some(k) = q.k {
            out.push(match big_star_lower(n, r, d, k) {
                Ok(v) => EstimateEntry {
                    check: "big-star",
                    result: None,
                    value: Some(v),
                    error: None,
                },
                Err(e) => EstimateEntry {
                    check: "big-star",
                    result: None,
                    value: None,
                    error: Some(e.to_string()),
                },
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    #[serde(serialize_with = "serialize_count")]
    pub lhs: BigCount,
    #[serde(serialize_with = "serialize_count")]
    pub rhs: BigCount,
    pub holds: bool,
}

/// `C(n-1, r-1) < 2 C(n-r-1, r-1)` under the spider hypothesis on `(n, r)`.
pub fn binoms_ineq_check(n: usize, r: usize) -> Result<InequalityCheck> {
    let app = hypothesis(Hypothesis::Spider, &BoundQuery::default().with_n(n).with_r(r))?;
    if !app.applicable {
        return Err(Error::Domain {
            check: "binoms",
            reason: format!("hypothesis fails at n={n}, r={r}: {}", app.failed.join(", ")),
        });
    }
    Ok(binoms_sides(n, r))
}

fn binoms_sides(n: usize, r: usize) -> InequalityCheck {
    let lhs = b(n - 1, r - 1);
    let rhs = bs(n as i64 - r as i64 - 1, r as i64 - 1) * 2u32;
    let holds = lhs < rhs;
    InequalityCheck { lhs, rhs, holds }
}

/// `C(n-1, r-1) <= C(n-r-1, r-1) + C(n-r-s, r-1)` under the split-tree
/// hypothesis on `(n, r, s)`.
pub fn binoms2_ineq_check(n: usize, r: usize, s: usize) -> Result<InequalityCheck> {
    let app = hypothesis(
        Hypothesis::SplitTree,
        &BoundQuery::default().with_n(n).with_r(r).with_s(s),
    )?;
    if !app.applicable {
        return Err(Error::Domain {
            check: "binoms2",
            reason: format!("hypothesis fails at n={n}, r={r}, s={s}: {}", app.failed.join(", ")),
        });
    }
    Ok(binoms2_sides(n, r, s))
}

fn binoms2_sides(n: usize, r: usize, s: usize) -> InequalityCheck {
    let (ni, ri, si) = (n as i64, r as i64, s as i64);
    let lhs = bs(ni - 1, ri - 1);
    let rhs = bs(ni - ri - 1, ri - 1) + bs(ni - ri - si, ri - 1);
    let holds = lhs <= rhs;
    InequalityCheck { lhs, rhs, holds }
}

/// One row of a grid sweep, in the CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridRow {
    #[serde(rename = "theorem-id")]
    pub theorem: String,
    pub parameters: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl GridRow {
    fn new(theorem: &str, parameters: String, lhs: impl ToString, rhs: impl ToString, holds: bool) -> Self {
        GridRow {
            theorem: theorem.to_string(),
            parameters,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds,
        }
    }
}

pub fn write_csv<W: std::io::Write>(rows: &[GridRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

/// The product inequality for `2 <= r, d <= max_rd` and `extra + 1` values of
/// `n` from `ceil(27 d r^2 / 8)`.
pub fn grid_product(max_rd: usize, extra: usize) -> Vec<GridRow> {
    let cells: Vec<(usize, usize)> = (2..=max_rd).flat_map(|r| (2..=max_rd).map(move |d| (r, d))).collect();
    cells
        .par_iter()
        .flat_map_iter(|&(r, d)| {
            let start = (27 * d * r * r).div_ceil(8);
            (start..=start + extra).map(move |n| {
                let (lhs, rhs) = product_sides(r, d, n);
                let holds = lhs > rhs;
                GridRow::new(
                    "product",
                    format!("r={r};d={d};n={n}"),
                    ratio_f64(&lhs),
                    ratio_f64(&rhs),
                    holds,
                )
            })
        })
        .collect()
}

/// `C(n-1,r-1) < 2 C(n-r-1,r-1)` for `4 <= n <= n_max` and every admissible `r`.
pub fn grid_binoms(n_max: usize) -> Vec<GridRow> {
    (4..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let rs = rmax(Hypothesis::Spider, &BoundQuery::default().with_n(n)).expect("n is set");
            rs.into_iter().map(move |r| {
                let c = binoms_sides(n, r);
                GridRow::new("binoms", format!("n={n};r={r}"), c.lhs, c.rhs, c.holds)
            })
        })
        .collect()
}

/// `C(n-1,r-1) <= C(n-r-1,r-1) + C(n-r-s,r-1)` for `2 <= s <= s_max`,
/// `r <= r_max`, `n <= n_max`, on every admissible triple.
pub fn grid_binoms2(s_max: usize, r_max: usize, n_max: usize) -> Vec<GridRow> {
    let pairs: Vec<(usize, usize)> = (2..=s_max)
        .flat_map(|s| (2 * s + 1..=r_max).map(move |r| (s, r)))
        .collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(s, r)| {
            // The bound increases with n, so admissible n form a ray.
            let admissible = |n: usize| {
                hypothesis(
                    Hypothesis::SplitTree,
                    &BoundQuery::default().with_n(n).with_r(r).with_s(s),
                )
                .map(|a| a.applicable)
                .unwrap_or(false)
            };
            let first = first_true(1, n_max + 1, admissible);
            (first..=n_max).map(move |n| {
                let c = binoms2_sides(n, r, s);
                GridRow::new("binoms2", format!("n={n};r={r};s={s}"), c.lhs, c.rhs, c.holds)
            })
        })
        .collect()
}

/// Smallest `x` in `[lo, hi)` with `pred(x)`, for a monotone predicate; `hi`
/// if none.
fn first_true(mut lo: usize, mut hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// The Hilton-Milner identity for all `1 <= r < n <= n_max`.
pub fn grid_hm_identity(n_max: usize) -> Vec<GridRow> {
    (2..=n_max)
        .flat_map(|n| (1..n).map(move |r| (n, r)))
        .map(|(n, r)| {
            let lhs = hm_bound(n, r).value;
            let rhs = (2..=r as i64 + 1).fold(BigUint::one(), |acc, j| acc + bs(n as i64 - j, r as i64 - 2));
            let holds = lhs == rhs;
            GridRow::new("hm-identity", format!("n={n};r={r}"), lhs, rhs, holds)
        })
        .collect()
}

/// Both exponential estimates at `samples` evenly spaced interior points
/// `lo + (max - lo) i / samples`, `i = 1..=samples`, with `lo = 10^-6`, for
/// each `1 <= k <= k_max`.
pub fn grid_exp(k_max: usize, samples: usize) -> Vec<GridRow> {
    let lo = ratio(1, 1_000_000);
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let ki = k as i64;
        let x_max = ratio(2 * ki, (ki + 1) * (ki + 1));
        let y_max = ratio(2 * ki * ki, (ki + 1).pow(3));
        for i in 1..=samples as i64 {
            let t = ratio(i, samples as i64);
            let x = &lo + (&x_max - &lo) * &t;
            let c = exp_linear_check(&x, k).expect("sample inside domain");
            rows.push(GridRow::new(
                "exp-linear",
                format!("k={k};x={}", ratio_f64(&x)),
                c.lhs,
                c.rhs,
                c.status == CheckStatus::Holds,
            ));
            let y = &lo + (&y_max - &lo) * &t;
            let c = exp_linear_scaled_check(&y, k).expect("sample inside domain");
            rows.push(GridRow::new(
                "exp-linear-scaled",
                format!("k={k};y={}", ratio_f64(&y)),
                c.lhs,
                c.rhs,
                c.status == CheckStatus::Holds,
            ));
        }
    }
    rows
}

/// Iterated removal of a maximum-degree vertex (smallest index on ties)
/// while some vertex has degree at least `threshold`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelReport {
    pub threshold: usize,
    pub t: usize,
    pub removed: Vec<usize>,
    /// Degree of each removed vertex at the moment it was removed.
    pub removal_degrees: Vec<usize>,
    /// Original labels of the residual graph's vertices, in order.
    pub residual_vertices: Vec<usize>,
    pub residual_max_degree: usize,
    /// The residual graph in graph6, on the relabeled vertices.
    #[serde(serialize_with = "serialize_graph6")]
    pub residual: Graph,
}

fn serialize_graph6<S: Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_graph6())
}

pub fn peel(g: &Graph, threshold: usize) -> Result<PeelReport> {
    if threshold == 0 {
        return Err(Error::Domain {
            check: "peel",
            reason: "threshold must be at least 1".into(),
        });
    }
    let mut alive = g.vertices();
    let mut removed = Vec::new();
    let mut removal_degrees = Vec::new();
    loop {
        let best = alive
            .iter()
            .map(|v| (g.neighbors(v).intersection(alive).len(), v))
            .max_by_key(|&(deg, v)| (deg, std::cmp::Reverse(v)));
        match best {
            Some((deg, v)) if deg >= threshold => {
                removed.push(v);
                removal_degrees.push(deg);
                alive.remove(v);
            }
            _ => break,
        }
    }
    // A vertex is removed only while it has a neighbor, so one always remains.
    let (residual, residual_vertices) = g.induced(alive)?;
    Ok(PeelReport {
        threshold,
        t: removed.len(),
        removed,
        removal_degrees,
        residual_max_degree: residual.max_degree(),
        residual_vertices,
        residual,
    })
}

/// Result of checking a peel against the density guarantee.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCheck {
    /// `n / (3r)`.
    pub t_bound: f64,
    pub t_within_bound: bool,
    /// Residual keeps at least `n (1 - 1/(3r))` vertices.
    pub residual_large: bool,
}

impl PeelReport {
    /// Replays the removals on `g` and checks every recorded degree and the
    /// final maximum degree.
    pub fn certificates_valid(&self, g: &Graph) -> bool {
        let mut alive = g.vertices();
        for (&v, &deg) in self.removed.iter().zip(&self.removal_degrees) {
            if !alive.contains(v) || g.neighbors(v).intersection(alive).len() != deg || deg < self.threshold {
                return false;
            }
            alive.remove(v);
        }
        let rest: VertexSet = self.residual_vertices.iter().copied().collect();
        self.removed.len() == self.t
            && self.removal_degrees.len() == self.t
            && rest == alive
            && alive
                .iter()
                .all(|v| g.neighbors(v).intersection(alive).len() < self.threshold)
            && self.residual_max_degree < self.threshold
    }

    /// When `g` has at most `c n` edges and the threshold is `3cr` (rounded
    /// up), the number of removals is at most `n / (3r)`. `None` when the
    /// premises do not hold.
    pub fn density_check(&self, g: &Graph, c: f64, r: usize) -> Option<DensityCheck> {
        let c = BigRational::from_float(c)?;
        let n = g.n() as i64;
        if r == 0 || BigRational::from_integer(g.edge_count().into()) > &c * ratio(n, 1) {
            return None;
        }
        let cut = (&c * ratio(3 * r as i64, 1)).ceil().to_integer();
        if cut != BigInt::from(self.threshold) {
            return None;
        }
        let t = self.t as i64;
        let three_r = 3 * r as i64;
        Some(DensityCheck {
            t_bound: n as f64 / three_r as f64,
            t_within_bound: t * three_r <= n,
            residual_large: (n - t) * three_r >= n * (three_r - 1),
        })
    }
}

/// Exact `a <= b` between a count and a rational bound.
pub fn count_at_least(count: &BigCount, bound: &BigRational) -> bool {
    let c = BigRational::from_integer(BigInt::from(count.clone()));
    &c >= bound
}
