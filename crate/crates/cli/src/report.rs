//! Report types and their JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::Value;

use ekr_core::bounds::{
    write_csv, Applicability, BoundQuery, DensityCheck, EstimateEntry, GridRow, Hypothesis, PeelReport,
};
use ekr_core::families::CountResult;
use ekr_core::search::{FindingDetail, SearchSummary};
use ekr_core::verify::{EkrReport, HkReport, SpiderOrderReport, Verdict};
use ekr_core::BigCount;

use crate::Format;

#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<ekr_core::Error> for CliError {
    fn from(e: ekr_core::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError(format!("csv: {e}"))
    }
}

/// A count as a JSON number when it fits in `u64`, otherwise as a decimal string.
pub fn count_value(c: &BigCount) -> Value {
    match u64::try_from(c) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(c.to_string()),
    }
}

fn csv_of<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

pub trait Report {
    fn json(&self) -> String;
    fn csv(&self) -> Result<String, CliError>;
    fn text(&self) -> String;

    fn exit_code(&self) -> u8 {
        0
    }

    fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.json()),
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }
}

#[derive(Serialize)]
pub struct CountOut {
    pub graph: String,
    pub r: usize,
    pub anchor: Option<usize>,
    pub forbid: Vec<usize>,
    pub count: u128,
}

impl Report for CountOut {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row<'a> {
            graph: &'a str,
            r: usize,
            anchor: String,
            count: u128,
        }
        let anchor = self.anchor.map(|v| v.to_string()).unwrap_or_default();
        csv_of([Row {
            graph: &self.graph,
            r: self.r,
            anchor,
            count: self.count,
        }])
    }

    fn text(&self) -> String {
        format!("{}\n", self.count)
    }
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum StarOut {
    One {
        vertex: usize,
        r: usize,
        #[serde(flatten)]
        result: CountResult,
    },
    All {
        r: usize,
        star_sizes: Vec<u128>,
        max_star_vertex: usize,
        max_star_size: u128,
    },
}

impl StarOut {
    pub fn all(r: usize, star_sizes: Vec<u128>) -> Self {
        let max_star_size = star_sizes.iter().copied().max().unwrap_or(0);
        let max_star_vertex = star_sizes.iter().position(|&s| s == max_star_size).unwrap_or(0);
        StarOut::All {
            r,
            star_sizes,
            max_star_vertex,
            max_star_size,
        }
    }

    fn rows(&self) -> Vec<(usize, String)> {
        match self {
            StarOut::One { vertex, result, .. } => vec![(*vertex, result.count.to_string())],
            StarOut::All { star_sizes, .. } => star_sizes.iter().enumerate().map(|(v, s)| (v, s.to_string())).collect(),
        }
    }
}

impl Report for StarOut {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row {
            vertex: usize,
            star_size: String,
        }
        csv_of(
            self.rows()
                .into_iter()
                .map(|(vertex, star_size)| Row { vertex, star_size }),
        )
    }

    fn text(&self) -> String {
        match self {
            StarOut::One { result, .. } => format!("{}\n", result.count),
            StarOut::All { .. } => self.rows().into_iter().map(|(v, s)| format!("{v} {s}\n")).collect(),
        }
    }
}

impl Report for EkrReport {
    fn json(&self) -> String {
        self.to_json() + "\n"
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row {
            r: String,
            verdict: Verdict,
            max_star_vertex: usize,
            max_star_size: String,
            max_intersecting_size: String,
            nodes_explored: u64,
        }
        csv_of([Row {
            r: self.r.map(|r| r.to_string()).unwrap_or_default(),
            verdict: self.verdict,
            max_star_vertex: self.max_star_vertex,
            max_star_size: self.max_star_size.to_string(),
            max_intersecting_size: self.max_intersecting_size.to_string(),
            nodes_explored: self.nodes_explored,
        }])
    }

    fn text(&self) -> String {
        let verdict = serde_json::to_value(self.verdict).expect("verdict serializes");
        let mut s = String::new();
        if let Some(r) = self.r {
            let _ = writeln!(s, "r: {r}");
        }
        let _ = writeln!(s, "verdict: {}", verdict.as_str().unwrap_or_default());
        let _ = writeln!(s, "max star: {} at vertex {}", self.max_star_size, self.max_star_vertex);
        let _ = writeln!(s, "max intersecting: {}", self.max_intersecting_size);
        let _ = writeln!(s, "nodes explored: {}", self.nodes_explored);
        let _ = writeln!(s, "witness:");
        for set in &self.witness {
            let _ = writeln!(s, "  {set}");
        }
        s
    }

    fn exit_code(&self) -> u8 {
        if self.verdict == Verdict::BudgetExceeded {
            2
        } else {
            0
        }
    }
}

impl Report for Vec<HkReport> {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row {
            r: usize,
            vertex: usize,
            star_size: String,
            best: bool,
        }
        csv_of(self.iter().flat_map(|rep| {
            rep.per_vertex.iter().map(|(&vertex, c)| Row {
                r: rep.r,
                vertex,
                star_size: c.to_string(),
                best: vertex == rep.best_vertex,
            })
        }))
    }

    fn text(&self) -> String {
        self.iter()
            .map(|rep| {
                let tag = if rep.best_is_leaf { "hk" } else { "not hk" };
                format!(
                    "r={} best_vertex={} s_r={} {tag}\n",
                    rep.r, rep.best_vertex, rep.per_vertex[&rep.best_vertex]
                )
            })
            .collect()
    }
}

impl Report for Vec<SpiderOrderReport> {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row {
            r: usize,
            part: u8,
            smaller: usize,
            larger: usize,
            s_smaller: u128,
            s_larger: u128,
        }
        csv_of(self.iter().flat_map(|rep| {
            rep.violations.iter().map(|v| Row {
                r: rep.r,
                part: v.part,
                smaller: v.smaller,
                larger: v.larger,
                s_smaller: v.s_smaller,
                s_larger: v.s_larger,
            })
        }))
    }

    fn text(&self) -> String {
        self.iter()
            .map(|rep| {
                format!(
                    "r={} comparisons={} violations={}\n",
                    rep.r,
                    rep.comparisons,
                    rep.violations.len()
                )
            })
            .collect()
    }
}

#[derive(Serialize, Default)]
pub struct BoundsOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Hypothesis>,
    pub query: BoundQuery,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub applicability: Option<Applicability>,
    /// Every admissible `r`, when no `r` was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_values: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<BTreeMap<&'static str, f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub closed_forms: BTreeMap<&'static str, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub estimates: Vec<EstimateEntry>,
}

impl BoundsOut {
    fn lines(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if let Some(h) = self.theorem {
            out.push(("theorem".into(), h.id().into()));
        }
        if let Some(a) = &self.applicability {
            out.push(("applicable".into(), a.applicable.to_string()));
            for (k, v) in &a.thresholds {
                out.push((k.to_string(), v.to_string()));
            }
            for f in &a.failed {
                out.push(("failed".into(), f.to_string()));
            }
        }
        if let Some(rs) = &self.r_values {
            out.push((
                "r_values".into(),
                rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "),
            ));
        }
        if self.r_values.is_some() {
            out.push((
                "r_max".into(),
                self.r_max.map(|r| r.to_string()).unwrap_or_else(|| "none".into()),
            ));
        }
        for (k, v) in self.thresholds.iter().flatten() {
            out.push((k.to_string(), v.to_string()));
        }
        for (k, v) in &self.closed_forms {
            out.push((k.to_string(), v.to_string()));
        }
        for e in &self.estimates {
            out.push((
                e.check.to_string(),
                serde_json::to_string(e).expect("estimate serializes"),
            ));
        }
        out
    }
}

impl Report for BoundsOut {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row {
            key: String,
            value: String,
        }
        csv_of(self.lines().into_iter().map(|(key, value)| Row { key, value }))
    }

    fn text(&self) -> String {
        self.lines().into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

#[derive(Serialize)]
pub struct GridOut {
    pub total: usize,
    pub failed: usize,
    pub rows: Vec<GridRow>,
}

impl GridOut {
    pub fn new(rows: Vec<GridRow>) -> Self {
        GridOut {
            total: rows.len(),
            failed: rows.iter().filter(|r| !r.holds).count(),
            rows,
        }
    }
}

impl Report for GridOut {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut buf = Vec::new();
        write_csv(&self.rows, &mut buf).map_err(|e| CliError::input(e.to_string()))?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    fn text(&self) -> String {
        let mut s = format!("rows: {}\nfailed: {}\n", self.total, self.failed);
        for row in self.rows.iter().filter(|r| !r.holds) {
            let _ = writeln!(s, "  {} {}: {} vs {}", row.theorem, row.parameters, row.lhs, row.rhs);
        }
        s
    }
}

#[derive(Serialize)]
pub struct PeelOut {
    pub report: PeelReport,
    pub certificates_valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityCheck>,
}

impl Report for PeelOut {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row {
            step: usize,
            vertex: usize,
            degree: usize,
        }
        let r = &self.report;
        csv_of(
            r.removed
                .iter()
                .zip(&r.removal_degrees)
                .enumerate()
                .map(|(i, (&vertex, &degree))| Row {
                    step: i + 1,
                    vertex,
                    degree,
                }),
        )
    }

    fn text(&self) -> String {
        let r = &self.report;
        let mut s = format!(
            "threshold: {}\nremoved: {}\nresidual max degree: {}\ncertificates valid: {}\n",
            r.threshold, r.t, r.residual_max_degree, self.certificates_valid
        );
        if let Some(d) = &self.density {
            let _ = writeln!(s, "t <= n/(3r) = {}: {}", d.t_bound, d.t_within_bound);
        }
        s
    }
}

impl Report for SearchSummary {
    fn json(&self) -> String {
        pretty(self)
    }

    fn csv(&self) -> Result<String, CliError> {
        #[derive(Serialize)]
        struct Row<'a> {
            certificate: &'a str,
            n: usize,
            r: usize,
            graph6: &'a str,
            detail: String,
        }
        csv_of(self.findings.iter().map(|f| Row {
            certificate: &f.certificate,
            n: f.n,
            r: f.r,
            graph6: &f.graph6,
            detail: serde_json::to_string(&f.detail).expect("finding serializes"),
        }))
    }

    fn text(&self) -> String {
        let mut s = format!(
            "instances: {}\ndistinct: {}\nchecks: {}\nbudget exceeded: {}\nfindings: {}\n",
            self.instances,
            self.distinct,
            self.checks,
            self.budget_exceeded,
            self.findings.len()
        );
        for f in &self.findings {
            let what = match &f.detail {
                FindingDetail::Hk {
                    best_vertex,
                    max_value,
                    best_leaf_value,
                } => {
                    format!("max {max_value} at {best_vertex}, best leaf {best_leaf_value}")
                }
                FindingDetail::Ekr {
                    max_star_size,
                    max_intersecting_size,
                    ..
                } => {
                    format!("intersecting {max_intersecting_size} > star {max_star_size}")
                }
            };
            let _ = writeln!(s, "  {} r={}: {what}", f.graph6, f.r);
        }
        for note in &self.skipped {
            let _ = writeln!(s, "  skipped {note}");
        }
        s
    }
}
