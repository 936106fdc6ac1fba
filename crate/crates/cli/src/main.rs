//! `ekr`: batch driver for counts, verdicts, bounds, grids, peeling and tree
//! searches. Every command writes one report in JSON, CSV or plain text.
//!
//! Exit status: 0 when a result was computed (whatever the verdict), 1 on
//! an input error, 2 when a search ran out of budget.

mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ekr_core::bounds::{
    claim_star_lower, ekr_bound, estimate_checks, frankl_bound, grid_binoms, grid_binoms2, grid_exp, grid_hm_identity,
    grid_product, hm_bound, hypothesis, peel, rmax, spider_star_lower, split_star_lower, BoundQuery, Hypothesis,
};
use ekr_core::families::{star_size, FamilyQuery};
use ekr_core::generate::{generate, GraphSpec, SpiderSpec};
use ekr_core::graph::{parse_catalog, VertexSet};
use ekr_core::params::independence_number;
use ekr_core::search::{search_catalog, search_prufer, SearchConfig, SearchKind};
use ekr_core::verify::{
    is_r_ekr, is_r_hk, is_strictly_r_ekr, nonuniform_ekr, spider_order_check, star_sizes, SearchBudget,
    DEFAULT_MAX_NODES,
};
use ekr_core::Graph;

use report::{count_value, BoundsOut, CliError, CountOut, GridOut, PeelOut, Report, StarOut};

#[derive(Parser)]
#[command(
    name = "ekr",
    version,
    about = "Intersecting families of independent sets: counts, verdicts and bounds"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Node limit for each family search.
    #[arg(long, global = true, env = "EKR_BUDGET", default_value_t = DEFAULT_MAX_NODES)]
    budget: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct GraphArg {
    /// Generator string (`spider:2,2,2`, `path:5`, `kpartite:3,3`, ...) or a
    /// file holding one graph in graph6 or edge-list form.
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand)]
enum Command {
    /// Count independent r-sets, optionally through one vertex and avoiding others.
    Count {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        anchor: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<usize>,
    },
    /// Star sizes s_r(v) for one vertex or all of them.
    Star {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Exact maximum intersecting family of independent r-sets against the largest star.
    Ekr {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: usize,
    },
    /// Like `ekr`, and also decide whether every maximum family is a star.
    StrictEkr {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: usize,
    },
    /// Maximum intersecting family of independent sets of any size.
    NonuniformEkr {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Whether s_r peaks at a leaf of a tree; every feasible r when `--r` is absent.
    Hk {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Star-size ordering of a spider's centre, leg vertices and leaves.
    SpiderOrder {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Hypothesis ranges, closed-form bounds and elementary estimates.
    Bounds(BoundsArgs),
    /// Sweep an inequality over a parameter grid.
    Grid(GridArgs),
    /// Strip maximum-degree vertices until every degree is below a threshold.
    Peel {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        threshold: Option<usize>,
        /// Edge density; with `--r` sets the threshold to ceil(3 c r).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Look for trees whose s_r is maximised only away from the leaves.
    SearchHk(SearchArgs),
    /// Look for graphs with an intersecting family larger than every star.
    SearchEkr(SearchArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// T3, T2-avg, T5, T6 or T8.
    #[arg(long)]
    theorem: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridName {
    Product,
    Binoms,
    Binoms2,
    HmIdentity,
    Exp,
    All,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_enum)]
    name: GridName,
    /// Largest r and d in the product grid.
    #[arg(long, default_value_t = 8)]
    max_rd: usize,
    /// Values of n per (r, d) cell, or sample points per k.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Largest n; defaults to 5000, or 60 for the identity grid.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 5)]
    s_max: usize,
    #[arg(long, default_value_t = 16)]
    r_max: usize,
    #[arg(long, default_value_t = 10)]
    k_max: usize,
}

#[derive(Args)]
struct SearchArgs {
    /// Sweep every labeled tree up to this order (at most 10).
    #[arg(long, conflicts_with = "catalog")]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    /// graph6 file, one graph per line, or a generator string.
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long, default_value_t = 1)]
    r_min: usize,
    #[arg(long)]
    r_max: usize,
}

fn load_graphs(source: &str) -> Result<Vec<Graph>, CliError> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {source}: {e}")))?;
        Ok(parse_catalog(&text)?)
    } else {
        Ok(vec![generate(source)?])
    }
}

fn load_graph(source: &str) -> Result<Graph, CliError> {
    let mut graphs = load_graphs(source)?;
    match graphs.len() {
        1 => Ok(graphs.remove(0)),
        k => Err(CliError::input(format!(
            "{source} holds {k} graphs; this command takes one"
        ))),
    }
}

fn spider_of(source: &str) -> Result<SpiderSpec, CliError> {
    match source.parse::<GraphSpec>() {
        Ok(GraphSpec::Spider(legs)) => Ok(SpiderSpec::new(legs)?),
        _ => Err(CliError::input(format!(
            "spider-order needs a `spider:` generator string, got {source}"
        ))),
    }
}

fn feasible_r(g: &Graph, r: Option<usize>) -> Result<Vec<usize>, CliError> {
    Ok(match r {
        Some(r) => vec![r],
        None => (1..=independence_number(g)?).collect(),
    })
}

fn run(cli: Cli) -> Result<Box<dyn Report>, CliError> {
    let budget = SearchBudget::new(cli.common.budget)?;
    Ok(match cli.command {
        Command::Count { g, r, anchor, forbid } => {
            let graph = load_graph(&g.graph)?;
            let mut q = FamilyQuery::new(&graph, r);
            if let Some(v) = anchor {
                q = q.anchor(v);
            }
            q = q.forbid(forbid.iter().copied().collect::<VertexSet>());
            let count = q.count()?;
            Box::new(CountOut {
                graph: g.graph,
                r,
                anchor,
                forbid,
                count,
            })
        }
        Command::Star { g, r, vertex } => {
            let graph = load_graph(&g.graph)?;
            match vertex {
                Some(v) => Box::new(StarOut::One {
                    vertex: v,
                    r,
                    result: star_size(&graph, v, r)?,
                }),
                None => Box::new(StarOut::all(r, star_sizes(&graph, r)?)),
            }
        }
        Command::Ekr { g, r } => Box::new(is_r_ekr(&load_graph(&g.graph)?, r, budget)?),
        Command::StrictEkr { g, r } => Box::new(is_strictly_r_ekr(&load_graph(&g.graph)?, r, budget)?),
        Command::NonuniformEkr { g } => Box::new(nonuniform_ekr(&load_graph(&g.graph)?, budget)?),
        Command::Hk { g, r } => {
            let t = load_graph(&g.graph)?;
            if !t.is_tree() {
                return Err(ekr_core::Error::NotTree.into());
            }
            let reports = feasible_r(&t, r)?
                .into_iter()
                .map(|r| is_r_hk(&t, r))
                .collect::<Result<Vec<_>, _>>()?;
            Box::new(reports)
        }
        Command::SpiderOrder { g, r } => {
            let spec = spider_of(&g.graph)?;
            let rs = feasible_r(&spec.graph()?, r)?;
            Box::new(
                rs.into_iter()
                    .map(|r| spider_order_check(&spec, r))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        Command::Bounds(a) => Box::new(bounds(a)?),
        Command::Grid(a) => Box::new(grid(a)),
        Command::Peel { g, threshold, c, r } => {
            let graph = load_graph(&g.graph)?;
            let threshold = match (threshold, c, r) {
                (Some(t), _, _) => t,
                (None, Some(c), Some(r)) if c > 0.0 && c.is_finite() => (3.0 * c * r as f64).ceil() as usize,
                _ => {
                    return Err(CliError::input(
                        "peel needs --threshold, or a positive --c together with --r",
                    ))
                }
            };
            let report = peel(&graph, threshold)?;
            let density = match (c, r) {
                (Some(c), Some(r)) => report.density_check(&graph, c, r),
                _ => None,
            };
            Box::new(PeelOut {
                certificates_valid: report.certificates_valid(&graph),
                report,
                density,
            })
        }
        Command::SearchHk(a) => Box::new(search(SearchKind::Hk, a, budget)?),
        Command::SearchEkr(a) => Box::new(search(SearchKind::Ekr, a, budget)?),
    })
}

fn bounds(a: BoundsArgs) -> Result<BoundsOut, CliError> {
    let query = BoundQuery {
        n: a.n,
        r: a.r,
        d: a.d,
        c_density: a.c,
        s: a.s,
        k: a.k,
        x: a.x,
        y: a.y,
    };
    let mut out = BoundsOut {
        query: query.clone(),
        ..Default::default()
    };
    if let Some(id) = &a.theorem {
        let h: Hypothesis = id.parse()?;
        out.theorem = Some(h);
        if query.r.is_some() {
            out.applicability = Some(hypothesis(h, &query)?);
        } else {
            let rs = rmax(h, &query)?;
            let r_max = rs.iter().next_back().copied();
            let at = BoundQuery {
                r: Some(r_max.unwrap_or(1)),
                ..query.clone()
            };
            out.thresholds = Some(hypothesis(h, &at)?.thresholds);
            out.r_values = Some(rs.into_iter().collect());
            out.r_max = r_max;
        }
    }
    let mut closed = BTreeMap::new();
    if let (Some(n), Some(r)) = (a.n, a.r) {
        for (name, b) in [
            ("ekr", ekr_bound(n, r)),
            ("hilton-milner", hm_bound(n, r)),
            ("frankl", frankl_bound(n, r)),
        ] {
            closed.insert(name, serde_json::to_value(b).expect("bound serializes"));
        }
        if let Some(d) = a.d {
            closed.insert(
                "claim-star",
                serde_json::to_value(claim_star_lower(n, d, r)?).expect("bound serializes"),
            );
        }
        if let Some(k) = a.k {
            closed.insert("spider-leaf", count_value(&spider_star_lower(n, k, r)));
        }
        if let Some(s) = a.s {
            closed.insert("split-leaf", count_value(&split_star_lower(n, s, r)));
        }
    }
    out.closed_forms = closed;
    out.estimates = estimate_checks(&query);
    if out.theorem.is_none() && out.closed_forms.is_empty() && out.estimates.is_empty() {
        return Err(CliError::input(
            "bounds needs --theorem, or enough of --n --r --d --k --s --x --y for a check",
        ));
    }
    Ok(out)
}

fn grid(a: GridArgs) -> GridOut {
    let n_max = |default| a.n_max.unwrap_or(default);
    let mut rows = Vec::new();
    let all = a.name == GridName::All;
    if all || a.name == GridName::Product {
        rows.extend(grid_product(a.max_rd, a.samples.saturating_sub(1)));
    }
    if all || a.name == GridName::Binoms {
        rows.extend(grid_binoms(n_max(5000)));
    }
    if all || a.name == GridName::Binoms2 {
        rows.extend(grid_binoms2(a.s_max, a.r_max, n_max(5000)));
    }
    if all || a.name == GridName::HmIdentity {
        rows.extend(grid_hm_identity(n_max(60)));
    }
    if all || a.name == GridName::Exp {
        rows.extend(grid_exp(a.k_max, a.samples));
    }
    GridOut::new(rows)
}

fn search(kind: SearchKind, a: SearchArgs, budget: SearchBudget) -> Result<ekr_core::search::SearchSummary, CliError> {
    let cfg = SearchConfig {
        kind,
        r_min: a.r_min,
        r_max: a.r_max,
        budget,
    };
    match (a.n_max, a.catalog) {
        (Some(n_max), None) => Ok(search_prufer(&cfg, a.n_min, n_max)?),
        (None, Some(src)) => Ok(search_catalog(&cfg, &load_graphs(&src)?)),
        _ => Err(CliError::input("search needs exactly one of --n-max or --catalog")),
    }
}

fn emit(body: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            fs::write(path, body).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::input(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = cli.common.format;
    let output = cli.common.output.clone();
    let result = run(cli).and_then(|report| {
        let body = report.render(format)?;
        emit(&body, output.as_deref())?;
        Ok(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
