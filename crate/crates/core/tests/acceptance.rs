//! Acceptance suite: one PASS/FAIL line per criterion. The run fails on any
//! failure not marked as known.
//!
//! Runs with `harness = false` so the lines reach the terminal uncaptured.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use ekr_core::bounds::{
    grid_binoms, grid_binoms2, grid_exp, grid_hm_identity, grid_product, peel, rmax, BoundQuery, GridRow, Hypothesis,
};
use ekr_core::families::{count_path_rsets, star_profiles, star_size_enumeration, star_size_tree_dp, FamilyQuery};
use ekr_core::generate::{generate, path, spider_compositions, SpiderSpec};
use ekr_core::params::independence_number;
use ekr_core::search::{
    free_trees, prufer_certificates, prufer_decode, search_catalog, search_prufer, tree_certificate,
};
use ekr_core::search::{SearchConfig, SearchKind};
use ekr_core::verify::{
    is_r_ekr, is_strictly_r_ekr, max_nonstar_intersecting, nonuniform_ekr, spider_order_check, SearchBudget, Verdict,
};
use ekr_core::{binom, Graph};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Marker prefix for a failure whose cause is understood and documented:
/// the criterion, read literally, is false at the listed parameters.
const KNOWN: &str = "known: ";

fn known(msg: String) -> Outcome {
    Err(format!("{KNOWN}{msg}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn b(n: usize, k: usize) -> BigUint {
    binom(n as i64, k as i64)
}

fn bi(n: i64, k: i64) -> BigUint {
    binom(n, k)
}

fn budget() -> SearchBudget {
    SearchBudget::new(200_000_000).unwrap()
}

fn all_spiders(max_n: usize) -> Vec<SpiderSpec> {
    (3..max_n)
        .flat_map(spider_compositions)
        .map(|legs| SpiderSpec::new(legs).unwrap())
        .collect()
}

fn ekr_reproduction() -> Outcome {
    let mut cases = 0;
    let mut strict_mismatch = Vec::new();
    for n in 2..=9usize {
        let g = Graph::empty(n).unwrap();
        for r in 1..=n / 2 {
            let rep = is_strictly_r_ekr(&g, r, budget()).map_err(|e| e.to_string())?;
            ensure(rep.max_intersecting_size == b(n - 1, r - 1), || {
                format!(
                    "n={n} r={r}: max {} != C({}, {})",
                    rep.max_intersecting_size,
                    n - 1,
                    r - 1
                )
            })?;
            ensure(rep.verdict.is_ekr(), || {
                format!("n={n} r={r}: verdict {:?}", rep.verdict)
            })?;
            let strict = rep.verdict == Verdict::StrictlyEkr;
            if strict != (2 * r < n) {
                strict_mismatch.push((n, r));
            }
            cases += 1;
        }
    }
    if strict_mismatch.is_empty() {
        return Ok(format!("{cases} (n, r) pairs"));
    }
    let listed = format!("strict verdict differs from `r < n/2` at (n, r) in {strict_mismatch:?}");
    if strict_mismatch == [(2, 1)] {
        // Ground set {0, 1}: the only maximum families are {{0}} and {{1}},
        // both full stars, so n = 2r does not yield a non-star maximum here.
        known(format!(
            "{listed}; n = 2, r = 1 is strictly EKR since both maximum families are full stars"
        ))
    } else {
        Err(listed)
    }
}

fn hilton_milner() -> Outcome {
    let mut cases = 0;
    let mut mismatch = Vec::new();
    for n in 2..=8usize {
        let g = Graph::empty(n).unwrap();
        for r in 1..=n / 2 {
            let rep = max_nonstar_intersecting(&g, r, budget()).map_err(|e| e.to_string())?;
            ensure(rep.complete, || format!("n={n} r={r}: budget exhausted"))?;
            let want = b(n - 1, r - 1) + 1u32 - bi(n as i64 - r as i64 - 1, r as i64 - 1);
            if BigUint::from(rep.max_nonstar_size) != want {
                mismatch.push((n, r, rep.max_nonstar_size));
            }
            cases += 1;
        }
    }
    if mismatch.is_empty() {
        return Ok(format!("{cases} (n, r) pairs"));
    }
    let listed = format!("non-star maximum differs from the closed form at (n, r, found) in {mismatch:?}");
    if mismatch.iter().all(|&(_, r, found)| r == 1 && found == 0) && mismatch.len() == 7 {
        // Two distinct singletons are disjoint, so a non-empty intersecting
        // family of 1-sets is a single set and has a center. The closed form
        // gives 1 at r = 1; the true maximum is 0. Every r >= 2 matches.
        known(format!(
            "{listed}; at r = 1 no non-star family exists, all {} pairs with r >= 2 match",
            cases - 7
        ))
    } else {
        Err(listed)
    }
}

fn counting_oracles() -> Outcome {
    let mut checks = 0;
    for m in 1..=18usize {
        let p = path(m).unwrap();
        for r in 0..=m {
            let listed = FamilyQuery::new(&p, r).count().map_err(|e| e.to_string())?;
            ensure(count_path_rsets(m, r) == BigUint::from(listed), || {
                format!("path m={m} r={r}")
            })?;
            checks += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let n = rng.gen_range(2..=16);
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        let t = prufer_decode(&seq).unwrap();
        let alpha = independence_number(&t).unwrap();
        for v in 0..n {
            for r in 1..=alpha {
                let dp = star_size_tree_dp(&t, v, r).unwrap().count;
                let en = star_size_enumeration(&t, v, r).unwrap().count;
                ensure(dp == en, || {
                    format!("tree {seq:?} v={v} r={r}: dp {dp} vs enumeration {en}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact comparisons"))
}

fn spider_leaf_bound() -> Outcome {
    let mut checks = 0;
    let spiders = all_spiders(14);
    for spec in &spiders {
        let g = spec.graph().unwrap();
        let (n, k) = (spec.n() as i64, spec.k() as i64);
        let alpha = independence_number(&g).unwrap();
        let prof = star_profiles(&g, alpha).unwrap();
        for leg in 0..spec.k() {
            let v = spec.leaf(leg);
            for r in 1..=alpha as i64 {
                let bound = bi(n - r - 1, r - 1) + bi(n - k - r - 2, r - 2);
                let s = BigUint::from(prof[v][r as usize]);
                ensure(s >= bound, || {
                    format!("legs {:?} leaf {v} r={r}: s_r={s} < {bound}", spec.legs())
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{} spiders, {checks} (leaf, r) checks, 0 violations",
        spiders.len()
    ))
}

fn spider_order() -> Outcome {
    let mut comparisons = 0;
    let spiders = all_spiders(13);
    for spec in &spiders {
        let alpha = independence_number(&spec.graph().unwrap()).unwrap();
        for r in 1..=alpha {
            let rep = spider_order_check(spec, r).map_err(|e| e.to_string())?;
            ensure(rep.holds(), || {
                format!("legs {:?} r={r}: {:?}", spec.legs(), rep.violations)
            })?;
            comparisons += rep.comparisons;
        }
    }
    Ok(format!(
        "{} spiders, {comparisons} comparisons, 0 violations",
        spiders.len()
    ))
}

fn spider_ekr() -> Outcome {
    let mut checks = 0;
    for n in 7..=12usize {
        let rs = rmax(Hypothesis::Spider, &BoundQuery::default().with_n(n)).unwrap();
        for legs in spider_compositions(n - 1) {
            let g = SpiderSpec::new(legs.clone()).unwrap().graph().unwrap();
            for &r in &rs {
                let rep = is_r_ekr(&g, r, budget()).map_err(|e| e.to_string())?;
                ensure(rep.verdict == Verdict::Ekr, || {
                    format!("legs {legs:?} r={r}: {:?}", rep.verdict)
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (spider, r) verdicts"))
}

fn split_leaf_bound() -> Outcome {
    // The Prüfer sweep is exhaustive but n^(n-2) labeled trees at n = 11 is
    // 2.4e9; the free-tree catalog is checked against it where it is feasible.
    for n in 1..=9 {
        let free: BTreeSet<String> = free_trees(n)
            .unwrap()
            .iter()
            .map(|t| tree_certificate(t).unwrap())
            .collect();
        ensure(free == prufer_certificates(n).unwrap(), || {
            format!("tree catalog differs from Prüfer sweep at n={n}")
        })?;
    }
    let mut trees = 0;
    let mut checks = 0;
    let mut violations = Vec::new();
    for n in 1..=11usize {
        for t in free_trees(n).unwrap() {
            let s = t.split_vertices().len();
            if s < 2 {
                continue;
            }
            trees += 1;
            let alpha = independence_number(&t).unwrap();
            let prof = star_profiles(&t, alpha).unwrap();
            for v in t.leaves().iter() {
                for (r, &count) in prof[v].iter().enumerate().skip(2) {
                    let bound = bi(n as i64 - r as i64 - s as i64, r as i64 - 1) + 1u32;
                    checks += 1;
                    if BigUint::from(count) < bound {
                        violations.push(format!("{} leaf {v} r={r}: {count} < {bound}", t.to_graph6()));
                    }
                }
            }
        }
    }
    ensure(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    Ok(format!(
        "{trees} trees, {checks} (leaf, r) checks, catalog matches Prüfer sweep for n <= 9"
    ))
}

fn multipartite_control() -> Outcome {
    let k33 = generate("kpartite:3,3").unwrap();
    let rep = is_r_ekr(&k33, 2, budget()).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Verdict::NotEkr, || {
        format!("K_3,3 r=2: {:?}", rep.verdict)
    })?;
    ensure(
        rep.max_intersecting_size == BigUint::from(3u32) && rep.max_star_size == BigUint::from(2u32),
        || format!("K_3,3: max {} star {}", rep.max_intersecting_size, rep.max_star_size),
    )?;
    let mut checks = 0;
    for a in 1..=4usize {
        for c in a..=4usize {
            let g = generate(&format!("kpartite:{a},{c}")).unwrap();
            let alpha = a.max(c);
            for r in (1..=alpha).filter(|r| 2 * r <= alpha) {
                let rep = is_r_ekr(&g, r, budget()).map_err(|e| e.to_string())?;
                ensure(rep.verdict == Verdict::Ekr, || {
                    format!("K_{a},{c} r={r}: {:?}", rep.verdict)
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("K_3,3 gives 3 vs 2; {checks} bipartite cases are ekr"))
}

fn peeling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..100 {
        let c = if i % 2 == 0 { 1usize } else { 2 };
        let r = if i % 4 < 2 { 2usize } else { 3 };
        let n = rng.gen_range(10..=60);
        let m = rng.gen_range(0..=c * n).min(n * (n - 1) / 2);
        let mut edges = BTreeSet::new();
        while edges.len() < m {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            // Skew towards low labels so some vertices get large degree.
            let u = u * u / n;
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let rep = peel(&g, 3 * c * r).map_err(|e| e.to_string())?;
        ensure(rep.certificates_valid(&g), || {
            format!("graph {i}: invalid certificates")
        })?;
        ensure(rep.residual_max_degree < 3 * c * r, || {
            format!("graph {i}: residual degree {}", rep.residual_max_degree)
        })?;
        let d = rep
            .density_check(&g, c as f64, r)
            .ok_or_else(|| format!("graph {i}: density premises"))?;
        ensure(d.t_within_bound, || {
            format!("graph {i}: t={} > n/(3r)={}", rep.t, d.t_bound)
        })?;
    }
    Ok("100 graphs".into())
}

fn grids() -> Outcome {
    let mut total = 0;
    let mut check = |name: &str, rows: Vec<GridRow>| -> Result<(), String> {
        let bad: Vec<&GridRow> = rows.iter().filter(|r| !r.holds).collect();
        total += rows.len();
        ensure(!rows.is_empty() && bad.is_empty(), || {
            format!(
                "{name}: {} of {} rows fail, first {:?}",
                bad.len(),
                rows.len(),
                bad.first()
            )
        })
    };
    check("product", grid_product(8, 199))?;
    check("binoms", grid_binoms(5000))?;
    check("binoms2", grid_binoms2(5, 16, 5000))?;
    check("hm-identity", grid_hm_identity(60))?;
    check("exp", grid_exp(10, 200))?;
    Ok(format!("{total} rows, 0 failures"))
}

fn hk_ground_truth() -> Outcome {
    let cfg = SearchConfig {
        kind: SearchKind::Hk,
        r_min: 1,
        r_max: 4,
        budget: budget(),
    };
    let sweep = search_prufer(&cfg, 1, 8).map_err(|e| e.to_string())?;
    ensure(sweep.findings.is_empty(), || {
        format!("{} trees fail, first {:?}", sweep.findings.len(), sweep.findings[0])
    })?;
    ensure(sweep.instances >= 8u64.pow(6), || {
        format!("only {} labeled trees", sweep.instances)
    })?;
    let spiders: Vec<Graph> = all_spiders(14).iter().map(|s| s.graph().unwrap()).collect();
    let all_r = SearchConfig { r_max: 14, ..cfg };
    let s = search_catalog(&all_r, &spiders);
    ensure(s.findings.is_empty() && s.skipped.is_empty(), || {
        format!("spider findings {:?}", s.findings.first())
    })?;
    Ok(format!(
        "{} labeled trees ({} classes), {} spiders ({} classes), 0 findings",
        sweep.instances,
        sweep.distinct,
        spiders.len(),
        s.distinct
    ))
}

fn nonuniform() -> Outcome {
    for n in 1..=5usize {
        let rep = nonuniform_ekr(&Graph::empty(n).unwrap(), budget()).map_err(|e| e.to_string())?;
        ensure(rep.verdict == Verdict::Ekr, || format!("n={n}: {:?}", rep.verdict))?;
        ensure(rep.max_intersecting_size == BigUint::from(1u32 << (n - 1)), || {
            format!("n={n}: max {} != 2^{}", rep.max_intersecting_size, n - 1)
        })?;
    }
    Ok("n = 1..5".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("EKR reproduction on empty graphs", ekr_reproduction),
        ("Hilton-Milner reproduction on empty graphs", hilton_milner),
        ("counting oracles agree", counting_oracles),
        ("spider leaf star-size bound", spider_leaf_bound),
        ("spider order of star sizes", spider_order),
        ("spiders in the admissible r range are ekr", spider_ekr),
        ("split-vertex leaf star-size bound", split_leaf_bound),
        ("complete bipartite control", multipartite_control),
        ("degree peeling", peeling),
        ("inequality grids", grids),
        ("HK ground truth", hk_ground_truth),
        ("non-uniform check on empty graphs", nonuniform),
    ];
    let mut failed = 0;
    let mut understood = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                if why.starts_with(KNOWN) {
                    understood += 1;
                }
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed ({understood} known)",
        12 - failed
    );
    // Known failures are reported above but do not fail the run.
    if failed == understood {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
