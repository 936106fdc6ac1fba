use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn ekr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekr"))
        .args(args)
        .env_remove("EKR_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Minimal graph6 writer for n < 63, used as an independent encoder.
fn graph6(n: usize, edges: &[(usize, usize)]) -> String {
    let adj = |i: usize, j: usize| edges.iter().any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i));
    let mut bits = Vec::new();
    for j in 1..n {
        for i in 0..j {
            bits.push(adj(i, j) as u8);
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(0);
    }
    let mut s = String::from((63 + n as u8) as char);
    for chunk in bits.chunks(6) {
        let v = chunk.iter().fold(0u8, |acc, &b| acc << 1 | b);
        s.push((63 + v) as char);
    }
    s
}

fn k33_edges() -> Vec<(usize, usize)> {
    (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect()
}

#[test]
fn ekr_on_spider_reports_star_of_five() {
    let v = json(&ekr(&["ekr", "--graph", "spider:2,2,2", "--r", "2"]));
    assert_eq!(v["verdict"], "ekr");
    assert_eq!(v["max_star_size"], 5);
    assert_eq!(v["max_intersecting_size"], 5);
    assert_eq!(v["witness"].as_array().unwrap().len(), 5);
}

#[test]
fn bounds_spider_threshold_at_sixteen() {
    let v = json(&ekr(&["bounds", "--theorem", "T5", "--n", "16"]));
    let expected = (16.0 * std::f64::consts::LN_2).sqrt() - std::f64::consts::LN_2 / 2.0;
    assert_eq!(v["r_max"], 2);
    assert_eq!(v["r_values"], serde_json::json!([1, 2]));
    assert!((v["thresholds"]["r_bound"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert!((expected - 2.983).abs() < 1e-3);
}

#[test]
fn bounds_with_r_reports_applicability_and_closed_forms() {
    let v = json(&ekr(&["bounds", "--theorem", "t5", "--n", "16", "--r", "3"]));
    assert_eq!(v["applicability"]["applicable"], false);
    assert_eq!(v["closed_forms"]["ekr"]["value"], choose(15, 2));
    assert_eq!(
        v["closed_forms"]["hilton-milner"]["value"],
        choose(15, 2) - choose(12, 2) + 1
    );
}

#[test]
fn count_paths() {
    let out = ekr(&["count", "--graph", "path:5", "--r", "2", "--format", "text"]);
    assert!(out.status.success());
    // Independent 2-sets of P_m number C(m-1, 2).
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), choose(4, 2).to_string());
    let v = json(&ekr(&["count", "--graph", "path:9", "--r", "3", "--anchor", "0"]));
    // Through an end: the rest is an independent 2-set of P_7.
    assert_eq!(v["count"], choose(6, 2));
}

#[test]
fn exit_codes() {
    assert_eq!(ekr(&["count", "--graph", "bogus:3", "--r", "2"]).status.code(), Some(1));
    assert_eq!(
        ekr(&["count", "--graph", "/no/such/file.g6", "--r", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(ekr(&["count", "--graph", "path:5"]).status.code(), Some(1));
    assert_eq!(ekr(&["bounds", "--theorem", "T99", "--n", "5"]).status.code(), Some(1));
    assert_eq!(ekr(&["ekr", "--graph", "path:5", "--r", "0"]).status.code(), Some(1));
    assert_eq!(
        ekr(&["ekr", "--graph", "path:5", "--r", "2", "--budget", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(ekr(&["hk", "--graph", "cycle:5"]).status.code(), Some(1));
    let starved = ekr(&["ekr", "--graph", "kpartite:3,3", "--r", "2", "--budget", "1"]);
    assert_eq!(starved.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&starved.stdout).unwrap();
    assert_eq!(v["verdict"], "budget_exceeded");
    assert_eq!(
        ekr(&["ekr", "--graph", "kpartite:3,3", "--r", "2"]).status.code(),
        Some(0)
    );
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ekr"))
        .args(["ekr", "--graph", "kpartite:3,3", "--r", "2"])
        .env("EKR_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &["ekr", "--graph", "kpartite:3,3", "--r", "2"][..],
        &["search-hk", "--n-max", "6", "--r-max", "4"][..],
        &["strict-ekr", "--graph", "empty:4", "--r", "2"][..],
    ] {
        let a = ekr(args);
        let b = ekr(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn complete_bipartite_control_from_graph6_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "{}", graph6(6, &k33_edges())).unwrap();
    let path = f.path().to_str().unwrap();
    let v = json(&ekr(&["ekr", "--graph", path, "--r", "2"]));
    assert_eq!(v["verdict"], "not_ekr");
    assert_eq!(v["max_intersecting_size"], 3);
    assert_eq!(v["max_star_size"], 2);
    let s = json(&ekr(&["search-ekr", "--catalog", path, "--r-min", "2", "--r-max", "2"]));
    let findings = s["findings"].as_array().unwrap();
    assert_eq!(findings.len(), 1);
    assert_eq!(findings[0]["r"], 2);
    assert_eq!(findings[0]["detail"]["kind"], "ekr");
}

#[test]
fn edge_list_file_input() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for (u, v) in k33_edges() {
        writeln!(f, "{u} {v}").unwrap();
    }
    let v = json(&ekr(&["count", "--graph", f.path().to_str().unwrap(), "--r", "2"]));
    // Independent 2-sets of K_{3,3} lie inside one part.
    assert_eq!(v["count"], 2 * choose(3, 2));
}

#[test]
fn multi_graph_file_rejected_for_single_graph_commands() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "{}\n{}", graph6(3, &[(0, 1)]), graph6(3, &[(1, 2)])).unwrap();
    assert_eq!(
        ekr(&["count", "--graph", f.path().to_str().unwrap(), "--r", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn strict_and_nonuniform_verdicts_on_empty_graphs() {
    assert_eq!(
        json(&ekr(&["strict-ekr", "--graph", "empty:5", "--r", "2"]))["verdict"],
        "strictly_ekr"
    );
    let four = json(&ekr(&["strict-ekr", "--graph", "empty:4", "--r", "2"]));
    assert_eq!(four["verdict"], "ekr");
    assert_eq!(four["max_intersecting_size"], choose(3, 1));
    let v = json(&ekr(&["nonuniform-ekr", "--graph", "empty:3"]));
    assert_eq!(v["max_intersecting_size"], 4);
    assert_eq!(v["r"], Value::Null);
}

#[test]
fn hk_and_spider_order_on_a_spider() {
    let v = json(&ekr(&["hk", "--graph", "spider:1,2,3"]));
    let reports = v.as_array().unwrap();
    // alpha of spider 1,2,3 is 4: the three leaves plus the vertex two steps up leg 3.
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r["best_is_leaf"] == true));
    let o = json(&ekr(&["spider-order", "--graph", "spider:3,1,2", "--r", "2"]));
    assert_eq!(o[0]["violations"].as_array().unwrap().len(), 0);
    // Odd lengths ascending, then even lengths descending.
    assert_eq!(o[0]["ordered_legs"], serde_json::json!([1, 3, 2]));
    assert_eq!(ekr(&["spider-order", "--graph", "path:4"]).status.code(), Some(1));
}

#[test]
fn star_sizes_for_every_vertex() {
    let v = json(&ekr(&["star", "--graph", "path:4", "--r", "2"]));
    // P_4 = 0-1-2-3: 2-sets {0,2},{0,3},{1,3}.
    assert_eq!(v["star_sizes"], serde_json::json!([2, 1, 1, 2]));
    assert_eq!(v["max_star_vertex"], 0);
    let one = json(&ekr(&["star", "--graph", "path:4", "--r", "2", "--vertex", "1"]));
    assert_eq!(one["count"], 1);
    assert_eq!(one["method"], "tree-dp");
}

#[test]
fn grid_csv_header_and_counts() {
    let out = ekr(&["grid", "--name", "hm-identity", "--n-max", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theorem-id,parameters,lhs,rhs,holds"));
    // Pairs 1 <= r < n <= 10.
    assert_eq!(lines.count(), (2..=10).map(|n| n - 1).sum::<usize>());
    let v = json(&ekr(&["grid", "--name", "product", "--max-rd", "3", "--samples", "5"]));
    assert_eq!(v["total"], 4 * 5);
    assert_eq!(v["failed"], 0);
}

#[test]
fn peel_from_density() {
    let v = json(&ekr(&["peel", "--graph", "star:10", "--c", "1", "--r", "2"]));
    assert_eq!(v["report"]["threshold"], 6);
    assert_eq!(v["report"]["t"], 1);
    assert_eq!(v["certificates_valid"], true);
    assert_eq!(v["density"]["t_within_bound"], true);
    assert_eq!(ekr(&["peel", "--graph", "star:10"]).status.code(), Some(1));
}

#[test]
fn output_file_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = ekr(&[
        "ekr",
        "--graph",
        "empty:4",
        "--r",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["verdict"], "ekr");
    let csv = ekr(&["ekr", "--graph", "empty:4", "--r", "1", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("r,verdict,max_star_vertex,max_star_size,max_intersecting_size,nodes_explored\n1,ekr,"));
}

#[test]
fn small_hk_sweep_finds_nothing() {
    let v = json(&ekr(&["search-hk", "--n-max", "7", "--r-max", "4"]));
    assert_eq!(v["findings"].as_array().unwrap().len(), 0);
    // Labeled trees: sum of n^(n-2) for n = 1..=7.
    let labeled: u64 = 1 + (2..=7u64).map(|n| n.pow(n as u32 - 2)).sum::<u64>();
    assert_eq!(v["instances"], labeled);
    assert_eq!(v["distinct"], 1 + 1 + 1 + 2 + 3 + 6 + 11);
    assert_eq!(
        ekr(&["search-hk", "--n-max", "11", "--r-max", "4"]).status.code(),
        Some(1)
    );
}
