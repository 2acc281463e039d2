use std::process::Command;

use scvol_cli::main_with_args;
use serde_json::Value;

fn run(args: &str) -> (i32, String, String) {
    let argv = std::iter::once("scvol").chain(args.split_whitespace());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn round_trips(text: &str) -> Value {
    let v: Value = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
    v
}

#[test]
fn ratio_all_methods_agree() {
    let (code, out, _) = run("ratio --d 4 --s 1 --method all");
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    for line in &lines[..6] {
        assert!(line.ends_with(" 78"), "{line}");
    }
    assert_eq!(lines[6], "6 methods agree");
}

#[test]
fn single_ratio() {
    let (code, out, _) = run("ratio --d 4 --s 2 --method hilbert");
    assert_eq!((code, out.as_str()), (0, "96\n"));
}

#[test]
fn volume_text() {
    let (code, out, _) = run("volume --d 2 --s 1");
    assert_eq!(code, 0);
    assert_eq!(out, "8/3 (≈ 2.666667)\n");
    for method in ["closed", "determinant", "rows", "cols", "trinomial"] {
        let (code, out, _) = run(&format!("volume --d 2 --s 1 --method {method}"));
        assert_eq!((code, out.as_str()), (0, "8/3 (≈ 2.666667)\n"));
    }
}

#[test]
fn odd_degree_detmix_is_a_usage_error() {
    let (code, out, err) = run("ratio --d 3 --s 2 --method detmix");
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);
    assert!(
        err.contains("odd-degree") && err.contains("s <= n-1"),
        "{err}"
    );
}

#[test]
fn usage_errors() {
    for args in [
        "ratio --d 3 --s 2 --method hilbert",
        "ratio --d 5 --s 1 --method evenalt",
        "ratio --d 4 --s 2 --method legendre",
        "ratio --d 4 --s 1 --method nonsense",
        "volume --d 3 --s 1 --method cols",
        "volume --d 4 --s 1 --method closed",
        "volume --s 1",
        "table --dmax 0",
        "mc --d 2 --samples 0",
        "verify --suite nope",
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args}");
        assert!(!err.is_empty(), "{args}");
    }
}

#[test]
fn volume_json_schema() {
    let (code, out, _) = run("volume --d 3 --s 1 --format json");
    assert_eq!(code, 0);
    let v = round_trips(&out);
    assert_eq!(v["value"], "224/45");
    assert_eq!(v["d"], 3);
    assert_eq!(v["s"], 1);
    assert_eq!(v["method"], "binomdet");
    assert!((v["approx"].as_f64().unwrap() - 224.0 / 45.0).abs() < 1e-12);
}

#[test]
fn ratio_json_uses_p_over_q() {
    let (code, out, _) = run("ratio --d 6 --s 3 --format json");
    assert_eq!(code, 0);
    let v = round_trips(&out);
    assert_eq!(v["agree"], true);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["value"], "81920/1");
    }
}

#[test]
fn table_formats() {
    let (code, out, _) = run("table --dmax 6 --format json");
    assert_eq!(code, 0);
    let v = round_trips(&out);
    assert_eq!(
        v["records"].as_array().unwrap().len(),
        1 + 2 + 2 + 3 + 3 + 4
    );
    assert!(v["row_sums"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["matches"] == true && r["sum"] == r["full"]));

    let (code, out, _) = run("table --dmax 3 --format csv");
    assert_eq!(code, 0);
    assert!(out.starts_with("d,s,value,approx,full_volume_check\n"));
    assert!(out.contains("\n3,1,224/45,"));
    assert!(out.contains("\n3,sum,16/3,5.333333333333333,ok\n"));

    let (code, out, _) = run("table --dmax 2");
    assert_eq!(code, 0);
    assert!(out.contains("| 2 | 1 | 8/3 (2.666667) | 2 |"));
}

#[test]
fn mc_json_and_threads() {
    let (code, a, _) = run("mc --d 3 --samples 20000 --seed 9 --threads 1 --format json");
    assert_eq!(code, 0);
    let (_, b, _) = run("mc --d 3 --samples 20000 --seed 9 --threads 4 --format json");
    assert_eq!(a, b);
    let v = round_trips(&a);
    assert_eq!(v["box_volume"], "72/1");
    let per_s = v["per_s"].as_array().unwrap();
    assert_eq!(per_s.len(), 2);
    assert_eq!(per_s[1]["exact"], "224/45");
    let hits: u64 = per_s.iter().map(|x| x["hits"].as_u64().unwrap()).sum();
    let misses = v["misses"].as_u64().unwrap();
    let degenerate = v["degenerate"].as_u64().unwrap();
    assert_eq!(hits + misses + degenerate, 20000);
}

#[test]
fn verify_all_passes() {
    let (code, out, _) = run("verify --suite all --format json");
    assert_eq!(code, 0, "{out}");
    let v = round_trips(&out);
    assert_eq!(v["passed"], true);
    let suites: std::collections::BTreeSet<_> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(suites.len(), 5);
}

#[test]
fn verify_single_suite_text() {
    let (code, out, _) = run("verify --suite signs");
    assert_eq!(code, 0);
    assert!(out
        .lines()
        .all(|l| l.starts_with("PASS") || l.ends_with("0 failed")));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_scvol");
    let ok = Command::new(bin)
        .args(["volume", "--d", "2", "--s", "1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "8/3 (≈ 2.666667)\n");
    let bad = Command::new(bin)
        .args(["ratio", "--d", "3", "--s", "2", "--method", "detmix"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
