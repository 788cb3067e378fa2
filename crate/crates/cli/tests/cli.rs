use std::process::{Command, Output};

use serde_json::Value;

fn pff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pff")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (Value, String) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = stdout(&pff(&full));
    (serde_json::from_str(&out).expect("valid JSON"), out)
}

#[test]
fn certify_exit_codes() {
    assert_eq!(code(&pff(&["certify", "2", "4"])), 3);
    assert_eq!(code(&pff(&["certify", "2", "2"])), 0);
    assert_eq!(code(&pff(&["certify", "5", "9"])), 0);
}

#[test]
fn certify_reports_method_and_numerics() {
    let (v, _) = json(&["certify", "5", "9"]);
    let r = &v["results"];
    assert_eq!(r["status"], "PFF");
    assert_eq!(r["method"], "keyineq-additive");
    let big_r = r["numerics"].as_array().unwrap().iter().find(|x| x["name"] == "R").unwrap();
    let val: f64 = big_r["decimal"].as_str().unwrap().parse().unwrap();
    assert!((val - 4.49).abs() < 0.01, "R = {val}");

    let (v, _) = json(&["certify", "2", "4"]);
    assert_eq!(v["results"]["status"], "NOT_PFF");
    assert_eq!(v["results"]["method"], "exception-list");
    assert_eq!(v["results"]["cross_checked"], true);

    let (v, _) = json(&["certify", "2", "2"]);
    assert_eq!(v["results"]["method"], "trivial-n<=2");
}

#[test]
fn search_listings() {
    let out = pff(&["search", "3", "3", "--all"]);
    assert_eq!(code(&out), 0);
    let mut lines: Vec<_> = stdout(&out).lines().map(str::to_owned).collect();
    lines.sort();
    assert_eq!(lines, ["x^3+x^2-x+1", "x^3-x^2+x+1"]);

    let (v, _) = json(&["search", "4", "3", "--all"]);
    assert_eq!(v["results"]["polynomials"].as_array().map(Vec::len), Some(0));

    let out = pff(&["search", "2", "5", "--first"]);
    assert_eq!(code(&out), 0);
    let first = stdout(&out);
    let poly = first.trim();
    assert!(poly.starts_with("x^5"), "{poly}");
    let check = pff(&["verify", "2", "5", poly]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
}

#[test]
fn count_agrees_with_listing() {
    for (q, n) in [("2", "5"), ("3", "4"), ("3", "5"), ("4", "4")] {
        let (c, _) = json(&["search", q, n, "--count"]);
        let (a, _) = json(&["search", q, n, "--all"]);
        let listed = a["results"]["polynomials"].as_array().unwrap().len();
        assert_eq!(c["results"]["count"], listed, "({q},{n})");
    }
}

#[test]
fn budget_exhaustion_exits_5() {
    let out = pff(&["--budget", "10", "search", "5", "6", "--all"]);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&pff(&["certify", "6", "3"])), 2);
    assert_eq!(code(&pff(&["bogus"])), 2);
    assert_eq!(code(&pff(&["certify", "5"])), 2);
    assert_eq!(code(&pff(&["verify", "2", "5", "x^4+x+1"])), 2);
    assert_eq!(code(&pff(&["verify", "2", "5", "x^5+(("])), 2);
}

#[test]
fn verify_rejects_non_pff() {
    // primitive and free, but the inverse is not
    let out = pff(&["verify", "4", "6", "x^6+ux^5+(u+1)x^4+(u+1)x^3+x+u+1"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("inverse_free=false"));
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [
        &["certify", "17", "16"][..],
        &["search", "3", "3", "--all"],
        &["charsum", "4", "3", "--m", "7"],
        &["certify-range", "--q-min", "2", "--q-max", "3", "--n-min", "3", "--n-max", "5"],
    ] {
        let (v, raw) = json(args);
        let again = serde_json::to_string_pretty(&v).unwrap();
        assert_eq!(format!("{again}\n"), raw, "{args:?}");
    }
}

#[test]
fn reports_are_reproducible() {
    let a = json(&["--seed", "7", "charsum", "5", "3"]).1;
    let b = json(&["--seed", "7", "charsum", "5", "3"]).1;
    assert_eq!(a, b);
    let (v, _) = json(&["--timing", "certify", "3", "5"]);
    assert!(v["timing_ms"].is_u64());
    let (v, _) = json(&["certify", "3", "5"]);
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn golden_charsum_section_passes() {
    let out = pff(&["verify-paper", "--section", "charsum"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));
}

#[test]
fn out_file_matches_stdout_json() {
    let dir = std::env::temp_dir().join(format!("pff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let p = path.to_str().unwrap();
    let out = pff(&["--json", "--out", p, "certify", "7", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&out));
    std::fs::remove_dir_all(&dir).unwrap();
}
