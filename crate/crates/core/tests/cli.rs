//! Command-line behaviour through the library entry point.

use radix_approx::cli::{run, Outcome};
use serde_json::Value;

fn call(args: &str) -> Outcome {
    call_with(args, None)
}

fn call_with(args: &str, config: Option<&str>) -> Outcome {
    let argv: Vec<String> = std::iter::once("radix-approx")
        .chain(args.split_whitespace())
        .map(String::from)
        .collect();
    run(&argv, config)
}

fn json(o: &Outcome) -> Value {
    assert_eq!(o.code, 0, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).expect("valid JSON")
}

#[test]
fn pigeonhole_search_reports_guarantee() {
    let v = json(&call("--reproducible search --base 2 --limit 1000000 --gamma 355/113 --method pigeonhole"));
    let r = &v["result"];
    assert_eq!(r["witness"], 7);
    assert_eq!(r["distance"], "1/113");
    assert_eq!(r["guarantee"], "1/19");
    let v = json(&call("--reproducible search --base 3 --limit 1000000 --gamma 355/113 --method pigeonhole"));
    assert_eq!(v["subcommand"], "search");
    assert!(v.get("wall_time_ms").is_none());
    let r = &v["result"];
    assert_eq!(r["witness"], 265720);
    assert_eq!(r["distance"], "8/113");
    assert_eq!(r["guarantee"], "1/13");
}

#[test]
fn reproducible_runs_are_byte_identical_across_thread_counts() {
    for args in [
        "search --base 3 --limit 50000 --gamma 17/1001",
        "expsum --base 2 --r 12 --k 3 --gamma 2/7",
        "discrepancy --gamma 1/7 --count 30 --G 6",
        "adversary --base 3 --count 128",
    ] {
        let a = call(&format!("--reproducible --threads 1 {args}"));
        let b = call(&format!("--reproducible --threads 2 {args}"));
        assert_eq!(a.code, 0, "{args}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{args}");
    }
}

#[test]
fn wall_time_present_without_reproducible() {
    let v = json(&call("constants --base 3"));
    assert!(v["wall_time_ms"].is_u64());
    assert!(v["config"]["precision_bits"].is_u64());
}

#[test]
fn csv_has_fixed_header() {
    let o = call("--reproducible --format csv search --base 3 --limit 1000 --gamma 355/113 --method pigeonhole");
    assert_eq!(o.code, 0, "{}", o.stderr);
    let mut lines = o.stdout.lines();
    assert_eq!(
        lines.next(),
        Some("subcommand,b,N,witness,distance_num,distance_den,bound,passed")
    );
    assert_eq!(lines.next(), Some("search,3,1000,1,16,113,1/6,true"));
}

#[test]
fn human_format_lists_fields() {
    let o = call("--format human constants --base 2");
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("constants"));
    assert!(o.stdout.contains("J_b"));
}

#[test]
fn exit_codes() {
    assert_eq!(call("search --base 2").code, 1);
    assert_eq!(call("search --base 1 --limit 10 --gamma 1/3").code, 1);
    assert_eq!(call("--precision-bits 32 constants --base 2").code, 1);
    assert_eq!(call("expsum --base 2 --r 1 --m 2 --gamma 1/3").code, 2);
    assert_eq!(call("expsum --base 2 --r 27 --gamma 1/3").code, 3);
    let o = call("discrepancy --points pi,3.14159265358979323846264338327950288419716939937510582");
    assert_eq!(o.code, 4, "{}", o.stderr);
    assert!(o.stdout.is_empty() && o.stderr.starts_with("error:"));
    let help = call("--help");
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("Usage"));
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let cfg = "# defaults\nreproducible = true\noutput_format = csv\nseed = 7\n";
    let o = call_with("constants --base 2", Some(cfg));
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.starts_with("subcommand,"));
    let v = json(&call_with("--format json constants --base 2", Some(cfg)));
    assert_eq!(v["config"]["seed"], 7);
    assert!(v.get("wall_time_ms").is_none());
    assert_eq!(call_with("constants --base 2", Some("bogus = 1")).code, 1);
    assert_eq!(call_with("constants --base 2", Some("no equals sign")).code, 1);
}

#[test]
fn out_writes_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = call(&format!(
        "--reproducible --out {} adversary --base 2 --count 64",
        path.display()
    ));
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn constants_accept_power_limits() {
    let v = json(&call("--reproducible constants --base 2 --limit 2^2000"));
    let text = v.to_string();
    assert!(text.contains("1999"), "{text}");
    assert!(text.contains("\"vacuous\":false"), "{text}");
}

#[test]
fn quick_verification_passes() {
    let o = call("--reproducible verify-all --quick");
    assert_eq!(o.code, 0, "{}", o.stderr);
}
