//! Golden reports for the corpus. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_liaison"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn schema() -> Value {
    let text = std::fs::read_to_string(root().join("docs/report.schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => !(n.is_i64() || n.is_u64()),
        Value::Array(a) => a.iter().any(has_float),
        Value::Object(o) => o.values().any(has_float),
        _ => false,
    }
}

/// Runs a JSON command, validates it against the schema and compares it
/// with the stored report (timing removed).
fn golden(name: &str, args: &[&str], code: i32) {
    let mut full = args.to_vec();
    full.push("--json");
    let (status, stdout, stderr) = run(&full);
    assert_eq!(status, code, "{name}: exit code {status}, stderr: {stderr}");
    let mut report: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{name}: bad JSON {e}: {stdout}"));
    if let Err(e) = jsonschema::validate(&schema(), &report) {
        panic!("{name}: report violates the schema: {e}");
    }
    assert!(!has_float(&report), "{name}: report contains a float");
    report.as_object_mut().unwrap().remove("elapsed_ms");
    let rendered = serde_json::to_string_pretty(&report).unwrap() + "\n";
    let path = root().join("crates/cli/tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &rendered).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(rendered, expected, "{name}: report differs from the golden file");
}

#[test]
fn link_line() {
    golden("link_line", &["link", "corpus/line.id", "--ci", "x0, x1*x2"], 0);
    let (_, out, _) = run(&["link", "corpus/line.id", "--ci", "x0, x1*x2"]);
    assert!(out.contains("(x0, x2)"), "{out}");
}

#[test]
fn rao_skew() {
    golden("rao_skew", &["rao", "corpus/skew.id"], 0);
    let (_, out, _) = run(&["rao", "corpus/skew.id"]);
    assert!(out.contains("row i=1: {0: 1}"), "{out}");
}

#[test]
fn resolutions_of_skew_lines() {
    golden("resolve_skew", &["resolve", "corpus/skew.id"], 0);
    golden("etype_skew", &["etype", "corpus/skew.id"], 0);
    golden("ntype_skew", &["ntype", "corpus/skew.id"], 0);
}

#[test]
fn cohomology_and_classes() {
    golden("cohom_skew", &["cohom", "corpus/skew.id", "--window", "-3:3"], 0);
    golden("phi_skew", &["phi", "corpus/skew.id"], 0);
    golden("phi_line_conic", &["phi", "corpus/line_conic.id"], 0);
    golden("phi_twisted_cubic", &["phi", "corpus/twisted_cubic.id"], 0);
    golden("sameclass_skew", &["sameclass", "corpus/skew_pair.id"], 0);
}

#[test]
fn lr_commands() {
    golden("qfun_skew", &["qfun", "corpus/skew.id"], 0);
    golden("bdl_skew", &["bdl", "corpus/skew.id", "--s", "x0*x2 + x1*x3", "--h", "x0"], 0);
    golden("dominates_skew", &["dominates", "corpus/skew_pair.id"], 0);
    golden("duallink_skew", &["duallink", "corpus/skew.id"], 0);
}

#[test]
fn minimalize_bdl_descendant_matches_skew_lines() {
    golden("minimalize_skew_bdl2", &["minimalize", "corpus/skew_bdl2.id", "--window", "-4:4"], 0);
    let (_, out, _) = run(&["minimalize", "corpus/skew_bdl2.id", "--json", "--window", "-4:4"]);
    let me: Value = serde_json::from_str(&out).unwrap();
    let (_, out, _) = run(&["cohom", "corpus/skew.id", "--json", "--window", "-4:4"]);
    let skew: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(me["result"]["cohomology"], skew["result"]["cohomology"]);
}

#[test]
fn exit_codes() {
    golden("error_acm", &["minimalize", "corpus/twisted_cubic.id"], 2);
    golden("error_syntax", &["rao", "corpus/bad_syntax.id"], 3);
    golden("error_inhomogeneous", &["rao", "corpus/inhomogeneous.id"], 3);
    golden("error_budget", &["bdl", "corpus/skew.id", "--s", "x0*x2", "--h", "x0", "--tries", "0"], 4);
    let (code, _, err) = run(&["link", "corpus/line.id", "--ci", "x0*x2, x1*x2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn seed_is_reported_and_reproducible() {
    let args = ["bdl", "corpus/skew.id", "--s", "x0*x2 + x1*x3", "--h", "x0", "--seed", "7"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert!(a.starts_with("seed 7\n"));
    assert_eq!(a, b);
}
