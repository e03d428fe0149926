use std::process::{Command, Output};

use serde_json::Value;

fn orbicount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbicount")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn hecke_lattice_passes_with_nine_lattices() {
    let o = orbicount(&["verify", "hecke-lattice", "--m", "2", "--n", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["records"][0]["lhs"], 9);
    assert_eq!(v["records"][0]["rhs"], 9);
}

#[test]
fn subgroup_listing_has_sigma_entries() {
    let o = orbicount(&["subgroups", "--gamma", "free-abelian-2", "--index", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["entries"].as_array().unwrap().len(), 7);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = orbicount(&["verify", "dmvv", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn malformed_json_reports_location() {
    let dir = std::env::temp_dir().join(format!("orbicount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json");
    std::fs::write(&path, "{\"kind\": \"symmetric\",\n  \"n\": 3,,}").unwrap();
    let o = orbicount(&["euler", "--gamma", "z", "--group", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exhausted_budget_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_orbicount"))
        .args(["verify", "theorem-c", "--group", "s3", "--gamma", "z", "--max-degree", "4"])
        .env("ORBICOUNT_BUDGET_SECS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget exceeded"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["verify", "centralizer", "--gamma", "z", "--group", "z2", "--n", "3", "--samples", "12"];
    let a = orbicount(&args);
    let b = orbicount(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let seq = orbicount(&[&args[..], &["--sequential"]].concat());
    let v = json(&seq);
    let mut w = json(&a);
    w["command"] = v["command"].clone();
    assert_eq!(v, w);
}

#[test]
fn theorem_c_and_dmvv_from_fixtures() {
    let o = orbicount(&["verify", "theorem-c", "--group", "s3", "--gset", "point", "--gamma", "z", "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["records"][0]["lhs"], serde_json::json!([1, 3, 9, 22]));
    let o = orbicount(&["verify", "dmvv", "--coeffs", "random-5", "--p", "3", "--q", "2", "--y", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn functor_hecke_and_table_output() {
    let o = orbicount(&["--table", "verify", "hecke-functor", "--m", "2", "--n", "2", "--group", "s3", "--gset", "point"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("functor-hecke") && text.contains("overall: pass"));
}

#[test]
fn homs_and_series_commands() {
    let o = orbicount(&["homs", "--gamma", "z2", "--group", "s3"]);
    assert_eq!(json(&o)["homs"], 18);
    assert_eq!(json(&o)["classes"], 8);
    let o = orbicount(&["homs", "--gamma", "f2", "--group", "z2", "--subgroup-index", "2"]);
    assert_eq!(json(&o)["subgroups"].as_array().unwrap().len(), 3);
    let o = orbicount(&["euler", "--gamma", "z", "--group", "s3", "--subgroup-index", "3"]);
    assert_eq!(json(&o)["hecke_chi"], 3);
    let o = orbicount(&["series", "--coeffs", "partition", "--p", "4", "--q", "0", "--y", "0"]);
    let terms = json(&o)["terms"].clone();
    let coeffs: Vec<&str> = terms.as_array().unwrap().iter().map(|t| t[3].as_str().unwrap()).collect();
    assert_eq!(coeffs, vec!["1", "1", "2", "3", "5"]);
}
