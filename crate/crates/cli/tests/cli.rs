use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn dlab(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str], stdin: Option<&str>) -> String {
    let out = dlab(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim().to_string()
}

#[test]
fn braid_classifies_as_its_length() {
    let m = stdout(&["gen", "braid", "--n", "4", "--p", "3"], None);
    assert_eq!(stdout(&["classify"], Some(&m)), "4");
}

#[test]
fn random_space_keeps_its_class() {
    let m = stdout(&["gen", "random-space", "--rho", "3", "--n", "4", "--p", "3", "--seed", "7"], None);
    assert_eq!(stdout(&["classify"], Some(&m)), "3");
    let again = stdout(&["gen", "random-space", "--rho", "3", "--n", "4", "--p", "3", "--seed", "7"], None);
    assert_eq!(m, again);
}

#[test]
fn genbraid_reports_dual_length() {
    let v: Value = serde_json::from_str(&stdout(&["gen", "genbraid", "--m", "2", "--l", "1", "--a", "0"], None)).unwrap();
    assert_eq!(v["dual_length"], 8);
    assert!(v["module"]["F"].is_object());
}

#[test]
fn slopes_of_braid4() {
    let dir = std::env::temp_dir().join(format!("dlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("braid4.json");
    std::fs::write(&path, stdout(&["gen", "braid", "--n", "4", "--p", "3", "--precision", "12"], None)).unwrap();
    assert_eq!(stdout(&["slopes", path.to_str().unwrap()], None), "1/4:4,3/4:4");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn strata_table_codims() {
    let tsv = stdout(&["strata-table", "--n", "5", "--format", "tsv"], None);
    let rows: Vec<&str> = tsv.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    let codims: Vec<&str> = rows.iter().map(|r| r.split('\t').nth(1).unwrap()).collect();
    assert_eq!(codims, ["4", "0", "3", "1", "2"]);
    let json: Value = serde_json::from_str(&stdout(&["strata-table", "--n", "5"], None)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 5);
}

#[test]
fn frob_type_n4() {
    assert_eq!(stdout(&["frob-type", "--n", "4", "--p", "3"], None), "OK: (2,1,1,0,2,1,1,0)");
}

#[test]
fn dominance_and_inv() {
    assert_eq!(stdout(&["dominance", "--a", "1,1,0,0", "--b", "2,0,1,-1"], None), "true");
    assert_eq!(stdout(&["dominance", "--a", "2,0,1,-1", "--b", "1,1,0,0"], None), "false");
    assert_eq!(stdout(&["inv", "--g0", "2,1,1,0", "--g1", "0,1,2,1"], None), "(2,1,1,0,2,1,1,0)");
}

#[test]
fn pair_commands() {
    let pair = stdout(&["gen", "pair", "--n", "3", "--m", "1", "--l", "1", "--q", "9", "--random", "--seed", "3"], None);
    let nf: Value = serde_json::from_str(&stdout(&["normal-form"], Some(&pair))).unwrap();
    assert_eq!(nf["xi"]["m"], 1);
    assert_eq!(nf["xi"]["l"], 1);
    let normal = stdout(&["gen", "pair", "--n", "3", "--m", "1", "--l", "1", "--q", "3"], None);
    let inc: Value = serde_json::from_str(&stdout(&["incidence-count"], Some(&normal))).unwrap();
    assert_eq!(inc["components"].as_array().unwrap().len(), 3);
    assert!(inc["points"].as_u64().unwrap() > 0);
}

#[test]
fn lattices_tsv() {
    let tsv = stdout(&["enum-lattices", "--m", "2", "--l", "1", "--a", "0", "--format", "tsv"], None);
    assert_eq!(tsv.lines().next().unwrap(), "alpha\tbeta\tlambda\tindex0\tindex1");
    assert!(tsv.lines().count() > 1);
}

#[test]
fn bad_schema_is_reported() {
    let out = dlab(&["classify"], Some(r#"{"p": 3}"#));
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"], "schema");
    assert!(err["detail"].is_string());
}

#[test]
fn exit_codes() {
    let low = stdout(&["gen", "braid", "--n", "4", "--p", "3", "--precision", "2"], None);
    assert_eq!(dlab(&["slopes"], Some(&low)).status.code(), Some(2));
    let b3 = stdout(&["gen", "braid", "--n", "3", "--p", "3"], None);
    assert_eq!(dlab(&["--max-enum", "2", "aut-count"], Some(&b3)).status.code(), Some(3));
    assert_eq!(stdout(&["aut-count"], Some(&b3)), "36");
}
