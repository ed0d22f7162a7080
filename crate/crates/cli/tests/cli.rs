use std::path::Path;

use blocknorm::blockpos::BlockPositive;
use blocknorm_cli::{run, EXIT_ERROR, EXIT_OK};
use serde_json::Value;
use tempfile::TempDir;

fn go(args: &[&str]) -> i32 {
    let mut argv = vec!["blocknorm"];
    argv.extend_from_slice(args);
    run(argv)
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn json(path: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn make_then_verify_instance() {
    let dir = TempDir::new().unwrap();
    let bp = p(&dir, "bp.json");
    assert_eq!(
        go(&["make", "--kind", "general", "--n", "3", "--seed", "9", "--out", &bp]),
        EXIT_OK
    );
    let doc = json(&bp);
    assert_eq!(doc["provenance"]["seed"], 9);
    assert_eq!(doc["provenance"]["tool"], "blocknorm");

    let out_json = p(&dir, "r.json");
    let out_csv = p(&dir, "r.csv");
    assert_eq!(
        go(&["verify", "--in", &bp, "--out", &out_json, "--out", &out_csv]),
        EXIT_OK
    );
    let r = json(&out_json);
    assert_eq!(r["violations"], 0);
    assert!(!r["provenance"]["input_digests"].as_array().unwrap().is_empty());
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    assert!(csv.starts_with("# provenance: "));
    assert!(csv.lines().nth(1).unwrap().starts_with("statement,"));
}

#[test]
fn block_json_round_trips_bit_identically() {
    let dir = TempDir::new().unwrap();
    let a = p(&dir, "a.json");
    assert_eq!(
        go(&["make", "--kind", "normal", "--n", "4", "--seed", "3", "--radius", "2", "--center", "1,-1", "--out", &a]),
        EXIT_OK
    );
    let mut doc = json(&a);
    doc.as_object_mut().unwrap().remove("provenance");
    let bp: BlockPositive = serde_json::from_value(doc.clone()).unwrap();
    let again = serde_json::to_value(&bp).unwrap();
    assert_eq!(doc, again);
}

#[test]
fn range_and_report() {
    let dir = TempDir::new().unwrap();
    let x = p(&dir, "x.json");
    std::fs::write(&x, r#"{"rows":2,"cols":2,"data":[[0,0],[2,0],[0,0],[0,0]]}"#).unwrap();
    let out = p(&dir, "range.json");
    assert_eq!(go(&["range", "--in", &x, "--grid", "360", "--out", &out]), EXIT_OK);
    let doc = json(&out);
    // W of the 2x2 Jordan block with entry 2 is the unit disc.
    let width = doc["summary"]["width"].as_f64().unwrap();
    assert!((width - 2.0).abs() < 1e-9, "{width}");
    assert_eq!(go(&["report", "--in", &out]), EXIT_OK);
}

#[test]
fn batch_verify_and_report_csv() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "batch.json");
    let code = go(&[
        "verify",
        "--statement",
        "THM11,COR22",
        "--n",
        "2,3",
        "--trials",
        "4",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    assert_eq!(code, EXIT_OK);
    let csv = p(&dir, "summary.csv");
    assert_eq!(go(&["report", "--in", &out, "--out", &csv]), EXIT_OK);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with("THM11,")));
}

#[test]
fn search_result_recheck_and_tampering() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "s.json");
    let hist = p(&dir, "h.csv");
    let code = go(&[
        "search",
        "--target",
        "q26",
        "--n",
        "2",
        "--restarts",
        "2",
        "--iters",
        "40",
        "--out",
        &out,
        "--history",
        &hist,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(Path::new(&p(&dir, "s.checkpoint.json")).exists());
    assert!(std::fs::read_to_string(&hist).unwrap().lines().count() > 1);
    assert_eq!(go(&["report", "--in", &out]), EXIT_OK);

    let mut doc = json(&out);
    doc["best_value"] = Value::from(doc["best_value"].as_f64().unwrap() + 0.5);
    std::fs::write(&out, doc.to_string()).unwrap();
    assert_eq!(go(&["report", "--in", &out]), EXIT_ERROR);
}

#[test]
fn q38_table_csv() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "q38.csv");
    assert_eq!(
        go(&["search", "--target", "q38", "--n", "2", "--trials", "6", "--p-grid", "2,inf", "--out", &out]),
        EXIT_OK
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "p,max_ratio,argmax_trial,excess_count");
    assert_eq!(rows.len(), 3);
}

#[test]
fn bad_inputs_exit_one() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "cfg.json");
    std::fs::write(&cfg, r#"{"schema":"runconfig/1","colour":"blue"}"#).unwrap();
    assert_eq!(go(&["--config", &cfg, "make", "--kind", "general"]), EXIT_ERROR);
    assert_eq!(go(&["make", "--kind", "nonsense"]), EXIT_ERROR);
    assert_eq!(go(&["range", "--in", &p(&dir, "missing.json")]), EXIT_ERROR);
    assert_eq!(go(&["verify", "--statement", "THM99"]), EXIT_ERROR);
    assert_eq!(go(&["search", "--target", "q26", "--j", "5", "--n", "2"]), EXIT_ERROR);
    assert_eq!(go(&["make", "--kind", "intro", "--out", &p(&dir, "x.csv")]), EXIT_ERROR);
    assert_eq!(go(&["--help"]), EXIT_OK);
    assert_eq!(go(&["frobnicate"]), EXIT_ERROR);
}

#[test]
fn config_output_dir_and_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "cfg.json");
    let outdir = dir.path().join("results");
    std::fs::write(
        &cfg,
        serde_json::json!({"schema": "runconfig/1", "seed": 77, "output_dir": outdir}).to_string(),
    )
    .unwrap();
    assert_eq!(
        go(&["--config", &cfg, "make", "--kind", "unitary", "--n", "2", "--out", "u.json"]),
        EXIT_OK
    );
    let doc = json(outdir.join("u.json").to_str().unwrap());
    assert_eq!(doc["provenance"]["seed"], 77);
}
