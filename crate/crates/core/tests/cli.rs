use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

fn fraccol(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fraccol"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("FRACCOL_SEED_SALT")
        .output()
        .unwrap()
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in walk(dir) {
        let rel = entry.strip_prefix(dir).unwrap().display().to_string();
        out.insert(rel, fs::read(&entry).unwrap());
    }
    out
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            files.extend(walk(&p));
        } else {
            files.push(p);
        }
    }
    files
}

#[test]
fn cg_writes_records_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fraccol(&["cg", "--graphs", "myciel3,C7", "--seeds", "1..3", "--backend", "mlph,greedy"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(tmp.path().join("cg_summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next(), Some("graph,backend,solved_count,geomean_objective,geomean_time_s"));
    assert_eq!(lines.count(), 4);
    let rec: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("cg/C7-greedy-2.json")).unwrap()).unwrap();
    assert_eq!(rec["status"], "optimal");
    assert!((rec["objective"].as_f64().unwrap() - 7.0 / 3.0).abs() < 1e-6);
}

#[test]
fn aggregates_recompute_from_records() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fraccol(&["cg", "--graphs", "myciel4", "--seeds", "1..4"], tmp.path());
    assert!(o.status.success());
    let mut objs = Vec::new();
    let mut times = Vec::new();
    for seed in 1..=4 {
        let text = fs::read_to_string(tmp.path().join(format!("cg/myciel4-mlph-{seed}.json"))).unwrap();
        let rec: serde_json::Value = serde_json::from_str(&text).unwrap();
        objs.push(rec["objective"].as_f64().unwrap());
        times.push(rec["wall_time_s"].as_f64().unwrap().max(0.01));
    }
    let geo = |v: &[f64]| (v.iter().map(|x| x.ln()).sum::<f64>() / v.len() as f64).exp();
    let mut rdr = csv::Reader::from_path(tmp.path().join("cg_summary.csv")).unwrap();
    let row = rdr.records().next().unwrap().unwrap();
    assert!((row[3].parse::<f64>().unwrap() - geo(&objs)).abs() < 1e-9);
    assert!((row[4].parse::<f64>().unwrap() - geo(&times)).abs() < 1e-9);
}

#[test]
fn parallel_runs_write_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["cg", "--graphs", "myciel4,queen5_5,C9", "--seeds", "1..6", "--backend", "mlph,aco", "--timing", "off"];
    let one: Vec<&str> = args.iter().copied().chain(["--jobs", "1"]).collect();
    let four: Vec<&str> = args.iter().copied().chain(["--jobs", "4"]).collect();
    assert!(fraccol(&one, a.path()).status.success());
    assert!(fraccol(&four, b.path()).status.success());
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    assert_eq!(ta.len(), 37);
    assert_eq!(ta, tb);
}

#[test]
fn unreadable_graph_gets_error_record() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("broken.col");
    fs::write(&bad, "p edge 3 1\ne 1 9\n").unwrap();
    let o = fraccol(&["cg", "--graphs", bad.to_str().unwrap(), "--graphs", "C5", "--seeds", "1"], tmp.path());
    assert!(o.status.success());
    let err = fs::read_to_string(tmp.path().join("cg/broken-error.json")).unwrap();
    assert!(err.contains("\"error\""));
    assert!(tmp.path().join("cg/C5-mlph-1.json").exists());
}

#[test]
fn seed_salt_shifts_seeds() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fraccol"))
        .args(["cg", "--graphs", "C5", "--seeds", "1..2", "--out"])
        .arg(tmp.path())
        .env("FRACCOL_SEED_SALT", "10")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(tmp.path().join("cg/C5-mlph-11.json").exists());
    assert!(tmp.path().join("cg/C5-mlph-12.json").exists());
}

#[test]
fn bad_arguments_fail() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(!fraccol(&["cg", "--graphs", "C5", "--seeds", "9..2"], tmp.path()).status.success());
    assert!(!fraccol(&["cg", "--graphs", "C5", "--backend", "magic"], tmp.path()).status.success());
    assert!(!fraccol(&["cg", "--graphs", "C5", "--profile", "huge"], tmp.path()).status.success());
}

#[test]
fn bnp_gap_curve_and_oracle() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fraccol(&["bnp", "--graphs", "C5,petersen", "--seeds", "1..2", "--backend", "mlph,greedy"], tmp.path());
    assert!(o.status.success());
    for backend in ["mlph", "greedy"] {
        let curve = fs::read_to_string(tmp.path().join(format!("gap_curve_{backend}.csv"))).unwrap();
        let lines: Vec<&str> = curve.lines().collect();
        assert_eq!(lines[0], "threshold,runs_within");
        assert_eq!(lines.len(), 102);
        assert_eq!(lines[1], "0,4");
    }
    let o = fraccol(&["oracle", "--graphs", "C5,myciel3"], tmp.path());
    assert!(o.status.success());
    let rec: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("oracle/myciel3.json")).unwrap()).unwrap();
    assert_eq!(rec["chromatic_number"], 4);
    assert!((rec["lp_objective"].as_f64().unwrap() - 2.9).abs() < 1e-9);
}

#[test]
fn collect_then_train() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fraccol(&["collect", "--graphs", "myciel4,queen5_5", "--seeds", "1..2"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let data = tmp.path().join("training.csv");
    let header = fs::read_to_string(&data).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "graph,iter,vertex,f_rank,f_corr,f_w,f_deg,f_ub,label");
    let o = Command::new(env!("CARGO_BIN_EXE_fraccol"))
        .args(["train", "--data", data.to_str().unwrap(), "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let model = fraccol::mlmodel::Model::load(&tmp.path().join("model.json")).unwrap();
    assert!(model.svm.weights.iter().all(|w| w.is_finite()));
    assert!(tmp.path().join("train_report.json").exists());
}
