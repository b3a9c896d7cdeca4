use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const EXAMPLE: &str = "1,2,,,\n1,2,,,\n,1,2,,\n,1,2,,\n,,1,2,\n,,1,2,\n,,1,2,\n,,,1,2\n,,,1,2\n,1,,,2\n5,4,3,2,1\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankagg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn compare_single_file_pair() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "pair.csv", "1,2,\n2,1,\n");
    let hat = run(&["compare", "--measure", "tau_x_hat", &f]);
    assert_eq!(hat.status.code(), Some(0));
    assert_eq!(stdout(&hat).trim().parse::<f64>().unwrap(), -1.0);
    let tx = run(&["compare", "--measure", "tau_x", &f]);
    let v: f64 = stdout(&tx).trim().parse().unwrap();
    assert!((v + 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn compare_json_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "1,2,3,\n");
    let b = write(dir.path(), "b.csv", "3,2,1,\n");
    let o = run(&["--json", "compare", "--measure", "tau_x", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["n_bar"], 3);
    assert_eq!(v["inner_product"], -6);
}

#[test]
fn aggregate_lists_every_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex.csv", EXAMPLE);
    let o = run(&["aggregate", "--measure", "tau_x", &f]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rankings: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    rankings.sort();
    assert_eq!(rankings, ["4,5,1,2,3", "4,5,2,3,1"]);
    assert!(text.contains("# proven_complete=true"));

    let hat = run(&["aggregate", "--measure", "tau_x_hat", &f]);
    assert_eq!(stdout(&hat).lines().next(), Some("1,2,3,4,5"));
}

#[test]
fn node_limit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex.csv", EXAMPLE);
    let o = run(&["aggregate", "--measure", "tau_x", "--node-limit", "3", &f]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("# proven_complete=false"));
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let v = run(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("rankagg "));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "1,x,2\n");
    assert_eq!(run(&["aggregate", "--measure", "tau_x", &bad]).status.code(), Some(2));
    let missing = dir.path().join("missing.csv");
    assert_eq!(run(&["aggregate", "--measure", "tau_x", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--phi", "1.5", "--n", "4"]).status.code(), Some(1));
}

#[test]
fn sample_is_seeded_and_valid() {
    let args = ["--seed", "5", "sample", "--generator", "rime1", "--phi", "0.3", "--ref", "2,1,3,4,5", "--subset-size", "2:4", "--count", "30"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v1,v2,v3,v4,v5"));
    assert_eq!(text.lines().count(), 31);
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 5);
        let ranked = cells.iter().filter(|c| **c != "NA").count();
        assert!((2..=4).contains(&ranked), "{line}");
    }
    let other = run(&["--seed", "6", "sample", "--generator", "rime1", "--phi", "0.3", "--ref", "2,1,3,4,5", "--subset-size", "2:4", "--count", "30"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn generated_instance_round_trips_through_aggregate() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"n":5,"k":7,"generator":"rime2","majority":{"phi":0.2,"size_dist":{"l":2,"u":4}},
            "minority":{"alpha":0.3,"kind":"contrarians","phi":0.2,"size_dist":{"l":2,"u":3}}}"#,
    );
    let out1 = dir.path().join("i1.json");
    let out2 = dir.path().join("i2.json");
    for out in [&out1, &out2] {
        let o = run(&["--seed", "9", "gen-instance", "--spec", &spec, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&out1).unwrap();
    assert_eq!(text, fs::read_to_string(&out2).unwrap());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["metadata"]["majority_judges"], 4);
    assert_eq!(v["metadata"]["minority_judges"], 3);

    let agg = run(&["aggregate", "--measure", "tau_x_hat", out1.to_str().unwrap()]);
    assert_eq!(agg.status.code(), Some(0));
    assert!(stdout(&agg).contains("# proven_complete=true"));
}

#[test]
fn invalid_scenario_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"n":5,"k":7,"generator":"rime2","majority":{"phi":0.2,"size_dist":{"l":2,"u":4}},
            "minority":{"alpha":0.7,"kind":"contrarians","phi":0.2,"size_dist":{"l":2,"u":3}}}"#,
    );
    assert_eq!(run(&["--seed", "1", "gen-instance", "--spec", &spec]).status.code(), Some(2));
}

#[test]
fn export_ip_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex.csv", EXAMPLE);
    let lp = dir.path().join("m.lp");
    let o = run(&["export-ip", "--measure", "tau_x", "--out", lp.to_str().unwrap(), &f]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&lp).unwrap();
    let n = 5;
    let rows = |prefix: &str| text.lines().filter(|l| l.trim_start().starts_with(prefix)).count();
    assert_eq!(rows("tr_"), n * (n - 1) * (n - 2));
    assert_eq!(rows("nd_"), n * (n - 1) / 2);
    assert_eq!(rows("par_"), n * (n - 1));
    assert!(text.contains("Maximize") && text.trim_end().ends_with("End"));
}
