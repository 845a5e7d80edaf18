use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use featsel_core::synthetic::nsl_kdd_like_csv;

fn featsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_featsel")).args(args).output().expect("binary runs")
}

fn data(dir: &Path) -> (String, String) {
    let train = dir.join("train.txt");
    let test = dir.join("test.txt");
    fs::write(&train, nsl_kdd_like_csv(600, 1)).unwrap();
    fs::write(&test, nsl_kdd_like_csv(200, 2)).unwrap();
    (train.display().to_string(), test.display().to_string())
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stdout:\n{}\nstderr:\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
}

#[test]
fn run_baseline_report_project() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = data(dir.path());
    let results = dir.path().join("results");
    let res = results.display().to_string();
    let base = ["--train", &train, "--test", &test, "--out", &res, "--seed", "3"];

    for alg in ["nsga2", "moead"] {
        let mut args = vec!["run", "--algorithm", alg, "--pop", "12", "--gens", "3", "--repeats", "2"];
        args.extend(base);
        ok(&featsel(&args));
    }
    let mut args = vec!["run", "--algorithm", "nsga2", "--formulation", "acc2", "--pop", "12", "--gens", "3", "--repeats", "2"];
    args.extend(base);
    ok(&featsel(&args));
    let mut args = vec!["baseline", "--method", "sfs", "--k", "2,4"];
    args.extend(base);
    ok(&featsel(&args));

    for arm in ["nsga2-dr3-cart", "moead-dr3-cart", "nsga2-acc2-cart", "sfs-cart"] {
        assert!(results.join(arm).join("method.json").is_file(), "{arm}");
    }
    assert!(results.join("nsga2-dr3-cart/repeat_01/archive.csv").is_file());

    let report = featsel(&["report", "--results", &res, "--primary", "nsga2-dr3"]);
    ok(&report);
    let csv = fs::read_to_string(results.join("table.csv")).unwrap();
    assert!(csv.contains("sfs"), "{csv}");
    assert!(results.join("table.txt").is_file());

    ok(&featsel(&["project", "--results", &res]));
    for f in ["reduction_accuracy.csv", "reduction_dr.csv", "accuracy_dr.csv"] {
        assert!(results.join(f).is_file(), "{f}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = data(dir.path());
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        format!(
            "train_path = {train:?}\ntest_path = {test:?}\nmethod = \"nsga3\"\npopulation = 12\ngenerations = 2\nrepeats = 1\n\n[classifier]\nkind = \"cart\"\n"
        ),
    )
    .unwrap();
    let out = dir.path().join("out");
    ok(&featsel(&["run", "--config", cfg.to_str().unwrap(), "--gens", "1", "--label", "custom", "--out", out.to_str().unwrap()]));
    let manifest = fs::read_to_string(out.join("custom/method.json")).unwrap();
    assert!(manifest.contains("\"generations\": 1"), "{manifest}");
    assert!(manifest.contains("nsga3"), "{manifest}");
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = data(dir.path());
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--algorithm", "nsga2", "--pop", "1", "--train", &train, "--test", &test],
        vec!["run", "--algorithm", "nsga2", "--train", &train],
        vec!["run", "--algorithm", "nsga2", "--train", "/nonexistent/x.txt", "--test", &test, "--gens", "1", "--repeats", "1"],
        vec!["run", "--algorithm", "simulated-annealing"],
        vec!["report", "--results", "/nonexistent", "--primary", "x"],
    ];
    for args in cases {
        let out = featsel(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty(), "{args:?} printed no diagnostic");
    }
}
