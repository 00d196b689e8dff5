use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = "10,12,3,2,0.8";

fn hcae(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcae"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn build_writes_one_matrix_pair_per_subject() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hcae(&["build", "--synthetic", SMALL, "--k", "3"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let build = tmp.path().join("build");
    assert_eq!(fs::read_dir(build.join("incidence")).unwrap().count(), 10);
    assert_eq!(fs::read_dir(build.join("delta")).unwrap().count(), 10);
    assert_eq!(rows(&build.join("summary.csv")).len(), 11);

    let inc = rows(&build.join("incidence/subj_000.txt"));
    assert_eq!(inc.len(), 12);
    assert!(inc.iter().all(|r| r.split_whitespace().count() == 36));
    let delta = rows(&build.join("delta/subj_000.txt"));
    assert_eq!(delta.len(), 12);
    assert!(delta.iter().all(|r| r.split_whitespace().count() == 12));
    assert!(build.join("resolved_config.toml").is_file());
}

#[test]
fn missing_manifest_is_a_usage_error_naming_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("absent_manifest.csv");
    let o = hcae(&["build", "--manifest", missing.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent_manifest.csv"), "{}", stderr(&o));
}

#[test]
fn oversized_k_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hcae(&["build", "--synthetic", "6,35,2,2,0.8", "--k", "40"], tmp.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn conflicting_sources_and_bad_flags_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hcae(&["build", "--synthetic", SMALL, "--manifest", "m.csv"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let o = hcae(&["build", "--epochs", "many"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let o = hcae(&["build", "--synthetic", "1,2"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evaluate_without_embeddings_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hcae(&["evaluate", "--synthetic", SMALL], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("index.csv"), "{}", stderr(&o));
}

#[test]
fn stages_chain_and_single_run_has_zero_std() {
    let tmp = tempfile::tempdir().unwrap();
    let common = ["--synthetic", SMALL, "--k", "3", "--epochs", "5", "--runs", "1"];
    for stage in ["embed", "evaluate"] {
        let mut args = vec![stage];
        args.extend(common);
        let o = hcae(&args, tmp.path());
        assert!(o.status.success(), "{stage}: {}", stderr(&o));
    }
    let embed = tmp.path().join("embed");
    assert_eq!(rows(&embed.join("index.csv")).len(), 11);
    let z = rows(&embed.join("embeddings/subj_003.txt"));
    assert_eq!(z.len(), 12);
    assert!(z.iter().all(|r| r.split_whitespace().count() == 16));
    assert_eq!(rows(&embed.join("traces/subj_003.csv")).len(), 6);

    let eval = tmp.path().join("evaluate");
    assert_eq!(rows(&eval.join("runs.csv")).len(), 2);
    let report = fs::read_to_string(eval.join("report.txt")).unwrap();
    assert!(report.contains("std_accuracy = 0"), "{report}");
    assert!(!eval.join("ablation.csv").exists());
}

#[test]
fn pipeline_with_ablation_writes_every_stage() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hcae(
        &["pipeline", "--synthetic", SMALL, "--k", "3", "--epochs", "5", "--runs", "3", "--ablate-views"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for stage in ["", "build", "embed", "evaluate"] {
        assert!(tmp.path().join(stage).join("resolved_config.toml").is_file(), "{stage}");
    }
    let table = rows(&tmp.path().join("evaluate/ablation.csv"));
    assert_eq!(table.len(), 1 + 3 + 1);
    assert!(table[1].starts_with("view_1,"));
    assert!(table[4].starts_with("all,"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("over 3 runs"));
}

#[test]
fn config_file_is_honoured_and_echoed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, format!("synthetic = \"{SMALL}\"\nk = 4\nepochs = 3\nseed = 9\n")).unwrap();
    let o = hcae(&["build", "--config", cfg.to_str().unwrap()], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let resolved = fs::read_to_string(tmp.path().join("build/resolved_config.toml")).unwrap();
    for line in ["k = 4", "epochs = 3", "seed = 9"] {
        assert!(resolved.lines().any(|l| l == line), "{line} missing from\n{resolved}");
    }
    fs::write(&cfg, "epohcs = 3\n").unwrap();
    let o = hcae(&["build", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}
