use std::path::Path;
use std::process::{Command, Output};

fn slag(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slag"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("SLAG_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn atlas_check_passes_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let ok = slag(&["atlas-check"], dir.path());
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("PASS first-type Jacobian determinant"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["status"], "pass");
    assert!(report["details"]["determinants"][0]["computed"]
        .as_str()
        .unwrap()
        .contains("z1"));

    let bad = slag(&["atlas-check", "--corrupt-transition"], dir.path());
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("FAIL first-type Jacobian determinant"));
    assert!(stdout(&bad).contains("FAIL atlas transition U01 -> U02"));
}

#[test]
fn sample_is_reproducible_across_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&slag(
            &["sample", "--preset", "eq1", "--n", "60", "--seed", "7"],
            a.path()
        )),
        0
    );
    let o = Command::new(env!("CARGO_BIN_EXE_slag"))
        .args([
            "sample", "--preset", "eq1", "--n", "60", "--seed", "7", "--out",
        ])
        .arg(b.path())
        .env("SLAG_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    for f in ["locus.csv", "locus.jsonl"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let csv = std::fs::read_to_string(a.path().join("locus.csv")).unwrap();
    assert_eq!(csv.lines().count(), 61);
    assert_eq!(
        std::fs::read_to_string(a.path().join("locus.jsonl"))
            .unwrap()
            .lines()
            .count(),
        60
    );
}

#[test]
fn eq7_samples_satisfy_first_equation() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&slag(
            &["sample", "--preset", "eq7", "--n", "40", "--seed", "2"],
            dir.path()
        )),
        0
    );
    let mut r = csv::Reader::from_path(dir.path().join("locus.csv")).unwrap();
    for row in r.deserialize::<[f64; 6]>() {
        let eta = row.unwrap();
        assert!((eta[0].powi(4) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn config_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&slag(&["sample", "--n", "0"], dir.path())), 3);
    assert_eq!(code(&slag(&["sample", "--preset", "eq5"], dir.path())), 3);
    assert_eq!(code(&slag(&["fibration", "--fiber", "2"], dir.path())), 3);
    assert_eq!(
        code(&slag(
            &["fibration", "--preset", "eq8", "--bases", "2"],
            dir.path()
        )),
        3
    );
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "c = [\"1\", \"x\", \"1\", \"-1\", \"-1\", \"-1\"]\n").unwrap();
    assert_eq!(
        code(&slag(
            &["sample", "--config", cfg.to_str().unwrap()],
            dir.path()
        )),
        3
    );
}

#[test]
fn config_file_drives_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "c = [\"1\", \"1\", \"-1\", \"-2\", \"-2\", \"-2\"]\nn = 12\nseed = 5\n",
    )
    .unwrap();
    let o = slag(&["sample", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["config"]["n"], 12);
    assert_eq!(report["config"]["c"][3], "-2");
}

#[test]
fn verify_fails_on_injected_point() {
    let dir = tempfile::tempdir().unwrap();
    let ok = slag(&["verify", "--n", "15"], dir.path());
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    let bad = slag(&["verify", "--n", "15", "--inject-perturbed"], dir.path());
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("FAIL points on the normalized locus"));
}

#[test]
fn fibration_writes_curves() {
    let dir = tempfile::tempdir().unwrap();
    let o = slag(&["fibration", "--bases", "3", "--fiber", "8"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = std::fs::read_to_string(dir.path().join("fibers.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "base,theta,x0,x1,x2,x3,xp0,xp1,xp2,xp3"
    );
    assert_eq!(lines.count(), 24);
}

#[test]
fn smoothness_report_is_labelled_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let o = slag(
        &["smoothness", "--preset", "eq1", "--starts", "200"],
        dir.path(),
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["label"], "evidence");
    assert_eq!(report["details"]["charts"].as_array().unwrap().len(), 6);
    // Exit status mirrors the witness count.
    let witnesses: u64 = report["details"]["charts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["converged"].as_u64().unwrap())
        .sum();
    assert_eq!(code(&o), if witnesses == 0 { 0 } else { 1 });
}
