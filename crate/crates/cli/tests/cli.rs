use std::process::{Command, Output};

fn stratgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratgame")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn oracle_prints_exact_fractions() {
    let o = stratgame(&["oracle", "--env", "appJ", "--n", "4", "--eps", "1/100", "--parts", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3/100 (0.030000000000)");

    let o = stratgame(&["oracle", "--env", "appK", "--n", "4", "--eps", "0.01", "--zero"]);
    assert_eq!(stdout(&o).split_whitespace().next(), Some("3/50"));

    let o = stratgame(&["oracle", "--env", "appJ", "--n", "4", "--eps", "0.01"]);
    assert_eq!(stdout(&o).split_whitespace().next(), Some("91/100"));
}

#[test]
fn oracle_errors_exit_with_two() {
    let o = stratgame(&["oracle", "--env", "appG", "--n", "9", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(2));
    let o = stratgame(&["oracle", "--env", "appG", "--n", "4", "--eps", "1e-2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_emits_json_and_passes() {
    let o = stratgame(&[
        "run",
        "--env",
        "star-ex42",
        "--learner",
        "seq-elim",
        "--setting",
        "none",
        "--n",
        "10",
        "--T",
        "12",
        "--seeds",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mistakes"]["max"], 9.0);
    assert_eq!(v["bounds"][0]["pass"], true);
}

#[test]
fn failed_bounds_exit_with_one() {
    let o = stratgame(&[
        "run",
        "--env",
        "star-ex42",
        "--learner",
        "seq-elim",
        "--setting",
        "none",
        "--n",
        "10",
        "--T",
        "12",
        "--seeds",
        "2",
        "--set",
        "bounds=halving",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_with_flag_overrides_and_csv_output() {
    let dir = std::env::temp_dir().join(format!("stratgame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("exp.cfg");
    std::fs::write(&config, "# mwmr against the probing adversary\nenv = appE\nlearner = mwmr\nsetting = x-delta-after\nn = 6\nT = 100\nseeds = 9\n")
        .unwrap();
    let out = dir.join("report.csv");
    let o = stratgame(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--seeds",
        "4",
        "--format",
        "csv-summary",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 + 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_emits_one_report_per_value() {
    let o = stratgame(&[
        "sweep",
        "--env",
        "appE",
        "--learner",
        "mwmr",
        "--setting",
        "x-delta-after",
        "--n",
        "5",
        "--seeds",
        "2",
        "--over",
        "T",
        "--values",
        "20,40",
        "--format",
        "csv-summary",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("kind,")).count(), 2);
}

#[test]
fn bad_inputs_exit_with_two() {
    let o = stratgame(&["run", "--env", "appE", "--learner", "halving", "--setting", "x-delta-after"]);
    assert_eq!(o.status.code(), Some(2));
    let o = stratgame(&["run", "--env", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
    let o = stratgame(&["run", "--format", "xml", "--T", "5", "--seeds", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_runs_selected_criteria() {
    let o = stratgame(&["verify", "--quick", "8"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("[PASS] 8."));
    assert!(text.contains("all criteria passed"));
}
