use stratgame::harness::{
    emit_report, parse_report, run_experiment, run_experiment_with_threads, sweep, Aggregate, ExperimentConfig,
    MetricsReport, Mode, ReportFormat,
};

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_text(text).unwrap()
}

fn mwmr_report() -> MetricsReport {
    let c = cfg("env = appE\nlearner = mwmr\nsetting = x-delta-after\nn = 6\nT = 200\nseeds = 6");
    run_experiment_with_threads(&c, Some(1)).unwrap()
}

#[test]
fn halving_on_a_large_star() {
    let c = cfg("env = random-realizable:star\nlearner = halving\nsetting = x-delta\nn = 1024\nT = 400\nseeds = 20");
    let r = run_experiment(&c).unwrap();
    assert!(r.mistakes.max <= 10.0);
    let b = r.bounds.iter().find(|b| b.name == "halving").unwrap();
    assert_eq!((b.value, b.pass), (10.0, true));
}

#[test]
fn elimination_against_the_star_adversary() {
    let c = cfg("env = star-ex42\nlearner = seq-elim\nsetting = none\nn = 50\nT = 60\nseeds = 8");
    let r = run_experiment(&c).unwrap();
    assert!(r.seeds.iter().all(|s| s.mistakes == 49));
    assert!(r.all_pass());
}

#[test]
fn serial_and_parallel_records_agree() {
    let c = cfg("env = appJ\nlearner = random-union\nsetting = x-delta-after\nn = 6\nT = 300\neps = 0.02\nmode = pac\nseeds = 7");
    let a = run_experiment_with_threads(&c, Some(1)).unwrap();
    let b = run_experiment_with_threads(&c, Some(3)).unwrap();
    assert_eq!(a.seeds, b.seeds);
    assert_eq!(a.mistakes, b.mistakes);
    assert_eq!(a.output_loss, b.output_loss);
}

#[test]
fn aggregates_recompute_from_rows() {
    let r = mwmr_report();
    let m: Vec<f64> = r.seeds.iter().map(|s| s.mistakes as f64).collect();
    assert_eq!(r.mistakes, Aggregate::of(&m));
    assert_eq!(r.regenerate().unwrap(), r);
}

#[test]
fn json_round_trip_is_byte_identical() {
    let r = mwmr_report();
    let bytes = emit_report(&r, ReportFormat::Json).unwrap();
    let back = parse_report(&bytes).unwrap();
    assert_eq!(back, r);
    assert_eq!(emit_report(&back, ReportFormat::Json).unwrap(), bytes);
}

#[test]
fn bound_entries_schema() {
    let r = mwmr_report();
    let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, ReportFormat::Json).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    let bounds = v["bounds"].as_array().unwrap();
    assert!(!bounds.is_empty());
    for b in bounds {
        for key in ["name", "value", "observed", "pass"] {
            assert!(b.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(bounds[0]["name"], "mwmr");
}

#[test]
fn csv_has_a_row_per_seed_and_an_aggregate() {
    let r = mwmr_report();
    let text = String::from_utf8(emit_report(&r, ReportFormat::CsvSummary).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 6 + 1);
    assert!(lines[1].starts_with("seed,0,200,"));
    assert!(lines[7].starts_with("aggregate,,200,"));
}

#[test]
fn empty_seed_list_gives_a_header_only_csv() {
    let c = cfg("env = appE\nlearner = mwmr\nsetting = x-delta-after\nn = 6\nT = 10\nseeds = 0");
    let r = run_experiment(&c).unwrap();
    let text = String::from_utf8(emit_report(&r, ReportFormat::CsvSummary).unwrap()).unwrap();
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn pac_runs_report_output_losses() {
    let c = cfg("env = appK\nlearner = survivor:seq-elim\nsetting = none\nn = 5\nT = 400\neps = 0.1\ndelta = 0.1\nfamily-eps = 0.02\nseeds = 10");
    assert_eq!(c.mode(), Mode::Pac);
    let r = run_experiment(&c).unwrap();
    let loss = r.output_loss.unwrap();
    assert_eq!(loss.count, 10);
    assert!(r.seeds.iter().all(|s| s.output.is_some() && s.output_loss_stderr == Some(0.0)));
}

#[test]
fn sweep_over_horizon() {
    let c = cfg("env = appE\nlearner = mwmr\nsetting = x-delta-after\nn = 6\nseeds = 3");
    let reports = sweep(&c, "T", &["50".into(), "100".into()]).unwrap();
    assert_eq!(reports.iter().map(|r| r.config.rounds).collect::<Vec<_>>(), vec![50, 100]);
}

#[test]
fn invalid_configs_are_rejected() {
    let c = cfg("env = appE\nlearner = halving\nsetting = x-delta-after");
    assert!(run_experiment(&c).is_err());
    let c = cfg("env = star-ex42\nlearner = seq-elim\nsetting = none\nmode = pac");
    assert!(run_experiment(&c).is_err());
}
