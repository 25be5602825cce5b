use std::path::Path;
use std::process::{Command, Output};

use qpurify_cli::record::{Payload, ResultRecord, VERSION};
use qpurify_cli::{exit, Args, CommandName, ExperimentConfig, Format};
use qpurify_core::analysis::{entropy_sweep, monte_carlo};
use qpurify_core::kraus::kraus_audit_sweep;
use qpurify_core::reconstruction::MeasurementCount;
use serde_json::Value;

fn qpurify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpurify")).args(args).output().unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = qpurify(args);
    assert_eq!(out.status.code(), Some(exit::OK), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn config(command: CommandName, k: Option<MeasurementCount>, samples: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        command,
        k,
        probs: None,
        psi: None,
        samples,
        seed,
        phase_grid: 64,
        output_path: None,
        format: Format::Json,
    }
}

fn expected(cfg: ExperimentConfig, violations: usize, result: Payload) -> Value {
    serde_json::to_value(ResultRecord {
        version: VERSION,
        command: cfg.command,
        seed: cfg.seed,
        inputs: cfg,
        violations,
        result,
    })
    .unwrap()
}

#[test]
fn montecarlo_output_matches_direct_library_call() {
    for k in [MeasurementCount::One, MeasurementCount::Two, MeasurementCount::Three] {
        let got = json_of(&["montecarlo", "--k", &k.get().to_string(), "--samples", "50", "--seed", "11"]);
        let summary = monte_carlo(k, 50, 11, 64).unwrap();
        let want = expected(
            config(CommandName::Montecarlo, Some(k), 50, 11),
            summary.violations.total(),
            Payload::Montecarlo(Box::new(summary)),
        );
        assert_eq!(got, want, "k = {}", k.get());
    }
}

#[test]
fn kraus_audit_output_matches_direct_library_call() {
    let got = json_of(&["kraus-audit", "--samples", "40", "--seed", "3"]);
    let summary = kraus_audit_sweep(40, 3).unwrap();
    let want = expected(
        config(CommandName::KrausAudit, None, 40, 3),
        summary.violations.total(),
        Payload::KrausAudit(Box::new(summary)),
    );
    assert_eq!(got, want);
}

#[test]
fn entropy_sweep_output_matches_direct_library_call() {
    let got = json_of(&["entropy-sweep", "--samples", "30"]);
    let sweep = entropy_sweep(30).unwrap();
    let want = expected(
        config(CommandName::EntropySweep, None, 30, 0),
        sweep.violations,
        Payload::EntropySweep(sweep),
    );
    assert_eq!(got, want);
}

#[test]
fn json_floats_parse_back_to_identical_bits() {
    let out = qpurify(&["montecarlo", "--k", "2", "--samples", "20", "--seed", "5"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let summary = monte_carlo(MeasurementCount::Two, 20, 5, 64).unwrap();
    for (row, s) in v["result"]["montecarlo"]["rows"].as_array().unwrap().iter().zip(&summary.rows) {
        for (x, y) in row["psi"].as_array().unwrap().iter().zip(s.psi) {
            assert_eq!(x.as_f64().unwrap().to_bits(), y.to_bits());
        }
        assert_eq!(row["empirical"]["f_protocol_b"].as_f64().unwrap().to_bits(), s.empirical.f_protocol_b.to_bits());
    }
}

#[test]
fn csv_floats_carry_seventeen_significant_digits() {
    let out = qpurify(&["montecarlo", "--k", "2", "--samples", "20", "--seed", "5", "--format", "csv"]);
    let summary = monte_carlo(MeasurementCount::Two, 20, 5, 64).unwrap();
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    let header = rd.headers().unwrap().clone();
    let col = header.iter().position(|h| h == "empirical_f_protocol_b").unwrap();
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    for (row, s) in rows.iter().zip(&summary.rows) {
        assert_eq!(row.len(), header.len());
        assert_eq!(row[col].parse::<f64>().unwrap().to_bits(), s.empirical.f_protocol_b.to_bits());
        let mantissa = row[col].split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    }
}

#[test]
fn reconstruct_from_complete_record() {
    let v = json_of(&["reconstruct", "--probs", "1,0.5,0.5"]);
    let r = &v["result"]["reconstruct"];
    assert_eq!(r["k"], 3);
    assert!((r["empirical"]["f_protocol_b"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let psi: Vec<f64> = r["initial"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((psi[0] - 1.0).abs() < 1e-12 && psi[1..].iter().all(|x| x.abs() < 1e-12));
    assert_eq!(v["violations"], 0);
}

#[test]
fn reconstruct_from_amplitudes_two_measurements() {
    let v = json_of(&["reconstruct", "--k", "2", "--psi", "1,0,0,0"]);
    let e = &v["result"]["reconstruct"]["empirical"];
    assert!((e["f_mixed"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((e["f_protocol_b"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn reconstruct_from_single_measurement() {
    let v = json_of(&["reconstruct", "--probs", "0.8"]);
    let r = &v["result"]["reconstruct"];
    assert_eq!(r["phase_family"], true);
    assert!((r["empirical"]["f_mixed"].as_f64().unwrap() - 0.68).abs() < 1e-12);
    assert!((r["empirical"]["f_protocol_b"].as_f64().unwrap() - 0.8).abs() < 1e-12);
}

#[test]
fn montecarlo_complete_measurement_is_constant() {
    let v = json_of(&["montecarlo", "--k", "3", "--samples", "1000"]);
    let stats = v["result"]["montecarlo"]["stats"].as_array().unwrap();
    let mixed = stats.iter().find(|s| s[0] == "f_mixed").unwrap();
    assert!((mixed[1]["mean"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-10);
    assert!(mixed[1]["stddev"].as_f64().unwrap() < 1e-10);
}

#[test]
fn entropy_sweep_rows() {
    let v = json_of(&["entropy-sweep", "--format", "json"]);
    let rows = v["result"]["entropy_sweep"]["rows"].as_array().unwrap();
    let last = rows.last().unwrap();
    assert_eq!(last["determinant"], 0.25);
    assert!((last["entropy"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    let entropies: Vec<f64> = rows.iter().map(|r| r["entropy"].as_f64().unwrap()).collect();
    assert!(entropies.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn kraus_audit_special_cases() {
    let v = json_of(&["kraus-audit", "--samples", "10"]);
    let s = &v["result"]["kraus_audit"];
    assert!(s["eigenbasis_case"]["entropy_increase"].as_f64().unwrap().abs() < 1e-12);
    assert!((s["symmetric_case"]["entropy_increase"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command": "montecarlo", "k": 1, "samples": 7, "seed": 9, "format": "csv"}"#).unwrap();
    let args = Args {
        config: Some(cfg),
        samples: Some(5),
        format: Some(Format::Json),
        ..Args::default()
    };
    let resolved = ExperimentConfig::from_args(&args).unwrap();
    assert_eq!(resolved.command, CommandName::Montecarlo);
    assert_eq!(resolved.k, Some(MeasurementCount::One));
    assert_eq!(resolved.samples, 5);
    assert_eq!(resolved.seed, 9);
    assert_eq!(resolved.format, Format::Json);
}

#[test]
fn output_path_from_config_file_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let from_file = dir.path().join("a.json");
    let from_flag = dir.path().join("b.json");
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({"command": "entropy-sweep", "output_path": from_file});
    std::fs::write(&cfg, body.to_string()).unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(qpurify(&["--config", cfg]).status.code(), Some(exit::OK));
    assert_eq!(qpurify(&["--config", cfg, "--out", from_flag.to_str().unwrap()]).status.code(), Some(exit::OK));
    assert_eq!(std::fs::read(&from_file).unwrap(), std::fs::read(&from_flag).unwrap());
}

fn code(args: &[&str]) -> Option<i32> {
    qpurify(args).status.code()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["entropy-sweep", "--samples", "5"]), Some(exit::OK));
    assert_eq!(code(&["montecarlo"]), Some(exit::CONFIG));
    assert_eq!(code(&["reconstruct"]), Some(exit::CONFIG));
    assert_eq!(code(&["reconstruct", "--probs", "0.5", "--psi", "1,0,0,0", "--k", "1"]), Some(exit::CONFIG));
    assert_eq!(code(&["reconstruct", "--probs", "0.5,0.5", "--k", "3"]), Some(exit::CONFIG));
    assert_eq!(code(&["reconstruct", "--probs", "1.5"]), Some(exit::CONFIG));
    assert_eq!(code(&["reconstruct", "--psi", "1,0,0,0"]), Some(exit::CONFIG));
    assert_eq!(code(&["montecarlo", "--k", "4"]), Some(exit::CONFIG));
    assert_eq!(code(&["kraus-audit", "--samples", "0"]), Some(exit::CONFIG));
    assert_eq!(code(&["montecarlo", "--k", "2", "--phase-grid", "4"]), Some(exit::CONFIG));
    // a complete record of a pure state needs |A| = 1
    assert_eq!(code(&["reconstruct", "--probs", "0.5,0.5,0.5"]), Some(exit::LIBRARY));
    assert_eq!(code(&["reconstruct", "--probs", "1,1,0.5"]), Some(exit::LIBRARY));
    assert_eq!(code(&["reconstruct", "--k", "1", "--psi", "0,0,0,0"]), Some(exit::LIBRARY));
    let missing = Path::new("/nonexistent-dir/out.json");
    assert_eq!(code(&["entropy-sweep", "--out", missing.to_str().unwrap()]), Some(exit::IO));
    assert_eq!(code(&["--config", "/nonexistent-dir/cfg.json"]), Some(exit::IO));
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command": "entropy-sweep", "sample": 3}"#).unwrap();
    let out = qpurify(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::CONFIG));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sample"));
}
