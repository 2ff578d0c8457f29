//! Config parsing, artifact layout and reproducibility of the runner.

use std::fs;
use std::path::Path;
use std::process::Command;

use qstab_cli::{parse_config, parse_config_str, run, Experiment, ExperimentConfig};

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_owned()
}

fn small(experiment: Experiment, out: &Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(experiment);
    c.output = out.to_path_buf();
    c.seed = 17;
    c.circuit.n_qubits = 3;
    c.circuit.iterations = 5;
    c.circuit.samples = 20;
    c.decoupling.n_qubits = 2;
    c.decoupling.total_time = 32.0;
    c.decoupling.realizations = 4;
    c.jumpcode.n_logical = 2;
    c.jumpcode.states = 3;
    c.figure5.trajectories = 4;
    c.figure5.total_time = 100.0;
    c.constants.n_logical = vec![1, 2];
    c.constants.draws = 2;
    c
}

#[test]
fn minimal_config_gets_defaults() {
    let c = parse_config_str(r#"{"experiment": "analytic-curves"}"#).unwrap();
    assert_eq!(c.experiment, Experiment::AnalyticCurves);
    assert_eq!(c.seed, 0);
    assert_eq!(c.figure5.phase, 0.0);
    assert_eq!(c.figure5.flips_per_swap, 2);
    assert!(c.circuit.pauli_set.is_none());
    assert_eq!(c, ExperimentConfig::new(Experiment::AnalyticCurves));
}

#[test]
fn figure5_config_round_trips() {
    let mut c = ExperimentConfig::new(Experiment::CombinedFigure5);
    c.seed = 99;
    c.figure5.kappa = 2e-3;
    c.figure5.full_heisenberg = true;
    let text = serde_json::to_string_pretty(&c).unwrap();
    assert_eq!(parse_config_str(&text).unwrap(), c);
}

#[test]
fn invalid_configs_are_rejected() {
    let err = parse_config_str(r#"{"experiment": "combined-figure5", "figure5": {"kappa": -1.0}}"#).unwrap_err();
    assert!(format!("{err:#}").contains("kappa"), "{err:#}");
    let err = parse_config_str(r#"{"experiment": "analytic-curves", "analytic": {"kappa": -1e-3}}"#).unwrap_err();
    assert!(format!("{err:#}").contains("kappa"), "{err:#}");
    let err = parse_config_str(r#"{"experiment": "nrd-memory", "decoupling": {"dtt": 1.0}}"#).unwrap_err();
    assert!(format!("{err:#}").contains("dtt"), "{err:#}");
    assert!(parse_config_str(r#"{"experiment": "no-such-thing"}"#).is_err());
    assert!(parse_config_str(r#"{"experiment": "nrd-memory", "decoupling": {"set": ["XQ"]}}"#).is_err());
    let err = parse_config(Path::new("/definitely/missing.json")).unwrap_err();
    assert!(format!("{err:#}").contains("does not exist"));
}

#[test]
fn every_experiment_writes_headed_csv_with_sidecars() {
    let expected: [(Experiment, &[(&str, &str)]); 8] = [
        (Experiment::CorrelationMatrix, &[("correlation.csv", "j,k,value")]),
        (Experiment::ParecFidelity, &[("parec_fidelity.csv", "iteration,fidelity,stderr,curve")]),
        (Experiment::NrdMemory, &[("nrd_memory.csv", "step,time,fidelity"), ("memory_bound.csv", "step,time,fidelity")]),
        (
            Experiment::DecoupleScaling,
            &[
                ("decouple_traces.csv", "step,time,fidelity,schedule"),
                ("decay_exponents.csv", "schedule,fitted_time_power,bound_time_power"),
            ],
        ),
        (Experiment::JumpcodeRecovery, &[("jumpcode_recovery.csv", "state,qubit,fidelity")]),
        (
            Experiment::CombinedFigure5,
            &[
                ("unprotected.csv", "time,fidelity_mean,fidelity_stderr,n_jumps_mean"),
                ("decoupling_only.csv", "time,fidelity_mean,fidelity_stderr,n_jumps_mean"),
                ("jumpcode_only.csv", "time,fidelity_mean,fidelity_stderr,n_jumps_mean"),
                ("combined.csv", "time,fidelity_mean,fidelity_stderr,n_jumps_mean"),
                ("analytic.csv", "time,fidelity,model"),
            ],
        ),
        (Experiment::AnalyticCurves, &[("analytic.csv", "time,fidelity,model")]),
        (
            Experiment::ConstantsCheck,
            &[("constants.csv", "n_physical,draw,quantity,closed_form,enumerated,abs_error")],
        ),
    ];
    for (experiment, files) in expected {
        let dir = tempfile::tempdir().unwrap();
        let config = small(experiment, dir.path());
        let written = run(&config).unwrap();
        for (name, head) in files {
            let path = dir.path().join(name);
            assert_eq!(header(&path), *head, "{name}");
            let meta: serde_json::Value =
                serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{name}.meta.json"))).unwrap()).unwrap();
            assert_eq!(meta["seed"], 17);
            assert_eq!(meta["experiment"], experiment.name());
            let embedded: ExperimentConfig = serde_json::from_value(meta["config"].clone()).unwrap();
            assert_eq!(embedded, config);
            assert!(written.contains(&path));
        }
        assert_eq!(written.len() % 2, 0);
    }
}

#[test]
fn correlation_diagonal_is_one() {
    let dir = tempfile::tempdir().unwrap();
    run(&small(Experiment::CorrelationMatrix, dir.path())).unwrap();
    let text = fs::read_to_string(dir.path().join("correlation.csv")).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[0] == f[1] {
            assert!((f[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn jumpcode_recovery_is_exact_and_codewords_exported() {
    let dir = tempfile::tempdir().unwrap();
    run(&small(Experiment::JumpcodeRecovery, dir.path())).unwrap();
    let text = fs::read_to_string(dir.path().join("jumpcode_recovery.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 6);
    for line in text.lines().skip(1) {
        let f: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((f - 1.0).abs() < 1e-10);
    }
    let words: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("codewords.json")).unwrap()).unwrap();
    assert_eq!(words.as_array().unwrap().len(), 4);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qstab"))
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    let mut c = small(Experiment::CombinedFigure5, &dir.path().join("ignored"));
    c.figure5.trajectories = 6;
    fs::write(&config_path, serde_json::to_string(&c).unwrap()).unwrap();
    let mut outputs = Vec::new();
    for (k, threads) in ["1", "4", "4"].iter().enumerate() {
        let out = dir.path().join(format!("run{k}"));
        let status = bin()
            .args(["run", "--config"])
            .arg(&config_path)
            .args(["--seed", "5", "--threads", threads, "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(status.status.success());
        outputs.push(out);
    }
    for name in ["unprotected.csv", "decoupling_only.csv", "jumpcode_only.csv", "combined.csv", "analytic.csv"] {
        let a = fs::read(outputs[0].join(name)).unwrap();
        for o in &outputs[1..] {
            assert_eq!(a, fs::read(o.join(name)).unwrap(), "{name}");
        }
    }
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outputs[0].join("combined.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 5);
}

#[test]
fn subcommands() {
    let out = bin().arg("list-experiments").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for e in Experiment::ALL {
        assert!(text.contains(e.name()));
    }

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, r#"{"experiment": "constants-check"}"#).unwrap();
    let out = bin().args(["validate", "--config"]).arg(&good).output().unwrap();
    assert!(out.status.success());
    let echoed: ExperimentConfig = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(echoed, ExperimentConfig::new(Experiment::ConstantsCheck));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"experiment": "combined-figure5", "figure5": {"kappa": -1}}"#).unwrap();
    let out = bin().args(["validate", "--config"]).arg(&bad).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa"));
}

#[test]
fn shipped_configs_and_schema_match_the_config_type() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    for entry in fs::read_dir(root.join("configs")).unwrap() {
        let path = entry.unwrap().path();
        parse_config(&path).unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
    }
    let schema: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(root.join("docs/config-schema.json")).unwrap()).unwrap();
    let config = serde_json::to_value(ExperimentConfig::new(Experiment::CombinedFigure5)).unwrap();
    let keys = |v: &serde_json::Value| {
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    assert_eq!(keys(&schema["properties"]), keys(&config));
    for (section, value) in config.as_object().unwrap() {
        if value.is_object() {
            assert_eq!(keys(&schema["properties"][section]["properties"]), keys(value), "{section}");
        }
    }
    let names: Vec<&str> =
        schema["properties"]["experiment"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(names, Experiment::ALL.map(|e| e.name()));
}
