use std::process::Command;

use qsymlab::attacks::{AttackKind, Backend};
use qsymlab::constructions::Variant;
use qsymlab::harness::*;
use qsymlab::Error;

fn soem_config(attack: AttackKind, trials: u32) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(ConstructionSpec::new(Variant::SoEM22, 6), attack);
    c.t = 2;
    c.trials = trials;
    c.seed_base = 11;
    c
}

#[test]
fn zero_trials_give_an_empty_report() {
    let r = run_experiment(&soem_config(AttackKind::OfflineDedicatedQ1, 0)).unwrap();
    assert!(r.trials.is_empty());
    assert_eq!(r.summary.success_rate, 0.0);
    assert_eq!((r.summary.wilson_low, r.summary.wilson_high), (0.0, 1.0));
    assert_eq!(r.to_csv().unwrap().lines().count(), 1);
}

#[test]
fn reports_are_reproducible() {
    let mut c = soem_config(AttackKind::OfflineDedicatedQ1, 10);
    c.construction.per_trial = true;
    let a = run_experiment(&c).unwrap();
    let b = run_experiment(&c).unwrap();
    assert_eq!(a.reproducible_json().unwrap(), b.reproducible_json().unwrap());
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    let back: ExperimentReport = serde_json::from_str(&a.to_json().unwrap()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn soem22_offline_q1_hundred_trials() {
    let mut c = soem_config(AttackKind::OfflineDedicatedQ1, 100);
    c.construction.per_trial = true;
    let r = run_experiment(&c).unwrap();
    assert!(r.summary.success_rate >= 0.9, "{:?}", r.summary);
    assert!(r.trials.iter().all(|t| t.distinct_classical_inputs == 64 && t.quantum_queries == 0));
}

#[test]
fn wilson_interval_hand_values() {
    // 10/10 at z = 1.96: n / (n + z²)
    let (lo, hi) = wilson_interval(10, 10);
    assert!((lo - 10.0 / (10.0 + 1.959_963_984_540_054f64.powi(2))).abs() < 1e-12);
    assert_eq!(hi, 1.0);
    let (lo, hi) = wilson_interval(50, 100);
    assert!((lo - 0.403_831_8).abs() < 1e-6 && (hi - 0.596_168_2).abs() < 1e-6, "{lo} {hi}");
}

#[test]
fn comparison_follows_the_declared_convention() {
    let configs: Vec<_> = [AttackKind::OfflineDedicatedQ1, AttackKind::OfflineDedicatedQ2, AttackKind::Dedicated]
        .into_iter()
        .map(|a| {
            let mut c = soem_config(a, 1);
            c.max_retries = 1;
            c
        })
        .collect();
    let table = compare_attacks(&configs).unwrap();
    let (c, t) = (11u64, 2u32);
    let [q1, q2, ded] = &table.rows[..] else { panic!() };
    assert_eq!(q1.quantum_queries, 0);
    assert_eq!(q1.classical_queries, 64);
    assert_eq!(q2.quantum_queries, c << t);
    assert_eq!(ded.quantum_queries, (2 + 2 * ded.iterations) * (c << t));
    assert_eq!(ded.quantum_queries * q2.quantum_queries, ded.quantum_queries * (c << t));
    // (κ−t) + (n−t)c′ + mc′ + 1; two public permutations over a 4-point coset
    assert_eq!(q1.qubits_convention, 4 + 4 * 11 + 6 * 11 + 1);
    assert_eq!(q1.time_proxy, q1.iterations * (64 + 2 * 11 * 8));
    assert_eq!(table.to_markdown().lines().count(), 5);
    assert_eq!(table.to_csv().unwrap().lines().count(), 4);
}

#[test]
fn comparison_rejects_mixed_instances() {
    let a = soem_config(AttackKind::OfflineDedicatedQ1, 1);
    let mut b = a.clone();
    b.construction.seed = 99;
    assert!(matches!(compare_attacks(&[a, b]), Err(Error::InstanceMismatch(_))));
}

#[test]
fn config_errors_name_the_trial_seed() {
    let mut c = soem_config(AttackKind::Dedicated, 2);
    c.t = 6;
    let err = run_experiment(&c).unwrap_err().to_string();
    assert!(err.contains("seed"), "{err}");
}

#[test]
fn config_round_trips_through_json() {
    let mut c = soem_config(AttackKind::GroverMeetsSimon, 3);
    c.backend = Backend::Statevector;
    c.c_override = Some(3);
    let text = serde_json::to_string(&c).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
    let minimal = r#"{"construction": {"variant": "SoEM22", "n": 6}, "attack": "dedicated", "t": 2}"#;
    let m = ExperimentConfig::from_json(minimal).unwrap();
    assert_eq!((m.tau, m.max_retries, m.final_passes, m.schema_version), (2, 3, 1, REPORT_SCHEMA_VERSION));
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qsymlab")).args(args).output().unwrap()
}

#[test]
fn cli_exit_codes() {
    let ok = cli(&["bounds", "--n", "10", "--kappa", "10", "--t", "2", "--tau", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    let b: Bounds = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(b.c_prime, 21);

    assert_eq!(cli(&["bounds", "--n", "4", "--t", "4"]).status.code(), Some(2));
    assert_eq!(cli(&["attack", "--n", "6", "--attack", "nope"]).status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("qsymlab-cli-{}", std::process::id()));
    let out = dir.join("run.json");
    let args = ["attack", "--n", "6", "--t", "2", "--trials", "5", "--out", out.to_str().unwrap()];
    assert_eq!(cli(&args).status.code(), Some(0));
    assert!(out.exists() && out.with_extension("csv").exists());
    let miss = [&args[..], &["--min-success", "1.01"]].concat();
    assert_eq!(cli(&miss).status.code(), Some(3));
    assert_eq!(cli(&["report", "--config", out.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(cli(&["verify-periods", "--construction", "XopEM", "--n", "6", "--t", "2", "--seed", "4"]).status.code(), Some(0));
    let _ = std::fs::remove_dir_all(dir);
}
