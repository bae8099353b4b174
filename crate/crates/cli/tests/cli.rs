use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;

use qcost::qcore::{CostObservable, DensityMatrix, PureState, QuantumChannel};
use qcost_cli::{run, subcommand_names, DISPATCH};

fn run_args(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args.iter().copied(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcost-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// Amplitude damping with every optional field filled in.
fn full_problem() -> PathBuf {
    let value = serde_json::json!({
        "channel": QuantumChannel::amplitude_damping(0.25).unwrap(),
        "cost": CostObservable::projector(2, 1),
        "zero_cost_state": PureState::basis(2, 0),
        "pulse": PureState::from_real(&[1.0, 1.0]).unwrap(),
        "input_state": DensityMatrix::maximally_mixed(2),
        "rho": DensityMatrix::from_diag(&[0.8, 0.2]).unwrap(),
        "sigma": DensityMatrix::from_diag(&[0.3, 0.7]).unwrap(),
    });
    temp_file("full.json", &value.to_string())
}

const OPERATIONS: [&str; 22] = [
    "holevoCapacityCost",
    "classicalPerUnitCost",
    "eaPerUnitCost",
    "privatePerUnitCost",
    "quantumCapacityCost",
    "blocklengthConstrainedPerUnitCost",
    "binaryChannelPerUnitCost",
    "gFunc",
    "capacityCost",
    "perUnitCost",
    "smallNoiseExpansion",
    "compositeCostPerUnitCost",
    "twoWayAssistedBounds",
    "figureData",
    "optimalTypeII",
    "hypothesisTestingRelEntropy",
    "steinDiagnostic",
    "classicalPPM",
    "privatePPMCheck",
    "privateRatePerUnitCost",
    "quantumRejectionRate",
    "eaPPMRates",
];

#[test]
fn every_operation_has_exactly_one_route() {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (op, _) in DISPATCH {
        *seen.entry(op).or_default() += 1;
    }
    for op in OPERATIONS {
        assert_eq!(seen.get(op), Some(&1), "{op}");
    }
    assert_eq!(seen.len(), OPERATIONS.len());

    let known: BTreeSet<String> = subcommand_names().into_iter().collect();
    let routed: BTreeSet<String> = DISPATCH
        .iter()
        .map(|(_, args)| args[0].to_string())
        .collect();
    assert!(routed.is_subset(&known), "{routed:?} vs {known:?}");
    for sub in known.iter().filter(|s| *s != "help") {
        assert!(
            routed.contains(sub),
            "subcommand {sub} reaches no operation"
        );
    }
}

#[test]
fn every_route_runs() {
    let input = full_problem();
    let input = input.to_str().unwrap();
    for (op, args) in DISPATCH {
        let mut argv: Vec<&str> = args.to_vec();
        argv.extend(["--input", input, "--restarts", "2"]);
        let (code, out, err) = run_args(&argv);
        assert_eq!(code, 0, "{op}: {err}");
        assert!(!out.is_empty(), "{op}");
    }
}

#[test]
fn binary_example() {
    let (code, out, _) = run_args(&["binary", "--eps", "0.1", "--delta", "0.01"]);
    assert_eq!(code, 0);
    assert_eq!(out, "5.51192\n");
}

#[test]
fn gaussian_example() {
    let args = [
        "gaussian",
        "--kind",
        "thermal",
        "--eta",
        "0.7",
        "--nth",
        "10",
        "--task",
        "classical",
        "--per-unit-cost",
    ];
    let (code, out, _) = run_args(&args);
    assert_eq!(code, 0);
    assert_eq!(out, "0.290526\n");
}

#[test]
fn infinite_values_use_the_inf_token() {
    let args = [
        "gaussian",
        "--kind",
        "thermal",
        "--eta",
        "0.7",
        "--nth",
        "10",
        "--task",
        "ea",
        "--per-unit-cost",
        "--json",
    ];
    let (code, out, _) = run_args(&args);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("inf"));
    let v: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(v["value"], "inf");
    assert!(v["divergence"].as_str().unwrap().contains("log2(1/nbar)"));
}

#[test]
fn figure_example_shape() {
    let (code, out, _) = run_args(&["figure", "--which", "ea-divergence", "--grid", "0.01:1:50"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "nbar,thermal,additive_noise,amplifier");
    assert_eq!(lines.len(), 51);
    assert!(lines.iter().all(|l| l.split(',').count() == 4));
    assert!(out.ends_with('\n') && !out.contains('\r'));
}

#[test]
fn output_is_deterministic() {
    let input = full_problem();
    let input = input.to_str().unwrap();
    for args in [
        vec!["capacity", "--beta", "0.1", "--json"],
        vec!["private", "--json"],
        vec!["ppm", "--n", "2,3", "--m", "2,8"],
    ] {
        let mut argv = args.clone();
        argv.extend(["--input", input, "--restarts", "3", "--seed", "7"]);
        let first = run_args(&argv);
        let second = run_args(&argv);
        assert_eq!(first.0, 0, "{}", first.2);
        assert_eq!(first, second);
    }
}

#[test]
fn validation_errors_exit_2_with_check_name() {
    let bad = temp_file(
        "bad.json",
        r#"{"channel": {"dim_in":1,"dim_out":1,"kraus":[[[[0.5,0.0]]]]}}"#,
    );
    let (code, _, err) = run_args(&["per-unit-cost", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(
        err.contains("error[well-formed-input]") && err.contains("completeness"),
        "{err}"
    );

    let (code, _, err) = run_args(&["binary", "--eps", "1.5", "--delta", "0.1"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[parameter-range]"), "{err}");

    let (code, _, err) = run_args(&[
        "gaussian",
        "--kind",
        "pure-loss",
        "--eta",
        "0.7",
        "--task",
        "ea",
        "--per-unit-cost",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("supported-task"), "{err}");

    let (code, _, err) = run_args(&["binary", "--eps", "0.1", "--delta", "0.1", "--dim-cap", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("dim-cap"), "{err}");

    let (code, _, _) = run_args(&["no-such-command"]);
    assert_eq!(code, 2);

    let (code, _, err) = run_args(&["per-unit-cost"]);
    assert_eq!(code, 2);
    assert!(err.contains("--input"), "{err}");
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qcost-cli-out-{}.txt", std::process::id()));
    let (code, out, _) = run_args(&[
        "binary",
        "--eps",
        "0",
        "--delta",
        "0.5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "1\n");
    let _ = std::fs::remove_file(path);
}

#[test]
fn binary_honours_thread_variable() {
    let exe = env!("CARGO_BIN_EXE_qcost");
    let out = Command::new(exe)
        .args(["binary", "--eps", "0.1", "--delta", "0.01"])
        .env("QCOST_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "5.51192\n");

    let out = Command::new(exe)
        .args(["binary", "--eps", "0.1", "--delta", "0.01"])
        .env("QCOST_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
