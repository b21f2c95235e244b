//! End-to-end tests that spawn the compiled `noisyops` binary.

use noisyops::channel::{Channel, KrausDecomposition, MixedUnitaryDecomposition};
use noisyops::dilation::DilationUnitary;
use noisyops::matrix::{Complex64, ComplexMatrix};
use noisyops::pauli;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noisyops"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary should spawn")
}

fn write_channel(channel: &Channel) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{}", serde_json::to_string(channel).unwrap()).unwrap();
    f
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn identity_channel() -> Channel {
    Channel::Kraus(KrausDecomposition::single(ComplexMatrix::identity(2)).unwrap())
}

fn pauli_third_channel() -> Channel {
    let w = 1.0 / 3.0;
    Channel::MixedUnitary(
        MixedUnitaryDecomposition::new(
            vec![w, w, w],
            vec![pauli::sigma1(), pauli::sigma2(), pauli::sigma3()],
        )
        .unwrap(),
    )
}

#[test]
fn decompose_identity_prints_single_term_channel() {
    let input = write_channel(&identity_channel());
    let out = run(&["decompose", "--input", path_str(input.path())]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let parsed: Channel = serde_json::from_slice(&out.stdout).unwrap();
    let Channel::MixedUnitary(dec) = parsed else {
        panic!("expected mixed-unitary output");
    };
    assert_eq!(dec.len(), 1);
    assert!((dec.weights()[0] - 1.0).abs() < 1e-14);
}

#[test]
fn decompose_pauli_channel_yields_three_uniform_terms() {
    let input = write_channel(&pauli_third_channel());
    let out = run(&["decompose", "--input", path_str(input.path())]);
    assert!(out.status.success());
    let parsed: Channel = serde_json::from_slice(&out.stdout).unwrap();
    let Channel::MixedUnitary(dec) = parsed else {
        panic!("expected mixed-unitary output");
    };
    assert_eq!(dec.len(), 3);
    for &w in dec.weights() {
        assert!((w - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn decompose_rejects_non_unital_channel_with_code_4() {
    let a0 = ComplexMatrix::from_rows(vec![
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
    .unwrap();
    let a1 = ComplexMatrix::from_rows(vec![
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
    .unwrap();
    let damping = Channel::Kraus(KrausDecomposition::new(2, vec![a0, a1]).unwrap());
    let input = write_channel(&damping);
    let out = run(&["decompose", "--input", path_str(input.path())]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unital"));
}

#[test]
fn malformed_json_exits_with_code_3() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\"dim\": 2, \"kraus\": [broken").unwrap();
    let out = run(&["decompose", "--input", path_str(f.path())]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["census", "--trials", "5", "--seed", "1", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_output_is_byte_deterministic_per_seed() {
    let args = ["random", "--kind", "random-mixed-unitary", "--seed", "7", "-k", "4"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "same seed must give identical bytes");

    let other = run(&["random", "--kind", "random-mixed-unitary", "--seed", "8", "-k", "4"]);
    assert_ne!(first.stdout, other.stdout, "different seeds should differ");

    let parsed: Channel = serde_json::from_slice(&first.stdout).unwrap();
    let Channel::MixedUnitary(dec) = parsed else {
        panic!("expected a mixed-unitary channel");
    };
    assert_eq!(dec.len(), 4);
}

#[test]
fn random_to_dilate_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let channel_path = dir.path().join("channel.json");
    let dilation_path = dir.path().join("dilation.json");

    let out = run(&[
        "random",
        "--kind",
        "random-unital-choi",
        "--seed",
        "11",
        "--output",
        path_str(&channel_path),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "dilate",
        "--input",
        path_str(&channel_path),
        "-k",
        "4",
        "--output",
        path_str(&dilation_path),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // With --output present the verification distance goes to stdout.
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("distance"), "stdout was: {stdout}");

    let dilation: DilationUnitary =
        serde_json::from_str(&std::fs::read_to_string(&dilation_path).unwrap()).unwrap();
    assert_eq!(dilation.env_dim(), 4);
    assert_eq!(dilation.matrix().rows(), 8);
}

#[test]
fn dilate_pauli_channel_respects_the_kraus_rank_gate() {
    let input = write_channel(&pauli_third_channel());
    let rejected = run(&["dilate", "--input", path_str(input.path()), "-k", "2"]);
    assert_eq!(rejected.status.code(), Some(6));

    let accepted = run(&["dilate", "--input", path_str(input.path()), "-k", "3"]);
    assert!(
        accepted.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&accepted.stderr)
    );
    let dilation: DilationUnitary = serde_json::from_slice(&accepted.stdout).unwrap();
    assert_eq!(dilation.env_dim(), 3);
    assert_eq!(dilation.matrix().rows(), 6);
}

#[test]
fn census_csv_has_no_rank_three_row() {
    let out = run(&[
        "census", "--dim", "2", "--env-dim", "2", "--trials", "50", "--seed", "3",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("rank,count\n"));
    for line in text.lines().skip(1) {
        assert!(!line.starts_with("3,"), "unexpected rank-3 row: {line}");
    }
}

#[test]
fn census_json_reports_seed_trials_and_gap() {
    let out = run(&[
        "census", "--trials", "25", "--seed", "5",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["trials"], 25);
    assert_eq!(value["seed"], 5);
    assert!(value["min_gap"].as_f64().unwrap() > 0.0);
    assert!(value["counts"].is_object());
}
