//! End-to-end checks of the command-line surface: the tabulated-measure
//! file format, and the `lcoal` binary's exit codes and byte-determinism.

use std::io::Write;
use std::process::Command;

use lambda_coalescent::measure::CharacteristicMeasure;
use lambda_coalescent::rng::replicate_rng;

fn lcoal() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lcoal"))
}

#[test]
fn tabulated_csv_round_trip() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    // Point mass at V = log 2, i.e. 1 - eta = 1/2.
    writeln!(file, "u,v").unwrap();
    writeln!(file, "0.0,{}", std::f64::consts::LN_2).unwrap();
    writeln!(file, "1.0,{}", std::f64::consts::LN_2).unwrap();
    file.flush().unwrap();

    let spec = format!("tabulated:{}", file.path().display());
    let measure = CharacteristicMeasure::from_spec(&spec).unwrap();
    let mut rng = replicate_rng(0, 0);
    let x = measure.sample_one_minus_eta(&mut rng);
    assert!((x - 0.5).abs() < 1e-12);

    // Header is mandatory.
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "0.0,0.5").unwrap();
    writeln!(bad, "1.0,0.5").unwrap();
    bad.flush().unwrap();
    let spec = format!("tabulated:{}", bad.path().display());
    assert!(CharacteristicMeasure::from_spec(&spec).is_err());
}

#[test]
fn binary_is_deterministic_across_workers() {
    let run = |workers: &str| {
        let out = lcoal()
            .args([
                "coupled",
                "--measure",
                "beta:2,1",
                "--n",
                "200",
                "--replicates",
                "400",
                "--seed",
                "9",
                "--workers",
                workers,
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "{:?}", out);
        out.stdout
    };
    let first = run("1");
    let second = run("4");
    assert_eq!(first, second);
    assert!(first.ends_with(b"\n"));
    assert!(!first.windows(2).any(|w| w == b"\r\n"), "LF endings only");
}

#[test]
fn binary_exit_codes() {
    // Config error: unknown measure.
    let out = lcoal()
        .args(["rates", "--measure", "nope", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // Config error from clap itself: missing required argument.
    let out = lcoal().args(["rates", "--measure", "uniform"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Success path writes to a file when asked.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rates.csv");
    let out = lcoal()
        .args(["rates", "--measure", "uniform", "--n", "4,6"])
        .args(["--output", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(path).unwrap();
    assert!(body.starts_with("n,m,g_nm,p_nm\n"));
    assert!(body.contains("\n\nn,g_n\n"));
}

#[test]
fn verify_subset_via_binary_is_reproducible() {
    let run = || {
        let out = lcoal()
            .args(["verify", "--criteria", "2,12", "--workers", "3"])
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let (code1, body1) = run();
    let (code2, body2) = run();
    assert_eq!(code1, Some(0));
    assert_eq!(code1, code2);
    assert_eq!(body1, body2);
    let report: serde_json::Value = serde_json::from_slice(&body1).unwrap();
    assert_eq!(report["pass"], serde_json::json!(true));
}
