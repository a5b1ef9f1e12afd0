//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. The library-level checks run once (shared across tests)
//! at full sweep sizes; the determinism criterion drives the compiled
//! binary end to end.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;

use upqi_cli::output::write_object_csv;
use upqi_core::imaging::ObjectMap;
use upqi_core::verify::{run_core_checks, CheckReport};

fn core_reports() -> &'static [CheckReport] {
    static REPORTS: OnceLock<Vec<CheckReport>> = OnceLock::new();
    REPORTS.get_or_init(|| run_core_checks(false))
}

fn assert_criterion(index: usize, label: &str) {
    let report = &core_reports()[index];
    println!(
        "[acceptance] {} {label}: {}",
        if report.passed { "PASS" } else { "FAIL" },
        report.detail
    );
    assert!(report.passed, "{label}: {}", report.detail);
}

#[test]
fn acceptance_1_oracle_equivalence() {
    assert_criterion(0, "closed forms match symplectic oracle to 1e-10 over 1000 draws");
}

#[test]
fn acceptance_2_commutation_identity() {
    assert_criterion(1, "output-mode commutator stays unit to 1e-9");
}

#[test]
fn acceptance_3_fock_oracle_equivalence() {
    assert_criterion(2, "truncated-Fock oracle matches closed forms to 1e-6");
}

#[test]
fn acceptance_4_snr_gamma_limits() {
    assert_criterion(3, "gamma bounds and SNR limit forms");
}

#[test]
fn acceptance_5_sensitivity_asymptotics() {
    assert_criterion(4, "sensitivity reference forms in both regimes");
}

#[test]
fn acceptance_6_protocol_roundtrips() {
    assert_criterion(5, "noiseless roundtrips, including vacuum-seed noise protocol");
}

#[test]
fn acceptance_7_reconstruction_normalization() {
    assert_criterion(6, "alternative normalizations demonstrably wrong, adopted forms exact");
}

#[test]
fn acceptance_8_monte_carlo_consistency() {
    assert_criterion(7, "standard-error bounds, coverage, 1/sqrt(n) scaling, runtime");
}

#[test]
fn acceptance_9_image_determinism_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("scan.conf");
    fs::write(
        &config_path,
        "r1 = 0.5\nr2 = 0.5\nalpha = 1\nbeta = 1\nsamples = 400\nseed = 11\nprotocol = qfi\n",
    )
    .unwrap();
    let map = ObjectMap::test_pattern(8, 8).unwrap();
    let object_path = dir.path().join("object.csv");
    write_object_csv(&object_path, &map).unwrap();

    let outputs = [
        "T_hat.csv",
        "phi_hat.csv",
        "recon.T.pgm",
        "recon.phi.pgm",
        "metrics.txt",
    ];
    let mut baseline: Option<Vec<Vec<u8>>> = None;
    for (run, workers) in [(0, "1"), (1, "4"), (2, "1")] {
        let out = dir.path().join(format!("run{run}"));
        let status = Command::new(env!("CARGO_BIN_EXE_upqi"))
            .args(["image", "--config"])
            .arg(&config_path)
            .arg("--object")
            .arg(&object_path)
            .arg("--out")
            .arg(&out)
            .env("UPQI_WORKERS", workers)
            .status()
            .unwrap();
        assert!(status.success(), "image run {run} failed");
        let bytes: Vec<Vec<u8>> = outputs
            .iter()
            .map(|name| fs::read(out.join(name)).unwrap())
            .collect();
        match &baseline {
            None => baseline = Some(bytes),
            Some(b) => assert_eq!(
                &bytes, b,
                "outputs differ between worker counts / repeats (run {run})"
            ),
        }
    }
    println!(
        "[acceptance] PASS image runs byte-identical across repeats and worker counts 1/4"
    );

    // The verification subcommand embeds the same suite; its quick mode must
    // succeed end to end.
    let out = Command::new(env!("CARGO_BIN_EXE_upqi"))
        .args(["verify", "--quick"])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "verify --quick failed:\n{stdout}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("PASS ")).count(),
        9,
        "expected nine passing checks:\n{stdout}"
    );
}

/// End-to-end file-format roundtrip: a noiseless scan written to disk and
/// re-ingested reproduces the input map.
#[test]
fn acceptance_file_roundtrip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("exact.conf");
    fs::write(
        &config_path,
        "r1 = 0.5\nr2 = 0.5\nalpha = 1\nbeta = 1\nsamples = exact\n",
    )
    .unwrap();
    let map = ObjectMap::test_pattern(8, 6).unwrap();
    let object_path = dir.path().join("object.csv");
    write_object_csv(&object_path, &map).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_upqi"))
        .args(["image", "--config"])
        .arg(&config_path)
        .arg("--object")
        .arg(&object_path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let reloaded = upqi_cli::load_object(&out.join("T_hat.csv")).unwrap();
    assert_eq!(reloaded.width(), map.width());
    assert_eq!(reloaded.height(), map.height());
    for i in 0..map.height() {
        for j in 0..map.width() {
            let (a, b) = (map.pixel(i, j), reloaded.pixel(i, j));
            assert!((a.transmission - b.transmission).abs() < 1e-9);
            assert!(
                upqi_core::wrapped_diff(a.transmission_phase, b.transmission_phase).abs()
                    < 1e-9
            );
        }
    }
    println!("[acceptance] PASS noiseless scan roundtrips through T_hat.csv to 1e-9");
    check_trailing_newlines(&out);
}

fn check_trailing_newlines(out: &Path) {
    for name in ["T_hat.csv", "phi_hat.csv", "metrics.txt"] {
        let bytes = fs::read(out.join(name)).unwrap();
        assert_eq!(bytes.last(), Some(&b'\n'), "{name} missing trailing newline");
    }
}
