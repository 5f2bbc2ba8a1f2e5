//! Exit-status contract, document determinism, and file-driven flows through
//! both the library entry point and the installed binary.

use std::path::PathBuf;
use std::process::Command;

use opspace::kernel::{save_kernel_samples, GridSpec, QuadRule, TabulatedKernel};
use opspace_cli::{run, CliError, CommandKind, KernelInput, OutputFormat, RunConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opspace"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("opspace-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn helmholtz_config(command: CommandKind, k: usize, points: usize) -> RunConfig {
    RunConfig {
        command,
        input: KernelInput::Helmholtz {
            wavenumber: 10.0,
            source: (0.0, 1.0),
            receiver: (2.0, 3.0),
            points,
            rule: QuadRule::Midpoint,
        },
        k,
        tol: 1e-10,
        seed: 1,
        format: OutputFormat::Json,
    }
}

fn ones_kernel_file(dir: &std::path::Path, points: usize) -> PathBuf {
    let row = GridSpec::new(2.0, 3.0, points, QuadRule::Midpoint).unwrap();
    let col = GridSpec::new(0.0, 1.0, points, QuadRule::Midpoint).unwrap();
    let ones = ndarray::Array2::from_elem((points, points), num_complex::Complex64::new(1.0, 0.0));
    let kernel = TabulatedKernel::new(ones, row, col).unwrap();
    let path = dir.join("ones.kern");
    save_kernel_samples(&path, &kernel).unwrap();
    path
}

fn non_hermitian_kernel_file(dir: &std::path::Path) -> PathBuf {
    let row = GridSpec::new(2.0, 3.0, 2, QuadRule::Midpoint).unwrap();
    let col = GridSpec::new(0.0, 1.0, 2, QuadRule::Midpoint).unwrap();
    let mut samples = ndarray::Array2::zeros((2, 2));
    samples[[0, 1]] = num_complex::Complex64::new(1.0, 0.0);
    let kernel = TabulatedKernel::new(samples, row, col).unwrap();
    let path = dir.join("nonhermitian.kern");
    save_kernel_samples(&path, &kernel).unwrap();
    path
}

#[test]
fn identical_configs_render_identical_documents() {
    let config = helmholtz_config(CommandKind::Channels, 10, 16);
    let a = run(&config).unwrap();
    let b = run(&config).unwrap();
    assert_eq!(a.rendered, b.rendered);
    assert!(a.all_passed);
}

#[test]
fn rendered_numbers_reparse_exactly() {
    let config = helmholtz_config(CommandKind::Channels, 6, 12);
    let outcome = run(&config).unwrap();
    let value: serde_json::Value = serde_json::from_str(&outcome.rendered).unwrap();
    let parsed: Vec<f64> = value["payload"]["singular_values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    match &outcome.document.payload {
        opspace_cli::Payload::Channels {
            singular_values, ..
        } => {
            assert_eq!(parsed.len(), singular_values.len());
            for (p, s) in parsed.iter().zip(singular_values.iter()) {
                assert_eq!(p.to_bits(), s.to_bits(), "round-trip changed a value");
            }
        }
        _ => panic!("wrong payload"),
    }
}

#[test]
fn hsnorm_of_constant_kernel_is_one() {
    let dir = temp_dir("ones");
    let path = ones_kernel_file(&dir, 4);
    let config = RunConfig {
        command: CommandKind::HsNorm,
        input: KernelInput::File(path),
        k: 1,
        tol: 1e-10,
        seed: 1,
        format: OutputFormat::Json,
    };
    let outcome = run(&config).unwrap();
    match &outcome.document.payload {
        opspace_cli::Payload::HsNorm {
            hs_norm_squared, ..
        } => {
            assert!((hs_norm_squared - 1.0).abs() < 1e-12, "{hs_norm_squared}");
        }
        _ => panic!("wrong payload"),
    }
    assert!(outcome.all_passed);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_is_for_spectra_only() {
    let mut config = helmholtz_config(CommandKind::HsNorm, 1, 8);
    config.format = OutputFormat::Csv;
    match run(&config) {
        Err(CliError::Usage(msg)) => assert!(msg.contains("csv")),
        other => panic!("expected usage error, got {other:?}"),
    }

    let mut config = helmholtz_config(CommandKind::Svd, 4, 8);
    config.format = OutputFormat::Csv;
    let outcome = run(&config).unwrap();
    let mut lines = outcome.rendered.lines();
    assert_eq!(lines.next().unwrap(), "index,singular_value");
    let first = lines.next().unwrap();
    assert!(first.starts_with("0,"), "{first}");
}

#[test]
fn config_invariants_are_usage_errors() {
    let mut config = helmholtz_config(CommandKind::Svd, 0, 8);
    assert!(matches!(run(&config), Err(CliError::Usage(_))));
    config.k = 4;
    config.tol = -1.0;
    assert!(matches!(run(&config), Err(CliError::Usage(_))));
}

#[test]
fn missing_file_is_a_failure_not_a_document() {
    let config = RunConfig {
        command: CommandKind::Validate,
        input: KernelInput::File(PathBuf::from("/nonexistent/kernel.kern")),
        k: 1,
        tol: 1e-10,
        seed: 1,
        format: OutputFormat::Json,
    };
    assert!(matches!(run(&config), Err(CliError::Failed(_))));
}

#[test]
fn binary_exit_codes_follow_the_contract() {
    // success
    let ok = bin()
        .args([
            "hsnorm",
            "--wavenumber",
            "10",
            "--source",
            "0",
            "1",
            "--receiver",
            "2",
            "3",
            "--points",
            "8",
        ])
        .output()
        .unwrap();
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );

    // check failure: eig on a non-hermitian kernel still emits the document
    let dir = temp_dir("exit2");
    let path = non_hermitian_kernel_file(&dir);
    let failed = bin()
        .args(["eig", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(failed.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&failed.stdout).unwrap();
    let hermitian_check = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "hermitian")
        .expect("hermitian check present");
    assert_eq!(hermitian_check["pass"], serde_json::Value::Bool(false));

    // usage errors
    let usage = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&usage.stderr).lines().count(), 1);

    let missing = bin()
        .args(["eig", "--input", "/nonexistent/kernel.kern"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));

    let bad_flag = bin()
        .args([
            "svd",
            "--wavenumber",
            "10",
            "--source",
            "0",
            "1",
            "--receiver",
            "2",
            "3",
            "--format",
            "xml",
        ])
        .output()
        .unwrap();
    assert_eq!(bad_flag.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_writes_output_file_and_keeps_stdout_clean() {
    let dir = temp_dir("outfile");
    let out_path = dir.join("doc.json");
    let run1 = bin()
        .args([
            "channels",
            "--k",
            "4",
            "--wavenumber",
            "10",
            "--source",
            "0",
            "1",
            "--receiver",
            "2",
            "3",
            "--points",
            "8",
            "--seed",
            "7",
            "--output",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(run1.status.code(), Some(0));
    assert!(run1.stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(doc["command"], "channels");
    // wall time goes to stderr, never into the document
    assert!(String::from_utf8_lossy(&run1.stderr).contains("wall_time_ms"));
    assert!(!written.contains("wall_time"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn channels_reports_fewer_triples_than_requested() {
    // at 8 points the numerically nonzero rank sits below 10
    let config = helmholtz_config(CommandKind::Channels, 10, 8);
    let outcome = run(&config).unwrap();
    match &outcome.document.payload {
        opspace_cli::Payload::Channels {
            requested,
            kept,
            dropped_below_cutoff,
            ..
        } => {
            assert_eq!(*requested, 10);
            assert!(*kept < 10, "kept {kept}");
            assert_eq!(*dropped_below_cutoff, requested - kept);
        }
        _ => panic!("wrong payload"),
    }
}

#[test]
fn eig_on_rectangular_kernel_flags_square_check() {
    let dir = temp_dir("rect");
    let row = GridSpec::new(2.0, 3.0, 3, QuadRule::Midpoint).unwrap();
    let col = GridSpec::new(0.0, 1.0, 2, QuadRule::Midpoint).unwrap();
    let samples = ndarray::Array2::from_elem((3, 2), num_complex::Complex64::new(1.0, 0.0));
    let kernel = TabulatedKernel::new(samples, row, col).unwrap();
    let path = dir.join("rect.kern");
    save_kernel_samples(&path, &kernel).unwrap();

    let output = bin()
        .args(["eig", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let square = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "square")
        .unwrap();
    assert_eq!(square["pass"], serde_json::Value::Bool(false));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn eig_on_hermitian_tabulated_kernel_passes() {
    // hermitian samples on matching grids
    let dir = temp_dir("herm");
    let row = GridSpec::new(0.0, 1.0, 3, QuadRule::Midpoint).unwrap();
    let col = GridSpec::new(0.0, 1.0, 3, QuadRule::Midpoint).unwrap();
    let mut samples = ndarray::Array2::zeros((3, 3));
    for i in 0..3 {
        samples[[i, i]] = num_complex::Complex64::new(1.0 + i as f64, 0.0);
    }
    samples[[0, 1]] = num_complex::Complex64::new(0.5, 0.5);
    samples[[1, 0]] = num_complex::Complex64::new(0.5, -0.5);
    let kernel = TabulatedKernel::new(samples, row, col).unwrap();
    let path = dir.join("hermitian.kern");
    save_kernel_samples(&path, &kernel).unwrap();

    let config = RunConfig {
        command: CommandKind::Eig,
        input: KernelInput::File(path),
        k: 3,
        tol: 1e-10,
        seed: 2,
        format: OutputFormat::Json,
    };
    let outcome = run(&config).unwrap();
    assert!(outcome.all_passed, "{:?}", outcome.document.checks);
    match &outcome.document.payload {
        opspace_cli::Payload::Eig { eigenvalues, .. } => {
            assert_eq!(eigenvalues.len(), 3);
        }
        _ => panic!("wrong payload"),
    }
    std::fs::remove_dir_all(&dir).ok();
}
