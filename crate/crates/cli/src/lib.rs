//! Command execution and machine-readable result documents.
//!
//! Every command loads or builds a discretized kernel operator, runs the
//! requested analysis, and produces a [`Document`] whose serialization is
//! deterministic for identical configuration and seed: struct field order is
//! fixed and numbers are written in shortest round-trip form. Wall time is
//! reported on the diagnostic stream by the binary, never inside the
//! document, so repeated runs are byte-identical.
//!
//! Exit-status contract: 0 when every check passes, 2 when the document was
//! produced but a check failed, 1 for usage, file, and argument errors (the
//! document is only omitted in the last case).
//!
//! Vectors in payloads are reported in grid (node) coordinates: the shifted
//! coordinates the solvers work in are divided by the square roots of the
//! quadrature weights, so entries read as function values at the grid nodes.

use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

use opspace::kernel::{
    discretize, load_kernel_samples, DiscretizedOperator, GridSpec, KernelSpec, QuadRule, Side,
};
use opspace::operator::{HsMethod, DEFAULT_HERMITIAN_TOL};
use opspace::spectral::{hermitian_eig, verify_eigen_properties};
use opspace::svd::{sum_rule_check, svd, verify_svd, SUM_RULE_GAP_TOL};
use opspace::CoeffVector;

/// Relative tolerance for the four-way Hilbert-Schmidt agreement check.
pub const HS_AGREEMENT_TOL: f64 = 1e-10;
/// Relative tolerance for the truncation Pythagoras check.
pub const PYTHAGORAS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    HsNorm,
    Truncate,
    Eig,
    Svd,
    Channels,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Validate => "validate",
            CommandKind::HsNorm => "hsnorm",
            CommandKind::Truncate => "truncate",
            CommandKind::Eig => "eig",
            CommandKind::Svd => "svd",
            CommandKind::Channels => "channels",
        }
    }

    fn emits_spectrum(&self) -> bool {
        matches!(
            self,
            CommandKind::Eig | CommandKind::Svd | CommandKind::Channels
        )
    }
}

#[derive(Clone, Debug)]
pub enum KernelInput {
    File(PathBuf),
    Helmholtz {
        wavenumber: f64,
        source: (f64, f64),
        receiver: (f64, f64),
        points: usize,
        rule: QuadRule,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: KernelInput,
    pub k: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: OutputFormat,
}

/// Errors that abort a run before a document exists; they map to exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(opspace::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Failed(err) => write!(f, "{err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<opspace::Error> for CliError {
    fn from(err: opspace::Error) -> Self {
        CliError::Failed(err)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavenumber: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub receiver: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    pub k: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl Check {
    fn bounded(name: &'static str, measured: f64, threshold: f64) -> Self {
        Check {
            name,
            pass: measured <= threshold,
            measured: Some(measured),
            threshold: Some(threshold),
        }
    }

    fn flag(name: &'static str, pass: bool) -> Self {
        Check {
            name,
            pass,
            measured: None,
            threshold: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CNum {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HsMethods {
    pub column_sums: f64,
    pub entry_squares: f64,
    pub trace_domain_gram: f64,
    pub trace_range_gram: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumRulePayload {
    pub sum_s_squared: f64,
    pub hs_norm_squared: f64,
    pub gap: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigVerification {
    pub reality: bool,
    pub ordering: bool,
    pub orthogonality: bool,
    pub residuals: bool,
    pub sup_norm_match: bool,
    pub max_rayleigh_imag: f64,
    pub max_gram_defect: f64,
    pub max_residual: f64,
    pub sup_norm_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SvdVerification {
    pub values_sorted: bool,
    pub right_orthonormal: bool,
    pub left_orthonormal: bool,
    pub pairing: bool,
    pub adjoint_pairing: bool,
    pub max_right_defect: f64,
    pub max_left_defect: f64,
    pub max_pairing_residual: f64,
    pub max_adjoint_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Validate {
        source_space: String,
        receiver_space: String,
        rows: usize,
        cols: usize,
    },
    HsNorm {
        hs_norm: f64,
        hs_norm_squared: f64,
        methods: HsMethods,
        max_relative_spread: f64,
    },
    Truncate {
        kept_rows: usize,
        kept_cols: usize,
        tail_hs_norm: f64,
        tail_hs_norm_squared: f64,
        kept_hs_norm: f64,
        total_hs_norm: f64,
        pythagoras_gap: f64,
    },
    Eig {
        hermitian_defect: Option<f64>,
        eigenvalues: Vec<f64>,
        residuals: Vec<f64>,
        converged: Vec<bool>,
        verification: Option<EigVerification>,
    },
    Svd {
        singular_values: Vec<f64>,
        dropped: usize,
        converged: Vec<bool>,
        verification: Option<SvdVerification>,
        #[serde(skip_serializing_if = "Option::is_none")]
        sum_rule: Option<SumRulePayload>,
    },
    Channels {
        singular_values: Vec<f64>,
        requested: usize,
        kept: usize,
        dropped_below_cutoff: usize,
        sum_rule: SumRulePayload,
        source_nodes: Vec<f64>,
        receiver_nodes: Vec<f64>,
        source_mode_samples: Vec<Vec<CNum>>,
        receiver_mode_samples: Vec<Vec<CNum>>,
    },
}

/// The machine-readable result of one run. Serialization is deterministic:
/// fixed key order, shortest round-trip numbers, no timing information.
#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub command: &'static str,
    pub parameters: Parameters,
    pub vector_convention: &'static str,
    pub payload: Payload,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub document: Document,
    pub rendered: String,
    pub all_passed: bool,
}

fn echo_parameters(config: &RunConfig) -> Parameters {
    match &config.input {
        KernelInput::File(path) => Parameters {
            input: Some(path.display().to_string()),
            wavenumber: None,
            source: None,
            receiver: None,
            points: None,
            rule: None,
            k: config.k,
            tol: config.tol,
            seed: config.seed,
            format: config.format.name().to_string(),
        },
        KernelInput::Helmholtz {
            wavenumber,
            source,
            receiver,
            points,
            rule,
        } => Parameters {
            input: None,
            wavenumber: Some(*wavenumber),
            source: Some([source.0, source.1]),
            receiver: Some([receiver.0, receiver.1]),
            points: Some(*points),
            rule: Some(rule.name().to_string()),
            k: config.k,
            tol: config.tol,
            seed: config.seed,
            format: config.format.name().to_string(),
        },
    }
}

fn build_operator(input: &KernelInput) -> Result<DiscretizedOperator, CliError> {
    match input {
        KernelInput::File(path) => {
            let kernel = load_kernel_samples(path)?;
            let (row_grid, col_grid) = match &kernel {
                KernelSpec::Tabulated(t) => (t.row_grid().clone(), t.col_grid().clone()),
                _ => unreachable!("loader only produces tabulated kernels"),
            };
            Ok(discretize(&kernel, &col_grid, &row_grid)?)
        }
        KernelInput::Helmholtz {
            wavenumber,
            source,
            receiver,
            points,
            rule,
        } => {
            let source = GridSpec::new(source.0, source.1, *points, *rule)?;
            let receiver = GridSpec::new(receiver.0, receiver.1, *points, *rule)?;
            Ok(discretize(
                &KernelSpec::Helmholtz1D {
                    wavenumber: *wavenumber,
                },
                &source,
                &receiver,
            )?)
        }
    }
}

fn complex_rows(vectors: &[CoeffVector]) -> Vec<Vec<CNum>> {
    vectors
        .iter()
        .map(|v| v.iter().map(|z| CNum { re: z.re, im: z.im }).collect())
        .collect()
}

/// Execute a command and produce its document. Usage and file problems error
/// out; check failures are carried inside the document.
pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    if config.k < 1 {
        return Err(CliError::Usage("--k must be at least 1".to_string()));
    }
    if config.tol <= 0.0 || !config.tol.is_finite() {
        return Err(CliError::Usage(
            "--tol must be positive and finite".to_string(),
        ));
    }
    if config.format == OutputFormat::Csv && !config.command.emits_spectrum() {
        return Err(CliError::Usage(format!(
            "csv output is only available for spectra commands (eig, svd, channels), not '{}'",
            config.command.name()
        )));
    }

    let disc = build_operator(&config.input)?;
    let (payload, checks) = match config.command {
        CommandKind::Validate => run_validate(&disc),
        CommandKind::HsNorm => run_hsnorm(&disc),
        CommandKind::Truncate => run_truncate(&disc, config)?,
        CommandKind::Eig => run_eig(&disc, config)?,
        CommandKind::Svd => run_svd(&disc, config)?,
        CommandKind::Channels => run_channels(&disc, config)?,
    };

    let all_passed = checks.iter().all(|c| c.pass);
    let document = Document {
        command: config.command.name(),
        parameters: echo_parameters(config),
        vector_convention: "node samples (shifted coordinates divided by sqrt quadrature weights)",
        payload,
        checks,
        all_passed,
    };
    let rendered = render(&document, config.format);
    Ok(RunOutcome {
        document,
        rendered,
        all_passed,
    })
}

fn run_validate(disc: &DiscretizedOperator) -> (Payload, Vec<Check>) {
    let source_report = disc.source_space.validate();
    let receiver_report = disc.receiver_space.validate();
    let (rows, cols) = disc.op.shape();
    let checks = vec![
        Check::flag("source_space_valid", source_report.is_valid()),
        Check::flag("receiver_space_valid", receiver_report.is_valid()),
    ];
    (
        Payload::Validate {
            source_space: source_report.to_string(),
            receiver_space: receiver_report.to_string(),
            rows,
            cols,
        },
        checks,
    )
}

fn run_hsnorm(disc: &DiscretizedOperator) -> (Payload, Vec<Check>) {
    let methods = HsMethods {
        column_sums: disc.op.hs_norm(HsMethod::ColumnSums),
        entry_squares: disc.op.hs_norm(HsMethod::EntrySquares),
        trace_domain_gram: disc.op.hs_norm(HsMethod::TraceDomainGram),
        trace_range_gram: disc.op.hs_norm(HsMethod::TraceRangeGram),
    };
    let reference = methods.entry_squares;
    let spread = [
        methods.column_sums,
        methods.trace_domain_gram,
        methods.trace_range_gram,
    ]
    .iter()
    .map(|m| (m - reference).abs())
    .fold(0.0f64, f64::max)
        / reference.max(f64::MIN_POSITIVE);
    let checks = vec![Check::bounded("hs_methods_agree", spread, HS_AGREEMENT_TOL)];
    (
        Payload::HsNorm {
            hs_norm: reference,
            hs_norm_squared: reference * reference,
            methods,
            max_relative_spread: spread,
        },
        checks,
    )
}

fn run_truncate(
    disc: &DiscretizedOperator,
    config: &RunConfig,
) -> Result<(Payload, Vec<Check>), CliError> {
    let (rows, cols) = disc.op.shape();
    let keep_rows = config.k.min(rows);
    let keep_cols = config.k.min(cols);
    let (kept, cert) = disc.op.truncate(keep_rows, keep_cols)?;
    let total = disc.op.hs_norm(HsMethod::EntrySquares);
    let kept_norm = kept.hs_norm(HsMethod::EntrySquares);
    let lhs = cert.tail_hs_norm * cert.tail_hs_norm + kept_norm * kept_norm;
    let gap = (lhs - total * total).abs() / (total * total).max(f64::MIN_POSITIVE);
    let checks = vec![Check::bounded("pythagoras", gap, PYTHAGORAS_TOL)];
    Ok((
        Payload::Truncate {
            kept_rows: cert.kept_rows,
            kept_cols: cert.kept_cols,
            tail_hs_norm: cert.tail_hs_norm,
            tail_hs_norm_squared: cert.tail_hs_norm * cert.tail_hs_norm,
            kept_hs_norm: kept_norm,
            total_hs_norm: total,
            pythagoras_gap: gap,
        },
        checks,
    ))
}

fn run_eig(
    disc: &DiscretizedOperator,
    config: &RunConfig,
) -> Result<(Payload, Vec<Check>), CliError> {
    let (rows, cols) = disc.op.shape();
    if rows != cols {
        let checks = vec![Check::flag("square", false)];
        return Ok((
            Payload::Eig {
                hermitian_defect: None,
                eigenvalues: vec![],
                residuals: vec![],
                converged: vec![],
                verification: None,
            },
            checks,
        ));
    }
    let defect = disc.op.hermitian_defect()?;
    if defect > DEFAULT_HERMITIAN_TOL {
        let checks = vec![
            Check::flag("square", true),
            Check::bounded("hermitian", defect, DEFAULT_HERMITIAN_TOL),
        ];
        return Ok((
            Payload::Eig {
                hermitian_defect: Some(defect),
                eigenvalues: vec![],
                residuals: vec![],
                converged: vec![],
                verification: None,
            },
            checks,
        ));
    }

    let d = hermitian_eig(&disc.op, config.k, config.tol, config.seed)?;
    let report = verify_eigen_properties(&disc.op, &d, 1e-8)?;
    let checks = vec![
        Check::flag("square", true),
        Check::bounded("hermitian", defect, DEFAULT_HERMITIAN_TOL),
        Check::flag("converged", d.converged.iter().all(|&f| f)),
        Check::flag("reality", report.reality),
        Check::flag("ordering", report.ordering),
        Check::flag("orthogonality", report.orthogonality),
        Check::flag("residuals", report.residuals),
        Check::flag("sup_norm_match", report.sup_norm_match),
    ];
    Ok((
        Payload::Eig {
            hermitian_defect: Some(defect),
            eigenvalues: d.eigenvalues.clone(),
            residuals: d.residuals.clone(),
            converged: d.converged.clone(),
            verification: Some(EigVerification {
                reality: report.reality,
                ordering: report.ordering,
                orthogonality: report.orthogonality,
                residuals: report.residuals,
                sup_norm_match: report.sup_norm_match,
                max_rayleigh_imag: report.max_rayleigh_imag,
                max_gram_defect: report.max_gram_defect,
                max_residual: report.max_residual,
                sup_norm_gap: report.sup_norm_gap,
            }),
        },
        checks,
    ))
}

fn svd_verification(report: &opspace::svd::SvdReport) -> SvdVerification {
    SvdVerification {
        values_sorted: report.values_sorted,
        right_orthonormal: report.right_orthonormal,
        left_orthonormal: report.left_orthonormal,
        pairing: report.pairing,
        adjoint_pairing: report.adjoint_pairing,
        max_right_defect: report.max_right_defect,
        max_left_defect: report.max_left_defect,
        max_pairing_residual: report.max_pairing_residual,
        max_adjoint_residual: report.max_adjoint_residual,
    }
}

fn run_svd(
    disc: &DiscretizedOperator,
    config: &RunConfig,
) -> Result<(Payload, Vec<Check>), CliError> {
    let (rows, cols) = disc.op.shape();
    let full_rank = rows.min(cols);
    let r = svd(&disc.op, config.k, config.tol, config.seed)?;
    let report = verify_svd(&disc.op, &r, 1e-8)?;
    let mut checks = vec![
        Check::flag("converged", r.converged.iter().all(|&f| f)),
        Check::flag("values_sorted", report.values_sorted),
        Check::flag("right_orthonormal", report.right_orthonormal),
        Check::flag("left_orthonormal", report.left_orthonormal),
        Check::flag("pairing", report.pairing),
        Check::flag("adjoint_pairing", report.adjoint_pairing),
    ];
    let sum_rule = if config.k == full_rank {
        let s = sum_rule_check(&r, &disc.op);
        checks.push(Check::bounded("sum_rule_gap", s.gap, SUM_RULE_GAP_TOL));
        Some(SumRulePayload {
            sum_s_squared: s.sum_s_squared,
            hs_norm_squared: s.hs_norm_squared,
            gap: s.gap,
            pass: s.pass,
        })
    } else {
        None
    };
    Ok((
        Payload::Svd {
            singular_values: r.singular_values.clone(),
            dropped: r.dropped,
            converged: r.converged.clone(),
            verification: Some(svd_verification(&report)),
            sum_rule,
        },
        checks,
    ))
}

fn run_channels(
    disc: &DiscretizedOperator,
    config: &RunConfig,
) -> Result<(Payload, Vec<Check>), CliError> {
    let (rows, cols) = disc.op.shape();
    let full_rank = rows.min(cols);
    let requested = config.k;
    // the demo always decomposes at full rank for the sum rule, then reports
    // the leading requested triples
    let r = svd(&disc.op, full_rank, config.tol, config.seed)?;
    let report = verify_svd(&disc.op, &r, 1e-8)?;
    let rule = sum_rule_check(&r, &disc.op);

    let kept = requested.min(r.len());
    let singular_values: Vec<f64> = r.singular_values[..kept].to_vec();
    let mut nonincreasing = true;
    for w in singular_values.windows(2) {
        if w[1] > w[0] {
            nonincreasing = false;
        }
    }

    let psi_node: Vec<CoeffVector> = r.right_vectors.vectors()[..kept]
        .iter()
        .map(|v| disc.node_from_shift(Side::Source, v))
        .collect::<opspace::Result<_>>()?;
    let phi_node: Vec<CoeffVector> = r.left_vectors.vectors()[..kept]
        .iter()
        .map(|v| disc.node_from_shift(Side::Receiver, v))
        .collect::<opspace::Result<_>>()?;

    let checks = vec![
        Check::flag("values_nonincreasing", nonincreasing),
        Check::bounded("sum_rule_gap", rule.gap, SUM_RULE_GAP_TOL),
        Check::flag("right_orthonormal", report.right_orthonormal),
        Check::flag("left_orthonormal", report.left_orthonormal),
        Check::flag("pairing", report.pairing),
    ];
    Ok((
        Payload::Channels {
            singular_values,
            requested,
            kept,
            dropped_below_cutoff: requested.saturating_sub(kept),
            sum_rule: SumRulePayload {
                sum_s_squared: rule.sum_s_squared,
                hs_norm_squared: rule.hs_norm_squared,
                gap: rule.gap,
                pass: rule.pass,
            },
            source_nodes: disc.source_grid.nodes(),
            receiver_nodes: disc.receiver_grid.nodes(),
            source_mode_samples: complex_rows(&psi_node),
            receiver_mode_samples: complex_rows(&phi_node),
        },
        checks,
    ))
}

/// Render a document in the requested format. JSON is the byte-deterministic
/// primary form; CSV covers spectra tables only.
pub fn render(document: &Document, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(document).expect("document serialization cannot fail");
            text.push('\n');
            text
        }
        OutputFormat::Csv => match &document.payload {
            Payload::Eig {
                eigenvalues,
                residuals,
                ..
            } => {
                let mut out = String::from("index,eigenvalue,residual\n");
                for (i, (v, r)) in eigenvalues.iter().zip(residuals.iter()).enumerate() {
                    out.push_str(&format!("{i},{v},{r}\n"));
                }
                out
            }
            Payload::Svd {
                singular_values, ..
            }
            | Payload::Channels {
                singular_values, ..
            } => {
                let mut out = String::from("index,singular_value\n");
                for (i, s) in singular_values.iter().enumerate() {
                    out.push_str(&format!("{i},{s}\n"));
                }
                out
            }
            _ => unreachable!("csv rendering is gated to spectra commands"),
        },
    }
}
