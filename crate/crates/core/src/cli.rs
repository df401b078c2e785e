//! Command-line front end.
//!
//! Every command returns a [`RunReport`] that is printed as JSON on stdout.
//! Data files go to the `--out` directory: matrices as JSON, spectra and time
//! series as CSV with 17 significant digits.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error;
use crate::lattice::{build_model, max_corner_magnitude, Boundary, LatticeSpec, LatticeSpecFile};
use crate::matrix::ComplexMatrix;
use crate::pseudoherm::{
    certify_metric, hermitize_pair, intertwining_residual, metric_inner_product, verify_pseudo_hermiticity, MetricCertificate,
    PseudoHermitianSystem, StateVector, SystemDescription,
};
use crate::scalar::Tolerances;
use crate::su_basis::{StructureConstants, SuBasis, DEFAULT_TENSOR_CAP};

/// Relative drift of the η-norm allowed during evolution, in units of `--tol-eig`.
const DRIFT_FACTOR: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(name = "pseudoherm", version, about = "Pseudo-hermitian operators, metrics and loss-gain chains")]
pub struct Cli {
    /// Output directory for data files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Eigen-solver and hermiticity tolerance.
    #[arg(long, global = true)]
    pub tol_eig: Option<f64>,
    /// Positive-definiteness threshold for metric eigenvalues.
    #[arg(long, global = true)]
    pub tol_pd: Option<f64>,
    /// Allow structure-constant dumps above the default dimension cap.
    #[arg(long, global = true)]
    pub force_tensor: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the SU(N) generators and structure constants.
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// Build a lattice model from a spec file.
    Build {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Real spectrum of a model with a positive-definite metric.
    Spectrum {
        #[arg(long)]
        model: PathBuf,
    },
    /// Pseudo-hermiticity residual and metric certificate.
    Verify {
        #[arg(long)]
        model: PathBuf,
    },
    /// Pseudo-unitary evolution of a state over a time grid.
    Evolve {
        #[arg(long)]
        model: PathBuf,
        /// `start:stop:step` or a comma-separated list of times.
        #[arg(long)]
        t_grid: TimeGrid,
        /// JSON array of `[re, im]` amplitudes.
        #[arg(long)]
        psi0: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for I/O, 3 for invalid input or refused preconditions, 4 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Validation(_) => 3,
            CliError::Core(e) => match e {
                Error::Numerical(_) | Error::Consistency(_) | Error::NoSolution { .. } => 4,
                _ => 3,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub residuals: BTreeMap<String, Check>,
    pub values: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    pub status: Status,
}

impl RunReport {
    fn new(command: &str, inputs: Value, tol: &Tolerances<f64>) -> Self {
        Self {
            command: command.into(),
            inputs,
            outputs: Vec::new(),
            tolerances: BTreeMap::from([("eig".into(), tol.eig), ("pd".into(), tol.pd)]),
            residuals: BTreeMap::new(),
            values: BTreeMap::new(),
            warnings: Vec::new(),
            status: Status::Pass,
        }
    }

    fn check(&mut self, name: &str, value: f64, tolerance: f64) {
        let pass = value <= tolerance;
        if !pass {
            self.status = Status::Fail;
        }
        self.residuals.insert(name.into(), Check { value, tolerance, pass });
    }

    fn value(&mut self, name: &str, v: impl Into<Value>) {
        self.values.insert(name.into(), v.into());
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 4,
        }
    }
}

/// Sample times, either `start:stop:step` or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid(pub Vec<f64>);

impl FromStr for TimeGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid time `{x}`"))
        };
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [start, stop, step] = parts[..] else {
                return Err("range must be start:stop:step".into());
            };
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            if step <= 0.0 || stop < start {
                return Err("range needs step > 0 and stop ≥ start".into());
            }
            // tolerate the rounding in (stop − start)/step
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok(TimeGrid((0..count).map(|k| start + k as f64 * step).collect()))
        } else {
            let times = s.split(',').map(parse).collect::<Result<Vec<_>, _>>()?;
            if times.is_empty() {
                return Err("empty time list".into());
            }
            Ok(TimeGrid(times))
        }
    }
}

/// Operator and metric read from disk.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub h: ComplexMatrix<f64>,
    pub eta: ComplexMatrix<f64>,
    pub spec: Option<LatticeSpec<f64>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str, report: &mut RunReport) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    report.outputs.push(path.display().to_string());
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn out_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A model directory holds `h.json`, `eta.json` and optionally `spec.json`;
/// any other path is read as a system description.
pub fn load_model(path: &Path, tol: &Tolerances<f64>) -> Result<LoadedModel, CliError> {
    if path.is_dir() {
        let h = parse_json(&path.join("h.json"))?;
        let eta = parse_json(&path.join("eta.json"))?;
        let spec_path = path.join("spec.json");
        let spec = if spec_path.exists() {
            Some(parse_json::<LatticeSpecFile>(&spec_path)?.into_spec()?)
        } else {
            None
        };
        Ok(LoadedModel { h, eta, spec })
    } else {
        let d: SystemDescription<f64> = parse_json(path)?;
        let sys = PseudoHermitianSystem::from_description(d, *tol)?;
        Ok(LoadedModel {
            h: sys.operator().clone(),
            eta: sys.eta().clone(),
            spec: None,
        })
    }
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn certificate_values(report: &mut RunReport, c: &MetricCertificate<f64>) {
    report.value("alpha0", c.alpha0);
    report.value("alpha0_min", c.alpha0_min);
    report.value("lambda_min", c.lambda_min);
    report.value("min_eigenvalue", c.min_eigenvalue);
    report.value("positive_definite", c.positive_definite);
    report.value("sufficient_bound_met", c.sufficient_bound_met());
}

fn require_positive(c: &MetricCertificate<f64>) -> Result<(), CliError> {
    if c.positive_definite {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "metric is not positive definite (min eigenvalue {:e}, alpha0 {:e}, alpha0_min {:e})",
            c.min_eigenvalue, c.alpha0, c.alpha0_min
        )))
    }
}

pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let mut tol = Tolerances::<f64>::default();
    if let Some(e) = cli.tol_eig {
        tol.eig = e;
    }
    if let Some(p) = cli.tol_pd {
        tol.pd = p;
    }
    if !(tol.eig > 0.0 && tol.eig.is_finite() && tol.pd >= 0.0 && tol.pd.is_finite()) {
        return Err(CliError::Validation("tolerances must be finite and non-negative".into()));
    }
    match &cli.command {
        Command::Basis { n } => cmd_basis(*n, cli.force_tensor, &cli.out, &tol),
        Command::Build { spec } => cmd_build(spec, &cli.out, &tol),
        Command::Spectrum { model } => cmd_spectrum(model, &cli.out, &tol),
        Command::Verify { model } => cmd_verify(model, &tol),
        Command::Evolve { model, t_grid, psi0 } => cmd_evolve(model, t_grid, psi0, &cli.out, &tol),
    }
}

#[derive(Serialize)]
struct TensorLine {
    a: usize,
    b: usize,
    c: usize,
    f: f64,
    d: f64,
}

pub fn cmd_basis(n: usize, force: bool, out: &Path, tol: &Tolerances<f64>) -> Result<RunReport, CliError> {
    if n > DEFAULT_TENSOR_CAP && !force {
        return Err(CliError::Validation(format!(
            "N = {n} exceeds the structure-constant cap of {DEFAULT_TENSOR_CAP}; pass --force-tensor to override"
        )));
    }
    let basis = SuBasis::<f64>::new(n)?;
    let sc = StructureConstants::compute_with_cap(&basis, force)?;
    let mut report = RunReport::new("basis", json!({ "n": n, "force_tensor": force }), tol);
    out_dir(out)?;

    let gens = basis.generators();
    for (a, g) in gens.iter().enumerate() {
        write(&out.join(format!("T{a}.json")), &to_json(g), &mut report)?;
    }
    let lines: String = sc
        .nonzero()
        .into_iter()
        .map(|((a, b, c), f, d)| {
            let mut s = serde_json::to_string(&TensorLine { a, b, c, f, d }).expect("serializable");
            s.push('\n');
            s
        })
        .collect();
    write(&out.join("structure_constants.jsonl"), &lines, &mut report)?;

    let mut ortho = 0.0f64;
    for a in 1..gens.len() {
        for b in a..gens.len() {
            let tr = (&gens[a] * &gens[b]).trace()?;
            let target = if a == b { 2.0 } else { 0.0 };
            ortho = ortho.max((tr - Complex::new(target, 0.0)).norm());
        }
    }
    report.check("orthogonality", ortho, tol.eig);
    report.value("generators", gens.len());
    report.value("nonzero_triples", sc.nonzero().len());
    Ok(report)
}

fn lattice_checks(report: &mut RunReport, h: &ComplexMatrix<f64>, eta: &ComplexMatrix<f64>, spec: Option<&LatticeSpec<f64>>, tol: &Tolerances<f64>) -> Result<(), CliError> {
    let residual = match verify_pseudo_hermiticity(h, eta, tol) {
        Err(Error::InvalidMetric(msg)) => {
            report.warnings.push(msg);
            intertwining_residual(h, eta)?
        }
        r => r?,
    };
    report.check("pseudo_hermiticity", residual, tol.eig);
    let corner = max_corner_magnitude(h);
    report.value("corner_max", corner);
    if let Some(spec) = spec {
        let trace = h.antihermitian_part().trace()?.norm();
        report.check("loss_gain_trace", trace, tol.eig * h.frobenius_norm().max(1.0));
        if spec.boundary == Boundary::Open {
            report.check("open_corners", corner, tol.eig);
        }
    }
    Ok(())
}

pub fn cmd_build(spec_path: &Path, out: &Path, tol: &Tolerances<f64>) -> Result<RunReport, CliError> {
    let file: LatticeSpecFile = parse_json(spec_path)?;
    let spec = file.into_spec()?;
    let canonical = LatticeSpecFile::from_spec(&spec);
    let model = build_model(&spec, tol)?;
    let mut report = RunReport::new("build", serde_json::to_value(&canonical).expect("serializable"), tol);
    out_dir(out)?;
    write(&out.join("h.json"), &to_json(&model.h), &mut report)?;
    write(&out.join("eta.json"), &to_json(&model.eta), &mut report)?;
    write(&out.join("certificate.json"), &to_json(&model.certificate), &mut report)?;
    write(&out.join("spec.json"), &to_json(&canonical), &mut report)?;

    lattice_checks(&mut report, &model.h, &model.eta, Some(&spec), tol)?;
    certificate_values(&mut report, &model.certificate);
    if !model.certificate.positive_definite {
        report.warnings.push(format!(
            "metric not positive definite (min eigenvalue {:e}); spectrum and evolve will refuse this model",
            model.certificate.min_eigenvalue
        ));
    }
    Ok(report)
}

/// `max_λ |det(H − λI)| / max(1, ‖H‖)^N`.
fn determinant_residual(h: &ComplexMatrix<f64>, eigenvalues: &[f64]) -> Result<f64, CliError> {
    let n = h.rows();
    let scale = h.frobenius_norm().max(1.0).powi(n as i32);
    let mut worst = 0.0f64;
    for &lambda in eigenvalues {
        let shifted = h.checked_sub(&ComplexMatrix::identity(n).scale_real(lambda))?;
        worst = worst.max(shifted.determinant()?.norm() / scale);
    }
    Ok(worst)
}

pub fn cmd_spectrum(model_path: &Path, out: &Path, tol: &Tolerances<f64>) -> Result<RunReport, CliError> {
    let model = load_model(model_path, tol)?;
    let cert = certify_metric(&model.eta, tol)?;
    require_positive(&cert)?;
    let herm = hermitize_pair(&model.h, &model.eta, tol)?;
    let eigenvalues = herm.spectrum(tol.eig)?;
    let residual = determinant_residual(&model.h, &eigenvalues)?;

    let mut report = RunReport::new("spectrum", json!({ "model": model_path.display().to_string() }), tol);
    out_dir(out)?;
    let csv: String = eigenvalues.iter().map(|&e| sci(e) + "\n").collect();
    write(&out.join("spectrum.csv"), &csv, &mut report)?;
    write(
        &out.join("spectrum.json"),
        &to_json(&json!({ "eigenvalues": eigenvalues, "residual": residual })),
        &mut report,
    )?;
    report.check("determinant", residual, tol.eig);
    report.check("hermiticity_of_h", herm.h.hermiticity_defect() / herm.h.frobenius_norm().max(1.0), tol.eig);
    report.value("eigenvalues", eigenvalues);
    Ok(report)
}

pub fn cmd_verify(model_path: &Path, tol: &Tolerances<f64>) -> Result<RunReport, CliError> {
    let model = load_model(model_path, tol)?;
    let cert = certify_metric(&model.eta, tol)?;
    let mut report = RunReport::new("verify", json!({ "model": model_path.display().to_string() }), tol);
    lattice_checks(&mut report, &model.h, &model.eta, model.spec.as_ref(), tol)?;
    certificate_values(&mut report, &cert);
    if !cert.positive_definite {
        report.warnings.push("metric indefinite; a real spectrum is not guaranteed".into());
    }
    Ok(report)
}

pub fn cmd_evolve(
    model_path: &Path,
    grid: &TimeGrid,
    psi0_path: &Path,
    out: &Path,
    tol: &Tolerances<f64>,
) -> Result<RunReport, CliError> {
    let model = load_model(model_path, tol)?;
    let psi0: StateVector<f64> = parse_json(psi0_path)?;
    if psi0.dim() != model.h.rows() {
        return Err(Error::Shape(format!("ψ₀ has dimension {} for a model of size {}", psi0.dim(), model.h.rows())).into());
    }
    let cert = certify_metric(&model.eta, tol)?;
    require_positive(&cert)?;
    let herm = hermitize_pair(&model.h, &model.eta, tol)?;
    let eta_norm = |psi: &StateVector<f64>| -> Result<f64, CliError> {
        Ok(metric_inner_product(&model.eta, psi, psi)?.re.max(0.0).sqrt())
    };
    let reference = eta_norm(&psi0)?;
    if reference == 0.0 {
        return Err(CliError::Validation("ψ₀ has zero η-norm".into()));
    }

    let n = model.h.rows();
    let mut csv = String::from("t");
    for k in 1..=n {
        csv += &format!(",re_{k},im_{k}");
    }
    csv += ",norm,eta_norm\n";
    let (mut drift, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
    for &t in &grid.0 {
        let psi = herm.evolve(t, &psi0, tol.eig)?;
        let norm = psi.norm();
        let en = eta_norm(&psi)?;
        drift = drift.max((en - reference).abs() / reference);
        lo = lo.min(norm);
        hi = hi.max(norm);
        let mut row = sci(t);
        for z in psi.amplitudes() {
            row += &format!(",{},{}", sci(z.re), sci(z.im));
        }
        row += &format!(",{},{}\n", sci(norm), sci(en));
        csv += &row;
    }

    let mut report = RunReport::new(
        "evolve",
        json!({
            "model": model_path.display().to_string(),
            "psi0": psi0_path.display().to_string(),
            "times": grid.0.len(),
        }),
        tol,
    );
    out_dir(out)?;
    write(&out.join("evolution.csv"), &csv, &mut report)?;
    report.check("eta_norm_drift", drift, DRIFT_FACTOR * tol.eig);
    report.value("norm_variation", hi - lo);
    Ok(report)
}
