//! Declarative scenario runner.
//!
//! A scenario is one JSON document describing the model, the engine and the
//! sampling. Running it produces a CSV time series of level populations
//! (plus an optional fidelity column) and a JSON [`RunReport`].

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{coherent_coefficients, fd_coherent_state, fd_squeezed_vacuum};
use crate::dynamics::{
    evolve_continuous, kicked_dissipative_states, kicked_states, KickSchedule, Propagator, SimulationResult,
};
use crate::error::Error;
use crate::model::{DriveEnvelope, DriveKind, KerrModel};
use crate::operators::{fidelity, DensityMatrix, StateVector};

pub const DEFAULT_SAMPLES: usize = 401;

/// Built-in scenarios, also checked in under `presets/`.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1", include_str!("../presets/fig1.json")),
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig4_strong", include_str!("../presets/fig4_strong.json")),
    ("coherent_kicked", include_str!("../presets/coherent_kicked.json")),
    ("squeezed", include_str!("../presets/squeezed.json")),
];

/// JSON schema of the run report, shipped alongside the binary.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run_report.schema.json");

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown scenario `{0}`: not a file and not a preset")]
    UnknownScenario(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Simulation(#[from] Error),
}

impl ScenarioError {
    fn schema(field: &str, message: impl Into<String>) -> Self {
        Self::Schema { field: field.to_owned(), message: message.into() }
    }

    /// Process exit code for this failure.
    pub fn exit_code(&self) -> u8 {
        1
    }
}

type Result<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Continuous,
    Kicked,
    KickedDissipative,
}

/// Reference state to compare against at every sample.
///
/// When `alpha` / `xi` is omitted the target follows the delivered pulse
/// area `Theta`: `alpha = -i Theta` for the coherent state and
/// `xi = -2 i Theta` for the squeezed vacuum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    FdCoherent {
        #[serde(default)]
        alpha: Option<[f64; 2]>,
        #[serde(default)]
        s: Option<usize>,
    },
    FdSqueezed {
        #[serde(default)]
        xi: Option<[f64; 2]>,
        #[serde(default)]
        s: Option<usize>,
    },
}

impl Target {
    fn truncation(&self, order: usize) -> usize {
        match self {
            Target::FdCoherent { s, .. } | Target::FdSqueezed { s, .. } => s.unwrap_or(order.saturating_sub(1)),
        }
    }

    fn state(&self, order: usize, pulse_area: f64) -> crate::Result<StateVector> {
        let s = self.truncation(order);
        match self {
            Target::FdCoherent { alpha, .. } => {
                let alpha = alpha.map_or(Complex64::new(0.0, -pulse_area), |[re, im]| Complex64::new(re, im));
                fd_coherent_state(alpha, s)
            }
            Target::FdSqueezed { xi, .. } => {
                let xi = xi.map_or(Complex64::new(0.0, -2.0 * pulse_area), |[re, im]| Complex64::new(re, im));
                fd_squeezed_vacuum(xi, s)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// CSV file name, relative to the output directory.
    #[serde(default)]
    pub csv: Option<String>,
    /// Report file name, relative to the output directory.
    #[serde(default)]
    pub report: Option<String>,
}

fn default_drive() -> DriveKind {
    DriveKind::Linear
}

fn default_envelope() -> DriveEnvelope {
    DriveEnvelope::Constant
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub engine: Engine,
    /// Truncation dimension; defaults to `order + 3`.
    #[serde(default)]
    pub dim: Option<usize>,
    pub order: usize,
    pub chi: f64,
    pub eps: f64,
    #[serde(default = "default_drive")]
    pub drive: DriveKind,
    #[serde(default = "default_envelope")]
    pub envelope: DriveEnvelope,
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Total time for the continuous engine.
    #[serde(default)]
    pub duration: Option<f64>,
    /// Number of kicks for the kicked engines.
    #[serde(default)]
    pub n_pulses: Option<usize>,
    #[serde(default = "default_samples")]
    pub sample_count: usize,
    #[serde(default)]
    pub target: Option<Target>,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.contains("field"))
                .unwrap_or("<document>")
                .to_owned();
            ScenarioError::Schema { field, message: msg }
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Loads a scenario from a file path, or by preset name.
    pub fn load(spec: &str) -> Result<Self> {
        let path = Path::new(spec);
        if path.is_file() {
            let text = std::fs::read_to_string(path)
                .map_err(|source| ScenarioError::Io { path: path.to_owned(), source })?;
            return Self::from_json(&text);
        }
        preset(spec).ok_or_else(|| ScenarioError::UnknownScenario(spec.to_owned()))?
    }

    pub fn dim(&self) -> usize {
        self.dim.unwrap_or(self.order + KerrModel::DEFAULT_BUFFER)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(ScenarioError::schema("name", "must not be empty"));
        }
        if self.order == 0 {
            return Err(ScenarioError::schema("order", "must be at least 1"));
        }
        if self.dim() == 0 {
            return Err(ScenarioError::schema("dim", "must be at least 1"));
        }
        if !(self.chi.is_finite() && self.chi > 0.0) {
            return Err(ScenarioError::schema("chi", "must be a positive number"));
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return Err(ScenarioError::schema("eps", "must be a non-negative number"));
        }
        if self.sample_count < 2 {
            return Err(ScenarioError::schema("sample_count", "must be at least 2"));
        }
        self.envelope.validate().map_err(|e| ScenarioError::schema("envelope", e.to_string()))?;
        if let Some(g) = self.gamma {
            if !(g.is_finite() && g >= 0.0) {
                return Err(ScenarioError::schema("gamma", "must be a non-negative number"));
            }
            if self.engine != Engine::KickedDissipative {
                return Err(ScenarioError::schema("gamma", "only applies to the kicked_dissipative engine"));
            }
        }
        match self.engine {
            Engine::Continuous => {
                if self.envelope != DriveEnvelope::Constant {
                    return Err(ScenarioError::Config(
                        "the continuous engine needs a constant envelope".into(),
                    ));
                }
                match self.duration {
                    Some(d) if d.is_finite() && d > 0.0 => {}
                    Some(_) => return Err(ScenarioError::schema("duration", "must be positive")),
                    None => return Err(ScenarioError::schema("duration", "required by the continuous engine")),
                }
            }
            Engine::Kicked | Engine::KickedDissipative => {
                if !matches!(self.envelope, DriveEnvelope::DeltaTrain { .. }) {
                    return Err(ScenarioError::Config(format!(
                        "the {:?} engine needs a delta_train envelope",
                        self.engine
                    )));
                }
                if self.n_pulses.is_none() {
                    return Err(ScenarioError::schema("n_pulses", "required by the kicked engines"));
                }
                if self.engine == Engine::KickedDissipative {
                    if self.gamma.is_none() {
                        return Err(ScenarioError::schema("gamma", "required by the kicked_dissipative engine"));
                    }
                    if self.order != 2 {
                        return Err(ScenarioError::Config(
                            "the kicked_dissipative engine supports order 2 only".into(),
                        ));
                    }
                }
            }
        }
        if let Some(target) = &self.target {
            let s = target.truncation(self.order);
            if s == 0 || s + 1 > self.dim() {
                return Err(ScenarioError::schema(
                    "target.s",
                    format!("must satisfy 1 <= s < dim ({}), got {s}", self.dim()),
                ));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> crate::Result<KerrModel> {
        KerrModel::new(self.dim(), self.order, self.chi, self.eps, self.drive, self.envelope.clone())
    }
}

/// Parses a built-in preset by name.
pub fn preset(name: &str) -> Option<Result<ScenarioConfig>> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| ScenarioConfig::from_json(text))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub engine: Engine,
    pub dim: usize,
    pub samples: usize,
    /// Maximum of `P_n` over the run, per level.
    pub peak: Vec<f64>,
    /// Minimum of `P_n` over the run, per level.
    pub trough: Vec<f64>,
    /// First level outside the resonant manifold.
    pub leakage_from_level: usize,
    /// Largest total population on levels `>= leakage_from_level`.
    pub max_leakage: f64,
    pub fidelity: Option<FidelitySummary>,
    pub wall_clock_seconds: f64,
}

impl RunReport {
    fn new(config: &ScenarioConfig, result: &SimulationResult, seconds: f64) -> Self {
        let levels = result.levels();
        let fidelity = result.fidelity_vs_target.as_ref().map(|f| FidelitySummary {
            min: f.iter().copied().fold(f64::INFINITY, f64::min),
            mean: f.iter().sum::<f64>() / f.len() as f64,
            max: f.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        });
        Self {
            scenario: config.name.clone(),
            engine: config.engine,
            dim: levels,
            samples: result.len(),
            peak: (0..levels).map(|n| result.peak(n)).collect(),
            trough: (0..levels).map(|n| result.trough(n)).collect(),
            leakage_from_level: config.order,
            max_leakage: result.max_leakage(config.order),
            fidelity,
            wall_clock_seconds: seconds,
        }
    }
}

/// Runs the configured engine and returns the sampled result.
pub fn simulate(config: &ScenarioConfig) -> Result<SimulationResult> {
    config.validate()?;
    let model = config.model()?;
    let psi0 = StateVector::vacuum(model.dim)?;
    let target = config.target.as_ref();
    match config.engine {
        Engine::Continuous => {
            let duration = config.duration.expect("validated");
            let m = config.sample_count;
            let times: Vec<f64> = (0..m).map(|i| duration * i as f64 / (m - 1) as f64).collect();
            let states = evolve_continuous(&model, &psi0, &times)?;
            let result = SimulationResult::from_states(times.clone(), &states);
            match target {
                None => Ok(result),
                Some(target) => {
                    let fid = states
                        .iter()
                        .zip(&times)
                        .map(|(s, &t)| fidelity(&target.state(config.order, model.eps * t)?, s))
                        .collect::<crate::Result<Vec<_>>>()?;
                    Ok(result.with_fidelity(fid))
                }
            }
        }
        Engine::Kicked => {
            let schedule = KickSchedule::from_model(&model, config.n_pulses.expect("validated"))?;
            let states = kicked_states(&model, &psi0, &schedule)?;
            let result = SimulationResult::from_states(schedule.times(), &states);
            match target {
                None => Ok(result),
                Some(target) => {
                    let fid = states
                        .iter()
                        .enumerate()
                        .map(|(k, s)| fidelity(&target.state(config.order, model.eps * k as f64)?, s))
                        .collect::<crate::Result<Vec<_>>>()?;
                    Ok(result.with_fidelity(fid))
                }
            }
        }
        Engine::KickedDissipative => {
            let schedule = KickSchedule::from_model(&model, config.n_pulses.expect("validated"))?;
            let rho0 = DensityMatrix::pure(&psi0);
            let states = kicked_dissipative_states(&model, &rho0, config.gamma.expect("validated"), &schedule)?;
            let result = SimulationResult::from_density_matrices(schedule.times(), &states);
            match target {
                None => Ok(result),
                Some(target) => {
                    let fid = states
                        .iter()
                        .enumerate()
                        .map(|(k, rho)| {
                            let psi = target.state(config.order, model.eps * k as f64)?.embed(model.dim)?;
                            rho.fidelity_with(&psi)
                        })
                        .collect::<crate::Result<Vec<_>>>()?;
                    Ok(result.with_fidelity(fid))
                }
            }
        }
    }
}

/// CSV rendering: header `t,P_0,...,P_{d-1}[,fidelity]`, 17 significant
/// digits, LF line endings.
pub fn render_csv(result: &SimulationResult) -> String {
    let levels = result.levels();
    let mut out = String::from("t");
    for n in 0..levels {
        let _ = write!(out, ",P_{n}");
    }
    if result.fidelity_vs_target.is_some() {
        out.push_str(",fidelity");
    }
    out.push('\n');
    for (i, (t, row)) in result.times.iter().zip(&result.probs).enumerate() {
        let _ = write!(out, "{t:.16e}");
        for p in row {
            let _ = write!(out, ",{p:.16e}");
        }
        if let Some(f) = &result.fidelity_vs_target {
            let _ = write!(out, ",{:.16e}", f[i]);
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| ScenarioError::Io { path: path.to_owned(), source })
}

/// Runs a scenario and writes `<name>.csv` and `<name>.report.json` (or the
/// configured file names) into `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunOutput> {
    let start = Instant::now();
    let result = simulate(config)?;
    let report = RunReport::new(config, &result, start.elapsed().as_secs_f64());

    std::fs::create_dir_all(out_dir).map_err(|source| ScenarioError::Io { path: out_dir.to_owned(), source })?;
    let csv_path = out_dir.join(config.output.csv.clone().unwrap_or_else(|| format!("{}.csv", config.name)));
    let report_path = out_dir.join(
        config.output.report.clone().unwrap_or_else(|| format!("{}.report.json", config.name)),
    );
    write_file(&csv_path, &render_csv(&result))?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&report_path, &(json + "\n"))?;
    Ok(RunOutput { report, csv_path, report_path })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormCheck {
    pub order: usize,
    pub dim: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub eps: f64,
    pub chi: f64,
    pub duration: f64,
    pub samples: usize,
    pub bound: f64,
    pub checks: Vec<ClosedFormCheck>,
    pub passed: bool,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub eps: f64,
    pub chi: f64,
    pub samples: usize,
    pub bound: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self { eps: PI / 50.0, chi: 1.0, samples: DEFAULT_SAMPLES, bound: 1e-2 }
    }
}

pub const MAX_VERIFY_ORDER: usize = 8;

/// Largest deviation between numerically evolved populations of levels
/// `0..N` (truncation `N + 3`, constant drive) and the closed form, over
/// `t in [0, 2 pi / eps]`.
pub fn closed_form_deviation(order: usize, settings: &VerifySettings) -> crate::Result<ClosedFormCheck> {
    let model = KerrModel::with_default_dim(order, settings.chi, settings.eps, DriveKind::Linear, DriveEnvelope::Constant)?;
    let duration = 2.0 * PI / settings.eps;
    let step = duration / (settings.samples - 1) as f64;
    // Sampling every `step` is the same as a constant envelope of period `step`.
    let env = DriveEnvelope::Constant;
    let periodic = env.periodic(Some(step))?;
    let prop = Propagator::new(&model)?;
    let psi0 = StateVector::vacuum(model.dim)?;
    let mut worst: f64 = 0.0;
    for k in 0..settings.samples {
        let numeric = prop.evolve(&psi0, k as f64 * step)?.probabilities();
        let closed = coherent_coefficients(order, settings.eps, settings.chi, &periodic, k as u64)?.probabilities();
        for (p, q) in numeric.iter().zip(&closed) {
            worst = worst.max((p - q).abs());
        }
    }
    Ok(ClosedFormCheck { order, dim: model.dim, max_deviation: worst, passed: worst <= settings.bound })
}

/// Compares continuous evolution against the closed-form coefficients for
/// every order `1..=n_max`.
pub fn verify_closed_forms(n_max: usize, settings: &VerifySettings) -> Result<VerifyReport> {
    if n_max == 0 || n_max > MAX_VERIFY_ORDER {
        return Err(ScenarioError::schema("nmax", format!("must be in 1..={MAX_VERIFY_ORDER}")));
    }
    if settings.samples < 2 {
        return Err(ScenarioError::schema("samples", "must be at least 2"));
    }
    let start = Instant::now();
    let checks = (1..=n_max)
        .into_par_iter()
        .map(|order| closed_form_deviation(order, settings))
        .collect::<crate::Result<Vec<_>>>()?;
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        n_max,
        eps: settings.eps,
        chi: settings.chi,
        duration: 2.0 * PI / settings.eps,
        samples: settings.samples,
        bound: settings.bound,
        checks,
        passed,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}
