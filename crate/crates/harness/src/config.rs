//! Run configuration: one TOML file per run, with dotted-key overrides from the command line.

use std::path::{Path, PathBuf};

use mhd_couette::linear::{SolveOptions, TEndRule};
use mhd_couette::nonlinear::{InitialData, SimOptions};
use mhd_couette::{GridSpec, ModeIndex, ModeState, PhysParams};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_n")]
    pub weight_n: u32,
    /// Run length; each command has its own default when absent.
    pub t_end: Option<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Defaults to `eps`.
    pub eps_tilde: Option<f64>,
    #[serde(default = "default_seed")]
    pub rng_seed: u64,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub linear: LinearConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default)]
    pub threshold: ThresholdConfig,
    #[serde(default)]
    pub weights: WeightsConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub nu: f64,
    pub kappa: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    /// Defaults to the viscous length `GridSpec::default_ly(ν)`.
    pub ly: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nx: 32,
            ny: 32,
            ly: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearConfig {
    /// `(k, ξ)` pairs.
    pub modes: Vec<(i64, f64)>,
    pub p_in: (f64, f64),
    pub t_in: f64,
    /// End time is `t_in + t_end_factor·(κk²)^{-1/3}` unless `t_end` is set.
    pub t_end_factor: f64,
    pub tol: f64,
    /// Write the accepted-step trace of every mode to `mode_trace.csv`.
    pub trace: bool,
}

impl Default for LinearConfig {
    fn default() -> Self {
        Self {
            modes: vec![(1, 0.0)],
            p_in: (1.0, 0.0),
            t_in: 0.0,
            t_end_factor: 10.0,
            tol: 1e-8,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Empty lists fall back to the single value in `[params]`.
    pub nus: Vec<f64>,
    pub kappas: Vec<f64>,
    pub alphas: Vec<f64>,
    /// Sweep `κ = ν` over `nus` instead of the product with `kappas`.
    pub kappa_equals_nu: bool,
    pub bootstrap: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            nus: Vec::new(),
            kappas: Vec::new(),
            alphas: Vec::new(),
            kappa_equals_nu: false,
            bootstrap: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub cfl: f64,
    pub dt_max: Option<f64>,
    pub diag_interval: f64,
    /// Initial band `|k| ≤ band_k`, `|m| ≤ band_m`; defaults to an eighth of the grid.
    pub band_k: Option<i64>,
    pub band_m: Option<i64>,
    pub overflow_threshold: Option<f64>,
    /// Write the final state to `final.ckpt` (plus sidecar).
    pub checkpoint: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            cfl: 1.0,
            dt_max: None,
            diag_interval: 0.5,
            band_k: None,
            band_m: None,
            overflow_threshold: Some(0.05),
            checkpoint: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdConfig {
    pub eps_lo: f64,
    pub eps_hi: f64,
    /// Total number of simulations allowed, spot check included.
    pub max_trials: usize,
    pub rel_width: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            eps_lo: 1e-8,
            eps_hi: 1.0,
            max_trials: 40,
            rel_width: 1.0 / 256.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeightsConfig {
    pub samples: usize,
}

impl Default for WeightsConfig {
    fn default() -> Self {
        Self { samples: 100_000 }
    }
}

fn default_n() -> u32 {
    5
}

fn default_eps() -> f64 {
    1e-3
}

fn default_seed() -> u64 {
    1
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Parses `text`, applies `key.path=value` overrides, then validates the basic fields.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<RunConfig, HarnessError> {
    let mut table: toml::Table = text.parse().map_err(|e| HarnessError::Config(format!("{e}")))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let cfg: RunConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| HarnessError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text, overrides)
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<(), HarnessError> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| HarnessError::Config(format!("override `{item}` is not key=value")))?;
    // accept any TOML value; bare words become strings
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.trim().split('.').collect();
    let (last, path) = parts.split_last().expect("split yields one part");
    let mut cur = table;
    for p in path {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| HarnessError::Config(format!("`{p}` in `{key}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

impl RunConfig {
    fn validate(&self) -> Result<(), HarnessError> {
        self.phys()?;
        if !(self.eps > 0.0) {
            return Err(HarnessError::Config(format!(
                "eps = {} must be positive",
                self.eps
            )));
        }
        if let Some(t) = self.t_end {
            if !(t > 0.0) {
                return Err(HarnessError::Config(format!("t_end = {t} must be positive")));
            }
        }
        Ok(())
    }

    pub fn phys(&self) -> Result<PhysParams, HarnessError> {
        let p = self.params;
        Ok(PhysParams::new(p.nu, p.kappa, p.alpha)?)
    }

    pub fn eps_tilde(&self) -> f64 {
        self.eps_tilde.unwrap_or(self.eps)
    }

    pub fn modes(&self) -> Result<Vec<ModeIndex>, HarnessError> {
        if self.linear.modes.is_empty() {
            return Err(HarnessError::Config("linear.modes is empty".into()));
        }
        self.linear
            .modes
            .iter()
            .map(|&(k, xi)| ModeIndex::new(k, xi).map_err(HarnessError::from))
            .collect()
    }

    pub fn p_in(&self) -> ModeState {
        ModeState::new(self.linear.p_in.0, self.linear.p_in.1, self.linear.t_in)
    }

    pub fn t_end_rule(&self) -> TEndRule<f64> {
        match self.t_end {
            Some(t) => TEndRule::Fixed(t),
            None => TEndRule::ResistiveScale(self.linear.t_end_factor),
        }
    }

    pub fn solve_options(&self) -> SolveOptions<f64> {
        SolveOptions {
            record_trace: self.linear.trace,
            ..SolveOptions::with_tol(self.linear.tol)
        }
    }

    /// Parameter grid of a linear sweep, `ν` slowest, then `κ`, then `α`.
    pub fn sweep_grid(&self) -> Result<Vec<PhysParams>, HarnessError> {
        let or_single = |v: &[f64], x: f64| if v.is_empty() { vec![x] } else { v.to_vec() };
        let s = &self.sweep;
        let nus = or_single(&s.nus, self.params.nu);
        let kappas = or_single(&s.kappas, self.params.kappa);
        let alphas = or_single(&s.alphas, self.params.alpha);
        let mut out = Vec::new();
        for &nu in &nus {
            let ks = if s.kappa_equals_nu {
                vec![nu]
            } else {
                kappas.clone()
            };
            for &kappa in &ks {
                for &alpha in &alphas {
                    out.push(PhysParams::new(nu, kappa, alpha)?);
                }
            }
        }
        Ok(out)
    }

    pub fn grid_spec(&self) -> Result<GridSpec, HarnessError> {
        let g = self.grid;
        let ly = g.ly.unwrap_or_else(|| GridSpec::default_ly(self.params.nu));
        Ok(GridSpec::new(g.nx, g.ny, ly)?)
    }

    pub fn initial_data(&self, eps: f64) -> InitialData<f64> {
        let ratio = self.eps_tilde() / self.eps;
        InitialData {
            eps,
            eps_tilde: eps * ratio,
            band_k: self.sim.band_k.unwrap_or((self.grid.nx / 8).max(1) as i64),
            band_m: self.sim.band_m.unwrap_or((self.grid.ny / 8).max(1) as i64),
            n: self.weight_n,
            seed: self.rng_seed,
        }
    }

    /// Simulation options with `t_end` defaulting to `10κ^{-1/3}`.
    pub fn sim_options(&self) -> Result<SimOptions<f64>, HarnessError> {
        let t_end = match self.t_end {
            Some(t) => t,
            None if self.params.kappa > 0.0 => 10.0 / self.params.kappa.cbrt(),
            None => return Err(HarnessError::Config("t_end is required when kappa = 0".into())),
        };
        Ok(SimOptions {
            t_end,
            cfl: self.sim.cfl,
            dt_max: self.sim.dt_max,
            diag_interval: self.sim.diag_interval,
            n: self.weight_n,
            overflow_threshold: self.sim.overflow_threshold,
            ..SimOptions::default()
        })
    }
}

/// Hypotheses of the nonlinear stability statement, evaluated rather than enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeFlags {
    pub alpha_gt_half: bool,
    pub n_ge_5: bool,
    pub kappa_le_nu: bool,
    pub nu_le_max: bool,
    pub kappa_le_nu3: bool,
    pub eps_relation: bool,
}

impl RegimeFlags {
    pub fn evaluate(p: &PhysParams, n: u32, eps: f64, eps_tilde: f64) -> Self {
        Self {
            alpha_gt_half: p.alpha_admissible(),
            n_ge_5: n >= 5,
            kappa_le_nu: p.regime_tagged(),
            nu_le_max: p.nu <= p.nu_max(),
            kappa_le_nu3: p.regime_kappa_le_nu3(),
            // ε ≤ ε̃ ≤ ν^{-1/12}ε
            eps_relation: eps <= eps_tilde && eps_tilde <= p.nu.powf(-1.0 / 12.0) * eps,
        }
    }

    /// `key=bool` pairs joined by `;`, in a fixed order.
    pub fn encode(&self) -> String {
        [
            ("alpha_gt_half", self.alpha_gt_half),
            ("n_ge_5", self.n_ge_5),
            ("kappa_le_nu", self.kappa_le_nu),
            ("nu_le_max", self.nu_le_max),
            ("kappa_le_nu3", self.kappa_le_nu3),
            ("eps_relation", self.eps_relation),
        ]
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
    }

    pub fn all(&self) -> bool {
        self.alpha_gt_half && self.n_ge_5 && self.kappa_le_nu && self.nu_le_max && self.eps_relation
    }
}
