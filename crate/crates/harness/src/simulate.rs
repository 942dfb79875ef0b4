//! `simulate` and `threshold-search`.

use std::path::Path;

use mhd_couette::nonlinear::{random_initial_state, write_checkpoint, SimSummary};
use mhd_couette::{DiagnosticsRecord, Simulation};
use serde::Serialize;

use crate::config::{RegimeFlags, RunConfig};
use crate::error::HarnessError;
use crate::output::{fmt, write_csv, write_toml};

pub const SIM_DIAG_HEADER: [&str; 8] = [
    "t",
    "E_main",
    "HN_neq",
    "HN_eq",
    "nonlinear_flux",
    "ED_v_cum",
    "ED_b_cum",
    "growth_L",
];

pub const TRIALS_HEADER: [&str; 7] = [
    "trial",
    "eps",
    "outcome",
    "stable",
    "sup_HN_neq",
    "bound",
    "t_reached",
];

fn diag_rows(records: &[DiagnosticsRecord]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            [
                r.t,
                r.e_main,
                r.hn_neq,
                r.hn_eq,
                r.nonlinear_flux,
                r.ed_v_cum,
                r.ed_b_cum,
                r.growth_l,
            ]
            .into_iter()
            .map(fmt)
            .collect()
        })
        .collect()
}

/// Outcome of one run, kept separate from setup errors.
pub type RunResult = Result<SimSummary<f64>, mhd_couette::Error>;

/// Runs from the seeded initial data at amplitude `eps`; the records gathered before a
/// failure are returned alongside it.
pub fn simulate_at(cfg: &RunConfig, eps: f64) -> Result<(Vec<DiagnosticsRecord>, RunResult), HarnessError> {
    let grid = cfg.grid_spec()?;
    let init = random_initial_state(grid, &cfg.initial_data(eps))?;
    let sim = Simulation::new(grid, cfg.phys()?, cfg.sim_options()?)?;
    let mut records = Vec::new();
    let res = sim.run_observed(init, |_, rec| records.push(*rec));
    Ok((records, res))
}

pub fn cmd_simulate(cfg: &RunConfig, dir: &Path) -> Result<SimSummary<f64>, HarnessError> {
    let flags = RegimeFlags::evaluate(&cfg.phys()?, cfg.weight_n, cfg.eps, cfg.eps_tilde());
    eprintln!("regime: {}", flags.encode());
    let (records, res) = simulate_at(cfg, cfg.eps)?;
    write_csv(&dir.join("sim_diag.csv"), &SIM_DIAG_HEADER, &diag_rows(&records))?;
    let summary = res?;
    if !summary.final_state.is_finite() {
        return Err(HarnessError::Numeric("non-finite final state".into()));
    }
    if cfg.sim.checkpoint {
        write_checkpoint(&dir.join("final.ckpt"), &summary.final_state, &cfg.phys()?)?;
    }
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Stable,
    Unstable,
    NonFinite,
    Overflow,
    Failed,
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub eps: f64,
    pub outcome: Outcome,
    pub sup_hn_neq: f64,
    pub bound: f64,
    pub t_reached: f64,
    pub records: Vec<DiagnosticsRecord>,
}

impl Trial {
    pub fn stable(&self) -> bool {
        self.outcome == Outcome::Stable
    }
}

/// `eps` is stable when `sup_t ‖(v, b)_≠‖_{H^N} ≤ 2Lε` up to the horizon.
pub fn run_trial(cfg: &RunConfig, eps: f64) -> Result<Trial, HarnessError> {
    let bound = 2.0 * cfg.phys()?.lipschitz_l() * eps;
    let (records, res) = simulate_at(cfg, eps)?;
    let t_reached = records.last().map_or(0.0, |r| r.t);
    let seen = records.iter().map(|r| r.hn_neq).fold(0.0, f64::max);
    let (outcome, sup) = match res {
        Ok(s) if !s.final_state.is_finite() || !s.sup_hn_neq.is_finite() => (Outcome::NonFinite, f64::NAN),
        Ok(s) if s.sup_hn_neq <= bound => (Outcome::Stable, s.sup_hn_neq),
        Ok(s) => (Outcome::Unstable, s.sup_hn_neq),
        Err(mhd_couette::Error::NonFinite { .. }) => (Outcome::NonFinite, f64::NAN),
        Err(mhd_couette::Error::ResolutionOverflow { .. }) => (Outcome::Overflow, seen),
        Err(e @ (mhd_couette::Error::InvalidParameter(_) | mhd_couette::Error::InvalidGrid(_))) => {
            return Err(e.into())
        }
        Err(_) => (Outcome::Failed, seen),
    };
    Ok(Trial {
        eps,
        outcome,
        sup_hn_neq: sup,
        bound,
        t_reached,
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Converged,
    Unbracketed,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub status: SearchStatus,
    /// Final bracket: largest stable and smallest unstable amplitude seen.
    pub eps_lo: f64,
    pub eps_hi: f64,
    /// Largest stable amplitude, when converged.
    pub eps_star: Option<f64>,
    /// Stable verdict at `eps_star / 2`.
    pub monotone_check: Option<bool>,
    pub lipschitz_l: f64,
    pub t_end: f64,
    pub trials: usize,
    pub regime_flag: String,
}

struct Archive<'a> {
    dir: &'a Path,
    trials: Vec<Trial>,
}

impl Archive<'_> {
    fn push(&mut self, t: Trial) -> Result<bool, HarnessError> {
        let idx = self.trials.len();
        let path = self.dir.join("trials").join(format!("trial_{idx:03}.csv"));
        write_csv(&path, &SIM_DIAG_HEADER, &diag_rows(&t.records))?;
        let stable = t.stable();
        self.trials.push(t);
        Ok(stable)
    }

    fn write_index(&self) -> Result<(), HarnessError> {
        let rows: Vec<Vec<String>> = self
            .trials
            .iter()
            .enumerate()
            .map(|(i, t)| {
                vec![
                    i.to_string(),
                    fmt(t.eps),
                    outcome_label(t.outcome),
                    t.stable().to_string(),
                    fmt(t.sup_hn_neq),
                    fmt(t.bound),
                    fmt(t.t_reached),
                ]
            })
            .collect();
        write_csv(&self.dir.join("trials.csv"), &TRIALS_HEADER, &rows)
    }
}

fn outcome_label(o: Outcome) -> String {
    match o {
        Outcome::Stable => "stable",
        Outcome::Unstable => "unstable",
        Outcome::NonFinite => "non-finite",
        Outcome::Overflow => "overflow",
        Outcome::Failed => "failed",
    }
    .to_string()
}

/// Geometric bisection of the stability threshold in `ε`.
pub fn cmd_threshold_search(cfg: &RunConfig, dir: &Path) -> Result<ThresholdReport, HarnessError> {
    let th = cfg.threshold;
    if !(th.eps_lo > 0.0 && th.eps_hi > th.eps_lo) {
        return Err(HarnessError::Config(format!(
            "need 0 < eps_lo < eps_hi, got [{}, {}]",
            th.eps_lo, th.eps_hi
        )));
    }
    if !(th.rel_width > 0.0) || th.max_trials < 2 {
        return Err(HarnessError::Config(
            "rel_width must be positive and max_trials ≥ 2".into(),
        ));
    }
    let p = cfg.phys()?;
    let mut arch = Archive {
        dir,
        trials: Vec::new(),
    };
    let (a, b) = rayon::join(|| run_trial(cfg, th.eps_lo), || run_trial(cfg, th.eps_hi));
    let lo_stable = arch.push(a?)?;
    let hi_stable = arch.push(b?)?;
    let mut report = ThresholdReport {
        status: SearchStatus::Unbracketed,
        eps_lo: th.eps_lo,
        eps_hi: th.eps_hi,
        eps_star: None,
        monotone_check: None,
        lipschitz_l: p.lipschitz_l(),
        t_end: cfg.sim_options()?.t_end,
        trials: 0,
        regime_flag: RegimeFlags::evaluate(
            &p,
            cfg.weight_n,
            th.eps_lo,
            th.eps_lo * cfg.eps_tilde() / cfg.eps,
        )
        .encode(),
    };
    let finish = |arch: &Archive, mut report: ThresholdReport| -> Result<ThresholdReport, HarnessError> {
        report.trials = arch.trials.len();
        arch.write_index()?;
        write_toml(&dir.join("threshold.toml"), &report)?;
        Ok(report)
    };
    if !lo_stable || hi_stable {
        eprintln!("unbracketed: eps_lo stable = {lo_stable}, eps_hi stable = {hi_stable}");
        return finish(&arch, report);
    }
    let (mut lo, mut hi) = (th.eps_lo, th.eps_hi);
    let exhausted = |arch: &Archive, mut report: ThresholdReport, lo: f64, hi: f64| {
        report.status = SearchStatus::BudgetExhausted;
        (report.eps_lo, report.eps_hi) = (lo, hi);
        finish(arch, report)?;
        Err(HarnessError::Budget(format!(
            "{} trials used, bracket [{lo}, {hi}]",
            arch.trials.len()
        )))
    };
    while (hi - lo) / lo > th.rel_width {
        if arch.trials.len() >= th.max_trials {
            return exhausted(&arch, report, lo, hi);
        }
        let mid = (lo * hi).sqrt();
        if arch.push(run_trial(cfg, mid)?)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if arch.trials.len() >= th.max_trials {
        return exhausted(&arch, report, lo, hi);
    }
    let half = arch.push(run_trial(cfg, lo / 2.0)?)?;
    report.status = SearchStatus::Converged;
    (report.eps_lo, report.eps_hi) = (lo, hi);
    report.eps_star = Some(lo);
    report.monotone_check = Some(half);
    finish(&arch, report)
}
