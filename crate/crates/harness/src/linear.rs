//! `mode-solve` and `linear-sweep`.

use std::path::Path;

use mhd_couette::linear::{sweep_growth, SweepEntry};
use mhd_couette::PhysParams;

use crate::config::{RegimeFlags, RunConfig};
use crate::error::HarnessError;
use crate::fit::fit_max_growth;
use crate::output::{fmt, write_csv};

pub const MODE_SWEEP_HEADER: [&str; 11] = [
    "nu",
    "kappa",
    "alpha",
    "k",
    "xi",
    "p1_0",
    "p2_0",
    "growth_factor",
    "t_peak",
    "envelope_ratio",
    "regime_flag",
];

pub const FIT_HEADER: [&str; 11] = [
    "alpha",
    "nu",
    "n_kappa",
    "kappa_min",
    "kappa_max",
    "span_decades",
    "kappa_le_nu3",
    "slope",
    "slope_lo",
    "slope_hi",
    "status",
];

const TRACE_HEADER: [&str; 5] = ["k", "xi", "t", "p1", "p2"];

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepEntry<f64>>,
    pub fits: Vec<FitRow>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }
}

/// Slope of `log(max growth)` against `log κ` within one `(α, ν)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub alpha: f64,
    /// `None` when `κ = ν` is swept.
    pub nu: Option<f64>,
    pub kappas: Vec<f64>,
    /// `None` when the slope is undefined (fewer than two usable κ values).
    pub slope: Option<(f64, f64, f64)>,
}

impl FitRow {
    pub fn span_decades(&self) -> f64 {
        let (lo, hi) = self.kappa_range();
        (hi / lo).log10()
    }

    fn kappa_range(&self) -> (f64, f64) {
        let lo = self.kappas.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.kappas.iter().copied().fold(0.0, f64::max);
        (lo, hi)
    }
}

pub fn run_sweep(cfg: &RunConfig, grid: &[PhysParams]) -> Result<SweepOutcome, HarnessError> {
    let modes = cfg.modes()?;
    let p_in = cfg.p_in();
    if !(p_in.norm() > 0.0) {
        return Err(HarnessError::Config("linear.p_in must be nonzero".into()));
    }
    let rows = sweep_growth(grid, &modes, p_in, cfg.t_end_rule(), &cfg.solve_options())?;
    if let Some(bad) = rows.iter().find_map(|r| match &r.result {
        Err(e @ mhd_couette::Error::InvalidParameter(_)) => Some(e.clone()),
        _ => None,
    }) {
        return Err(bad.into());
    }
    let fits = fit_groups(cfg, &rows, modes.len());
    Ok(SweepOutcome { rows, fits })
}

fn fit_groups(cfg: &RunConfig, rows: &[SweepEntry<f64>], n_modes: usize) -> Vec<FitRow> {
    let tied = cfg.sweep.kappa_equals_nu;
    let key = |p: &PhysParams| (p.alpha.to_bits(), if tied { None } else { Some(p.nu.to_bits()) });
    type Key = (u64, Option<u64>);
    let mut groups: Vec<(Key, Vec<&[SweepEntry<f64>]>)> = Vec::new();
    // rows arrive with the modes of one parameter point contiguous
    for chunk in rows.chunks(n_modes) {
        let k = key(&chunk[0].params);
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(chunk),
            None => groups.push((k, vec![chunk])),
        }
    }
    groups
        .into_iter()
        .map(|((alpha, nu), chunks)| {
            let kappas: Vec<f64> = chunks.iter().map(|c| c[0].params.kappa).collect();
            let growth: Vec<Vec<f64>> = chunks
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|r| r.result.as_ref().map_or(f64::NAN, |res| res.growth_factor))
                        .collect()
                })
                .collect();
            let slope = fit_max_growth(&kappas, &growth, cfg.sweep.bootstrap, cfg.rng_seed)
                .map(|f| (f.slope, f.lo, f.hi));
            FitRow {
                alpha: f64::from_bits(alpha),
                nu: nu.map(f64::from_bits),
                kappas,
                slope,
            }
        })
        .collect()
}

fn sweep_record(cfg: &RunConfig, r: &SweepEntry<f64>) -> Vec<String> {
    let flags = RegimeFlags::evaluate(&r.params, cfg.weight_n, cfg.eps, cfg.eps_tilde());
    let p = cfg.linear.p_in;
    let (g, tp, env) = match &r.result {
        Ok(res) => (res.growth_factor, res.t_peak, res.envelope_ratio),
        Err(_) => (f64::NAN, f64::NAN, f64::NAN),
    };
    vec![
        fmt(r.params.nu),
        fmt(r.params.kappa),
        fmt(r.params.alpha),
        r.mode.k.to_string(),
        fmt(r.mode.xi),
        fmt(p.0),
        fmt(p.1),
        fmt(g),
        fmt(tp),
        fmt(env),
        flags.encode(),
    ]
}

fn fit_record(f: &FitRow) -> Vec<String> {
    let (lo, hi) = f.kappa_range();
    let le_nu3 = match f.nu {
        Some(nu) => hi <= nu * nu * nu,
        None => false,
    };
    let (s, slo, shi, status) = match f.slope {
        Some((s, a, b)) => (fmt(s), fmt(a), fmt(b), "ok"),
        None => (String::new(), String::new(), String::new(), "undefined"),
    };
    vec![
        fmt(f.alpha),
        f.nu.map(fmt).unwrap_or_default(),
        f.kappas.len().to_string(),
        fmt(lo),
        fmt(hi),
        fmt(f.span_decades()),
        le_nu3.to_string(),
        s,
        slo,
        shi,
        status.to_string(),
    ]
}

pub fn write_sweep(cfg: &RunConfig, out: &SweepOutcome, dir: &Path) -> Result<(), HarnessError> {
    let rows: Vec<Vec<String>> = out.rows.iter().map(|r| sweep_record(cfg, r)).collect();
    write_csv(&dir.join("mode_sweep.csv"), &MODE_SWEEP_HEADER, &rows)?;
    if cfg.linear.trace {
        let mut trace = Vec::new();
        for r in &out.rows {
            if let Ok(res) = &r.result {
                for s in res.trace.iter().flatten() {
                    let st = s.state;
                    trace.push(vec![
                        r.mode.k.to_string(),
                        fmt(r.mode.xi),
                        fmt(st.t),
                        fmt(st.p1),
                        fmt(st.p2),
                    ]);
                }
            }
        }
        write_csv(&dir.join("mode_trace.csv"), &TRACE_HEADER, &trace)?;
    }
    Ok(())
}

pub fn write_fits(out: &SweepOutcome, dir: &Path) -> Result<(), HarnessError> {
    let rows: Vec<Vec<String>> = out.fits.iter().map(fit_record).collect();
    write_csv(&dir.join("sweep_fit.csv"), &FIT_HEADER, &rows)
}

fn report_failures(out: &SweepOutcome) -> Result<(), HarnessError> {
    let mut first = None;
    for r in &out.rows {
        if let Err(e) = &r.result {
            eprintln!(
                "row nu={} kappa={} k={} xi={} failed: {e}",
                r.params.nu, r.params.kappa, r.mode.k, r.mode.xi
            );
            first.get_or_insert_with(|| e.to_string());
        }
    }
    match first {
        None => Ok(()),
        Some(e) => Err(HarnessError::Numeric(format!(
            "{} of {} rows failed; first: {e}",
            out.failures(),
            out.rows.len()
        ))),
    }
}

/// One parameter point, every configured mode.
pub fn cmd_mode_solve(cfg: &RunConfig, dir: &Path) -> Result<SweepOutcome, HarnessError> {
    let out = run_sweep(cfg, &[cfg.phys()?])?;
    write_sweep(cfg, &out, dir)?;
    report_failures(&out)?;
    Ok(out)
}

pub fn cmd_linear_sweep(cfg: &RunConfig, dir: &Path) -> Result<SweepOutcome, HarnessError> {
    let out = run_sweep(cfg, &cfg.sweep_grid()?)?;
    write_sweep(cfg, &out, dir)?;
    write_fits(&out, dir)?;
    for f in &out.fits {
        match f.slope {
            Some((s, lo, hi)) => println!(
                "alpha={} nu={}: slope {s:.4} [{lo:.4}, {hi:.4}] over {:.2} decades",
                f.alpha,
                f.nu.map_or("=kappa".to_string(), |v| v.to_string()),
                f.span_decades()
            ),
            None => println!(
                "alpha={}: slope undefined ({} usable kappa values)",
                f.alpha,
                f.kappas.len()
            ),
        }
    }
    report_failures(&out)?;
    Ok(out)
}
