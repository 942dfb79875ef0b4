//! `weights-check`.

use std::path::Path;

use mhd_couette::weights::{check_lemma_bounds, LemmaReport, LemmaSampler};
use mhd_couette::WeightParams;

use crate::config::RunConfig;
use crate::error::HarnessError;
use crate::output::{fmt, write_csv};

pub const WEIGHTS_HEADER: [&str; 7] = [
    "check",
    "required",
    "constant",
    "samples",
    "violations",
    "worst_ratio",
    "pass",
];

pub fn cmd_weights_check(cfg: &RunConfig, dir: &Path) -> Result<LemmaReport, HarnessError> {
    let w = WeightParams::new(&cfg.phys()?, cfg.weight_n)?;
    let samples = LemmaSampler::new(cfg.rng_seed, &w).take(cfg.weights.samples);
    let report = check_lemma_bounds(&w, &samples);
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                c.required.to_string(),
                fmt(c.constant),
                c.samples.to_string(),
                c.violations.to_string(),
                fmt(c.worst_ratio),
                c.passed().to_string(),
            ]
        })
        .collect();
    write_csv(&dir.join("weights_check.csv"), &WEIGHTS_HEADER, &rows)?;
    for c in report.checks.iter().filter(|c| c.required && !c.passed()) {
        eprintln!(
            "{}: {} violations, worst ratio {}",
            c.name, c.violations, c.worst_ratio
        );
    }
    if !report.passed() {
        return Err(HarnessError::Numeric("weight inequality violations".into()));
    }
    Ok(report)
}
