use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve_mode_with, ModeIndex, ModeRunResult, ModeState, PhysParams, SolveOptions};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Horizon of each sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TEndRule<T> {
    /// Absolute end time.
    Fixed(T),
    /// `factor · (κk²)^{-1/3}` after the start time.
    ResistiveScale(T),
}

impl<T: Real> Default for TEndRule<T> {
    fn default() -> Self {
        TEndRule::ResistiveScale(T::lit(10.0))
    }
}

impl<T: Real> TEndRule<T> {
    /// End time of a run started at `t0`.
    pub fn horizon(&self, mode: &ModeIndex<T>, params: &PhysParams<T>, t0: T) -> Result<T> {
        match *self {
            TEndRule::Fixed(t) => Ok(t),
            TEndRule::ResistiveScale(factor) => {
                if params.kappa <= T::zero() {
                    return Err(Error::InvalidParameter(
                        "resistive horizon needs kappa > 0".into(),
                    ));
                }
                let k = mode.kf();
                Ok(t0 + factor / (params.kappa * k * k).cbrt())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepEntry<T> {
    pub params: PhysParams<T>,
    pub mode: ModeIndex<T>,
    pub t_end: T,
    pub result: Result<ModeRunResult<T>>,
}

/// Solves every `(params, mode)` pair in parallel; rows come back in input order with the
/// parameter index varying slowest. A failing row does not abort the sweep.
pub fn sweep_growth<T: Real>(
    grid: &[PhysParams<T>],
    modes: &[ModeIndex<T>],
    p_in: ModeState<T>,
    rule: TEndRule<T>,
    opts: &SolveOptions<T>,
) -> Result<Vec<SweepEntry<T>>> {
    if grid.is_empty() || modes.is_empty() {
        return Err(Error::InvalidParameter("sweep grids must be nonempty".into()));
    }
    let jobs: Vec<(PhysParams<T>, ModeIndex<T>)> = grid
        .iter()
        .flat_map(|p| modes.iter().map(move |m| (*p, *m)))
        .collect();
    Ok(jobs
        .into_par_iter()
        .map(|(params, mode)| {
            let (t_end, result) = match rule.horizon(&mode, &params, p_in.t) {
                Ok(t_end) => (t_end, solve_mode_with(&mode, &params, &p_in, t_end, opts)),
                Err(e) => (T::nan(), Err(e)),
            };
            SweepEntry {
                params,
                mode,
                t_end,
                result,
            }
        })
        .collect())
}
