use serde::{Deserialize, Serialize};

use super::diagnostics::{compute_energy, compute_pvars};
use super::rhs::{nonlinear_flux, Rhs, Terms};
use super::state::State;
use super::step::Stepper;
use crate::error::{Error, Result};
use crate::linear::PhysParams;
use crate::scalar::Real;
use crate::spectral::GridSpec;
use crate::weights::{RadialWeight, WeightParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions<T> {
    pub t_end: T,
    pub cfl: T,
    /// Step ceiling on top of the CFL limit.
    pub dt_max: Option<T>,
    /// Spacing of the diagnostic samples.
    pub diag_interval: T,
    /// Sobolev order of the norms and of `A`.
    pub n: u32,
    pub radial: RadialWeight,
    pub terms: Terms,
    /// Abort when the unresolved fraction of the nonlinear products exceeds this.
    pub overflow_threshold: Option<T>,
}

impl<T: Real> Default for SimOptions<T> {
    fn default() -> Self {
        Self {
            t_end: T::lit(10.0),
            cfl: T::one(),
            dt_max: None,
            diag_interval: T::lit(0.5),
            n: 5,
            radial: RadialWeight::Homogeneous,
            terms: Terms::default(),
            overflow_threshold: Some(T::lit(0.05)),
        }
    }
}

/// One diagnostic sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRecord<T> {
    pub t: T,
    /// Weighted energy; NaN when `α ≤ 1/2` leaves the weights undefined.
    pub e_main: T,
    /// `‖(v, b)_≠‖_{H^N}`.
    pub hn_neq: T,
    /// `‖(v, b)_=‖_{H^N}`.
    pub hn_eq: T,
    pub nonlinear_flux: T,
    /// Cubic scale of the flux, `‖(v,b)‖² max|∇_t(v,b)|`.
    pub flux_scale: T,
    /// `∫₀ᵗ ‖A p₁,≠‖² dτ`.
    pub ed_v_cum: T,
    /// `∫₀ᵗ ‖A p₂,≠‖² dτ`.
    pub ed_b_cum: T,
    /// `sup_{τ ≤ t} ‖(v, b)(τ)‖ / ‖(v, b)(0)‖`.
    pub growth_l: T,
    /// `(1 ∓ 1/(2α))‖A p_≠‖²`.
    pub e_lower: T,
    pub e_upper: T,
    pub unresolved: T,
}

#[derive(Debug, Clone)]
pub struct SimSummary<T> {
    pub final_state: State<T>,
    pub records: Vec<DiagnosticsRecord<T>>,
    /// `sup_t ‖(v, b)_≠‖_{H^N}` over all steps.
    pub sup_hn_neq: T,
    pub max_unresolved: T,
    pub steps: usize,
}

/// Driver for one run: stepping, running integrals, and diagnostic samples.
#[derive(Debug, Clone)]
pub struct Simulation<T: Real> {
    pub grid: GridSpec<T>,
    pub params: PhysParams<T>,
    pub opts: SimOptions<T>,
    weights: Option<WeightParams<T>>,
    stepper: Stepper<T>,
}

impl<T: Real> Simulation<T> {
    pub fn new(grid: GridSpec<T>, params: PhysParams<T>, opts: SimOptions<T>) -> Result<Self> {
        if !(opts.t_end > T::zero()) || !(opts.diag_interval > T::zero()) || !(opts.cfl > T::zero()) {
            return Err(Error::InvalidParameter(
                "t_end, diag_interval and cfl must be positive".into(),
            ));
        }
        let weights = if params.alpha_admissible() {
            Some(WeightParams::new(&params, opts.n)?)
        } else {
            None
        };
        let stepper = Stepper::new(Rhs::new(grid, params, opts.terms), opts.cfl);
        Ok(Self {
            grid,
            params,
            opts,
            weights,
            stepper,
        })
    }

    pub fn weights(&self) -> Option<&WeightParams<T>> {
        self.weights.as_ref()
    }

    pub fn stepper(&self) -> &Stepper<T> {
        &self.stepper
    }

    fn weighted_pair(&self, state: &State<T>) -> (T, T, T, T, T) {
        match &self.weights {
            Some(w) => {
                let e = compute_energy(&compute_pvars(state), w, self.opts.radial);
                (e.e_main, e.ap1_sq, e.ap2_sq, e.lower, e.upper)
            }
            None => (T::nan(), T::nan(), T::nan(), T::nan(), T::nan()),
        }
    }

    pub fn run(&self, init: State<T>) -> Result<SimSummary<T>> {
        self.run_observed(init, |_, _| {})
    }

    /// Runs to `t_end`, calling `observe` at `t = 0` and at every diagnostic sample.
    pub fn run_observed(
        &self,
        init: State<T>,
        mut observe: impl FnMut(&State<T>, &DiagnosticsRecord<T>),
    ) -> Result<SimSummary<T>> {
        if init.grid() != &self.grid {
            return Err(Error::InvalidGrid(
                "initial state grid differs from the run grid".into(),
            ));
        }
        let n = T::from_int(self.opts.n as i64);
        let norm0 = init.norm_l2();
        let t_end = init.t + self.opts.t_end;
        let rhs = &self.stepper.rhs;

        let mut state = init;
        let mut growth = T::one();
        let mut sup_hn = state.norm_hn_neq(n);
        let (mut ed_v, mut ed_b) = (T::zero(), T::zero());
        let (mut e_main, mut ap1, mut ap2, mut lo, mut hi) = self.weighted_pair(&state);
        let mut max_unresolved = T::zero();
        let mut records = Vec::new();
        let mut steps = 0usize;

        let mut sample = |state: &State<T>, vals: [T; 7], records: &mut Vec<DiagnosticsRecord<T>>| {
            let [e, lo, hi, ed_v, ed_b, growth, unresolved] = vals;
            let (flux, scale) = nonlinear_flux(rhs, state);
            let rec = DiagnosticsRecord {
                t: state.t,
                e_main: e,
                hn_neq: state.norm_hn_neq(n),
                hn_eq: state.norm_hn_eq(n),
                nonlinear_flux: flux,
                flux_scale: scale,
                ed_v_cum: ed_v,
                ed_b_cum: ed_b,
                growth_l: growth,
                e_lower: lo,
                e_upper: hi,
                unresolved,
            };
            observe(state, &rec);
            records.push(rec);
        };
        sample(
            &state,
            [e_main, lo, hi, ed_v, ed_b, growth, T::zero()],
            &mut records,
        );

        let tiny = T::epsilon() * T::lit(64.0) * t_end.abs().max(T::one());
        let mut next_diag = state.t + self.opts.diag_interval;
        while state.t < t_end - tiny {
            let mut dt = self
                .stepper
                .dt_max(&state)
                .min(next_diag - state.t)
                .min(t_end - state.t);
            if let Some(cap) = self.opts.dt_max {
                dt = dt.min(cap);
            }
            if !(dt > tiny) {
                return Err(Error::StepUnderflow {
                    t: state.t.to_f64_lossy(),
                    h: dt.to_f64_lossy(),
                });
            }
            let (next, frac) = self.stepper.step(&state, dt)?;
            steps += 1;
            max_unresolved = max_unresolved.max(frac);
            if let Some(th) = self.opts.overflow_threshold {
                if frac > th {
                    return Err(Error::ResolutionOverflow {
                        fraction: frac.to_f64_lossy(),
                    });
                }
            }
            state = next;
            let (e1, a1, a2, l1, h1) = self.weighted_pair(&state);
            let half = T::lit(0.5) * dt;
            ed_v += half * (ap1 + a1);
            ed_b += half * (ap2 + a2);
            (e_main, ap1, ap2, lo, hi) = (e1, a1, a2, l1, h1);
            if norm0 > T::zero() {
                growth = growth.max(state.norm_l2() / norm0);
            }
            sup_hn = sup_hn.max(state.norm_hn_neq(n));
            if state.t >= next_diag - tiny || state.t >= t_end - tiny {
                sample(
                    &state,
                    [e_main, lo, hi, ed_v, ed_b, growth, max_unresolved],
                    &mut records,
                );
                next_diag += self.opts.diag_interval;
            }
        }
        Ok(SimSummary {
            final_state: state,
            records,
            sup_hn_neq: sup_hn,
            max_unresolved,
            steps,
        })
    }
}
