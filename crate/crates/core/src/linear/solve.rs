use serde::{Deserialize, Serialize};

use super::magnus::propagator;
use super::mode::model_rhs;
use super::{LinearModel, ModeIndex, ModeState, PhysParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Controls for [`solve_mode_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    /// Relative local error allowed per unit time.
    pub tol: T,
    pub model: LinearModel,
    pub record_trace: bool,
    /// Also record `p̃ = exp((κ/2)k²(s - s_in + (s³ - s_in³)/3)) p` in the trace.
    pub record_tilde: bool,
    /// Step ceiling; defaults to a quarter of `min(1, (κk²)^{-1/3}, ν^{-1})`.
    pub h_max: Option<T>,
}

impl<T: Real> SolveOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            tol,
            model: LinearModel::Full,
            record_trace: false,
            record_tilde: false,
            h_max: None,
        }
    }
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self::with_tol(T::lit(1e-8))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample<T> {
    pub state: ModeState<T>,
    /// The rescaled unknown `p̃`, when requested.
    pub tilde: Option<(T, T)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeRunResult<T> {
    /// `sup_t |p(t)| / |p(0)|`.
    pub growth_factor: T,
    pub t_peak: T,
    /// `sup_t |p(t)| e^{cκ^{1/3}t} / ((1 + νκ^{-1/3}) |p(0)|)`.
    pub envelope_ratio: T,
    pub final_state: ModeState<T>,
    /// `(∫ w² p₁² dt)^{1/2}` and `(∫ w² p₂² dt)^{1/2}` for the weight passed to
    /// [`solve_mode_weighted`] (`w ≡ 1` otherwise).
    pub time_l2: (T, T),
    pub steps: usize,
    pub rejected: usize,
    pub trace: Option<Vec<TraceSample<T>>>,
}

/// Integrates the mode system from `p_in.t` to `t_end` with relative tolerance `tol`.
pub fn solve_mode<T: Real>(
    mode: &ModeIndex<T>,
    params: &PhysParams<T>,
    p_in: &ModeState<T>,
    t_end: T,
    tol: T,
) -> Result<ModeRunResult<T>> {
    solve_mode_with(mode, params, p_in, t_end, &SolveOptions::with_tol(tol))
}

pub fn solve_mode_with<T: Real>(
    mode: &ModeIndex<T>,
    params: &PhysParams<T>,
    p_in: &ModeState<T>,
    t_end: T,
    opts: &SolveOptions<T>,
) -> Result<ModeRunResult<T>> {
    solve_mode_weighted(mode, params, p_in, t_end, opts, |_| T::one())
}

/// As [`solve_mode_with`], additionally accumulating `∫ weight(t)² p_i(t)² dt`.
pub fn solve_mode_weighted<T: Real>(
    mode: &ModeIndex<T>,
    params: &PhysParams<T>,
    p_in: &ModeState<T>,
    t_end: T,
    opts: &SolveOptions<T>,
    weight: impl Fn(T) -> T,
) -> Result<ModeRunResult<T>> {
    validate(mode, p_in, t_end, opts)?;
    let t0 = p_in.t;
    let n0 = p_in.norm();
    let env_rate = params.envelope_rate() * params.kappa.cbrt();
    let env_denominator = T::one() + params.inflation();
    let tilde_of = TildeMap::new(mode, params, t0);

    let mut trace = opts.record_trace.then(Vec::new);
    let push = |trace: &mut Option<Vec<TraceSample<T>>>, st: ModeState<T>| {
        if let Some(tr) = trace.as_mut() {
            let tilde = opts.record_tilde.then(|| tilde_of.apply(&st));
            tr.push(TraceSample { state: st, tilde });
        }
    };
    push(&mut trace, *p_in);

    if n0 == T::zero() {
        let end = ModeState::new(T::zero(), T::zero(), t_end);
        push(&mut trace, end);
        return Ok(ModeRunResult {
            growth_factor: T::one(),
            t_peak: t0,
            envelope_ratio: (env_rate * t0).exp() / env_denominator,
            final_state: end,
            time_l2: (T::zero(), T::zero()),
            steps: 0,
            rejected: 0,
            trace,
        });
    }

    let h_max = opts
        .h_max
        .unwrap_or_else(|| T::lit(0.25) * mode.resolve_timescale(params));
    let omega = (params.alpha * mode.kf()).abs();
    let mut h = h_max.min(T::lit(0.1) / (T::one() + omega));

    let mut peak = PeakTracker::new(t0, n0 * n0);
    let mut env_peak = PeakTracker::new(t0, n0 * n0 * (T::lit(2.0) * env_rate * t0).exp());
    let (mut int1, mut int2) = (T::zero(), T::zero());
    let (mut steps, mut rejected) = (0usize, 0usize);
    let mut t = t0;
    let mut p = (p_in.p1, p_in.p2);

    let fifteen = T::lit(15.0);
    let sixth = T::one() / T::lit(6.0);
    while t < t_end {
        h = h.min(t_end - t);
        let tm = t + h * T::lit(0.5);
        let tb = t + h;
        let full = propagator(opts.model, mode, params, t, tb).apply(p);
        let mid = propagator(opts.model, mode, params, t, tm).apply(p);
        let two = propagator(opts.model, mode, params, tm, tb).apply(mid);
        if !(two.0.is_finite() && two.1.is_finite()) {
            return Err(Error::NonFinite { t: tb.to_f64_lossy() });
        }
        // Filtered estimate: an error in a strongly damped component is wiped out by the
        // next step, so it is weighted by 1/(1 + h·damping).
        let (d1, d2) = damping(opts.model, mode, params, tm);
        let err =
            ((two.0 - full.0) / (T::one() + h * d1)).hypot((two.1 - full.1) / (T::one() + h * d2)) / fifteen;
        let scale = p.0.hypot(p.1).max(two.0.hypot(two.1));
        let allowed = opts.tol * h * scale;
        let ratio = if allowed > T::zero() {
            err / allowed
        } else {
            T::zero()
        };

        if ratio <= T::one() {
            let g = [norm2(p), norm2(mid), norm2(two)];
            peak.observe(t, h, g);
            // A local maximum of |p|² that may beat the running supremum is located exactly:
            // bisect on d|p|²/dt along the propagator.
            let slope = |q: (T, T), tau: T| {
                let d = model_rhs(opts.model, &ModeState::new(q.0, q.1, tau), mode, params);
                q.0 * d.0 + q.1 * d.1
            };
            let near_best = peak.best * (T::one() - T::lit(1e-3));
            for (ta, qa, tz, qz) in [(t, p, tm, mid), (tm, mid, tb, two)] {
                if norm2(qa).max(norm2(qz)) >= near_best
                    && slope(qa, ta) > T::zero()
                    && slope(qz, tz) < T::zero()
                {
                    let (mut lo, mut hi) = (ta, tz);
                    for _ in 0..64 {
                        let c = (lo + hi) * T::lit(0.5);
                        if c <= lo || c >= hi {
                            break;
                        }
                        let q = propagator(opts.model, mode, params, ta, c).apply(qa);
                        if slope(q, c) > T::zero() {
                            lo = c;
                        } else {
                            hi = c;
                        }
                    }
                    let c = (lo + hi) * T::lit(0.5);
                    peak.offer(c, norm2(propagator(opts.model, mode, params, ta, c).apply(qa)));
                }
            }
            let e = |tt: T| (T::lit(2.0) * env_rate * tt).exp();
            env_peak.observe(t, h, [g[0] * e(t), g[1] * e(tm), g[2] * e(tb)]);

            let (w0, w1, w2) = (weight(t), weight(tm), weight(tb));
            let w0 = w0 * w0;
            let w1 = w1 * w1;
            let w2 = w2 * w2;
            int1 += h * sixth * (w0 * p.0 * p.0 + T::lit(4.0) * w1 * mid.0 * mid.0 + w2 * two.0 * two.0);
            int2 += h * sixth * (w0 * p.1 * p.1 + T::lit(4.0) * w1 * mid.1 * mid.1 + w2 * two.1 * two.1);

            push(&mut trace, ModeState::new(mid.0, mid.1, tm));
            push(&mut trace, ModeState::new(two.0, two.1, tb));
            t = tb;
            p = two;
            steps += 1;
            let grow = if ratio > T::zero() {
                (T::lit(0.9) * ratio.powf(T::lit(-0.2)))
                    .max(T::lit(0.2))
                    .min(T::lit(4.0))
            } else {
                T::lit(4.0)
            };
            h = (h * grow).min(h_max);
        } else {
            rejected += 1;
            h *= (T::lit(0.9) * ratio.powf(T::lit(-0.2))).max(T::lit(0.2));
            if h < T::lit(1e-13) * t.abs().max(T::one()) {
                return Err(Error::StepUnderflow {
                    t: t.to_f64_lossy(),
                    h: h.to_f64_lossy(),
                });
            }
        }
    }

    Ok(ModeRunResult {
        growth_factor: peak.best.sqrt() / n0,
        t_peak: peak.t_best,
        envelope_ratio: env_peak.best.sqrt() / (env_denominator * n0),
        final_state: ModeState::new(p.0, p.1, t),
        time_l2: (int1.sqrt(), int2.sqrt()),
        steps,
        rejected,
        trace,
    })
}

fn validate<T: Real>(
    mode: &ModeIndex<T>,
    p_in: &ModeState<T>,
    t_end: T,
    opts: &SolveOptions<T>,
) -> Result<()> {
    if mode.k == 0 {
        return Err(Error::InvalidParameter("k ≠ 0 required".into()));
    }
    if !p_in.is_finite() {
        return Err(Error::NonFinite {
            t: p_in.t.to_f64_lossy(),
        });
    }
    if !(t_end > p_in.t) || !(t_end > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "t_end = {t_end} must be positive and after the start time {}",
            p_in.t
        )));
    }
    if !(opts.tol >= T::lit(1e-12) && opts.tol <= T::lit(1e-4)) {
        return Err(Error::InvalidParameter(format!(
            "tol = {} outside [1e-12, 1e-4]",
            opts.tol
        )));
    }
    if let Some(h) = opts.h_max {
        if !(h > T::zero()) {
            return Err(Error::InvalidParameter("h_max must be positive".into()));
        }
    }
    Ok(())
}

/// Diagonal damping rates `νk²(1+s²)`, `κk²(1+s²)` at time `t`.
fn damping<T: Real>(model: LinearModel, mode: &ModeIndex<T>, params: &PhysParams<T>, t: T) -> (T, T) {
    if !model.dissipation() {
        return (T::zero(), T::zero());
    }
    let s = mode.s(t);
    let q = mode.kf() * mode.kf() * (T::one() + s * s);
    (params.nu * q, params.kappa * q)
}

#[inline]
fn norm2<T: Real>(p: (T, T)) -> T {
    p.0 * p.0 + p.1 * p.1
}

/// Running supremum of a sampled non-negative signal.
struct PeakTracker<T> {
    best: T,
    t_best: T,
}

impl<T: Real> PeakTracker<T> {
    fn new(t0: T, g0: T) -> Self {
        Self { best: g0, t_best: t0 }
    }

    fn offer(&mut self, t: T, g: T) {
        if g > self.best {
            self.best = g;
            self.t_best = t;
        }
    }

    fn observe(&mut self, t: T, h: T, g: [T; 3]) {
        let half = h * T::lit(0.5);
        for (i, &gi) in g.iter().enumerate().skip(1) {
            self.offer(t + half * T::from_usize(i).unwrap(), gi);
        }
    }
}

struct TildeMap<T> {
    half_kappa_k2: T,
    s_in: T,
    mode: ModeIndex<T>,
}

impl<T: Real> TildeMap<T> {
    fn new(mode: &ModeIndex<T>, params: &PhysParams<T>, t0: T) -> Self {
        let k = mode.kf();
        Self {
            half_kappa_k2: params.kappa * k * k * T::lit(0.5),
            s_in: mode.s(t0),
            mode: *mode,
        }
    }

    fn apply(&self, st: &ModeState<T>) -> (T, T) {
        let s = self.mode.s(st.t);
        let ds = s - self.s_in;
        let expo =
            self.half_kappa_k2 * (ds + ds * (s * s + s * self.s_in + self.s_in * self.s_in) / T::lit(3.0));
        let scaled = |x: T| {
            if x == T::zero() {
                T::zero()
            } else {
                x.signum() * (x.abs().ln() + expo).exp()
            }
        };
        (scaled(st.p1), scaled(st.p2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_data_stays_zero() {
        let mode = ModeIndex::new(2, 1.0).unwrap();
        let params = PhysParams::new(1e-2, 1e-4, 1.0).unwrap();
        let r = solve_mode(&mode, &params, &ModeState::new(0.0, 0.0, 0.0), 50.0, 1e-8).unwrap();
        assert_eq!(r.growth_factor, 1.0);
        assert_eq!(r.final_state.norm(), 0.0);
    }

    #[test]
    fn circular_movement_is_a_rotation() {
        let mode = ModeIndex::new(1, 0.0).unwrap();
        let params = PhysParams::new(0.0, 0.0, 1.0).unwrap();
        let opts = SolveOptions {
            model: LinearModel::CircularMovement,
            ..SolveOptions::with_tol(1e-10)
        };
        let half_pi = std::f64::consts::FRAC_PI_2;
        let r = solve_mode_with(&mode, &params, &ModeState::new(1.0, 0.0, 0.0), half_pi, &opts).unwrap();
        assert!(r.final_state.p1.abs() < 1e-12);
        assert!((r.final_state.p2 - 1.0).abs() < 1e-12);
        assert!((r.growth_factor - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mode = ModeIndex::new(1, 0.0).unwrap();
        let params = PhysParams::new(1e-2, 1e-4, 1.0).unwrap();
        let p = ModeState::new(1.0, 0.0, 0.0);
        assert!(solve_mode(&mode, &params, &p, 0.0, 1e-8).is_err());
        assert!(solve_mode(&mode, &params, &p, 10.0, 1e-3).is_err());
        assert!(solve_mode(&mode, &params, &p, 10.0, 1e-13).is_err());
        let bogus = ModeIndex { k: 0, xi: 0.0 };
        assert!(solve_mode(&bogus, &params, &p, 10.0, 1e-8).is_err());
    }

    #[test]
    fn peak_between_samples_is_located() {
        // the crest at t ≈ 0.235 falls inside one of the first, rapidly growing steps
        let mode = ModeIndex::new(3, -9.0).unwrap();
        let params = PhysParams::new(1e-2, 1e-7, 1.5).unwrap();
        let p = ModeState::new(0.6, 0.8, 0.0);
        let fine = solve_mode(&mode, &params, &p, 2.0, 1e-12).unwrap();
        for tol in [1e-6_f64, 1e-8, 1e-10] {
            let r = solve_mode(&mode, &params, &p, 2.0, tol).unwrap();
            assert!(
                (r.growth_factor - fine.growth_factor).abs() <= 10.0 * tol,
                "tol {tol}"
            );
        }
    }
}
