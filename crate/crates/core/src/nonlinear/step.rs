use super::rhs::Rhs;
use super::state::State;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{GridSpec, SpectralField};

/// `∫_{t₀}^{t₀+h} (k² + (ξ - kτ)²) dτ` in closed form.
#[inline]
pub fn dissipation_exponent<T: Real>(k: T, xi: T, t0: T, h: T) -> T {
    let eta = xi - k * t0;
    let three = T::lit(3.0);
    k * k * h + eta * eta * h - k * eta * h * h + k * k * h * h * h / three
}

/// Largest admissible step `cfl / (α k_max + 2 + (‖v‖_∞ + ‖b‖_∞) max|(k, ξ - kt)|)` over the
/// resolved band. Sup norms are bounded by coefficient sums, so no transform is needed.
pub fn cfl_limit<T: Real>(state: &State<T>, alpha: T, cfl: T) -> T {
    let g = state.grid();
    let (mut kmax, mut rmax) = (T::zero(), T::zero());
    for i in 0..g.nx {
        let k = T::from_int(g.k_of(i));
        for j in 0..g.ny {
            if !g.is_resolved(i, j) {
                continue;
            }
            let eta = g.xi_of(j) - k * state.t;
            kmax = kmax.max(k.abs());
            rmax = rmax.max(k.hypot(eta));
        }
    }
    let sup = |f: &SpectralField<T>| f.coeffs().iter().fold(T::zero(), |a, c| a + c.norm());
    let amp = sup(&state.v[0]).hypot(sup(&state.v[1])) + sup(&state.b[0]).hypot(sup(&state.b[1]));
    cfl / (alpha.abs() * kmax + T::lit(2.0) + amp * rmax)
}

/// Lawson RK4: classical RK4 on `e^{∫ν(-Δ_τ)} u`, with the dissipation integrated exactly.
#[derive(Debug, Clone)]
pub struct Stepper<T: Real> {
    pub rhs: Rhs<T>,
    pub cfl: T,
}

impl<T: Real> Stepper<T> {
    pub fn new(rhs: Rhs<T>, cfl: T) -> Self {
        Self { rhs, cfl }
    }

    pub fn dt_max(&self, state: &State<T>) -> T {
        cfl_limit(state, self.rhs.params.alpha, self.cfl)
    }

    /// `u ← e^{-c∫(k²+(ξ-kτ)²)dτ} u` over `[t0, t0 + h]`, with `c = ν` for `v`, `κ` for `b`.
    fn integrating_factor(&self, state: &mut State<T>, t0: T, h: T) {
        if !self.rhs.terms.dissipation {
            return;
        }
        let g: GridSpec<T> = *state.grid();
        let (nu, kappa) = (self.rhs.params.nu, self.rhs.params.kappa);
        let mut fac_v = Vec::with_capacity(g.len());
        let mut fac_b = Vec::with_capacity(g.len());
        for i in 0..g.nx {
            let k = T::from_int(g.k_of(i));
            for j in 0..g.ny {
                let e = dissipation_exponent(k, g.xi_of(j), t0, h);
                fac_v.push((-nu * e).exp());
                fac_b.push((-kappa * e).exp());
            }
        }
        for (n, f) in state.fields_mut().into_iter().enumerate() {
            let fac = if n < 2 { &fac_v } else { &fac_b };
            for (c, &w) in f.coeffs_mut().iter_mut().zip(fac) {
                *c *= w;
            }
        }
    }

    fn weighted(&self, mut s: State<T>, t0: T, h: T) -> State<T> {
        self.integrating_factor(&mut s, t0, h);
        s
    }

    /// Advances by `dt`. Returns the new state and the largest unresolved fraction seen in
    /// the stage evaluations.
    pub fn step(&self, state: &State<T>, dt: T) -> Result<(State<T>, T)> {
        if dt == T::zero() {
            return Ok((state.clone(), T::zero()));
        }
        let limit = self.dt_max(state);
        if !(dt > T::zero()) || dt > limit * T::lit(1.0 + 1e-12) {
            return Err(Error::Cfl {
                dt: dt.to_f64_lossy(),
                dt_max: limit.to_f64_lossy(),
            });
        }
        let half = T::lit(0.5);
        let (t0, hh) = (state.t, dt * half);
        let (tm, t1) = (t0 + hh, t0 + dt);

        let (k1, f1) = self.rhs.explicit(state);
        let mut a = state.clone();
        a.axpy(hh, &k1);
        let mut a = self.weighted(a, t0, hh);
        a.t = tm;
        let (k2, f2) = self.rhs.explicit(&a);

        let mut b = self.weighted(state.clone(), t0, hh);
        b.axpy(hh, &k2);
        b.t = tm;
        let (k3, f3) = self.rhs.explicit(&b);

        let u0_full = self.weighted(state.clone(), t0, dt);
        let mut c = u0_full.clone();
        c.axpy(dt, &self.weighted(k3.clone(), tm, hh));
        c.t = t1;
        let (k4, f4) = self.rhs.explicit(&c);

        let mut mid = k2;
        mid.axpy(T::one(), &k3);
        let mid = self.weighted(mid, tm, hh);
        let sixth = dt / T::lit(6.0);
        let mut out = u0_full;
        out.axpy(sixth, &self.weighted(k1, t0, dt));
        out.axpy(T::lit(2.0) * sixth, &mid);
        out.axpy(sixth, &k4);
        out.t = t1;
        out.project();
        if !out.is_finite() {
            return Err(Error::NonFinite { t: t1.to_f64_lossy() });
        }
        Ok((out, f1.max(f2).max(f3).max(f4)))
    }
}
