use serde::{Deserialize, Serialize};

use super::PhysParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fourier pair `(k, ξ)` with `k ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeIndex<T> {
    pub k: i64,
    pub xi: T,
}

impl<T: Real> ModeIndex<T> {
    pub fn new(k: i64, xi: T) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "mode constraint k ≠ 0 violated: the x-average is treated separately".into(),
            ));
        }
        if !xi.is_finite() {
            return Err(Error::InvalidParameter(format!("xi = {xi} must be finite")));
        }
        Ok(Self { k, xi })
    }

    #[inline]
    pub fn kf(&self) -> T {
        T::from_int(self.k)
    }

    /// Shifted time `s = t - ξ/k`.
    #[inline]
    pub fn s(&self, t: T) -> T {
        t - self.xi / self.kf()
    }

    /// `min(1, (κk²)^{-1/3}, ν^{-1})`, the shortest scale the step control must resolve.
    pub fn resolve_timescale(&self, params: &PhysParams<T>) -> T {
        let k2 = self.kf() * self.kf();
        let mut scale = T::one();
        if params.kappa > T::zero() {
            scale = scale.min((params.kappa * k2).cbrt().recip());
        }
        if params.nu > T::zero() {
            scale = scale.min(params.nu.recip());
        }
        scale
    }
}

/// Real amplitudes `(p₁, p₂)` of one mode at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeState<T> {
    pub p1: T,
    pub p2: T,
    pub t: T,
}

impl<T: Real> ModeState<T> {
    pub fn new(p1: T, p2: T, t: T) -> Self {
        Self { p1, p2, t }
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.p1.hypot(self.p2)
    }

    pub fn is_finite(&self) -> bool {
        self.p1.is_finite() && self.p2.is_finite() && self.t.is_finite()
    }
}

/// Which terms of the mode system are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearModel {
    /// Shear, coupling and dissipation.
    #[default]
    Full,
    /// Coupling only: `p₁' = -αk p₂`, `p₂' = αk p₁`.
    CircularMovement,
    /// `p₁ ≡ 0` and `p₂' = (s/(1+s²) - κk²(1+s²)) p₂`.
    StrongViscosity,
}

impl LinearModel {
    pub(crate) fn shear(self) -> bool {
        !matches!(self, LinearModel::CircularMovement)
    }

    pub(crate) fn dissipation(self) -> bool {
        !matches!(self, LinearModel::CircularMovement)
    }

    pub(crate) fn coupling(self) -> bool {
        !matches!(self, LinearModel::StrongViscosity)
    }
}

/// Right-hand side `(dp₁/dt, dp₂/dt)` of the full mode system.
pub fn mode_rhs<T: Real>(state: &ModeState<T>, mode: &ModeIndex<T>, params: &PhysParams<T>) -> (T, T) {
    model_rhs(LinearModel::Full, state, mode, params)
}

pub(crate) fn model_rhs<T: Real>(
    model: LinearModel,
    state: &ModeState<T>,
    mode: &ModeIndex<T>,
    params: &PhysParams<T>,
) -> (T, T) {
    let s = mode.s(state.t);
    let k = mode.kf();
    let one_s2 = T::one() + s * s;
    let shear = if model.shear() { s / one_s2 } else { T::zero() };
    let (rate1, rate2) = if model.dissipation() {
        (params.nu * k * k * one_s2, params.kappa * k * k * one_s2)
    } else {
        (T::zero(), T::zero())
    };
    let omega = if model.coupling() {
        params.alpha * k
    } else {
        T::zero()
    };
    let (p1, p2) = if model == LinearModel::StrongViscosity {
        (T::zero(), state.p2)
    } else {
        (state.p1, state.p2)
    };
    (
        -shear * p1 - omega * p2 - rate1 * p1,
        shear * p2 + omega * p1 - rate2 * p2,
    )
}

/// Coefficient `-s/(1+s²) - ν̃k²(1+s²)` with `ν̃ = ν - κ/2` that multiplies `p̃₁²` in the
/// energy balance; it is non-positive for `|s| ≥ ν^{-1}`.
pub fn p1_sign_coefficient<T: Real>(s: T, k: i64, params: &PhysParams<T>) -> T {
    let kk = T::from_int(k);
    let nu_tilde = params.nu - params.kappa * T::lit(0.5);
    let one_s2 = T::one() + s * s;
    -s / one_s2 - nu_tilde * kk * kk * one_s2
}

/// Quadratic factor inside the resistive exponent of the strong-viscosity solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResistiveReading {
    /// `exp(-κ∫_{t₀}^t (1 + τ²) dτ)`, the solution of the toy ODE.
    #[default]
    Tau,
    /// `exp(-κ∫_{t₀}^t (1 + (τ - t)²) dτ)`, as typeset in the source derivation.
    TauMinusT,
}

/// Closed-form `p₂(t)` of `p₂' = (t/(1+t²) - κ(1+t²)) p₂` started from `p₂(t₀)`.
pub fn strong_viscosity_reference<T: Real>(t0: T, t: T, kappa: T, p2_0: T) -> T {
    strong_viscosity_reference_with(ResistiveReading::Tau, t0, t, kappa, p2_0)
}

pub fn strong_viscosity_reference_with<T: Real>(
    reading: ResistiveReading,
    t0: T,
    t: T,
    kappa: T,
    p2_0: T,
) -> T {
    let h = t - t0;
    let three = T::lit(3.0);
    let integral = match reading {
        // ∫(1+τ²) = h + (t³ - t₀³)/3
        ResistiveReading::Tau => h + h * (t * t + t * t0 + t0 * t0) / three,
        // ∫(1+(τ-t)²) = h + h³/3
        ResistiveReading::TauMinusT => h + h * h * h / three,
    };
    let growth = (T::one() + t * t).sqrt() / (T::one() + t0 * t0).sqrt();
    growth * (-kappa * integral).exp() * p2_0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_zero_state() {
        let m = ModeIndex::new(3, 1.5).unwrap();
        let p = PhysParams::new(0.1, 0.01, 1.3).unwrap();
        assert_eq!(mode_rhs(&ModeState::new(0.0, 0.0, 2.0), &m, &p), (0.0, 0.0));
    }

    #[test]
    fn rhs_coupling_only_at_resonance() {
        let m = ModeIndex::new(1, 0.7).unwrap();
        let p = PhysParams::new(0.0, 0.0, 1.0).unwrap();
        let (a, b) = mode_rhs(&ModeState::new(1.0, 0.0, 0.7), &m, &p);
        assert_eq!((a, b), (0.0, 1.0));
    }

    #[test]
    fn rhs_hand_arithmetic() {
        let alpha = 1.7_f64;
        let m = ModeIndex::new(1, 0.0).unwrap();
        let p = PhysParams::new(0.1, 0.01, alpha).unwrap();
        let (a, b) = mode_rhs(&ModeState::new(1.0, 1.0, 2.0), &m, &p);
        assert!((a - (-0.4 - alpha - 0.5)).abs() < 1e-14);
        assert!((b - (0.4 + alpha - 0.05)).abs() < 1e-14);
    }

    #[test]
    fn zero_k_rejected() {
        let e = ModeIndex::new(0, 1.0_f64).unwrap_err();
        assert!(e.to_string().contains("k ≠ 0"));
    }

    #[test]
    fn strong_viscosity_closed_form() {
        assert_eq!(strong_viscosity_reference(3.0, 3.0, 0.2, 1.25), 1.25);
        let v = strong_viscosity_reference(1.0, 10.0, 0.0, 1.0_f64);
        assert!((v - 101.0_f64.sqrt() / 2.0_f64.sqrt()).abs() < 1e-13);
        let w = strong_viscosity_reference_with(ResistiveReading::TauMinusT, 1.0, 10.0, 0.0, 1.0_f64);
        assert!((w - v).abs() < 1e-13);
    }

    #[test]
    fn sign_condition_outside_circular_window() {
        let p = PhysParams::new(1e-2, 1e-6, 1.0).unwrap();
        for &s in &[100.0, 150.0, 1e3, 1e5, -100.0, -1e4] {
            for k in [1_i64, 2, -3, 8] {
                assert!(p1_sign_coefficient(s, k, &p) <= 0.0, "s = {s}, k = {k}");
            }
        }
    }
}
