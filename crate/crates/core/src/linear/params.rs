use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Viscosity `ν`, resistivity `κ` and background field strength `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams<T> {
    pub nu: T,
    pub kappa: T,
    pub alpha: T,
}

impl<T: Real> PhysParams<T> {
    pub fn new(nu: T, kappa: T, alpha: T) -> Result<Self> {
        if !(nu >= T::zero()) || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!("nu = {nu} must be >= 0")));
        }
        if !(kappa >= T::zero()) || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("kappa = {kappa} must be >= 0")));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must be finite")));
        }
        Ok(Self { nu, kappa, alpha })
    }

    /// `κ ≤ ν³`: the regime with norm inflation.
    pub fn regime_kappa_le_nu3(&self) -> bool {
        self.kappa <= self.nu * self.nu * self.nu
    }

    /// `0 < κ ≤ ν`.
    pub fn regime_tagged(&self) -> bool {
        self.kappa > T::zero() && self.kappa <= self.nu
    }

    /// `α > 1/2`, needed for positivity of the coupled energies.
    pub fn alpha_admissible(&self) -> bool {
        self.alpha > T::lit(0.5)
    }

    /// Upper viscosity bound `(1/40)(1 - 1/(2α))^{6/5}` of the stability theorem.
    pub fn nu_max(&self) -> T {
        let gap = T::one() - T::one() / (T::lit(2.0) * self.alpha);
        if gap <= T::zero() {
            return T::zero();
        }
        gap.powf(T::lit(1.2)) / T::lit(40.0)
    }

    /// `0 < κ ≤ ν ≤ ν_max`.
    pub fn within_stability_range(&self) -> bool {
        self.alpha_admissible() && self.regime_tagged() && self.nu <= self.nu_max()
    }

    /// `νκ^{-1/3}`, infinite when `κ = 0`.
    pub fn inflation(&self) -> T {
        if self.kappa == T::zero() {
            return T::infinity();
        }
        self.nu * self.kappa.cbrt().recip()
    }

    /// Lipschitz factor `L = max(1, νκ^{-1/3})`.
    pub fn lipschitz_l(&self) -> T {
        self.inflation().max(T::one())
    }

    /// Rate `c = (1/200)(1 - 1/(2α))²` of the `e^{-cκ^{1/3}t}` envelope.
    pub fn envelope_rate(&self) -> T {
        let gap = T::one() - T::one() / (T::lit(2.0) * self.alpha);
        gap * gap / T::lit(200.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_flags() {
        let p = PhysParams::new(1e-2_f64, 1e-9, 1.0).unwrap();
        assert!(p.regime_kappa_le_nu3());
        assert!(p.regime_tagged());
        assert!((p.lipschitz_l() - 10.0).abs() < 1e-9);
        let q = PhysParams::new(1e-3, 1e-3, 1.0).unwrap();
        assert!(!q.regime_kappa_le_nu3());
        assert_eq!(q.lipschitz_l(), 1.0);
        assert!(PhysParams::new(-1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn theorem_constants() {
        let p = PhysParams::new(1e-3, 1e-4, 1.0_f64).unwrap();
        assert!((p.envelope_rate() - 0.25 / 200.0).abs() < 1e-15);
        assert!((p.nu_max() - 0.5_f64.powf(1.2) / 40.0).abs() < 1e-15);
        assert!(p.within_stability_range());
    }
}
