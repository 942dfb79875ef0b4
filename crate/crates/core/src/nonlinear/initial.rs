use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::State;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{GridSpec, SpectralField};

/// Band-limited random data: `v = ∇^⊥ψ_v`, `b = ∇^⊥ψ_b` at `t = 0`, rescaled so that
/// `‖(v, b)_≠‖_{H^N} = ε` and `‖(v, b)_=‖_{H^N} = ε̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialData<T> {
    pub eps: T,
    pub eps_tilde: T,
    /// Largest `|k|` excited.
    pub band_k: i64,
    /// Largest vertical lattice index `|m|` excited.
    pub band_m: i64,
    pub n: u32,
    pub seed: u64,
}

pub fn random_initial_state<T: Real>(grid: GridSpec<T>, data: &InitialData<T>) -> Result<State<T>> {
    if data.band_k < 1 || data.band_m < 0 {
        return Err(Error::InvalidParameter("initial band must contain k = 1".into()));
    }
    if 3 * data.band_k as usize > grid.nx || 3 * data.band_m as usize > grid.ny {
        return Err(Error::InvalidParameter(format!(
            "initial band (|k| <= {}, |m| <= {}) exceeds the dealiased band of a {}x{} grid",
            data.band_k, data.band_m, grid.nx, grid.ny
        )));
    }
    if !(data.eps >= T::zero()) || !(data.eps_tilde >= T::zero()) {
        return Err(Error::InvalidParameter("amplitudes must be non-negative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(data.seed);
    let mut draw = || {
        let mut psi = SpectralField::zeros(grid);
        for k in -data.band_k..=data.band_k {
            for m in -data.band_m..=data.band_m {
                let c = Complex::new(
                    T::lit(rng.random_range(-1.0..1.0)),
                    T::lit(rng.random_range(-1.0..1.0)),
                );
                psi.set_coeff(k, m, c);
            }
        }
        psi.set_coeff(0, 0, Complex::new(T::zero(), T::zero()));
        psi.symmetrize();
        psi
    };
    let (psi_v, psi_b) = (draw(), draw());
    let raw = State::from_potentials(&psi_v, &psi_b, T::zero())?;
    let n = T::from_int(data.n as i64);
    let scale = |target: T, have: T| {
        if have > T::zero() {
            target / have
        } else {
            T::zero()
        }
    };
    let s_neq = scale(data.eps, raw.norm_hn_neq(n));
    let s_eq = scale(data.eps_tilde, raw.norm_hn_eq(n));
    let mut out = State::zeros(grid, T::zero());
    for (o, f) in out.fields_mut().into_iter().zip(raw.fields()) {
        *o = f.fluctuation().scale(s_neq).add(&f.x_average().scale(s_eq));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_and_constraints() {
        let g = GridSpec::new(32, 32, 12.0_f64).unwrap();
        let d = InitialData {
            eps: 1e-3,
            eps_tilde: 2e-3,
            band_k: 4,
            band_m: 5,
            n: 5,
            seed: 11,
        };
        let s = random_initial_state(g, &d).unwrap();
        assert!((s.norm_hn_neq(5.0) - 1e-3).abs() < 1e-15);
        assert!((s.norm_hn_eq(5.0) - 2e-3).abs() < 1e-15);
        let (dv, db) = s.divergence_defect();
        assert!(dv < 1e-16 && db < 1e-16);
        assert!(s.hermitian_defect() < 1e-18);
        assert_eq!(s, random_initial_state(g, &d).unwrap());
    }

    #[test]
    fn band_must_fit() {
        let g = GridSpec::new(16, 16, 12.0).unwrap();
        let d = InitialData {
            eps: 1.0,
            eps_tilde: 1.0,
            band_k: 6,
            band_m: 2,
            n: 5,
            seed: 0,
        };
        assert!(random_initial_state::<f64>(g, &d).is_err());
    }
}
