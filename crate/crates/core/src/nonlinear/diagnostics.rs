use num_complex::Complex;

use super::state::State;
use crate::scalar::Real;
use crate::spectral::{MovingFrameSymbols, SpectralField};
use crate::weights::{RadialWeight, WeightParams};

/// Adapted unknowns: `p₁ = Λ_t^{-1}∇_t^⊥·v`, `p₂ = Λ_t^{-1}∇_t^⊥·b` for `k ≠ 0`, and the
/// first components `v₁`, `b₁` on the x-average.
#[derive(Debug, Clone, PartialEq)]
pub struct PVars<T> {
    pub p1: SpectralField<T>,
    pub p2: SpectralField<T>,
    pub t: T,
}

pub fn compute_pvars<T: Real>(state: &State<T>) -> PVars<T> {
    let g = *state.grid();
    let sym = MovingFrameSymbols::new(&g, state.t);
    let adapt = |f: &[SpectralField<T>; 2]| {
        let mut out = SpectralField::zeros(g);
        let (a, b) = (f[0].coeffs(), f[1].coeffs());
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            let kk = sym.k(i);
            *c = if kk == T::zero() {
                a[i]
            } else {
                // ∇^⊥·f = -i η f₁ + i k f₂
                let curl = Complex::new(T::zero(), T::one()) * (b[i] * kk - a[i] * sym.eta[i]);
                curl / sym.r2[i].sqrt()
            };
        }
        out
    };
    PVars {
        p1: adapt(&state.v),
        p2: adapt(&state.b),
        t: state.t,
    }
}

/// Pieces of the weighted energy on the `k ≠ 0` modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts<T> {
    /// `E = ‖A p‖² + (2/α)⟨∂_y^tΔ_t^{-1}χ A p₁, A p₂⟩`.
    pub e_main: T,
    pub ap1_sq: T,
    pub ap2_sq: T,
    /// `(1 - 1/(2α))‖Ap‖²`.
    pub lower: T,
    /// `(1 + 1/(2α))‖Ap‖²`.
    pub upper: T,
}

impl<T: Real> EnergyParts<T> {
    pub fn ap_sq(&self) -> T {
        self.ap1_sq + self.ap2_sq
    }
}

pub fn compute_energy<T: Real>(
    pvars: &PVars<T>,
    weights: &WeightParams<T>,
    radial: RadialWeight,
) -> EnergyParts<T> {
    let g = *pvars.p1.grid();
    let t = pvars.t;
    let (a1, a2) = (pvars.p1.coeffs(), pvars.p2.coeffs());
    let (mut s1, mut s2, mut cross) = (T::zero(), T::zero(), T::zero());
    for i in 0..g.nx {
        let k = g.k_of(i);
        if k == 0 {
            continue;
        }
        let kk = T::from_int(k);
        for j in 0..g.ny {
            let idx = g.idx(i, j);
            let xi = g.xi_of(j);
            let a = weights.eval_a_with(radial, t, k, xi);
            let w2 = a * a;
            s1 += w2 * a1[idx].norm_sqr();
            s2 += w2 * a2[idx].norm_sqr();
            let eta = xi - kk * t;
            // symbol of ∂_y^tΔ_t^{-1}: -iη/(k² + η²)
            let m = Complex::new(T::zero(), -eta / (kk * kk + eta * eta));
            let chi = weights.eval_chi(t, k, xi);
            cross += w2 * chi * (m * a1[idx] * a2[idx].conj()).re;
        }
    }
    let area = g.area();
    let (s1, s2, cross) = (s1 * area, s2 * area, cross * area);
    let alpha = weights.alpha;
    let sum = s1 + s2;
    let slack = T::one() / (T::lit(2.0) * alpha);
    EnergyParts {
        e_main: sum + T::lit(2.0) / alpha * cross,
        ap1_sq: s1,
        ap2_sq: s2,
        lower: (T::one() - slack) * sum,
        upper: (T::one() + slack) * sum,
    }
}
