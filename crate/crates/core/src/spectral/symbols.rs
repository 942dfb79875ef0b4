use num_complex::Complex;

use super::{GridSpec, SpectralField};
use crate::scalar::Real;

/// Fourier multipliers of the sheared-frame operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// `∂_x`: `ik`.
    Dx,
    /// `∂_y^t = ∂_y - t∂_x`: `i(ξ - kt)`.
    DyT,
    /// `Δ_t`: `-(k² + (ξ - kt)²)`.
    LaplacianT,
    /// `Λ_t = (-Δ_t)^{1/2}`.
    LambdaT,
    /// `Λ_t^{-1}`, zero at `(0, 0)`.
    LambdaTInv,
    /// `Δ_t^{-1}`, zero at `(0, 0)`.
    LaplacianTInv,
    /// First component of `∇_t^⊥ = (-∂_y^t, ∂_x)`.
    PerpX,
    /// Second component of `∇_t^⊥`.
    PerpY,
}

/// Value of `sel` at wavenumber `(k, ξ)` and time `t`.
#[inline]
pub fn symbol<T: Real>(sel: Symbol, k: i64, xi: T, t: T) -> Complex<T> {
    let kk = T::from_int(k);
    let eta = xi - kk * t;
    let r2 = kk * kk + eta * eta;
    let zero = T::zero();
    match sel {
        Symbol::Dx => Complex::new(zero, kk),
        Symbol::DyT => Complex::new(zero, eta),
        Symbol::LaplacianT => Complex::new(-r2, zero),
        Symbol::LambdaT => Complex::new(r2.sqrt(), zero),
        Symbol::LambdaTInv => {
            if r2 == zero {
                Complex::new(zero, zero)
            } else {
                Complex::new(T::one() / r2.sqrt(), zero)
            }
        }
        Symbol::LaplacianTInv => {
            if r2 == zero {
                Complex::new(zero, zero)
            } else {
                Complex::new(-T::one() / r2, zero)
            }
        }
        Symbol::PerpX => Complex::new(zero, -eta),
        Symbol::PerpY => Complex::new(zero, kk),
    }
}

/// Tabulated symbols on a grid at a fixed time.
#[derive(Debug, Clone)]
pub struct MovingFrameSymbols<T> {
    pub t: T,
    /// `ξ - kt` per coefficient slot.
    pub eta: Vec<T>,
    /// `k² + (ξ - kt)²` per coefficient slot.
    pub r2: Vec<T>,
    k: Vec<T>,
}

impl<T: Real> MovingFrameSymbols<T> {
    pub fn new(grid: &GridSpec<T>, t: T) -> Self {
        let n = grid.len();
        let (mut eta, mut r2, mut k) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for i in 0..grid.nx {
            let kk = T::from_int(grid.k_of(i));
            for j in 0..grid.ny {
                let e = grid.xi_of(j) - kk * t;
                eta.push(e);
                r2.push(kk * kk + e * e);
                k.push(kk);
            }
        }
        Self { t, eta, r2, k }
    }

    #[inline]
    pub fn value(&self, sel: Symbol, idx: usize) -> Complex<T> {
        let zero = T::zero();
        let (kk, eta, r2) = (self.k[idx], self.eta[idx], self.r2[idx]);
        match sel {
            Symbol::Dx | Symbol::PerpY => Complex::new(zero, kk),
            Symbol::DyT => Complex::new(zero, eta),
            Symbol::PerpX => Complex::new(zero, -eta),
            Symbol::LaplacianT => Complex::new(-r2, zero),
            Symbol::LambdaT => Complex::new(r2.sqrt(), zero),
            Symbol::LambdaTInv if r2 == zero => Complex::new(zero, zero),
            Symbol::LambdaTInv => Complex::new(T::one() / r2.sqrt(), zero),
            Symbol::LaplacianTInv if r2 == zero => Complex::new(zero, zero),
            Symbol::LaplacianTInv => Complex::new(-T::one() / r2, zero),
        }
    }

    #[inline]
    pub fn k(&self, idx: usize) -> T {
        self.k[idx]
    }

    pub fn apply(&self, field: &SpectralField<T>, sel: Symbol) -> SpectralField<T> {
        let mut out = field.clone();
        for (idx, c) in out.coeffs_mut().iter_mut().enumerate() {
            *c *= self.value(sel, idx);
        }
        out
    }

    /// Applies a composition of symbols right to left.
    pub fn apply_chain(&self, field: &SpectralField<T>, chain: &[Symbol]) -> SpectralField<T> {
        let mut out = field.clone();
        for (idx, c) in out.coeffs_mut().iter_mut().enumerate() {
            let mut m = Complex::new(T::one(), T::zero());
            for &sel in chain {
                m *= self.value(sel, idx);
            }
            *c *= m;
        }
        out
    }
}

impl<T: Real> SpectralField<T> {
    /// Pointwise multiplication by the symbol of `sel` at time `t`.
    pub fn apply_symbol(&self, sel: Symbol, t: T) -> SpectralField<T> {
        self.map_modes(|k, xi| symbol(sel, k, xi, t))
    }
}
