use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{GridSpec, MovingFrameSymbols, SpectralField, Symbol};

/// Velocity and magnetic perturbations in the sheared frame at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    pub v: [SpectralField<T>; 2],
    pub b: [SpectralField<T>; 2],
    pub t: T,
}

impl<T: Real> State<T> {
    pub fn zeros(grid: GridSpec<T>, t: T) -> Self {
        let z = SpectralField::zeros(grid);
        Self {
            v: [z.clone(), z.clone()],
            b: [z.clone(), z],
            t,
        }
    }

    /// Builds `v`, `b` from the moving-frame curl of two stream functions.
    pub fn from_potentials(psi_v: &SpectralField<T>, psi_b: &SpectralField<T>, t: T) -> Result<Self> {
        if psi_v.grid() != psi_b.grid() {
            return Err(Error::InvalidGrid(
                "stream functions live on different grids".into(),
            ));
        }
        let sym = MovingFrameSymbols::new(psi_v.grid(), t);
        Ok(Self {
            v: [sym.apply(psi_v, Symbol::PerpX), sym.apply(psi_v, Symbol::PerpY)],
            b: [sym.apply(psi_b, Symbol::PerpX), sym.apply(psi_b, Symbol::PerpY)],
            t,
        })
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec<T> {
        self.v[0].grid()
    }

    pub fn fields(&self) -> [&SpectralField<T>; 4] {
        [&self.v[0], &self.v[1], &self.b[0], &self.b[1]]
    }

    pub fn fields_mut(&mut self) -> [&mut SpectralField<T>; 4] {
        let [v0, v1] = &mut self.v;
        let [b0, b1] = &mut self.b;
        [v0, v1, b0, b1]
    }

    /// Largest `|∇_t·v|` and `|∇_t·b|` over all coefficients.
    pub fn divergence_defect(&self) -> (T, T) {
        let sym = MovingFrameSymbols::new(self.grid(), self.t);
        let div = |f: &[SpectralField<T>; 2]| {
            let (a, b) = (f[0].coeffs(), f[1].coeffs());
            (0..a.len()).fold(T::zero(), |m, i| {
                let d = a[i] * sym.value(Symbol::Dx, i) + b[i] * sym.value(Symbol::DyT, i);
                m.max(d.norm())
            })
        };
        (div(&self.v), div(&self.b))
    }

    /// Applies the moving-frame Leray projection to `v` and `b`.
    pub fn project(&mut self) {
        let sym = MovingFrameSymbols::new(self.grid(), self.t);
        let [v0, v1] = &mut self.v;
        project_pair(&sym, v0, v1);
        let [b0, b1] = &mut self.b;
        project_pair(&sym, b0, b1);
    }

    /// Largest Hermitian defect across the four fields.
    pub fn hermitian_defect(&self) -> T {
        self.fields()
            .iter()
            .fold(T::zero(), |m, f| m.max(f.hermitian_defect()))
    }

    pub fn symmetrize(&mut self) {
        for f in self.fields_mut() {
            f.symmetrize();
        }
    }

    pub fn dealias(&mut self) {
        for f in self.fields_mut() {
            f.dealias_in_place();
        }
    }

    pub fn is_finite(&self) -> bool {
        self.fields().iter().all(|f| f.is_finite())
    }

    /// `(‖v‖² + ‖b‖²)^{1/2}`.
    pub fn norm_l2(&self) -> T {
        self.pair_norm(|f| f.norm_l2())
    }

    /// `(‖v_≠‖²_{H^N} + ‖b_≠‖²_{H^N})^{1/2}` with weight `⟨k, ξ⟩^N`.
    pub fn norm_hn_neq(&self, n: T) -> T {
        self.pair_norm(|f| f.fluctuation().norm_hn(n))
    }

    /// Same for the x-average.
    pub fn norm_hn_eq(&self, n: T) -> T {
        self.pair_norm(|f| f.x_average().norm_hn(n))
    }

    fn pair_norm(&self, norm: impl Fn(&SpectralField<T>) -> T) -> T {
        self.fields()
            .iter()
            .map(|f| {
                let x = norm(f);
                x * x
            })
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// `self += a * other`, field by field.
    pub fn axpy(&mut self, a: T, other: &Self) {
        for (f, o) in self.fields_mut().into_iter().zip(other.fields()) {
            f.axpy(a, o);
        }
    }
}

/// `f ← f - (k, η)((k, η)·f)/(k² + η²)` per coefficient.
pub(crate) fn project_pair<T: Real>(
    sym: &MovingFrameSymbols<T>,
    f1: &mut SpectralField<T>,
    f2: &mut SpectralField<T>,
) {
    let zero = Complex::new(T::zero(), T::zero());
    let (a, b) = (f1.coeffs_mut(), f2.coeffs_mut());
    for i in 0..a.len() {
        let r2 = sym.r2[i];
        if r2 == T::zero() {
            continue;
        }
        let (kk, eta) = (sym.k(i), sym.eta[i]);
        let dot = a[i] * kk + b[i] * eta;
        if dot == zero {
            continue;
        }
        let q = dot / r2;
        a[i] -= q * kk;
        b[i] -= q * eta;
    }
}
