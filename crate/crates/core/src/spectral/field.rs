use num_complex::Complex;

use super::GridSpec;
use crate::scalar::Real;

/// Real samples on the uniform grid, stored with `x` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<T>,
}

impl<T: Real> PhysicalField<T> {
    pub fn from_fn(grid: GridSpec<T>, f: impl Fn(T, T) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                let (x, y) = grid.point(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self {
            grid,
            values: vec![T::zero(); grid.len()],
        }
    }

    /// `L²` norm approximated by the midpoint sum.
    pub fn norm_l2(&self) -> T {
        let cell = self.grid.area() / T::from_usize(self.grid.len()).unwrap();
        (self.values.iter().fold(T::zero(), |acc, &v| acc + v * v) * cell).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a * b)
                .collect(),
        }
    }
}

/// Truncated Fourier coefficients `f̂(k, ξ)` normalised by the number of grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T> {
    grid: GridSpec<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self {
            grid,
            coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    pub(crate) fn from_coeffs(grid: GridSpec<T>, coeffs: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self { grid, coeffs }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    /// Coefficient of wavenumber `k` and vertical lattice index `m`.
    #[inline]
    pub fn coeff(&self, k: i64, m: i64) -> Complex<T> {
        self.coeffs[self.grid.idx(self.grid.slot_k(k), self.grid.slot_m(m))]
    }

    #[inline]
    pub fn set_coeff(&mut self, k: i64, m: i64, value: Complex<T>) {
        let idx = self.grid.idx(self.grid.slot_k(k), self.grid.slot_m(m));
        self.coeffs[idx] = value;
    }

    /// Multiplies every coefficient by `f(k, ξ)`.
    pub fn map_modes(&self, f: impl Fn(i64, T) -> Complex<T>) -> Self {
        let g = self.grid;
        let mut out = self.clone();
        for i in 0..g.nx {
            let k = g.k_of(i);
            for j in 0..g.ny {
                let idx = g.idx(i, j);
                out.coeffs[idx] = self.coeffs[idx] * f(k, g.xi_of(j));
            }
        }
        out
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| c * a).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: T, other: &Self) {
        for (c, &o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * a;
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// 2/3-rule truncation: modes with `|k| > nx/3` or `|m| > ny/3` are set to zero.
    pub fn dealias(&self) -> Self {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub fn dealias_in_place(&mut self) {
        let g = self.grid;
        for i in 0..g.nx {
            for j in 0..g.ny {
                if !g.is_resolved(i, j) {
                    self.coeffs[g.idx(i, j)] = Complex::new(T::zero(), T::zero());
                }
            }
        }
    }

    /// Energy fraction held by modes outside the dealiased band.
    pub fn unresolved_fraction(&self) -> T {
        let g = self.grid;
        let (mut outside, mut total) = (T::zero(), T::zero());
        for i in 0..g.nx {
            for j in 0..g.ny {
                let e = self.coeffs[g.idx(i, j)].norm_sqr();
                total += e;
                if !g.is_resolved(i, j) {
                    outside += e;
                }
            }
        }
        if total > T::zero() {
            outside / total
        } else {
            T::zero()
        }
    }

    /// `L²` inner product `Re ∫ f ḡ`.
    pub fn inner(&self, other: &Self) -> T {
        self.inner_weighted(other, |_, _| T::one())
    }

    /// `Re ∫ (w f) (w g)̄` for a real Fourier multiplier `w`.
    pub fn inner_weighted(&self, other: &Self, w: impl Fn(i64, T) -> T) -> T {
        let g = self.grid;
        let mut acc = T::zero();
        for i in 0..g.nx {
            let k = g.k_of(i);
            for j in 0..g.ny {
                let idx = g.idx(i, j);
                let wk = w(k, g.xi_of(j));
                acc += wk * wk * (self.coeffs[idx] * other.coeffs[idx].conj()).re;
            }
        }
        acc * g.area()
    }

    /// `‖w f‖_{L²}` for a real multiplier `w(k, ξ)`.
    pub fn norm_weighted(&self, w: impl Fn(i64, T) -> T) -> T {
        self.inner_weighted(self, w).max(T::zero()).sqrt()
    }

    pub fn norm_l2(&self) -> T {
        self.norm_weighted(|_, _| T::one())
    }

    /// `H^N` norm with the inhomogeneous weight `⟨k, ξ⟩^N = (1 + k² + ξ²)^{N/2}`.
    pub fn norm_hn(&self, n: T) -> T {
        self.norm_weighted(|k, xi| japanese(k, xi, n))
    }

    /// Homogeneous `Ḣ^N` norm with weight `|k, ξ|^N`, excluding the `(0, 0)` mode.
    pub fn norm_hn_homogeneous(&self, n: T) -> T {
        self.norm_weighted(|k, xi| homogeneous(k, xi, n))
    }

    /// Restriction to `k = 0` (the x-average).
    pub fn x_average(&self) -> Self {
        self.filter_k(|k| k == 0)
    }

    /// Restriction to `k ≠ 0`.
    pub fn fluctuation(&self) -> Self {
        self.filter_k(|k| k != 0)
    }

    fn filter_k(&self, keep: impl Fn(i64) -> bool) -> Self {
        let g = self.grid;
        let mut out = self.clone();
        for i in 0..g.nx {
            if !keep(g.k_of(i)) {
                for j in 0..g.ny {
                    out.coeffs[g.idx(i, j)] = Complex::new(T::zero(), T::zero());
                }
            }
        }
        out
    }

    /// Largest `|f̂(k,ξ) - conj f̂(-k,-ξ)|`; zero for real fields.
    pub fn hermitian_defect(&self) -> T {
        let g = self.grid;
        let mut worst = T::zero();
        for i in 0..g.nx {
            for j in 0..g.ny {
                let (mi, mj) = g.mirror(i, j);
                let d = (self.coeffs[g.idx(i, j)] - self.coeffs[g.idx(mi, mj)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Projects onto Hermitian-symmetric coefficients (real physical fields).
    pub fn symmetrize(&mut self) {
        let g = self.grid;
        let half = T::lit(0.5);
        let src = self.coeffs.clone();
        for i in 0..g.nx {
            for j in 0..g.ny {
                let (mi, mj) = g.mirror(i, j);
                self.coeffs[g.idx(i, j)] = (src[g.idx(i, j)] + src[g.idx(mi, mj)].conj()) * half;
            }
        }
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// `⟨k, ξ⟩^N = (1 + k² + ξ²)^{N/2}`.
#[inline]
pub(crate) fn japanese<T: Real>(k: i64, xi: T, n: T) -> T {
    let kk = T::from_int(k);
    (T::one() + kk * kk + xi * xi).powf(n * T::lit(0.5))
}

/// `|k, ξ|^N`, zero at the origin.
#[inline]
pub(crate) fn homogeneous<T: Real>(k: i64, xi: T, n: T) -> T {
    let kk = T::from_int(k);
    let r2 = kk * kk + xi * xi;
    if r2 == T::zero() {
        T::zero()
    } else {
        r2.powf(n * T::lit(0.5))
    }
}
