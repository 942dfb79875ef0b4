use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Resolution and extent of the periodic box. `Lx = 2π` is fixed; `Ly` truncates the
/// unbounded vertical direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub nx: usize,
    pub ny: usize,
    pub ly: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(nx: usize, ny: usize, ly: T) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be a power of two and at least 8"
                )));
            }
        }
        if !(ly > T::zero()) || !ly.is_finite() {
            return Err(Error::InvalidGrid(format!("Ly = {ly} must be positive")));
        }
        Ok(Self { nx, ny, ly })
    }

    /// Vertical box length `4π·max(1, ν^{-1/4})`.
    pub fn default_ly(nu: T) -> T {
        let stretch = if nu > T::zero() {
            nu.powf(T::lit(-0.25)).max(T::one())
        } else {
            T::one()
        };
        T::lit(4.0) * T::PI() * stretch
    }

    #[inline]
    pub fn lx(&self) -> T {
        T::lit(2.0) * T::PI()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Area of the box, the normalisation between coefficient sums and `L²` integrals.
    #[inline]
    pub fn area(&self) -> T {
        self.lx() * self.ly
    }

    /// Flat index of the grid point or coefficient `(i, j)`; `i` runs along `x`.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    /// Integer horizontal wavenumber `k ∈ [-nx/2, nx/2)` of FFT slot `i`.
    #[inline]
    pub fn k_of(&self, i: usize) -> i64 {
        signed_index(i, self.nx)
    }

    /// Integer vertical index `m`, with `ξ = 2πm / Ly`.
    #[inline]
    pub fn m_of(&self, j: usize) -> i64 {
        signed_index(j, self.ny)
    }

    #[inline]
    pub fn xi_of(&self, j: usize) -> T {
        self.dxi() * T::from_int(self.m_of(j))
    }

    /// Spacing of the vertical frequency lattice.
    #[inline]
    pub fn dxi(&self) -> T {
        T::lit(2.0) * T::PI() / self.ly
    }

    /// FFT slot of wavenumber `k` (any integer, reduced modulo `nx`).
    #[inline]
    pub fn slot_k(&self, k: i64) -> usize {
        k.rem_euclid(self.nx as i64) as usize
    }

    #[inline]
    pub fn slot_m(&self, m: i64) -> usize {
        m.rem_euclid(self.ny as i64) as usize
    }

    /// Slot of the mode `(-k, -ξ)`.
    #[inline]
    pub fn mirror(&self, i: usize, j: usize) -> (usize, usize) {
        ((self.nx - i) % self.nx, (self.ny - j) % self.ny)
    }

    /// Whether the 2/3 rule keeps the mode: `|k| ≤ nx/3` and `|m| ≤ ny/3`.
    #[inline]
    pub fn is_resolved(&self, i: usize, j: usize) -> bool {
        3 * self.k_of(i).unsigned_abs() as usize <= self.nx
            && 3 * self.m_of(j).unsigned_abs() as usize <= self.ny
    }

    /// Physical coordinates of grid point `(i, j)`.
    #[inline]
    pub fn point(&self, i: usize, j: usize) -> (T, T) {
        (
            self.lx() * T::from_usize(i).unwrap() / T::from_usize(self.nx).unwrap(),
            self.ly * T::from_usize(j).unwrap() / T::from_usize(self.ny).unwrap(),
        )
    }

    /// Smallest grid spacing.
    pub fn h_min(&self) -> T {
        let hx = self.lx() / T::from_usize(self.nx).unwrap();
        let hy = self.ly / T::from_usize(self.ny).unwrap();
        hx.min(hy)
    }
}

#[inline]
fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::<f64>::new(12, 16, 1.0).is_err());
        assert!(GridSpec::<f64>::new(4, 16, 1.0).is_err());
        assert!(GridSpec::<f64>::new(16, 16, -1.0).is_err());
        assert!(GridSpec::<f64>::new(16, 32, 3.0).is_ok());
    }

    #[test]
    fn wavenumber_layout() {
        let g = GridSpec::<f64>::new(8, 16, 4.0 * std::f64::consts::PI).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.k_of(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.slot_k(-1), 7);
        assert!((g.xi_of(3) - 1.5).abs() < 1e-15);
        assert_eq!(g.mirror(1, 0), (7, 0));
        assert_eq!(g.mirror(0, 0), (0, 0));
    }

    #[test]
    fn dealias_band() {
        let g = GridSpec::<f64>::new(8, 8, 1.0).unwrap();
        assert!(g.is_resolved(g.slot_k(2), 0));
        assert!(!g.is_resolved(g.slot_k(3), 0));
        assert!(!g.is_resolved(g.slot_k(-4), 0));
    }
}
