use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{GridSpec, PhysicalField, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Cached 2D FFT plans for one grid. Coefficients are normalised so that `coeff(0,0)` is the
/// box average.
#[derive(Clone)]
pub struct Transform<T: Real> {
    grid: GridSpec<T>,
    fx: Arc<dyn Fft<T>>,
    fy: Arc<dyn Fft<T>>,
    ix: Arc<dyn Fft<T>>,
    iy: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for Transform<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform").field("grid", &self.grid).finish()
    }
}

impl<T: Real> Transform<T> {
    pub fn new(grid: GridSpec<T>) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            fx: planner.plan_fft_forward(grid.nx),
            fy: planner.plan_fft_forward(grid.ny),
            ix: planner.plan_fft_inverse(grid.nx),
            iy: planner.plan_fft_inverse(grid.ny),
        }
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn forward(&self, physical: &PhysicalField<T>) -> Result<SpectralField<T>> {
        self.check(physical.values.len())?;
        let mut buf: Vec<Complex<T>> = physical
            .values
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        self.run(&mut buf, &self.fx, &self.fy);
        let scale = T::one() / T::from_usize(self.grid.len()).unwrap();
        buf.iter_mut().for_each(|c| *c *= scale);
        Ok(SpectralField::from_coeffs(self.grid, buf))
    }

    /// Inverse transform; the imaginary residue of non-Hermitian input is discarded.
    pub fn inverse(&self, field: &SpectralField<T>) -> PhysicalField<T> {
        let mut buf = field.coeffs().to_vec();
        self.run(&mut buf, &self.ix, &self.iy);
        PhysicalField {
            grid: self.grid,
            values: buf.into_iter().map(|c| c.re).collect(),
        }
    }

    fn check(&self, got: usize) -> Result<()> {
        if got != self.grid.len() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.len(),
                got,
            });
        }
        Ok(())
    }

    fn run(&self, buf: &mut [Complex<T>], along_x: &Arc<dyn Fft<T>>, along_y: &Arc<dyn Fft<T>>) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        // rows are contiguous in y
        along_y.process(buf);
        let mut column = vec![Complex::new(T::zero(), T::zero()); nx];
        for j in 0..ny {
            for i in 0..nx {
                column[i] = buf[i * ny + j];
            }
            along_x.process(&mut column);
            for i in 0..nx {
                buf[i * ny + j] = column[i];
            }
        }
    }
}

pub fn forward_transform<T: Real>(
    physical: &PhysicalField<T>,
    grid: GridSpec<T>,
) -> Result<SpectralField<T>> {
    Transform::new(grid).forward(physical)
}

pub fn inverse_transform<T: Real>(field: &SpectralField<T>) -> PhysicalField<T> {
    Transform::new(*field.grid()).inverse(field)
}
