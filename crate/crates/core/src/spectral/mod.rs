//! Fourier representation of fields on the periodic box `[0, 2π) × [0, Ly)` and the
//! time-dependent differential operators of the sheared frame.
//!
//! In the frame following the Couette characteristics `x ↦ x + yt` a mode `(k, ξ)` sees the
//! effective vertical wavenumber `ξ - kt`, so `∂_y^t = ∂_y - t∂_x` acts by `i(ξ - kt)`.

pub(crate) mod field;
mod grid;
mod symbols;
mod transform;

pub use field::{PhysicalField, SpectralField};
pub use grid::GridSpec;
pub use symbols::{symbol, MovingFrameSymbols, Symbol};
pub use transform::{forward_transform, inverse_transform, Transform};
