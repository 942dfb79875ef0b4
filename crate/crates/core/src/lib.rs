//! Spectral toolkit for the two-dimensional MHD equations linearised around Couette flow
//! `V = y e₁` with a constant magnetic field `α e₁`, written in the sheared frame.
//!
//! * [`spectral`]: periodic Fourier fields and the time-dependent operators `∂_y^t`, `Δ_t`, `Λ_t`.
//! * [`linear`]: the per-mode linear system for the adapted unknowns `p = (p₁, p₂)`.
//! * [`weights`]: closed-form Fourier weights `M_L, M₁, M_κ, M_ν, M_{ν³}`, the cutoff `χ`
//!   and the energy weight `A`, plus empirical checks of their bounds.
//! * [`nonlinear`]: pseudo-spectral integration of the perturbation system with energy
//!   diagnostics and checkpoints.
//!
//! All kernels are generic over [`Real`] (`f32`, `f64`); the aliases below fix `f64`.

// `!(x > 0)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linear;
pub mod nonlinear;
#[cfg(any(test, feature = "oracles"))]
pub mod oracle;
pub mod scalar;
pub mod spectral;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Real;

pub type GridSpec = spectral::GridSpec<f64>;
pub type SpectralField = spectral::SpectralField<f64>;
pub type PhysicalField = spectral::PhysicalField<f64>;
pub type PhysParams = linear::PhysParams<f64>;
pub type ModeIndex = linear::ModeIndex<f64>;
pub type ModeState = linear::ModeState<f64>;
pub type ModeRunResult = linear::ModeRunResult<f64>;
pub type WeightParams = weights::WeightParams<f64>;
pub type WeightValue = weights::WeightValue<f64>;
pub type State = nonlinear::State<f64>;
pub type PVars = nonlinear::PVars<f64>;
pub type DiagnosticsRecord = nonlinear::DiagnosticsRecord<f64>;
pub type Simulation = nonlinear::Simulation<f64>;
