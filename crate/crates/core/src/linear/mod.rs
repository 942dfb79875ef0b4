//! Per-mode linear dynamics in the adapted unknowns `p = (p₁, p₂)`.
//!
//! For `k ≠ 0` and `s = t - ξ/k` each Fourier mode evolves by
//!
//! ```text
//! p₁' = -s/(1+s²) p₁ - αk p₂ - νk²(1+s²) p₁
//! p₂' =  s/(1+s²) p₂ + αk p₁ - κk²(1+s²) p₂
//! ```
//!
//! The dissipative rates grow like `s²`, so the system is integrated with an exponential
//! (Magnus) propagator whose leading term uses the closed antiderivatives of the rates.

mod magnus;
mod mode;
mod params;
mod solve;
mod sweep;

pub use magnus::{exp2x2, propagator, Mat2};
pub use mode::{
    mode_rhs, p1_sign_coefficient, strong_viscosity_reference, strong_viscosity_reference_with, LinearModel,
    ModeIndex, ModeState, ResistiveReading,
};
pub use params::PhysParams;
pub use solve::{solve_mode, solve_mode_weighted, solve_mode_with, ModeRunResult, SolveOptions, TraceSample};
pub use sweep::{sweep_growth, SweepEntry, TEndRule};
