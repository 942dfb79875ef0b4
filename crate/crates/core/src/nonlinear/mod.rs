//! Pseudo-spectral integration of the perturbation system in the sheared frame.
//!
//! The unknowns are the primitive perturbations `v, b` with `∇_t·v = ∇_t·b = 0`:
//!
//! ```text
//! ∂_t v = νΔ_t v + α∂_x b - v₂e₁ + 2∂_xΔ_t^{-1}∇_t v₂ + P_t(b·∇_t b - v·∇_t v)
//! ∂_t b = κΔ_t b + α∂_x v + b₂e₁ + b·∇_t v - v·∇_t b
//! ```
//!
//! `P_t` is the Leray projection of the moving frame. Because `∇_t` depends on time the
//! right-hand side is not itself solenoidal: `∇_t·∂_t v = ∂_x v₂`, which is exactly what keeps
//! `∇_t·v` at zero. The adapted unknowns `p` and the weighted energy are diagnostics.

mod checkpoint;
mod diagnostics;
mod initial;
mod rhs;
mod sim;
mod state;
mod step;

pub use checkpoint::{read_checkpoint, write_checkpoint, CheckpointMeta, CHECKPOINT_MAGIC};
pub use diagnostics::{compute_energy, compute_pvars, EnergyParts, PVars};
pub use initial::{random_initial_state, InitialData};
pub use rhs::{nonlinear_flux, Rhs, Terms};
pub use sim::{DiagnosticsRecord, SimOptions, SimSummary, Simulation};
pub use state::State;
pub use step::{cfl_limit, dissipation_exponent, Stepper};
