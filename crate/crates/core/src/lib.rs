//! Collective subradiance of emitter arrays coupled to a one-dimensional
//! waveguide, and its use for sensing changes of the lattice spacing.
//!
//! Units throughout: lengths in the transition wavelength λ, rates and
//! detunings `Δ = ω − ω₀` in the guided decay rate Γ_1D.

pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod lattice;
pub mod metrology;
mod numerics;
pub mod scattering;
pub mod spectral;

pub use numerics::linspace;
pub use error::{Error, Result};
