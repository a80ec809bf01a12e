//! Finite-dimensional quantum-optical states generated by a driven Kerr
//! oscillator in truncated Fock space.
//!
//! The crate is layered bottom-up:
//!
//! - [`operators`]: dense Fock-space linear algebra (ladder operators,
//!   matrix exponentials, states, density matrices, fidelity).
//! - [`model`]: Kerr and drive Hamiltonians, drive envelopes, pulse area,
//!   Fourier coefficients and the off-resonance coefficient `B`.
//! - [`analytic`]: perturbative closed forms and the finite-dimensional
//!   coherent / squeezed target states.
//! - [`dynamics`]: continuous, delta-kicked and dissipative evolution, plus
//!   an adaptive ODE integrator used as an independent oracle.
//! - [`scenario`]: the declarative runner behind the `fdstates` binary.
//!
//! ```
//! use fdstates::analytic::fd_coherent_state;
//! use fdstates::dynamics::Propagator;
//! use fdstates::model::{DriveEnvelope, DriveKind, KerrModel};
//! use fdstates::operators::{fidelity, StateVector};
//! use fdstates::Complex64;
//!
//! let eps = std::f64::consts::PI / 50.0;
//! let model = KerrModel::with_default_dim(3, 1.0, eps, DriveKind::Linear, DriveEnvelope::Constant)?;
//! let psi = Propagator::new(&model)?.evolve(&StateVector::vacuum(model.dim)?, 10.0)?;
//! let target = fd_coherent_state(Complex64::new(0.0, -eps * 10.0), 2)?;
//! assert!(fidelity(&target, &psi)? > 0.99);
//! # Ok::<(), fdstates::Error>(())
//! ```

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod operators;
pub mod scenario;

pub use error::{Error, Result};
pub use num_complex::Complex64;
