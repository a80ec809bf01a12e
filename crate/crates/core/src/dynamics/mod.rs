//! Time evolution engines.
//!
//! - [`unitary`]: exact propagation under a time-independent Hamiltonian.
//! - [`kicked`]: free Kerr evolution interleaved with instantaneous kicks.
//! - [`dissipative`]: the exact damped-Kerr map between kicks.
//! - [`ode`]: adaptive Runge-Kutta integration of the amplitude and
//!   Lindblad equations, used to cross-check the engines above.

pub mod dissipative;
pub mod kicked;
pub mod ode;
pub mod result;
pub mod unitary;

pub use dissipative::{damped_kerr_step, evolve_kicked_dissipative, kicked_dissipative_states};
pub use kicked::{evolve_kicked, kick_operators, kicked_states, KickSchedule};
pub use ode::{lindblad_oracle, ode_oracle, ode_oracle_with, OracleSolution, Tolerances};
pub use result::SimulationResult;
pub use unitary::{evolve_continuous, evolve_unitary, Propagator};
