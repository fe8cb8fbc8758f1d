//! Coherent-state in-phase superpositions and the oscillator matrix elements
//! they approximate.
//!
//! The modules build on each other roughly in this order:
//! [`specfun`] for stable Hermite and Laguerre evaluation, [`phasespace`]
//! for coherent-state geometry, [`oracle`] for brute-force references,
//! [`states`] and [`exact`] for the closed forms, [`asymptotics`] for the
//! saddle-point approximations and [`harness`] for tables, curves and the
//! verification suite.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod harness;
pub mod oracle;
pub mod phasespace;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use phasespace::PhasePoint;
