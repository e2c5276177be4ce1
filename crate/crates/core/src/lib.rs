//! Numerical laboratory for the diabatic error of finite-time adiabatic
//! evolution.
//!
//! A [`HamiltonianSchedule`] describes `H(s)` on the scaled time `s ∈ [0, 1]`.
//! The [`propagator`] integrates `i dψ/ds = T H(s) ψ` and measures the true
//! error, the [`asymptotics`] module evaluates the leading switching term, the
//! typical (window-averaged) error and the available bounds, and
//! [`experiments`] drives timescale sweeps that compare all of them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod experiments;
pub mod jet;
pub mod linalg;
pub mod propagator;
pub mod quadrature;
pub mod schedule;

pub use asymptotics::{AsymptoticData, AsymptoticOptions, EndpointAmplitudes};
pub use error::{Error, Result};
pub use propagator::{EvolutionResult, IntegratorConfig};
pub use schedule::{Endpoint, Envelope, HamiltonianSchedule, HermitianTerm, SpectralFrame};
