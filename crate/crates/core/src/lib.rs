//! Scattering resonances of hyperbolic cones R+ x Y with metric
//! dr² + sinh²r·h.
//!
//! The resolvent separates over the eigenvalues μ_j² of the cross-section
//! (Y, h). Each mode's radial resolvent is an explicit hypergeometric
//! kernel whose poles are λ_{j,k} = -i(1/2 + k + s_j), except for modes
//! with s_j in 1/2 + Z, where every candidate pole cancels.
//!
//! - [`specfun`]: complex Gamma and Gauss hypergeometric functions.
//! - [`crosssec`]: cross-section spectra and the genericity test.
//! - [`resonance`]: parameters, pole classification, enumeration, Weyl count.
//! - [`resolvent`]: the mode resolvent, ODE residuals and residue probes.
//! - [`verify`]: the self-verification batteries.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod crosssec;
pub mod error;
pub mod exact;
pub mod exec;
pub mod quadrature;
pub mod report;
pub mod resolvent;
pub mod resonance;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use specfun::C64;
