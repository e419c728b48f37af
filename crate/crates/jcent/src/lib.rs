//! Entanglement criteria, certificates, and Jaynes-Cummings dynamics for
//! qubit-qudit states supported on the excitation-number pattern.
//!
//! The core is generic over the real scalar type (any [`scalar::Scalar`],
//! in practice `f32` or `f64`); the type aliases at the crate root fix
//! `f64` for everyday use.
//!
//! Organization:
//! - [`state`]: the (a, b, c) family, validity, gauge, dense conversion
//! - [`criteria`]: negativity, CCNR, the covariance-matrix corollary
//! - [`normal_form`]: local filtering to the coherence carrier tau
//! - [`range`]: range-criterion certificates for bound entangled edges
//! - [`dynamics`]: closed-form JC evolution, Lindblad steps, certificates
//! - [`hull`]: explicit separable decompositions where PPT is sufficient
//! - [`sample`], [`io`], [`cli`]: studies, JSON wire formats, the binary

pub mod cli;
pub mod criteria;
pub mod dense;
pub mod dynamics;
pub mod error;
pub mod hull;
pub mod io;
pub mod normal_form;
pub mod numerics;
pub mod range;
pub mod sample;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};

/// The state family at working precision.
pub type State = state::SymmetricState<f64>;
/// Dense complex matrix at working precision.
pub type Matrix = dense::DenseMatrix<f64>;
/// Criteria summary at working precision.
pub type Report = criteria::CriteriaReport<f64>;
/// Coherence carrier at working precision.
pub type Tau = normal_form::TauState<f64>;
/// Range-criterion certificate at working precision.
pub type RangeCertificate = range::Certificate<f64>;
/// Product vector at working precision.
pub type Product = range::ProductVector<f64>;
/// JC evolution parameters at working precision.
pub type Evolution = dynamics::EvolutionSpec<f64>;
