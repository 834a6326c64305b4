//! Grassmann algebra over named odd generators, the 1|1 and 2|1 super
//! group laws and projections, the infinitesimal-generator actions with
//! the supersymmetric-section characterizations, covariant-derivative
//! expansion, and the concordance homotopy operator.

pub mod connection;
pub mod even;
pub mod forms;
pub mod generators;
pub mod grassmann;
pub mod group;
pub mod scalar;

pub use even::{EvenExpr, Sym};
pub use forms::FormPoly;
pub use generators::{SusySection11, SusySection21, SusyVerdict};
pub use grassmann::{Grassmann, OddGen};
pub use group::{SuperLattice, SuperPoint11, SuperPoint21};
pub use scalar::GaussRat;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuperError {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
