//! Exact-arithmetic engine for q-expansions, characteristic classes,
//! super-geometric symbolic identities and regularized determinants.
//!
//! The crate is organized around a small number of carriers:
//! - [`series::TruncSeries`]: truncated formal series over an exact ring,
//!   used for every q- and z-expansion,
//! - [`modular`]: Bernoulli numbers, Eisenstein series, the Dedekind eta
//!   function and a token ring of modular symbols,
//! - [`charclass`]: multiplicative sequences, Pontryagin polynomials and
//!   genus evaluation,
//! - [`superalg`]: Grassmann algebra, the 1|1 and 2|1 super group laws,
//!   infinitesimal generators and polynomial differential forms,
//! - [`zetadet`]: spectral models of the kinetic operators with mode-sum
//!   oracles and closed-form determinants,
//! - [`anomaly`]: the SL2(Z) cocycle, section equivariance and the
//!   string-structure trivialization.

pub mod anomaly;
pub mod charclass;
pub mod modular;
pub mod ring;
pub mod sampling;
pub mod series;
pub mod superalg;
pub mod zetadet;

pub use ring::{Rat, Ring, RingWithRationals};
pub use series::TruncSeries;
