//! Numerical toolkit for channels parametrized by densities on a symbol algebra.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: dense complex matrices, Hermitian eigensolver, Schatten norms,
//!   entropies and seeded sampling.
//! - [`groups`]: finite groups from Cayley tables, regular representations and
//!   irreducible-representation dimensions.
//! - [`channels`]: Kraus channels, conditional expectations, the VN-channel
//!   constructor and every concrete family.
//! - [`infomeasures`]: entropic functionals, input optimizers, Schatten-ratio
//!   probes and rate triples.
//! - [`bounds`]: closed-form capacity bounds, reports and sweep tables.

pub mod bounds;
pub mod channels;
pub mod error;
pub mod groups;
pub mod infomeasures;
pub mod matcore;

pub use error::{Error, Result};
