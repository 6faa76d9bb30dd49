//! Linear spaces on hypersurfaces: generating systems, explicit
//! constructions with smoothness certificates, Schubert counts and
//! brute-force enumeration over small finite fields.

pub mod bounds;
pub mod brute;
pub mod cli;
pub mod construct;
pub mod error;
pub mod generators;
pub mod polyring;
pub mod scalar;
pub mod schubert;
pub mod smoothness;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
