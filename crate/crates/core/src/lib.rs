#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angles;
pub mod bounds;
pub mod disposition;
pub mod enclosures;
pub mod ensemble;
pub mod error;
pub mod instance;
pub mod krein;
pub mod linalg;
pub mod oscillator;
pub mod quadrature;
pub mod random;
pub mod report;
pub mod riccati;
pub mod schur;
pub mod sylvester;
pub mod tolerance;
pub mod witnesses;

pub use error::{Error, Result};
pub use instance::{BlockInstance, Mode};
pub use tolerance::Tolerances;
