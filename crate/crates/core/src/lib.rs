//! Gröbner bases, free resolutions and regularity of powers of homogeneous
//! ideals over finite fields.

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod geometry;
pub mod groebner;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod resolution;
pub mod unipoly;

pub use error::{Error, Result};
pub use field::{Fe, Field, FieldSpec};
pub use groebner::{GbConfig, GroebnerBasis, Ideal};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{Polynomial, Ring};
