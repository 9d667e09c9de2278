//! Simplicial Poincare duality complexes, signature invariants over group
//! coefficients, and a finite model of geometrically controlled operator
//! algebras.
//!
//! The crate is generic over the scalar type through [`scalar::Scalar`];
//! exact rationals certify the algebraic identities, the cyclotomic field
//! Q(zeta_12) covers small-group characters exactly, and complex floats
//! handle everything else.

pub mod chain;
pub mod coeff;
pub mod controlled;
pub mod covers;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod io;
pub mod poincare;
pub mod products;
pub mod scalar;
pub mod signature;
pub mod simplicial;
pub mod sparse;

pub use error::{Error, Result};

/// Exact rational scalars.
pub type Rational = num_rational::BigRational;
/// Exact cyclotomic scalars, Q(zeta_12).
pub type Cyclotomic = scalar::Cyclotomic;
/// Double-precision complex scalars.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex scalars.
pub type C32 = num_complex::Complex<f32>;

/// The three scalar modes exposed by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Exact,
    Cyclotomic,
    Float,
}

impl std::fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarMode::Exact => write!(f, "exact"),
            ScalarMode::Cyclotomic => write!(f, "cyclotomic"),
            ScalarMode::Float => write!(f, "float"),
        }
    }
}

impl std::str::FromStr for ScalarMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ScalarMode::Exact),
            "cyclotomic" => Ok(ScalarMode::Cyclotomic),
            "float" => Ok(ScalarMode::Float),
            other => Err(Error::UnsupportedMode(other.to_string())),
        }
    }
}
