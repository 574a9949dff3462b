//! Hermitian modules over quaternion-valued involutive algebras, their
//! unitary groups, and an explicit conjugator `g` with `g x g⁻¹ = x⁻¹`.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod numtheory;
pub mod oracle;
pub mod pipeline;
pub mod poly;
pub mod quaternion;
pub mod samples;
pub mod scalar;
pub mod sl2;
pub mod standard;
pub mod twist;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use quaternion::Quaternion;
pub use scalar::{Complex, Field, Rational, Scalar, FLOAT_TOLERANCE};
