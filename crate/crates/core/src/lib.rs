//! Exact noncommutative differential geometry over finite-dimensional
//! algebras: bimodule connections, torsion and bilinear curvature.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod bimodule;
pub mod calculus;
pub mod connection;
pub mod connes_lott;
pub mod curvature;
pub mod enveloping;
pub mod error;
pub mod exterior;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod projective;
pub mod report;
pub mod scalar;
pub mod scenarios;

pub use error::{Error, Result};
pub use scalar::Scalar;
