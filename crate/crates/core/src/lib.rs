//! Exact computation of slab functions and open Gromov-Witten generating
//! series for toric Calabi-Yau manifolds.
//!
//! Two independent routes produce the same blocks `A_i(q)`:
//!
//! - [`slab::solve_normalized`] solves the slab normalization conditions
//!   order by order;
//! - [`mirror::ogw_series`] evaluates `exp g_i(q̌(q))` from the hypergeometric
//!   series and the inverse mirror map.
//!
//! [`verify`] turns their agreement and the supporting combinatorial
//! identities into executable checks.

#![allow(clippy::needless_range_loop)]

pub mod geom;
pub mod linalg;
pub mod mirror;
pub mod series;
pub mod slab;
pub mod verify;

use thiserror::Error;

pub use geom::{build_fan, CurveClass, FanData, GeomError, Grading, PolytopeInput};
pub use series::{QSeries, Rational, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("grading is not positive on balanced classes for ray {ray}")]
    GradingNotPositive { ray: usize },
    #[error("mirror map round trip failed for variable {variable}")]
    RoundTripFailure { variable: usize },
    #[error("z-free term q^{exponent:?} has non-positive degree")]
    InternalLaurentLeak { exponent: Vec<i64> },
    #[error("block series for ray {ray}: {reason}")]
    BadBlock { ray: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
