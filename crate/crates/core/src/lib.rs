//! Exact counting of lattice paths on the weighted graphs `E_c`, the
//! polynomial families that describe their growth, and checkers for the
//! identities relating them.

pub mod asymptotics;
pub mod combinat;
pub mod error;
pub mod exact;
pub mod gamma_delta;
pub mod identities;
pub mod operators;
pub mod paths;
pub mod special;

pub use error::{Error, Result};
pub use exact::{Integer, MultiPoly, MultiPolyC, Rational, UniPoly};
pub use paths::{path_count, ratio_sequence, MultiIndex, ParamVec};
