//! Finite-model engine for codensity monads and D-ultrafilters.
//!
//! Objects are small finite structures (sets, pointed sets, posets,
//! semilattices, graphs, relational structures, vector spaces over prime
//! fields, M-sets, finite spaces). The codensity monad of the inclusion of a
//! small full subcategory is computed three ways: as an intersection of
//! derived subobjects of the double dual, as the limit over the coslice, and
//! inside the product monad built from the cogenerator.

pub mod characterize;
pub mod codensity;
pub mod dualization;
pub mod dultrafilter;
pub mod error;
pub mod io;
pub mod kernel;
pub mod plugins;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
