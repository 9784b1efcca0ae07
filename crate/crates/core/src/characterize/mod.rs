//! Closed-form descriptions of the elements of `TX` as collections of
//! subsets, and oracles comparing them with the computed monads.

mod collection;
mod oracle;
mod view;

pub use collection::*;
pub use oracle::*;
pub use view::*;
