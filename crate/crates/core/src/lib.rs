//! Exact increasing-chord geometry: predicates, searches, and executable gadgets for the
//! 3-SAT reductions to increasing-chord spanning trees and paths.

pub mod chord;
pub mod cnf;
pub mod drawing;
pub mod error;
pub mod gadget;
pub mod geom;
pub mod io;
mod kernel;
pub mod reduction;
pub mod roundtrip;
pub mod search;
pub mod svg;

pub use error::{Error, Result};
