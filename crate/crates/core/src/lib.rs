//! Exact homological algebra for obstruction classes of graph C*-algebras.

pub mod abelian;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod par;
pub mod snf;
pub mod laurent;
pub mod poset;
pub mod random;

pub use error::{Error, Result};
pub use matrix::{Int, IntMatrix};
