//! Closure conversion workbench: three call-by-value calculi with tuples,
//! the translations between them, and the tupled abstract machines that
//! implement them.

pub mod analysis;
pub mod bisim;
pub mod calculi;
pub mod error;
pub mod gen;
pub mod machine;
pub mod surface;
pub mod syntax;
pub mod transforms;

pub use error::{Error, Result};
