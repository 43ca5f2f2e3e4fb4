//! Concrete syntax: a parser for source terms and printers for all three calculi.

mod parse;
mod print;

pub use parse::parse;
pub use print::{print_int, print_source, print_target};
