//! Text format for declaring a manifold and named polynomials.

mod parser;
mod printer;

pub use parser::{parse, ParseError, Position, Session};
pub use printer::{print, print_operator};
