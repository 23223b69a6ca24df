//! The communication language: syntax, parsing, printing and normal forms.

mod ast;
mod normal;
mod parse;
mod print;

pub use ast::{desugar, free_channels, Channel, Packet, Process};
pub use normal::{canonical_prenex, normalize, tidy, Atom, Prenex};
pub use parse::{parse, ParseError};
pub use print::resugar;
