//! Abstract syntax, text grammar, parser and printer for pGCL.

mod ast;
mod lexer;
mod parser;
mod printer;

pub use ast::{AExpr, ArithOp, BExpr, CmpOp, Program};
pub use lexer::{Token, TokenKind};
pub use parser::{parse, parse_aexpr, parse_bexpr, ParseError};
pub use printer::{print, print_aexpr, print_bexpr, print_compact};
