pub mod ast;
pub mod lexer;
pub mod parser;
pub mod print;

pub use ast::*;
pub use lexer::ParseError;
pub use parser::{declared_mode, parse_comp, parse_comp_type, parse_context, parse_program, parse_val_type, parse_value, Grades};
pub use print::{show_comp, show_value};
