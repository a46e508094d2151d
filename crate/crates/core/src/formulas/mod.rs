//! Text DSL for rational-function expressions and transform definitions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | atom ('^' nat)?
//! atom     := rational | ident | '(' expr ')'
//! ident    := letter (letter|digit|'_')*
//! rational := nat ('/' nat)?
//! ```

mod ast;
mod parser;
mod transform_file;

pub use ast::{ast_to_rf, render, ExprAst};
pub use parser::parse_expr;
pub use transform_file::{parse_transform_file, TransformFile};

use std::collections::BTreeMap;

use crate::exactalg::{RationalFunction, Variable};

/// Errors from parsing and elaboration of the DSL.
#[derive(Debug, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    SyntaxError {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("transform `{name}`: {outputs} outputs for {inputs} inputs")]
    ArityMismatch {
        name: String,
        inputs: usize,
        outputs: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("transform file: missing or invalid `{0}` header")]
    BadHeader(String),
    #[error("transform file: duplicate name `{0}`")]
    DuplicateName(String),
}

/// Parse an expression and elaborate it over the variables it mentions.
/// Convenience wrapper used by tests, builtins, and the CLI.
pub fn parse_rf(src: &str) -> Result<RationalFunction, FormulaError> {
    let ast = parse_expr(src)?;
    let mut universe = BTreeMap::new();
    for name in ast.identifiers() {
        universe.insert(name.clone(), Variable::new(&name));
    }
    ast_to_rf(&ast, &universe)
}
