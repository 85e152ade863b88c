//! MiniJ front end: lexing, parsing, pretty-printing and body edits.
//!
//! ```text
//! program    := class_decl*
//! class_decl := "class" IDENT ("extends" IDENT)? "{" method_decl* "}"
//! method_decl:= "def" IDENT "(" ")" "{" stmt* "}"
//! stmt       := "var" IDENT ":" IDENT ";" | "new" IDENT ";" | (IDENT ".")? IDENT "(" ")" ";"
//! ```

mod edit;
mod lexer;
mod model;
mod parser;
mod print;

pub use edit::apply_edit;
pub use lexer::Pos;
pub use model::{
    CallSite, ClassDecl, Delta, MethodDecl, MethodId, MethodIdParseError, ProgramModel, Receiver,
    Stmt,
};
pub use parser::{parse_patch, parse_program};
pub use print::{print_method_decl, print_program};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("duplicate method `{0}`")]
    DuplicateMethod(MethodId),
    #[error("duplicate local `{local}` in `{method}`")]
    DuplicateLocal { method: MethodId, local: String },
    #[error("class `{class}` extends undeclared superclass `{superclass}`")]
    UndeclaredSuperclass { class: String, superclass: String },
    #[error("undeclared type `{ty}` in `{method}`")]
    UndeclaredType { method: MethodId, ty: String },
    #[error("undeclared local `{local}` used as receiver in `{method}`")]
    UndeclaredLocal { method: MethodId, local: String },
    #[error("inheritance cycle through {}", .0.join(" -> "))]
    InheritanceCycle(Vec<String>),
    #[error("unknown method `{0}`")]
    UnknownMethod(MethodId),
    #[error("malformed patch: {0}")]
    MalformedPatch(String),
}

impl FrontendError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        FrontendError::Syntax {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}
