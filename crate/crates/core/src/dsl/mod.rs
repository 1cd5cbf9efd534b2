//! The definition language: a small text format for algebras and spaces.
//!
//! ```text
//! algebra line {
//!   carrier: Q
//!   zero: 0  half: 1/2  one: 1
//!   p(a, b, c) = a - b*a + b*c
//! }
//! space projectile over line {
//!   carrier: Q^2
//!   param k: Q = 1
//!   q((x, s), a, (y, t)) = (x + a*(y - x) + a*(1 - a)*(t - s)^2*k, s + a*(t - s))
//! }
//! ```
//!
//! Parsing resolves identifiers and checks shapes, so a file that parses
//! only fails to elaborate for reasons that need the catalog (an unknown
//! base algebra) or the values (a constant outside its carrier).

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub mod ast;
mod elaborate;
mod lexer;
mod parser;
mod print;

pub use ast::{DefAst, Span};
pub use elaborate::{elaborate, load, parse_value, Definition};
pub use parser::parse_definitions;
pub use print::print_definitions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    UnboundIdentifier,
    ShapeMismatch,
    /// `i` outside a Gaussian carrier or `exp` outside a float one.
    CarrierFeature,
    UnknownAlgebra,
    MissingField,
    Invalid,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Lexical => "lexical error",
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::UnboundIdentifier => "unbound identifier",
            DiagnosticKind::ShapeMismatch => "shape mismatch",
            DiagnosticKind::CarrierFeature => "unsupported in carrier",
            DiagnosticKind::UnknownAlgebra => "unknown algebra",
            DiagnosticKind::MissingField => "missing field",
            DiagnosticKind::Invalid => "invalid definition",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    pub line: u32,
    pub column: u32,
}

impl Diagnostic {
    pub(crate) fn new(kind: DiagnosticKind, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            message: message.into(),
            line: span.line,
            column: span.column,
        }
    }
}
