//! Mobi algebras, mobi spaces, rings with one half and their modules.
//!
//! Structures are built from closures over [`carrier::Element`] values and
//! verified by law checkers that either enumerate a finite carrier or draw
//! seeded samples. Nothing is assumed from construction: every axiom is a
//! report.

use std::sync::Arc;

pub mod algebra;
pub mod carrier;
pub mod catalog;
pub mod check;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod functor;
pub mod number;
pub mod ring;
pub mod search;
pub mod space;

use carrier::Element;
use error::EvalError;

pub type UnaryOp = Arc<dyn Fn(&Element) -> Result<Element, EvalError> + Send + Sync>;
pub type BinaryOp = Arc<dyn Fn(&Element, &Element) -> Result<Element, EvalError> + Send + Sync>;
pub type TernaryOp =
    Arc<dyn Fn(&Element, &Element, &Element) -> Result<Element, EvalError> + Send + Sync>;

pub use algebra::{MobiAlgebra, TwoElement};
pub use carrier::Carrier;
pub use check::{CheckReport, Strategy, Verdict, Witness};
pub use ring::{RModule, RingWithHalf};
pub use space::{MobiSpace, PointedMobiSpace};
