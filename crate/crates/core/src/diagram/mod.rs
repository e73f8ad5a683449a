//! A term language for string diagrams, evaluated into any instance.

pub mod eval;
pub mod term;
pub mod workspace;

pub use eval::{eval_term, eval_with, shape_check, InstanceVisitor};
pub use term::{parse_term, ObjRef, Term};
pub use workspace::{InstanceKind, IntoMorph, Morph, Workspace};
