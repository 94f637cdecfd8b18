//! Sum-freedom of the inverse function and of `x -> x^(q-1)` over finite fields.

pub mod field;
pub mod fpoly;
pub mod linalg;
pub mod moore;
pub mod oracle;
pub mod theta;
pub mod witness;
pub mod text;

pub use field::{Elem, FieldCtx, FieldError};
