//! Exact interaction symbols for colliding electromagnetic plane waves in the
//! Einstein–Maxwell system, together with a weak-field wave generator and
//! Lorentzian causal-geometry utilities.

pub mod appendix;
pub mod causal;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod symbol;
pub mod tensor;
pub mod variety;
pub mod weakfield;

pub use scalar::GaussRational;
pub use symbol::{InteractionConfig, InteractionSymbol};
pub use tensor::{Covector4, Matrix4, MatrixKind};
