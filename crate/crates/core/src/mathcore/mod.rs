//! Special functions, quadrature and derivative-free minimizers.
//!
//! Everything here is self-contained and pure; the physics modules build on
//! these primitives.

mod entropy;
mod gamma;
mod optimize;
mod quad;

pub use entropy::binary_entropy;
pub use gamma::gamma;
pub use optimize::{minimize_2d, minimize_scalar, Bracket};
pub use quad::{integrate, QuadratureSpec};
