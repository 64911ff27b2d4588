//! Scalar backends, complex helpers and compensated accumulation.

mod complex;
mod quad;
mod real;
mod sum;

pub use complex::{c64_to, cabs, cexp, cmul_i, csin, to_c64, Cx, C64};
pub use quad::Quad;
pub use real::Real;
pub use sum::{residual, Residual, Side};
