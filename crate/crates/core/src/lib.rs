//! Elliptic hypergeometric summation and transformation identities,
//! evaluated numerically in double or quad-double precision.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod elliptic;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod num;
pub mod operators;
pub mod series;

pub use elliptic::{make_context, BracketCase, BracketContext, ContextSpec};
pub use error::{Error, Result};
pub use num::{Quad, Real, C64};
pub use identities::{evaluate, sample_params, EvalOptions, IdentityId, ParamSample, Sizes};
