//! Exact-arithmetic toolkit for linear forms in 2-adic zeta values.
//!
//! The crate builds rational-function kernels, decomposes them into
//! partial fractions, integrates them over Z_2 in the Volkenborn sense
//! with certified 2-adic precision, evaluates 2-adic Hurwitz zeta
//! values, and verifies the integrality, symmetry and valuation
//! statements that an irrationality certificate rests on. All scalar
//! arithmetic is exact (big rationals); 2-adic results carry explicit
//! absolute-precision certificates.

pub mod error;
pub mod numcore;
pub mod padic2;

pub use error::{Error, Result};
