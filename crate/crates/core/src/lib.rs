//! Multiplier transformations on truncated p-valent power series.
//!
//! The crate models functions `f(z) = z^p + Σ a_k z^k` (`k ≥ n + p`) on the unit
//! disk, the diagonal multiplier operator `J_p^δ(λ, μ, l)` acting on them, and the
//! Janowski-type classes defined through that operator. Every inequality about
//! these classes (coefficient tests, distortion, neighborhoods, partial sums,
//! quasi-convolution closure, fractional-calculus bounds) is exposed as a
//! function, and the [`harness`] module drives seeded sampling campaigns that
//! try to falsify each of them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod closure;
pub mod coverage;
pub mod error;
pub mod fractional;
pub mod harness;
pub mod neighborhood;
pub mod operator;
pub mod partial_sums;
pub mod report;
pub mod series;

pub use classes::{ClassParams, MembershipVerdict};
pub use error::{Error, Result};
pub use operator::OperatorParams;
pub use report::{VerifyReport, Witness};
pub use series::{DiskGrid, NegSeries, Polynomial, SeriesAnp};

pub use num_complex::Complex64;
