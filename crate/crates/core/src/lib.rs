//! Exact dynamics of relations on `[0, 1]` made of finitely many lines
//! `y = ω x`, and of the shift maps on their sequence spaces.
//!
//! Every number is an exact [`Rational`]; no floating point is used in any
//! decision procedure.

pub mod error;
pub mod exponent;
pub mod export;
pub mod interval;
pub mod rational;
pub mod relation;
pub mod shadowing;
pub mod shift;
pub mod slopes;
pub mod tracer;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion};
pub use rational::{q, Rational};
pub use slopes::SlopeSet;
