//! Exact computation of the Kleinian subgroups of SL₂, their invariants, and the divisors of
//! invariant functions on the minimal resolutions of the quotient singularities C²/G.

pub mod arith;
pub mod error;
pub mod export;
pub mod expr;
pub mod groups;
pub mod invariants;
pub mod linalg;
pub mod mckay;
pub mod pipeline;
pub mod dynkin;
pub mod profile;
pub mod resolution;
pub mod poly;

pub use error::{Error, Result};
