//! Exact computations with integer-valued polynomials over closed subsets of
//! the p-adic integers and with the polynomial overrings of `Int(Z)` they
//! determine.

pub mod adelic;
pub mod arith;
pub mod config;
pub mod dsl;
pub mod error;
pub mod irreducible;
pub mod ivp;
pub mod json;
pub mod padic;
pub mod poly;
pub mod representation;
pub mod ring;
pub mod roots;
pub mod rule;
pub mod selftest;
pub mod simple;

pub use arith::{Congruence, Prime, Rat, Valuation};
pub use config::Config;
pub use error::{Error, Result};
pub use padic::{Ball, PAdicSet, SeqWithLimit};
pub use irreducible::IrreduciblePoly;
pub use poly::RatPoly;
pub use representation::Representation;
pub use ring::{RingSpec, TriState};
