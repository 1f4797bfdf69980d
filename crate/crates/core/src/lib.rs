//! The pair construction K(H) over finite ordered algebras.
//!
//! Every structure is a [`FiniteAlgebra`]: an order on `0..n` plus optional
//! operation tables and constants. The modules build on each other:
//!
//! - [`finord`]: posets, partial meets and joins, distributivity.
//! - [`varieties`]: axiom checkers for the algebra classes involved.
//! - [`kalman`]: the pair construction, the center, the two natural maps and
//!   the condition batteries for the pair algebras.
//! - [`congr`]: congruences, well-behaved congruences, filters and quotients.
//! - [`search`]: exhaustive enumeration, isomorphism and counterexample search.
//! - [`document`]: the JSON file format.

pub mod congr;
pub mod document;
pub mod error;
pub mod finord;
pub mod fixtures;
pub mod kalman;
pub mod search;
pub mod varieties;

pub use error::{Error, Result};
pub use finord::{Elem, FiniteAlgebra, MeetResult, Order, Table};
pub use varieties::{CheckReport, VarietyLabel, Violation};
