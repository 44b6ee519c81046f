//! Exact arithmetic and number theory for the cubic equation
//! `a (x^3 + y^3 + z^3) = (x + y + z)^3`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod elliptic;
pub mod families;
pub mod model;
pub mod search;
pub mod solvability;
mod roots;

pub use arith::{Integer, Rational};
pub use model::{canonicalize, is_primitive, is_solution, CanonicalTriple, Coefficient, Triple};
