//! Exact core of the VQSS toolkit.
//!
//! Arithmetic over GF(p), Reed-Solomon and quantum polynomial codes, a
//! qupit stabilizer simulator, a classical share backend, the round-based
//! protocol engine and the protocols built on top of it. Everything here is
//! `no_std` with `alloc`; floating point and IO live in the `vqss` crate.
#![no_std]

extern crate alloc;

pub mod backend;
pub mod circuit;
pub mod css;
pub mod engine;
pub mod error;
pub mod field;
pub mod pauli;
pub mod protocols;
pub mod rng;
pub mod rs;
pub mod share;
pub mod stabilizer;
pub mod support;

pub use error::Error;
pub use field::{Fe, FieldMatrix, FieldParams, FieldPoly, Gf};
pub use support::SupportSet;
