//! Exact-arithmetic toolkit for sum-product phenomena in prime fields:
//! set-arithmetic kernels over F_p, exact solution counting, witness search
//! for the underlying expansion lemmas, an executable inequality-chain trace
//! on concrete sets, and a reproducible experiment harness.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod counting;
pub mod error;
pub mod field_sets;
pub mod harness;
pub mod lemma_engine;
pub mod proof_trace;
pub mod rats;

pub mod cli;

pub use error::{Error, Result};
pub use field_sets::{FpSet, PrimeField};
