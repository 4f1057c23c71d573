//! Classical simulation of quantum algorithms for shifted subsets of the
//! boolean cube `{0,1}^n`.
//!
//! Given copies of `|S + x>` for an unknown shift `x`, Fourier sampling
//! yields outcomes distributed as `pi_S`, independent of `x`. This crate
//! computes those distributions exactly, simulates the sampling primitive,
//! runs the classical post-processing that recovers `S` for several
//! families (spheres, balls, juntas, parity sets), realises the oracle
//! triple that separates quantum from classical query complexity, and
//! evaluates the copy-count bounds that govern how many samples suffice.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::manual_is_multiple_of)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bits;
pub mod bounds;
pub mod distributions;
pub mod error;
pub mod exact;
pub mod krawtchouk;
pub mod oracle;
pub mod recovery;
pub mod sampler;
pub mod subset;
pub mod walsh;

pub use error::{Error, Result};
