//! Exact computations with Hopf-Galois structures on Galois extensions and
//! Galois algebras over `Q`.
//!
//! The crate compares the classical structure (`K[G]` acting through the
//! Galois group) with the canonical nonclassical one (`H_λ = L[λ(G)]^G`):
//! normal basis generators, associated orders of `G`-stable lattices, and
//! explicit transfer of freeness certificates between the two sides.

pub mod cli;
pub mod error;
pub mod exact;
pub mod galois;
pub mod groups;
pub mod hopf;
pub mod nbg;
pub mod orders;
pub mod transfer;

pub use error::{Error, Result};
