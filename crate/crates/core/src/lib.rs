//! Exact cut-and-paste (SK/SKK) invariants, the 2-dimensional oriented
//! cobordism category as generator words, and the group of invertible
//! 2-dimensional TQFTs over an exact scalar group.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is computed with
//! arbitrary precision integers and rationals; there is no floating point.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cobordism;
pub mod exact_linalg;
pub mod fixtures;
pub mod intersection_form;
pub mod report;
pub mod simplicial;
pub mod skk;
pub mod suite;
pub mod surfaces;
pub mod tqft;
pub mod virtual_bordism;

mod rng;

pub use rng::{seeded, shard_seed, SeededRng};
