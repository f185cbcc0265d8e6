//! Heaps of pieces and two exponential structures.
//!
//! The crate implements the Cartier-Foata monoid of heaps over a symmetric
//! reflexive concurrence relation, and uses it to compute and cross-check the
//! integer sequences `r_n` attached to two families of posets:
//!
//! * partitions of `[rn]` whose block sizes are divisible by `r`, where `r_n`
//!   is the generalized Euler number `E_{rn-1}`;
//! * r-partitions of `[n]`, where for `r = 2` the value `r_n` counts complete
//!   non-ambiguous trees with `n` leaves.
//!
//! Each count is reachable in several independent ways: from a generating
//! function ([`series`]), by enumerating pyramids ([`enumerate`]), from the
//! Möbius function of the poset ([`posets`]), from lattice point sets
//! ([`nat`]), and through explicit bijections ([`bijections`]).

pub mod bijections;
pub mod enumerate;
pub mod error;
pub mod heap;
pub mod limits;
pub mod nat;
pub mod posets;
pub mod series;
pub mod structures;

pub use error::{Error, Result};
pub use heap::{Alphabet, Comparison, Heap, Occurrence, Piece};
pub use limits::Limits;
pub use nat::{Mode, PointSet};
pub use posets::FinitePoset;
pub use series::{SequenceSpec, Series};
pub use structures::{Partition, PermTuple, Permutation};
