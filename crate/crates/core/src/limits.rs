//! Size caps for the exhaustive routines.
//!
//! Every enumerator checks its input against one of these before doing any
//! work; exceeding a cap is an error, never a silent truncation.

use crate::error::{Error, Result};

/// Environment variable that raises or lowers the size caps.
pub const MAX_N_ENV: &str = "PIECEWORK_MAX_N";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// `r*n` for generating the minimal elements of the block family.
    pub partition_ground: usize,
    /// Length of permutations in descent-class and tuple generation.
    pub perm_len: usize,
    /// Number of permutation tuples generated at once.
    pub tuple_count: u64,
    /// Pieces in a single exhaustive heap enumeration.
    pub heap_pieces: usize,
    /// `r*n` for pyramid counting over blocks.
    pub pyramid_ground: usize,
    /// `n!^r` words for pyramid/heap counting over paths.
    pub path_work: u64,
    /// Total degree in the commutative-image identity checks.
    pub degree: usize,
    /// `r*n` for building the block poset.
    pub block_poset_ground: usize,
    /// `n` for building the r-partition poset.
    pub rpartition_n: usize,
    /// `r` for building the r-partition poset.
    pub rpartition_r: usize,
    /// Leaves in the complete non-ambiguous tree search.
    pub nat_leaves: usize,
    /// Leaves in the complete non-ambiguous forest search.
    pub naf_leaves: usize,
    /// `n` for the brute-force pair count.
    pub omega_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            partition_ground: 12,
            perm_len: 9,
            tuple_count: 1_000_000,
            heap_pieces: 9,
            pyramid_ground: 10,
            path_work: 14_400,
            degree: 5,
            block_poset_ground: 8,
            rpartition_n: 4,
            rpartition_r: 3,
            nat_leaves: 4,
            naf_leaves: 4,
            omega_n: 6,
        }
    }
}

impl Limits {
    /// Caps with the `n`-indexed fields overridden by [`MAX_N_ENV`] when it is
    /// set to an integer.
    pub fn from_env() -> Self {
        match std::env::var(MAX_N_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            Some(n) => Limits::default().with_max_n(n),
            None => Limits::default(),
        }
    }

    /// Sets every cap measured in "number of structures per size" (leaves,
    /// permutation length, r-partition size, pair-count size) to `n`.
    pub fn with_max_n(mut self, n: usize) -> Self {
        self.perm_len = n;
        self.rpartition_n = n;
        self.nat_leaves = n;
        self.naf_leaves = n;
        self.omega_n = n;
        self
    }

    /// No caps at all. Intended for tests that know what they are asking for.
    pub fn unbounded() -> Self {
        Limits {
            partition_ground: usize::MAX,
            perm_len: usize::MAX,
            tuple_count: u64::MAX,
            heap_pieces: usize::MAX,
            pyramid_ground: usize::MAX,
            path_work: u64::MAX,
            degree: usize::MAX,
            block_poset_ground: usize::MAX,
            rpartition_n: usize::MAX,
            rpartition_r: usize::MAX,
            nat_leaves: usize::MAX,
            naf_leaves: usize::MAX,
            omega_n: usize::MAX,
        }
    }
}

pub(crate) fn check(what: &'static str, value: u64, cap: u64) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}

pub(crate) fn check_usize(what: &'static str, value: usize, cap: usize) -> Result<()> {
    check(what, value as u64, cap as u64)
}
