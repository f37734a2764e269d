//! Search caps and bounds shared by the enumeration and certification routines.

use serde::Serialize;

use crate::par::Strategy;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Options {
    /// Largest total dimension of enumerated modules.
    pub dim_bound: usize,
    /// Largest number of nonzero terms of enumerated complexes.
    pub width_bound: usize,
    /// Total dimension bound for enumerated complexes.
    pub complex_dim_bound: usize,
    /// Number of candidate representations an enumeration may visit.
    pub search_cap: u64,
    /// Largest endomorphism ring searched exhaustively for idempotents.
    pub end_cap: u64,
    /// Extra dimension allowed for witnesses of extension-closed classes.
    pub slack: usize,
    /// Largest length of resolutions and replacements.
    pub resolution_cap: usize,
    /// Seed for the randomized idempotent search.
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            dim_bound: 4,
            width_bound: 2,
            complex_dim_bound: 4,
            search_cap: 1 << 22,
            end_cap: 1 << 20,
            slack: 4,
            resolution_cap: 16,
            seed: 0x7417_1ab5,
            strategy: Strategy::Parallel,
        }
    }
}

impl Options {
    pub fn sequential(mut self) -> Self {
        self.strategy = Strategy::Sequential;
        self
    }
}
