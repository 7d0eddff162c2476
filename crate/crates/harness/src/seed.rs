//! Per-cell seed derivation.
//!
//! Run `r` of algorithm `a` on function `f` uses
//!
//! ```text
//! h = splitmix64(base_seed)
//! h = splitmix64(h ^ tag(a))      tag: agto = 1, gto = 2
//! h = splitmix64(h ^ f)           f: function number 1..=23
//! h = splitmix64(h ^ r)           r: run index from 0
//! ```
//!
//! where `splitmix64` is the standard SplitMix64 output function applied to
//! `x + 0x9E3779B97F4A7C15` with wrapping arithmetic.

use crate::config::Algorithm;
use agto_core::benchmarks::FunctionId;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn cell_seed(base_seed: u64, algorithm: Algorithm, function: FunctionId, run: u32) -> u64 {
    [algorithm.tag(), u64::from(function.number()), u64::from(run)]
        .into_iter()
        .fold(splitmix64(base_seed), |h, v| splitmix64(h ^ v))
}
