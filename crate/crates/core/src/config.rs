use serde::Serialize;

use crate::exact::DEFAULT_PRECISION_BITS;

/// Resource caps and precision shared by the library operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Significand width for approximate values built from named constants.
    pub precision_bits: u32,
    /// Largest number of elements any enumeration may produce.
    pub enumeration_cap: u64,
    /// Node budget for the difference-set branch and bound.
    pub node_budget: u64,
    /// Largest `r` accepted by the digit-restricted exponential sums.
    pub max_expsum_r: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            precision_bits: DEFAULT_PRECISION_BITS,
            enumeration_cap: 1 << 25,
            node_budget: 50_000_000,
            max_expsum_r: 26,
        }
    }
}
