//! Hyperplane sums and the Laplace-method checks built on them.

mod hyperplane;
mod laplace;
mod inequalities;

pub use hyperplane::*;
pub use laplace::*;
pub use inequalities::*;

/// Seed used by randomized checks unless one is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
