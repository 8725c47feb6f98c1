//! Shared fixtures for the benchmarks.

use rydberg_np::instances::generate::{random_ksat, rng_for};
use rydberg_np::instances::{lower, ConstraintSystem};

/// Random 3-SAT system with `4n` clauses.
pub fn sat_system(n: usize, seed: u64) -> ConstraintSystem {
    lower(&random_ksat(n, 4 * n, 3, &mut rng_for(seed, 0))).expect("3-SAT lowers")
}
