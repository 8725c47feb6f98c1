//! Grover-search solvers for NP problems on Rydberg tweezer arrays.

pub mod circuit;
pub mod error;
pub mod grid;
pub mod instances;
pub mod layout;
pub mod metrics;
pub mod oracle;
pub mod program;
pub mod schedule;
pub mod sim;
