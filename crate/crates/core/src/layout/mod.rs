//! Unit partitioning, grid placement, move planning and schedule assembly.

mod engine;
mod matching;
mod moves;
mod placement;

pub use engine::{layout_qbt, layout_qra, transpile, transpile_grover, transpile_oracle, variant_packs};
pub use matching::{greedy_maximal_matching, partition_units};
pub use moves::{plan_moves, Occupancy};
pub use placement::{column_height, eq7_position, group_sat_negations, map_positions, stack_columns, Placement};
