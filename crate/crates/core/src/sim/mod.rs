//! Exact simulation of circuits and schedules.
//!
//! Two backends share the same gate semantics. [`StateVector`] is a dense
//! amplitude array used for unitary extraction and small circuits.
//! [`SparseState`] stores only nonzero amplitudes and handles the
//! ancilla-heavy oracle circuits, where the classical reversible part keeps
//! the support no larger than the data-register superposition.

mod dense;
mod grover;
mod sparse;

pub use dense::{dense_unitary, simulate, DenseMatrix, StateVector, DEFAULT_QUBIT_CAP, UNITARY_QUBIT_CAP};
pub use grover::{closed_form_probability, grover_success_probability, optimal_iterations, GroverRun};
pub use sparse::{BasisKey, SparseState, SPARSE_QUBIT_CAP};

use num_complex::Complex64;

use crate::circuit::{Gate, GateKind};

/// Control pattern of a gate: the state matches when `index & mask == value`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Pattern {
    pub mask: u64,
    pub value: u64,
}

/// Splits a gate into (controls that must match, target) for the dense path.
/// For phase gates every operand is a control and there is no target.
pub(crate) fn dense_pattern(g: &Gate) -> (Pattern, Option<usize>) {
    let ops = &g.qubits;
    let (controls, target) = match g.kind {
        GateKind::CX | GateKind::CCX => (&ops[..ops.len() - 1], Some(ops[ops.len() - 1])),
        GateKind::CZ | GateKind::CCZ | GateKind::Z => (&ops[..], None),
        GateKind::X | GateKind::H => (&ops[..0], Some(ops[0])),
    };
    let mut mask = 0u64;
    let mut value = 0u64;
    for (j, &q) in controls.iter().enumerate() {
        mask |= 1 << q;
        if !g.is_negated(j) {
            value |= 1 << q;
        }
    }
    (Pattern { mask, value }, target)
}

pub(crate) const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
