use thiserror::Error;

use crate::circuit::{GateKind, Role};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("{kind} expects {} operands, got {got}", kind.arity())]
    Arity { kind: GateKind, got: usize },
    #[error("{kind} operands must be distinct")]
    RepeatedOperand { kind: GateKind },
    #[error("{kind} does not accept that control polarity")]
    Polarity { kind: GateKind },
    #[error("layer of {expected} gates contains a {found} gate")]
    MixedLayer { expected: GateKind, found: GateKind },
    #[error("qubit {qubit} appears twice in one layer")]
    Overlap { qubit: usize },
    #[error("qubit {qubit} is not declared")]
    Undeclared { qubit: usize },
    #[error("completing qubit {qubit} cannot carry a gate")]
    CompletingGate { qubit: usize },
    #[error("qubit declared with index {index} at position {position}")]
    QubitIndex { index: usize, position: usize },
    #[error("qubit {index} is {left:?} on one side and {right:?} on the other")]
    RoleConflict { index: usize, left: Role, right: Role },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: index {index} out of range (limit {limit})")]
    IndexOutOfRange { line: usize, index: i64, limit: usize },
    #[error("line {line}: unterminated clause")]
    UnterminatedClause { line: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: empty subset")]
    EmptySubset { line: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{kind} cannot be read from this format")]
    WrongFormat { kind: &'static str },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{kind} requires threshold {which}")]
    MissingThreshold { kind: &'static str, which: &'static str },
    #[error("assignment has length {got}, expected {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error("{count} free variables exceed the enumeration limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("constant {k} does not fit in a {width}-bit register")]
    ThresholdOverflow { k: u64, width: usize },
    #[error("quantum binary tree needs at least one input")]
    EmptyTree,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{qubits} qubits exceed the simulation cap of {cap}")]
    QubitCap { qubits: usize, cap: usize },
    #[error("norm drifted to {norm}")]
    NormDrift { norm: f64 },
    #[error("state has {got} qubits, circuit has {expected}")]
    Width { got: usize, expected: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("qubit {qubit} is used by two units of one set")]
    DuplicateQubit { qubit: usize },
    #[error("two qubits target position ({row}, {col})")]
    DuplicateTarget { row: i64, col: i64 },
    #[error("mapping is not total on the grid")]
    NotTotal,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleFormatError {
    #[error("unsupported schedule version {0}")]
    Version(u32),
    #[error("schedule document is malformed: {0}")]
    Malformed(String),
}
