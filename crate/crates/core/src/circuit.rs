//! Gate-level intermediate representation.
//!
//! A [`Circuit`] is a list of declared qubits and a sequence of [`Layer`]s.
//! Every layer holds gates of a single kind acting on pairwise-disjoint
//! qubits, which mirrors the broadcast addressing of a tensor-grid array:
//! one layer is one unit of depth no matter how many gates it contains.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CircuitError;

/// What a qubit is used for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Data,
    AncillaCheck,
    AncillaMerge,
    AncillaCarry,
    /// Filler atom for rectangular addressing. Never carries gates.
    Completing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitId {
    pub index: usize,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    Z,
    CZ,
    CCZ,
    CX,
    CCX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerTag {
    SingleQubit,
    TwoQubit,
    ThreeQubit,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::Z => 1,
            GateKind::CZ | GateKind::CX => 2,
            GateKind::CCZ | GateKind::CCX => 3,
        }
    }

    pub fn tag(self) -> LayerTag {
        match self.arity() {
            1 => LayerTag::SingleQubit,
            2 => LayerTag::TwoQubit,
            _ => LayerTag::ThreeQubit,
        }
    }

    /// CX and CCX: the last operand is a target, the others are controls.
    pub fn is_controlled_x(self) -> bool {
        matches!(self, GateKind::CX | GateKind::CCX)
    }

    /// Number of operands whose polarity may be flipped.
    fn polarizable(self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::Z => 0,
            GateKind::CX => 1,
            GateKind::CCX => 2,
            GateKind::CZ => 2,
            GateKind::CCZ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Z => "Z",
            GateKind::CZ => "CZ",
            GateKind::CCZ => "CCZ",
            GateKind::CX => "CX",
            GateKind::CCX => "CCX",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate on concrete qubit indices.
///
/// For CX/CCX the controls come first and the target last. Bit `j` of
/// `neg` marks operand `j` as active on `|0⟩` instead of `|1⟩`; for CZ/CCZ
/// every operand acts as a control.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub neg: u8,
}

fn is_zero(v: &u8) -> bool {
    *v == 0
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self, CircuitError> {
        Self::with_polarity(kind, qubits, 0)
    }

    pub fn with_polarity(kind: GateKind, qubits: Vec<usize>, neg: u8) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity { kind, got: qubits.len() });
        }
        let distinct: BTreeSet<_> = qubits.iter().collect();
        if distinct.len() != qubits.len() {
            return Err(CircuitError::RepeatedOperand { kind });
        }
        if neg >> kind.polarizable() != 0 {
            return Err(CircuitError::Polarity { kind });
        }
        Ok(Gate { kind, qubits, neg })
    }

    pub fn x(q: usize) -> Self {
        Gate { kind: GateKind::X, qubits: vec![q], neg: 0 }
    }

    pub fn h(q: usize) -> Self {
        Gate { kind: GateKind::H, qubits: vec![q], neg: 0 }
    }

    pub fn z(q: usize) -> Self {
        Gate { kind: GateKind::Z, qubits: vec![q], neg: 0 }
    }

    /// CX with control polarity: `on_zero` means the control fires on `|0⟩`.
    pub fn cx(control: (usize, bool), target: usize) -> Self {
        assert_ne!(control.0, target, "CX operands must differ");
        Gate { kind: GateKind::CX, qubits: vec![control.0, target], neg: control.1 as u8 }
    }

    pub fn ccx(c1: (usize, bool), c2: (usize, bool), target: usize) -> Self {
        assert!(c1.0 != c2.0 && c1.0 != target && c2.0 != target, "CCX operands must differ");
        Gate {
            kind: GateKind::CCX,
            qubits: vec![c1.0, c2.0, target],
            neg: c1.1 as u8 | (c2.1 as u8) << 1,
        }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "CZ operands must differ");
        Gate { kind: GateKind::CZ, qubits: vec![a, b], neg: 0 }
    }

    pub fn is_negated(&self, operand: usize) -> bool {
        self.neg >> operand & 1 == 1
    }

    /// Operands whose polarity is active-on-zero.
    pub fn negated_operands(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.qubits.len()).filter(|&j| self.is_negated(j)).map(|j| self.qubits[j])
    }

    pub fn positive(&self) -> Gate {
        Gate { kind: self.kind, qubits: self.qubits.clone(), neg: 0 }
    }
}

/// A set of simultaneously executable gates of one kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    kind: GateKind,
    gates: Vec<Gate>,
}

impl Layer {
    pub fn new(kind: GateKind, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut seen = BTreeSet::new();
        for g in &gates {
            if g.kind != kind {
                return Err(CircuitError::MixedLayer { expected: kind, found: g.kind });
            }
            for &q in &g.qubits {
                if !seen.insert(q) {
                    return Err(CircuitError::Overlap { qubit: q });
                }
            }
        }
        Ok(Layer { kind, gates })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn tag(&self) -> LayerTag {
        self.kind.tag()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.gates.iter().flat_map(|g| g.qubits.iter().copied())
    }

    pub fn has_polarity(&self) -> bool {
        self.gates.iter().any(|g| g.neg != 0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    qubits: Vec<QubitId>,
    layers: Vec<Layer>,
}

impl Circuit {
    pub fn new(qubits: Vec<QubitId>, layers: Vec<Layer>) -> Result<Self, CircuitError> {
        for (i, q) in qubits.iter().enumerate() {
            if q.index != i {
                return Err(CircuitError::QubitIndex { index: q.index, position: i });
            }
        }
        for layer in &layers {
            for q in layer.qubits() {
                match qubits.get(q) {
                    None => return Err(CircuitError::Undeclared { qubit: q }),
                    Some(id) if id.role == Role::Completing => {
                        return Err(CircuitError::CompletingGate { qubit: q })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(Circuit { qubits, layers })
    }

    pub fn empty() -> Self {
        Circuit::default()
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Layer::len).sum()
    }

    pub fn count_role(&self, role: Role) -> usize {
        self.qubits.iter().filter(|q| q.role == role).count()
    }

    /// Reverses the layer order. Every gate in the set is self-inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit { qubits: self.qubits.clone(), layers: self.layers.iter().rev().cloned().collect() }
    }

    /// Layers of `self` followed by layers of `other`. Shared indices must
    /// agree on their role.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        let mut qubits = self.qubits.clone();
        for q in &other.qubits {
            match qubits.get(q.index) {
                Some(existing) if existing.role != q.role => {
                    return Err(CircuitError::RoleConflict {
                        index: q.index,
                        left: existing.role,
                        right: q.role,
                    })
                }
                Some(_) => {}
                None => qubits.push(*q),
            }
        }
        let mut layers = self.layers.clone();
        layers.extend(other.layers.iter().cloned());
        Ok(Circuit { qubits, layers })
    }

    /// Depth when CX/CCX are rewritten as H-conjugated CZ/CCZ and polarity
    /// as X-conjugation.
    pub fn native_depth(&self) -> usize {
        self.layers
            .iter()
            .map(|l| {
                let conj = if l.kind().is_controlled_x() { 2 } else { 0 };
                let pol = if l.has_polarity() { 2 } else { 0 };
                1 + conj + pol
            })
            .sum()
    }
}

/// Incremental circuit construction. Empty layers are dropped.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    qubits: Vec<QubitId>,
    layers: Vec<Layer>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&mut self, role: Role) -> usize {
        let index = self.qubits.len();
        self.qubits.push(QubitId { index, role });
        index
    }

    pub fn alloc_n(&mut self, role: Role, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.alloc(role)).collect()
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn role(&self, q: usize) -> Role {
        self.qubits[q].role
    }

    /// Pushes a layer. Panics on overlapping operands: generated layers are
    /// disjoint by construction, so an overlap is a builder bug.
    pub fn layer(&mut self, kind: GateKind, gates: Vec<Gate>) {
        if gates.is_empty() {
            return;
        }
        let layer = Layer::new(kind, gates).unwrap_or_else(|e| panic!("invalid generated layer: {e}"));
        self.layers.push(layer);
    }

    pub fn push(&mut self, layer: Layer) {
        if !layer.is_empty() {
            self.layers.push(layer);
        }
    }

    pub fn gate(&mut self, gate: Gate) {
        let kind = gate.kind;
        self.layer(kind, vec![gate]);
    }

    pub fn layers_since(&self, start: usize) -> &[Layer] {
        &self.layers[start..]
    }

    pub fn finish(self) -> Circuit {
        Circuit { qubits: self.qubits, layers: self.layers }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_layer_is_rejected() {
        let gates = vec![Gate::cz(0, 1), Gate::cz(1, 2)];
        assert!(matches!(Layer::new(GateKind::CZ, gates), Err(CircuitError::Overlap { qubit: 1 })));
    }

    #[test]
    fn mixed_layer_is_rejected() {
        let gates = vec![Gate::x(0), Gate::h(1)];
        assert!(Layer::new(GateKind::X, gates).is_err());
    }

    #[test]
    fn gate_arity_and_polarity_checked() {
        assert!(Gate::new(GateKind::CZ, vec![0]).is_err());
        assert!(Gate::new(GateKind::CX, vec![1, 1]).is_err());
        assert!(Gate::with_polarity(GateKind::CX, vec![0, 1], 0b10).is_err());
        assert!(Gate::with_polarity(GateKind::CCZ, vec![0, 1, 2], 0b111).is_ok());
    }

    #[test]
    fn compose_with_empty_is_identity() {
        let mut b = CircuitBuilder::new();
        let q = b.alloc(Role::Data);
        b.gate(Gate::h(q));
        let c = b.finish();
        assert_eq!(Circuit::empty().compose(&c).unwrap(), c);
        assert_eq!(c.compose(&c).unwrap().depth(), 2);
    }

    #[test]
    fn compose_detects_role_conflict() {
        let mut a = CircuitBuilder::new();
        a.alloc(Role::Data);
        let mut b = CircuitBuilder::new();
        b.alloc(Role::AncillaCheck);
        assert!(matches!(
            a.finish().compose(&b.finish()),
            Err(CircuitError::RoleConflict { index: 0, .. })
        ));
    }

    #[test]
    fn inverse_is_involution() {
        let mut b = CircuitBuilder::new();
        let q = b.alloc_n(Role::Data, 3);
        b.gate(Gate::x(q[0]));
        b.gate(Gate::ccx((q[0], false), (q[1], true), q[2]));
        b.gate(Gate::h(q[1]));
        let c = b.finish();
        assert_eq!(c.inverse().inverse(), c);
        assert_eq!(c.inverse().layers()[0].kind(), GateKind::H);
    }

    #[test]
    fn completing_qubits_cannot_carry_gates() {
        let qubits = vec![QubitId { index: 0, role: Role::Completing }];
        let layer = Layer::new(GateKind::X, vec![Gate::x(0)]).unwrap();
        assert!(Circuit::new(qubits, vec![layer]).is_err());
    }
}
