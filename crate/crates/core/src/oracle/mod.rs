//! Circuit synthesis: checking units, merging blocks, the oracle and the
//! Grover operator.

mod adder;
mod assemble;
mod compare;
mod diffusion;
mod hcp;
mod qbt;
mod qra;
mod units;

pub use adder::{adder_layers, build_ripple_adder};
pub use assemble::{build_grover, build_oracle, grover_program, oracle_program, variant_packs, OracleOptions, OracleShape};
pub use compare::{build_threshold_compare, emit_compare, CompareResult};
pub use diffusion::{build_diffusion, emit_diffusion};
pub use hcp::{build_hcp_connectivity, emit_activation};
pub use qbt::{build_qbt, emit_qbt, qbt_height, qbt_program, QbtGeometry};
pub use qra::{build_qra, emit_qra, qra_program, qra_shape};
pub use units::{build_checking_unit, unit_layers, Template, UnitSpec};

use crate::circuit::{Gate, GateKind, Role};
use crate::program::ProgramBuilder;

/// Layers as (kind, gates) pairs; empty gate lists are allowed and skipped
/// on emission.
pub type Layers = Vec<(GateKind, Vec<Gate>)>;

/// A qubit read with a polarity: `neg` means the value is the complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub q: usize,
    pub neg: bool,
}

impl Lit {
    pub fn pos(q: usize) -> Self {
        Lit { q, neg: false }
    }

    pub fn not(self) -> Self {
        Lit { q: self.q, neg: !self.neg }
    }

    fn ctl(self) -> (usize, bool) {
        (self.q, self.neg)
    }
}

/// Hands out ancillae of one role, reusing them after a [`Pool::reset`].
/// Without resets every request is a fresh qubit.
#[derive(Clone, Debug)]
pub struct Pool {
    role: Role,
    qubits: Vec<usize>,
    next: usize,
}

impl Pool {
    pub fn new(role: Role) -> Self {
        Pool { role, qubits: Vec::new(), next: 0 }
    }

    pub fn take(&mut self, pb: &mut ProgramBuilder) -> usize {
        if self.next == self.qubits.len() {
            let q = pb.alloc(self.role);
            self.qubits.push(q);
        }
        self.next += 1;
        self.qubits[self.next - 1]
    }

    pub fn take_n(&mut self, pb: &mut ProgramBuilder, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.take(pb)).collect()
    }

    pub fn reset(&mut self) {
        self.next = 0;
    }

    pub fn size(&self) -> usize {
        self.qubits.len()
    }
}

/// As-soon-as-possible layering of a gate sequence: each gate lands in the
/// first layer of its kind after every earlier gate it shares a qubit with.
pub fn asap(gates: Vec<Gate>) -> Layers {
    let mut layers: Layers = Vec::new();
    let mut ready: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for g in gates {
        let mut i = g.qubits.iter().map(|q| ready.get(q).copied().unwrap_or(0)).max().unwrap_or(0);
        while i < layers.len() && layers[i].0 != g.kind {
            i += 1;
        }
        if i == layers.len() {
            layers.push((g.kind, Vec::new()));
        }
        for &q in &g.qubits {
            ready.insert(q, i + 1);
        }
        layers[i].1.push(g);
    }
    layers
}

/// Gates computing `out ^= ⋀ inputs` with a pairwise tree; `temps` must hold
/// `inputs.len() - 2` clean qubits and are restored.
pub fn and_gates(inputs: &[Lit], out: usize, temps: &[usize]) -> Vec<Gate> {
    match inputs {
        [] => return vec![Gate::x(out)],
        [a] => return vec![Gate::cx(a.ctl(), out)],
        _ => {}
    }
    assert!(temps.len() + 2 >= inputs.len(), "AND tree needs {} temps", inputs.len() - 2);
    let mut items = inputs.to_vec();
    let mut compute = Vec::new();
    let mut next_temp = temps.iter();
    while items.len() > 2 {
        let mut next = Vec::with_capacity(items.len() / 2 + 1);
        for pair in items.chunks(2) {
            if let [a, b] = pair {
                let t = *next_temp.next().expect("temp count checked above");
                compute.push(Gate::ccx(a.ctl(), b.ctl(), t));
                next.push(Lit::pos(t));
            } else {
                next.push(pair[0]);
            }
        }
        items = next;
    }
    let mut gates = compute.clone();
    gates.push(Gate::ccx(items[0].ctl(), items[1].ctl(), out));
    gates.extend(compute.into_iter().rev());
    gates
}

/// Merges `more` into `acc` layer by layer; both must have the same kind
/// at every shared index.
pub(crate) fn merge_parallel(acc: &mut Layers, more: Layers) {
    for (i, (k, g)) in more.into_iter().enumerate() {
        if i == acc.len() {
            acc.push((k, Vec::new()));
        }
        assert_eq!(acc[i].0, k, "parallel layers disagree in kind");
        acc[i].1.extend(g);
    }
}

pub(crate) fn emit(pb: &mut ProgramBuilder, layers: Layers) {
    for (k, g) in layers {
        pb.layer(k, g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::sim::{simulate, StateVector};

    #[test]
    fn asap_respects_dependencies() {
        let gates = vec![Gate::x(0), Gate::x(1), Gate::cx((0, false), 1), Gate::x(2), Gate::x(0)];
        let layers = asap(gates);
        let kinds: Vec<_> = layers.iter().map(|(k, g)| (*k, g.len())).collect();
        assert_eq!(kinds, vec![(GateKind::X, 3), (GateKind::CX, 1), (GateKind::X, 1)]);
    }

    #[test]
    fn and_tree_truth_table() {
        for n in 1..=5usize {
            for neg_mask in [0u32, 0b10101] {
                let mut cb = CircuitBuilder::new();
                let ins = cb.alloc_n(Role::Data, n);
                let out = cb.alloc(Role::AncillaCheck);
                let temps = cb.alloc_n(Role::AncillaCheck, n.saturating_sub(2));
                let lits: Vec<Lit> = ins.iter().enumerate().map(|(i, &q)| Lit { q, neg: neg_mask >> i & 1 == 1 }).collect();
                for (k, g) in asap(and_gates(&lits, out, &temps)) {
                    cb.layer(k, g);
                }
                let c = cb.finish();
                let w = c.num_qubits();
                for z in 0u64..1 << n {
                    let s = simulate(&c, StateVector::basis(w, z).unwrap()).unwrap();
                    let want = (0..n).all(|i| (z >> i & 1 == 1) != lits[i].neg);
                    let idx = z | (want as u64) << n;
                    assert!((s.amplitude(idx).re - 1.0).abs() < 1e-12, "n={n} z={z}");
                }
            }
        }
    }
}
