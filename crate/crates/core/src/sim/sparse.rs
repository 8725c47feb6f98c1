use std::collections::HashMap;

use num_complex::Complex64;

use super::{c, FRAC_1_SQRT_2};
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::SimError;

pub const SPARSE_QUBIT_CAP: usize = 256;
const WORDS: usize = SPARSE_QUBIT_CAP / 64;
const PRUNE: f64 = 1e-14;

/// Basis-state label: bit `q` is qubit `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey([u64; WORDS]);

impl BasisKey {
    pub fn bit(&self, q: usize) -> bool {
        self.0[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn set(&mut self, q: usize, v: bool) {
        let w = &mut self.0[q / 64];
        if v {
            *w |= 1 << (q % 64);
        } else {
            *w &= !(1 << (q % 64));
        }
    }

    pub fn flip(&mut self, q: usize) {
        self.0[q / 64] ^= 1 << (q % 64);
    }

    pub fn from_bits(bits: impl IntoIterator<Item = (usize, bool)>) -> Self {
        let mut k = BasisKey::default();
        for (q, v) in bits {
            k.set(q, v);
        }
        k
    }

    /// Bits `0..count` packed little-endian.
    pub fn low_bits(&self, count: usize) -> u64 {
        assert!(count <= 64);
        if count == 64 {
            self.0[0]
        } else {
            self.0[0] & ((1u64 << count) - 1)
        }
    }

    /// True when every bit at index `>= from` is zero.
    pub fn is_zero_from(&self, from: usize) -> bool {
        (0..WORDS).all(|w| {
            let lo = w * 64;
            let word = self.0[w];
            if lo + 64 <= from {
                true
            } else if lo >= from {
                word == 0
            } else {
                word >> (from - lo) == 0
            }
        })
    }
}

/// Sparse amplitude map. Permutation and phase gates keep the support size;
/// only Hadamards can grow or shrink it.
#[derive(Clone, Debug)]
pub struct SparseState {
    num_qubits: usize,
    entries: Vec<(BasisKey, Complex64)>,
}

impl SparseState {
    pub fn basis(num_qubits: usize, key: BasisKey) -> Result<Self, SimError> {
        if num_qubits > SPARSE_QUBIT_CAP {
            return Err(SimError::QubitCap { qubits: num_qubits, cap: SPARSE_QUBIT_CAP });
        }
        Ok(SparseState { num_qubits, entries: vec![(key, c(1.0, 0.0))] })
    }

    pub fn zero(num_qubits: usize) -> Result<Self, SimError> {
        Self::basis(num_qubits, BasisKey::default())
    }

    pub fn from_entries(num_qubits: usize, entries: Vec<(BasisKey, Complex64)>) -> Result<Self, SimError> {
        let mut s = Self::zero(num_qubits)?;
        s.entries = entries;
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn entries(&self) -> &[(BasisKey, Complex64)] {
        &self.entries
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, key: &BasisKey) -> Complex64 {
        self.entries.iter().filter(|(k, _)| k == key).map(|(_, a)| *a).sum()
    }

    fn matches(key: &BasisKey, g: &Gate, controls: usize) -> bool {
        (0..controls).all(|j| key.bit(g.qubits[j]) != g.is_negated(j))
    }

    pub fn apply(&mut self, g: &Gate) {
        match g.kind {
            GateKind::Z | GateKind::CZ | GateKind::CCZ => {
                let n = g.qubits.len();
                for (k, a) in &mut self.entries {
                    if Self::matches(k, g, n) {
                        *a = -*a;
                    }
                }
            }
            GateKind::X | GateKind::CX | GateKind::CCX => {
                let n = g.qubits.len() - 1;
                let t = g.qubits[n];
                for (k, _) in &mut self.entries {
                    if Self::matches(k, g, n) {
                        k.flip(t);
                    }
                }
            }
            GateKind::H => {
                let t = g.qubits[0];
                let mut acc: HashMap<BasisKey, Complex64> = HashMap::with_capacity(self.entries.len() * 2);
                for (k, a) in &self.entries {
                    let mut k0 = *k;
                    k0.set(t, false);
                    let mut k1 = *k;
                    k1.set(t, true);
                    let s = if k.bit(t) { -1.0 } else { 1.0 };
                    *acc.entry(k0).or_default() += a * FRAC_1_SQRT_2;
                    *acc.entry(k1).or_default() += a * (s * FRAC_1_SQRT_2);
                }
                self.entries = acc.into_iter().filter(|(_, a)| a.norm() > PRUNE).collect();
                self.entries.sort_by_key(|a| a.0);
            }
        }
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.num_qubits() > self.num_qubits {
            return Err(SimError::Width { got: self.num_qubits, expected: circuit.num_qubits() });
        }
        for layer in circuit.layers() {
            for g in layer.gates() {
                self.apply(g);
            }
        }
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NormDrift { norm });
        }
        Ok(())
    }

    /// Merges duplicate keys and sorts; used before comparisons.
    pub fn canonical(&self) -> Vec<(BasisKey, Complex64)> {
        let mut acc: HashMap<BasisKey, Complex64> = HashMap::new();
        for (k, a) in &self.entries {
            *acc.entry(*k).or_default() += a;
        }
        let mut v: Vec<_> = acc.into_iter().filter(|(_, a)| a.norm() > PRUNE).collect();
        v.sort_by_key(|a| a.0);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, Role};
    use crate::sim::{simulate, StateVector};

    #[test]
    fn key_bit_helpers() {
        let mut k = BasisKey::default();
        k.set(70, true);
        k.flip(3);
        assert!(k.bit(70) && k.bit(3) && !k.bit(4));
        assert!(!k.is_zero_from(70));
        assert!(k.is_zero_from(71));
        assert_eq!(k.low_bits(4), 0b1000);
    }

    #[test]
    fn matches_dense_backend_on_small_circuit() {
        let mut b = CircuitBuilder::new();
        let q = b.alloc_n(Role::Data, 3);
        b.layer(GateKind::H, q.iter().map(|&i| Gate::h(i)).collect());
        b.gate(Gate::ccx((q[0], true), (q[1], false), q[2]));
        b.gate(Gate::new(GateKind::CZ, vec![q[0], q[2]]).unwrap());
        b.gate(Gate::h(q[1]));
        let circ = b.finish();
        let dense = simulate(&circ, StateVector::zero(3).unwrap()).unwrap();
        let mut sparse = SparseState::zero(3).unwrap();
        sparse.run(&circ).unwrap();
        for (k, a) in sparse.canonical() {
            assert!((dense.amplitude(k.low_bits(3)) - a).norm() < 1e-12);
        }
        assert!((sparse.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_twice_collapses_support() {
        let mut s = SparseState::zero(1).unwrap();
        s.apply(&Gate::h(0));
        assert_eq!(s.support(), 2);
        s.apply(&Gate::h(0));
        assert_eq!(s.support(), 1);
    }
}
