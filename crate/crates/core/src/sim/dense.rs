use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{c, dense_pattern, FRAC_1_SQRT_2};
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::SimError;

pub const DEFAULT_QUBIT_CAP: usize = 26;
pub const UNITARY_QUBIT_CAP: usize = 10;

/// Dense amplitude array over `2^n` basis states. Qubit `q` is bit `q` of
/// the basis index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Result<Self, SimError> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: u64) -> Result<Self, SimError> {
        Self::check_cap(num_qubits, DEFAULT_QUBIT_CAP)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index as usize] = c(1.0, 0.0);
        Ok(StateVector { num_qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let num_qubits = amplitudes.len().trailing_zeros() as usize;
        assert!(amplitudes.len().is_power_of_two(), "amplitude count must be a power of two");
        let state = StateVector { num_qubits, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(SimError::NormDrift { norm });
        }
        Ok(state)
    }

    fn check_cap(num_qubits: usize, cap: usize) -> Result<(), SimError> {
        if num_qubits > cap {
            Err(SimError::QubitCap { qubits: num_qubits, cap })
        } else {
            Ok(())
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amplitudes[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&mut self, g: &Gate) {
        let (pat, target) = dense_pattern(g);
        let amps = &mut self.amplitudes;
        match g.kind {
            GateKind::Z | GateKind::CZ | GateKind::CCZ => {
                for (i, a) in amps.iter_mut().enumerate() {
                    if i as u64 & pat.mask == pat.value {
                        *a = -*a;
                    }
                }
            }
            GateKind::X | GateKind::CX | GateKind::CCX => {
                let t = 1usize << target.unwrap();
                for i in 0..amps.len() {
                    if i & t == 0 && i as u64 & pat.mask == pat.value {
                        amps.swap(i, i | t);
                    }
                }
            }
            GateKind::H => {
                let t = 1usize << target.unwrap();
                for i in 0..amps.len() {
                    if i & t == 0 {
                        let a = amps[i];
                        let b = amps[i | t];
                        amps[i] = (a + b) * FRAC_1_SQRT_2;
                        amps[i | t] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
        }
    }

    /// Total probability of basis states whose bits under `mask` equal `value`.
    pub fn probability_where(&self, mask: u64, value: u64) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u64 & mask == value)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Amplitude dump as `index real imag` lines, skipping exact zeros.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() > 0.0 {
                out.push_str(&format!("{i} {:.17e} {:.17e}\n", a.re, a.im));
            }
        }
        out
    }
}

/// Applies every layer of `circuit` to `initial`.
pub fn simulate(circuit: &Circuit, initial: StateVector) -> Result<StateVector, SimError> {
    if initial.num_qubits() != circuit.num_qubits() {
        return Err(SimError::Width { got: initial.num_qubits(), expected: circuit.num_qubits() });
    }
    let mut state = initial;
    for layer in circuit.layers() {
        for g in layer.gates() {
            state.apply(g);
        }
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(SimError::NormDrift { norm });
    }
    Ok(state)
}

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0, 0.0);
        }
        DenseMatrix { dim, data }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for col in 0..dim {
                data.push(f(r, col));
            }
        }
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        DenseMatrix::from_fn(self.dim, |r, col| self.get(col, r).conj())
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Unitary of `circuit`, one simulated basis state per column.
pub fn dense_unitary(circuit: &Circuit) -> Result<DenseMatrix, SimError> {
    let n = circuit.num_qubits();
    StateVector::check_cap(n, UNITARY_QUBIT_CAP)?;
    let dim = 1usize << n;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let out = simulate(circuit, StateVector::basis(n, col as u64)?)?;
        for (row, a) in out.amplitudes().iter().enumerate() {
            data[row * dim + col] = *a;
        }
    }
    Ok(DenseMatrix { dim, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, Role};

    fn one_layer(n: usize, gates: Vec<Gate>) -> Circuit {
        let mut b = CircuitBuilder::new();
        b.alloc_n(Role::Data, n);
        for g in gates {
            b.gate(g);
        }
        b.finish()
    }

    #[test]
    fn x_flips_zero_to_one() {
        let out = simulate(&one_layer(1, vec![Gate::x(0)]), StateVector::zero(1).unwrap()).unwrap();
        assert!((out.amplitude(1).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hadamards_give_uniform_superposition() {
        let out = simulate(&one_layer(2, vec![Gate::h(0), Gate::h(1)]), StateVector::zero(2).unwrap()).unwrap();
        for i in 0..4 {
            assert!((out.amplitude(i).re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn ccz_phases_only_all_ones() {
        let ccz = Gate::new(GateKind::CCZ, vec![0, 1, 2]).unwrap();
        let c = one_layer(3, vec![ccz]);
        let on_110 = simulate(&c, StateVector::basis(3, 0b011).unwrap()).unwrap();
        assert_eq!(on_110.amplitude(0b011).re, 1.0);
        let on_111 = simulate(&c, StateVector::basis(3, 0b111).unwrap()).unwrap();
        assert_eq!(on_111.amplitude(0b111).re, -1.0);
    }

    #[test]
    fn negated_control_fires_on_zero() {
        let c = one_layer(2, vec![Gate::cx((0, true), 1)]);
        let out = simulate(&c, StateVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(out.amplitude(0b10).re, 1.0);
    }

    #[test]
    fn empty_circuit_has_identity_unitary() {
        let c = one_layer(2, vec![]);
        assert_eq!(dense_unitary(&c).unwrap(), DenseMatrix::identity(4));
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(StateVector::zero(27), Err(SimError::QubitCap { .. })));
        let c = one_layer(11, vec![]);
        assert!(dense_unitary(&c).is_err());
    }
}
