use crate::circuit::{Circuit, CircuitBuilder, Gate, GateKind, Role};

use super::Layers;

/// In-place ripple-carry addition without ancillae: `|a⟩|b⟩|0⟩ ↦ |a⟩|a+b⟩`,
/// with `b` plus the carry qubit `z` holding the `u+1`-bit sum. Registers
/// are little-endian and of equal width `u ≥ 1`.
pub fn adder_layers(a: &[usize], b: &[usize], z: usize) -> Layers {
    let u = a.len();
    assert!(u >= 1 && b.len() == u, "adder registers must share a nonzero width");
    let cx = |c: usize, t: usize| (GateKind::CX, vec![Gate::cx((c, false), t)]);
    let ccx = |c1: usize, c2: usize, t: usize| (GateKind::CCX, vec![Gate::ccx((c1, false), (c2, false), t)]);
    if u == 1 {
        return vec![ccx(a[0], b[0], z), cx(a[0], b[0])];
    }
    let mut out: Layers = Vec::new();
    out.push((GateKind::CX, (1..u).map(|i| Gate::cx((a[i], false), b[i])).collect()));
    out.push(cx(a[u - 1], z));
    for i in (1..u - 1).rev() {
        out.push(cx(a[i], a[i + 1]));
    }
    for i in 0..u - 1 {
        out.push(ccx(b[i], a[i], a[i + 1]));
    }
    out.push(ccx(b[u - 1], a[u - 1], z));
    for i in (1..u).rev() {
        out.push(cx(a[i], b[i]));
        out.push(ccx(b[i - 1], a[i - 1], a[i]));
    }
    for i in 1..u - 1 {
        out.push(cx(a[i], a[i + 1]));
    }
    out.push((GateKind::CX, (0..u).map(|i| Gate::cx((a[i], false), b[i])).collect()));
    out
}

/// Standalone adder on qubits `a = 0..u`, `b = u..2u`, carry `2u`.
pub fn build_ripple_adder(u: usize) -> Circuit {
    let mut cb = CircuitBuilder::new();
    let a = cb.alloc_n(Role::AncillaCarry, u);
    let b = cb.alloc_n(Role::AncillaCarry, u);
    let z = cb.alloc(Role::AncillaCarry);
    for (k, g) in adder_layers(&a, &b, z) {
        cb.layer(k, g);
    }
    cb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{simulate, StateVector};

    #[test]
    fn two_bit_example() {
        let c = build_ripple_adder(2);
        let input = 3 | 1 << 2;
        let out = simulate(&c, StateVector::basis(5, input).unwrap()).unwrap();
        let expect = 3 | 4 << 2;
        assert!((out.amplitude(expect).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depth_is_linear() {
        for u in 2..8 {
            assert_eq!(build_ripple_adder(u).depth(), 5 * u - 3);
        }
    }
}
