use super::{emit_qbt, qbt_height, Lit, Pool, QbtGeometry};
use crate::circuit::{Circuit, Gate, GateKind, Role};
use crate::grid::GridPos;
use crate::program::{ProgramBuilder, Section, StageLayout};

/// Reflection about the uniform superposition of `free`:
/// `H X · (2|1…1⟩⟨1…1| − I) · X H`. The reflection is a QBT over all of
/// `free` with `X Z X` on its root, then the tree undone.
pub fn emit_diffusion(pb: &mut ProgramBuilder, free: &[usize], pool: &mut Pool) {
    if free.is_empty() {
        return;
    }
    let height = qbt_height(free.len());
    let block = pb.new_block();
    let places = free
        .iter()
        .enumerate()
        .map(|(i, &q)| (q, GridPos::new((i % height) as i64, (i / height) as i64)))
        .collect();
    let rect = StageLayout::Fixed { places, completing: Vec::new() };
    let broadcast = |pb: &mut ProgramBuilder, kind: GateKind| {
        let gate = if kind == GateKind::H { Gate::h } else { Gate::x };
        pb.layer(kind, free.iter().map(|&q| gate(q)).collect());
    };
    pb.stage(block, rect.clone());
    broadcast(pb, GateKind::H);
    broadcast(pb, GateKind::X);
    let start = pb.mark();
    let inputs: Vec<Lit> = free.iter().map(|&q| Lit::pos(q)).collect();
    let root = emit_qbt(pb, &inputs, pool, QbtGeometry { block, base_row: 0, height });
    let end = pb.mark();
    pb.generic();
    pb.gate(Gate::x(root.q));
    pb.gate(Gate::z(root.q));
    pb.gate(Gate::x(root.q));
    let section = pb.section();
    pb.append_inverse_range(start..end, section);
    pb.stage(block, rect);
    broadcast(pb, GateKind::X);
    broadcast(pb, GateKind::H);
}

/// Diffusion on data qubits `0..n`.
pub fn build_diffusion(n: usize) -> Circuit {
    let mut pb = ProgramBuilder::new();
    pb.set_section(Section::Diffusion);
    let data = pb.alloc_n(Role::Data, n);
    let mut pool = Pool::new(Role::AncillaMerge);
    emit_diffusion(&mut pb, &data, &mut pool);
    pb.finish().circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::dense_unitary;
    use num_complex::Complex64;

    #[test]
    fn matches_reflection() {
        for n in 1..=5usize {
            let c = build_diffusion(n);
            let u = dense_unitary(&c).unwrap();
            let dim = 1usize << n;
            for r in 0..dim {
                for col in 0..dim {
                    let want = 2.0 / dim as f64 - if r == col { 1.0 } else { 0.0 };
                    let got: Complex64 = u.get(r, col);
                    assert!((got - want).norm() < 1e-10, "n={n} ({r},{col}) {got}");
                }
            }
        }
    }
}
