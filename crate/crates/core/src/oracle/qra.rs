use super::{adder_layers, emit, merge_parallel, Layers, Pool};
use crate::circuit::{Circuit, Role};
use crate::grid::GridPos;
use crate::program::{Program, ProgramBuilder, Section, StageLayout};

/// Ancilla count and result width of a tree over `count` registers of
/// `width` bits: one carry per adder plus one zero pad per odd level.
pub fn qra_shape(count: usize, width: usize) -> (usize, usize) {
    let (mut regs, mut w, mut anc) = (count, width, 0);
    while regs > 1 {
        anc += regs / 2 + regs % 2;
        regs = regs.div_ceil(2);
        w += 1;
    }
    (anc, w)
}

/// One level of the tree as (adders `(a, b, carry)`, padded leftover).
type Level = (Vec<(Vec<usize>, Vec<usize>, usize)>, Option<(Vec<usize>, usize)>);

fn plan(registers: Vec<Vec<usize>>, mut take: impl FnMut() -> usize) -> (Vec<Level>, Vec<usize>) {
    let mut regs = registers;
    let mut levels = Vec::new();
    while regs.len() > 1 {
        let mut adders = Vec::new();
        let mut next = Vec::new();
        for pair in regs.chunks_exact(2) {
            let z = take();
            adders.push((pair[0].clone(), pair[1].clone(), z));
            let mut sum = pair[1].clone();
            sum.push(z);
            next.push(sum);
        }
        let mut leftover = None;
        if regs.len() % 2 == 1 {
            let last = regs[regs.len() - 1].clone();
            let pad = take();
            let mut widened = last.clone();
            widened.push(pad);
            next.push(widened);
            leftover = Some((last, pad));
        }
        levels.push((adders, leftover));
        regs = next;
    }
    (levels, regs.pop().unwrap_or_default())
}

/// Same-level adders merged layer by layer.
fn level_layers(adders: &[(Vec<usize>, Vec<usize>, usize)]) -> Layers {
    let mut merged: Layers = Vec::new();
    for (a, b, z) in adders {
        merge_parallel(&mut merged, adder_layers(a, b, *z));
    }
    merged
}

/// Gate sequence of the tree, level by level; returns it with the result
/// register. Used inside checking units, where no layout is attached.
pub(crate) fn qra_layers(registers: Vec<Vec<usize>>, take: impl FnMut() -> usize) -> (Layers, Vec<usize>) {
    let (levels, result) = plan(registers, take);
    let layers = levels.iter().flat_map(|(adders, _)| level_layers(adders)).collect();
    (layers, result)
}

/// Emits the recursive adder over equal-width little-endian registers and
/// returns the sum register. Level `ℓ` adds pairs with width `b+ℓ-1`
/// adders side by side in one row band; the sum of each adder (its target
/// register plus carry) moves down to serve the next level.
pub fn emit_qra(pb: &mut ProgramBuilder, registers: Vec<Vec<usize>>, pool: &mut Pool) -> Vec<usize> {
    assert!(!registers.is_empty(), "QRA needs at least one register");
    let width = registers[0].len();
    assert!(registers.iter().all(|r| r.len() == width), "QRA inputs must share a width");
    if registers.len() == 1 {
        return registers.into_iter().next().unwrap();
    }
    let block = pb.new_block();
    let (levels, result) = {
        let mut take = || pool.take(pb);
        plan(registers, &mut take)
    };
    let mut band = 0i64;
    for (adders, leftover) in &levels {
        let u = adders[0].0.len() as i64;
        let mut places = Vec::new();
        for (col, (a, b, z)) in adders.iter().enumerate() {
            let col = col as i64;
            for (i, &q) in a.iter().enumerate() {
                places.push((q, GridPos::new(band + i as i64, col)));
            }
            for (i, &q) in b.iter().enumerate() {
                places.push((q, GridPos::new(band + u + i as i64, col)));
            }
            places.push((*z, GridPos::new(band + 2 * u, col)));
        }
        if let Some((_, pad)) = leftover {
            places.push((*pad, GridPos::new(band + 2 * u + 1, adders.len() as i64)));
        }
        pb.stage(block, StageLayout::Fixed { places, completing: Vec::new() });
        emit(pb, level_layers(adders));
        band += 2 * u + 2;
    }
    result
}

/// Tree over `count` fresh registers of width `b`: inputs are qubits
/// `0..count*b`, register `i` at `i*b..(i+1)*b`.
pub fn qra_program(count: usize, b: usize) -> (Program, Vec<usize>) {
    let mut pb = ProgramBuilder::new();
    pb.set_section(Section::Merge);
    let regs: Vec<Vec<usize>> = (0..count).map(|_| pb.alloc_n(Role::AncillaCheck, b)).collect();
    let mut pool = Pool::new(Role::AncillaCarry);
    let result = emit_qra(&mut pb, regs, &mut pool);
    (pb.finish(), result)
}

pub fn build_qra(count: usize, b: usize) -> (Circuit, Vec<usize>) {
    let (p, r) = qra_program(count, b);
    (p.circuit, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts() {
        assert_eq!(qra_shape(1, 3), (0, 3));
        assert_eq!(qra_shape(2, 1), (1, 2));
        assert_eq!(qra_shape(4, 1), (3, 3));
        assert_eq!(qra_shape(3, 1), (3, 3));
        assert_eq!(qra_shape(1024, 2), (1023, 12));
    }

    #[test]
    fn program_matches_shape() {
        for (n, b) in [(2, 1), (3, 2), (4, 1), (7, 3)] {
            let (c, r) = build_qra(n, b);
            let (anc, w) = qra_shape(n, b);
            assert_eq!(c.num_qubits(), n * b + anc);
            assert_eq!(r.len(), w);
        }
    }
}
