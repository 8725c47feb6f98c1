use super::{Lit, Pool};
use crate::circuit::{Circuit, Gate, GateKind, Role};
use crate::grid::GridPos;
use crate::program::{Program, ProgramBuilder, Section, StageLayout};

/// Where a tree is laid out: rows from `base_row` of `block`, inputs
/// column-major in columns of `height`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QbtGeometry {
    pub block: usize,
    pub base_row: i64,
    pub height: usize,
}

/// Input column height for `count` leaves: the power of two nearest
/// `√count`, at least 2.
pub fn qbt_height(count: usize) -> usize {
    let root = (count as f64).sqrt();
    let mut h = 2usize;
    while (h * 2) as f64 <= root * std::f64::consts::SQRT_2 {
        h *= 2;
    }
    h
}

/// Emits the AND tree over `inputs` and returns the literal holding the
/// conjunction.
///
/// Each level pairs rows `(2k, 2k+1)` of every column into a fresh row band
/// below, as one broadcast CCX layer. An odd tail item is parked one column
/// to the right and joins the next level unchanged. When the columns reach
/// height one, the right half is folded under the left half.
pub fn emit_qbt(pb: &mut ProgramBuilder, inputs: &[Lit], pool: &mut Pool, geom: QbtGeometry) -> Lit {
    assert!(!inputs.is_empty(), "QBT needs at least one input");
    let mut h = geom.height.max(1);
    let mut cols: Vec<Vec<Lit>> = inputs.chunks(h).map(<[Lit]>::to_vec).collect();
    let mut band = geom.base_row;
    while cols.iter().map(Vec::len).sum::<usize>() > 1 {
        if cols.len() > 1 && cols.iter().all(|c| c.len() == 1) {
            let half = cols.len().div_ceil(2);
            cols = (0..half)
                .map(|c| {
                    let mut v = cols[c].clone();
                    if let Some(r) = cols.get(c + half) {
                        v.extend(r);
                    }
                    v
                })
                .collect();
            h = 2;
        }
        let w = cols.len() as i64;
        let mut places = Vec::new();
        let mut gates = Vec::new();
        let mut next = Vec::with_capacity(cols.len());
        for (c, col) in cols.iter().enumerate() {
            let c = c as i64;
            let mut nc = Vec::with_capacity(col.len().div_ceil(2));
            for k in 0..col.len() / 2 {
                let (a, b) = (col[2 * k], col[2 * k + 1]);
                let t = pool.take(pb);
                gates.push(Gate::ccx(a.ctl(), b.ctl(), t));
                let k = k as i64;
                places.push((a.q, GridPos::new(band + 2 * k, c)));
                places.push((b.q, GridPos::new(band + 2 * k + 1, c)));
                places.push((t, GridPos::new(band + h as i64 + k, c)));
                nc.push(Lit::pos(t));
            }
            if col.len() % 2 == 1 {
                let last = col[col.len() - 1];
                places.push((last.q, GridPos::new(band + h as i64 + (col.len() / 2) as i64, w)));
                nc.push(last);
            }
            next.push(nc);
        }
        pb.stage(geom.block, StageLayout::Fixed { places, completing: Vec::new() });
        pb.layer(GateKind::CCX, gates);
        cols = next;
        band += h as i64;
        h = h.div_ceil(2);
    }
    cols[0][0]
}

/// A tree over fresh inputs `0..n` as a program; returns the root literal.
pub fn qbt_program(n: usize) -> (Program, Lit) {
    let mut pb = ProgramBuilder::new();
    pb.set_section(Section::Merge);
    let inputs: Vec<Lit> = pb.alloc_n(Role::AncillaCheck, n).into_iter().map(Lit::pos).collect();
    let mut pool = Pool::new(Role::AncillaMerge);
    let block = pb.new_block();
    let root = emit_qbt(&mut pb, &inputs, &mut pool, QbtGeometry { block, base_row: 0, height: qbt_height(n) });
    (pb.finish(), root)
}

/// AND tree over inputs `0..n`; the returned qubit holds the conjunction.
pub fn build_qbt(n: usize) -> (Circuit, usize) {
    let (p, root) = qbt_program(n);
    (p.circuit, root.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SparseState;
    use crate::sim::BasisKey;

    #[test]
    fn degenerate_tree_is_empty() {
        let (c, root) = build_qbt(1);
        assert_eq!((c.depth(), root), (0, 0));
    }

    #[test]
    fn level_count_is_logarithmic() {
        for (n, levels) in [(2, 1), (4, 2), (8, 3), (16, 4), (5, 3), (1024, 10), (1000, 10)] {
            let (c, _) = build_qbt(n);
            assert_eq!(c.depth(), levels, "n={n}");
            assert_eq!(c.num_qubits(), 2 * n - 1);
        }
    }

    #[test]
    fn computes_conjunction() {
        for n in 1..=9usize {
            let (c, root) = build_qbt(n);
            for z in 0u64..1 << n {
                let mut s = SparseState::basis(c.num_qubits(), BasisKey::from_bits((0..n).map(|i| (i, z >> i & 1 == 1))))
                    .unwrap();
                s.run(&c).unwrap();
                let key = s.entries()[0].0;
                assert_eq!(key.bit(root), z == (1 << n) - 1, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn heights_are_powers_of_two() {
        assert_eq!(qbt_height(1), 2);
        assert_eq!(qbt_height(16), 4);
        assert_eq!(qbt_height(64), 8);
        assert_eq!(qbt_height(1 << 14), 128);
    }
}
