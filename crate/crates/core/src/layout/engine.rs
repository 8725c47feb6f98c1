//! Program to schedule: block regions, move planning and layer splitting.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::moves::{plan_moves, Occupancy};
use crate::circuit::{Gate, GateKind, Layer, QubitId, Role};
use crate::error::LayoutError;
use crate::grid::{is_partial_product_form, GridPos};
use crate::instances::ConstraintSystem;
use crate::oracle::{grover_program, oracle_program, qbt_program, qra_program, OracleOptions};
use crate::program::{Program, StageLayout};
use crate::schedule::{Schedule, SectionSpan, Step};

pub use crate::oracle::variant_packs;

/// Rows reserved for a `PerLayer` block: one per operand.
const GENERIC_ROWS: i64 = 3;

struct Engine {
    occ: Occupancy,
    completing: HashSet<usize>,
    steps: Vec<Step>,
}

impl Engine {
    fn executable(&self, kind: GateKind, gates: &[Gate]) -> bool {
        let sites: Vec<Vec<GridPos>> = (0..kind.arity())
            .map(|j| gates.iter().map(|g| self.occ.position(g.qubits[j]).expect("every qubit has a site")).collect())
            .collect();
        for (j, pts) in sites.iter().enumerate() {
            let own: HashSet<usize> = gates.iter().map(|g| g.qubits[j]).collect();
            if self.occ.foreign_in(pts, |q| own.contains(&q) || self.completing.contains(&q)).is_some() {
                return false;
            }
        }
        (1..kind.arity()).all(|j| {
            let pairs: Vec<_> = sites[0].iter().copied().zip(sites[j].iter().copied()).collect();
            is_partial_product_form(&pairs)
        })
    }

    /// Emits `gates` as few layers as first-fit allows.
    fn emit_split(&mut self, kind: GateKind, gates: Vec<Gate>) {
        if gates.is_empty() {
            return;
        }
        if self.executable(kind, &gates) {
            self.steps.push(Step::Gates { kind, gates });
            return;
        }
        let mut bins: Vec<Vec<Gate>> = Vec::new();
        for g in gates {
            let slot = bins.iter_mut().position(|b| {
                b.push(g.clone());
                let ok = self.executable(kind, b);
                b.pop();
                ok
            });
            match slot {
                Some(i) => bins[i].push(g),
                None => bins.push(vec![g]),
            }
        }
        self.steps.extend(bins.into_iter().map(|gates| Step::Gates { kind, gates }));
    }

    /// Negated operands become X layers around the positive layer.
    fn emit_layer(&mut self, layer: &Layer) {
        let flips: Vec<Gate> = layer.gates().iter().flat_map(Gate::negated_operands).map(Gate::x).collect();
        let positive: Vec<Gate> = layer.gates().iter().map(Gate::positive).collect();
        self.emit_split(GateKind::X, flips.clone());
        self.emit_split(layer.kind(), positive);
        self.emit_split(GateKind::X, flips);
    }

    fn fits_in_place(&self, layer: &Layer) -> bool {
        let flips: Vec<Gate> = layer.gates().iter().flat_map(Gate::negated_operands).map(Gate::x).collect();
        let positive: Vec<Gate> = layer.gates().iter().map(Gate::positive).collect();
        (flips.is_empty() || self.executable(GateKind::X, &flips)) && self.executable(layer.kind(), &positive)
    }

    fn move_to(&mut self, targets: &[(usize, GridPos)]) -> Result<(), LayoutError> {
        let phases = plan_moves(&mut self.occ, targets)?;
        self.steps.extend(phases.into_iter().map(Step::Move));
        Ok(())
    }
}

/// Lays a staged program out on the grid.
///
/// Every block gets its own band of rows. A `Fixed` stage first moves its
/// listed atoms (and completing atoms) to their sites, then runs its layers,
/// split where an operand grid is not clean. A `PerLayer` stage runs a layer
/// in place when possible and otherwise lines its operands up in fresh
/// columns of the block, operand `j` on row `j`.
pub fn transpile(program: &Program) -> Result<Schedule, LayoutError> {
    let circuit = &program.circuit;
    let mut qubits: Vec<QubitId> = circuit.qubits().to_vec();

    let mut extent: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
    for st in &program.stages {
        let e = extent.entry(st.block).or_insert((0, 0));
        match st.layout.as_ref() {
            StageLayout::Fixed { places, completing } => {
                for p in places.iter().map(|(_, p)| p).chain(completing) {
                    e.0 = e.0.max(p.x + 1);
                    e.1 = e.1.max(p.y + 1);
                }
            }
            StageLayout::PerLayer => e.0 = e.0.max(GENERIC_ROWS),
        }
    }
    let mut origin: HashMap<usize, i64> = HashMap::new();
    let mut cursor = 0;
    for (&b, &(h, _)) in &extent {
        origin.insert(b, cursor);
        cursor += h + 1;
    }
    let width = extent.values().map(|e| e.1).max().unwrap_or(0).max(8);
    let abs = |b: usize, p: GridPos| p.offset(origin[&b], 0);

    let mut completing_ids: HashMap<(usize, GridPos), usize> = HashMap::new();
    let mut stage_completing: Vec<Vec<(usize, GridPos)>> = Vec::new();
    for st in &program.stages {
        let mut v = Vec::new();
        if let StageLayout::Fixed { completing, .. } = st.layout.as_ref() {
            for &p in completing {
                let q = *completing_ids.entry((st.block, p)).or_insert_with(|| {
                    qubits.push(QubitId { index: qubits.len(), role: Role::Completing });
                    qubits.len() - 1
                });
                v.push((q, abs(st.block, p)));
            }
        }
        stage_completing.push(v);
    }

    let mut eng = Engine {
        occ: Occupancy::new(cursor + 1, width),
        completing: completing_ids.values().copied().collect(),
        steps: Vec::new(),
    };
    let mut placed: HashSet<usize> = HashSet::new();
    for (st, comp) in program.stages.iter().zip(&stage_completing) {
        if let StageLayout::Fixed { places, .. } = st.layout.as_ref() {
            let sites = places.iter().map(|&(q, p)| (q, abs(st.block, p))).chain(comp.iter().copied());
            for (q, p) in sites {
                if !placed.contains(&q) && eng.occ.occupant(p).is_none() {
                    eng.occ.place(q, p);
                    placed.insert(q);
                }
            }
        }
    }
    for q in 0..qubits.len() {
        if placed.insert(q) {
            let c = eng.occ.free_cell(&HashSet::new());
            eng.occ.place(q, c);
        }
    }
    let initial: BTreeMap<usize, GridPos> = (0..qubits.len()).map(|q| (q, eng.occ.position(q).unwrap())).collect();

    let mut colbase: HashMap<usize, i64> = HashMap::new();
    let mut spans = Vec::new();
    let mut next_layer = 0;
    for (st, comp) in program.stages.iter().zip(&stage_completing) {
        debug_assert_eq!(st.layers.start, next_layer, "stages must cover the circuit in order");
        next_layer = st.layers.end;
        let start = eng.steps.len();
        let layers = &circuit.layers()[st.layers.clone()];
        match st.layout.as_ref() {
            StageLayout::Fixed { places, .. } => {
                let mut targets: Vec<(usize, GridPos)> = places.iter().map(|&(q, p)| (q, abs(st.block, p))).collect();
                targets.extend(comp.iter().copied());
                eng.move_to(&targets)?;
                for l in layers {
                    eng.emit_layer(l);
                }
            }
            StageLayout::PerLayer => {
                for l in layers {
                    if !eng.fits_in_place(l) {
                        let base = colbase.entry(st.block).or_insert(0);
                        let targets: Vec<(usize, GridPos)> = l
                            .gates()
                            .iter()
                            .enumerate()
                            .flat_map(|(i, g)| {
                                let col = *base + i as i64;
                                g.qubits.iter().enumerate().map(move |(j, &q)| (q, GridPos::new(j as i64, col)))
                            })
                            .map(|(q, p)| (q, abs(st.block, p)))
                            .collect();
                        *base += l.gates().len() as i64;
                        eng.move_to(&targets)?;
                    }
                    eng.emit_layer(l);
                }
            }
        }
        spans.push(SectionSpan { section: st.section, steps: start..eng.steps.len() });
    }
    Ok(Schedule { qubits, initial, steps: eng.steps, spans })
}

pub fn transpile_oracle(sys: &ConstraintSystem, opts: OracleOptions) -> Result<Schedule, LayoutError> {
    transpile(&oracle_program(sys, opts).0)
}

pub fn transpile_grover(sys: &ConstraintSystem, iterations: usize, opts: OracleOptions) -> Result<Schedule, LayoutError> {
    transpile(&grover_program(sys, iterations, opts).0)
}

/// AND tree over `n` inputs.
pub fn layout_qbt(n: usize) -> Result<Schedule, LayoutError> {
    transpile(&qbt_program(n).0)
}

/// Adder tree over `count` registers of width `b`.
pub fn layout_qra(count: usize, b: usize) -> Result<Schedule, LayoutError> {
    transpile(&qra_program(count, b).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate::desk_suite;
    use crate::instances::{lower, regularize, ProblemKind};
    use crate::schedule::validate_schedule;

    fn assert_valid(s: &Schedule) {
        let r = validate_schedule(s);
        assert!(r.passed(), "{:?}", r.first_violation);
    }

    #[test]
    fn qbt_levels_are_single_layers() {
        let s = layout_qbt(16).unwrap();
        assert_valid(&s);
        assert_eq!(s.depth(), 4);
        assert_eq!(layout_qbt(2).unwrap().depth(), 1);
    }

    #[test]
    fn qra_lays_out() {
        for (n, b) in [(2, 1), (4, 1), (5, 2), (8, 3)] {
            assert_valid(&layout_qra(n, b).unwrap());
        }
    }

    #[test]
    fn desk_oracles_validate() {
        for inst in desk_suite(5, 1, &[5, 7]) {
            let sys = lower(&regularize(&inst)).unwrap();
            for opts in [OracleOptions::base(), OracleOptions::default()] {
                let s = transpile_oracle(&sys, opts).unwrap();
                let r = validate_schedule(&s);
                assert!(r.passed(), "{}: {:?}", inst.kind, r.first_violation);
            }
        }
    }

    #[test]
    fn grover_schedule_validates() {
        let inst = desk_suite(9, 1, &[5]).into_iter().find(|i| i.kind == ProblemKind::Sat).unwrap();
        let sys = lower(&regularize(&inst)).unwrap();
        assert_valid(&transpile_grover(&sys, 2, OracleOptions::default()).unwrap());
    }
}
