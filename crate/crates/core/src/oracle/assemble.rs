use std::collections::BTreeMap;

use super::{
    emit, emit_activation, emit_compare, emit_diffusion, emit_qbt, emit_qra, merge_parallel, qbt_height, unit_layers,
    CompareResult, Layers, Lit, Pool, QbtGeometry, Template, UnitSpec,
};
use crate::circuit::{Circuit, Gate, GateKind, Role};
use crate::instances::{Comparison, ConstraintSystem, Hypergraph, ProblemKind, UnitRef};
use crate::layout::{column_height, group_sat_negations, map_positions, partition_units};
use crate::program::{Program, ProgramBuilder, Section, StageLayout};

/// Oracle construction switches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    /// Build checking units in packs of at most `ñ` when `N > ratio · ñ`;
    /// `None` always uses the single-pass scheme.
    pub variant_ratio: Option<f64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { variant_ratio: Some(1.0) }
    }
}

impl OracleOptions {
    pub fn base() -> Self {
        OracleOptions { variant_ratio: None }
    }
}

/// Qubit map and structure counts of a built oracle or Grover program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleShape {
    /// Data qubits are `0..data`.
    pub data: usize,
    pub phase: usize,
    pub num_qubits: usize,
    /// Retained checking units `N`.
    pub units: usize,
    /// Matchings in the checking pass, `L`.
    pub matchings: usize,
    /// Packs of the variant scheme; zero for the single-pass scheme.
    pub packs: usize,
}

struct Pools {
    outs: Pool,
    temps: Pool,
    merge: Pool,
    carry: Pool,
    bits: Pool,
}

impl Pools {
    fn new() -> Self {
        Pools {
            outs: Pool::new(Role::AncillaCheck),
            temps: Pool::new(Role::AncillaCheck),
            merge: Pool::new(Role::AncillaMerge),
            carry: Pool::new(Role::AncillaCarry),
            bits: Pool::new(Role::AncillaMerge),
        }
    }

    fn reset(&mut self) {
        for p in [&mut self.outs, &mut self.temps, &mut self.merge, &mut self.carry, &mut self.bits] {
            p.reset();
        }
    }
}

struct Ctx<'a> {
    sys: &'a ConstraintSystem,
    data: Vec<usize>,
    phase: usize,
    s: usize,
    specs: Vec<(UnitRef, UnitSpec)>,
}

impl<'a> Ctx<'a> {
    fn new(sys: &'a ConstraintSystem, data: Vec<usize>, phase: usize) -> Self {
        let mut specs: Vec<(UnitRef, UnitSpec)> =
            sys.g_list.iter().enumerate().map(|(i, g)| (UnitRef::G(i), UnitSpec::from_g(g))).collect();
        for (gi, group) in sys.h_groups.iter().enumerate() {
            for (j, h) in group.units.iter().enumerate() {
                if let Some(spec) = UnitSpec::from_h(h) {
                    specs.push((UnitRef::H { group: gi, index: j }, spec));
                }
            }
        }
        Ctx { sys, data, phase, s: column_height(sys.n), specs }
    }

    fn n_g(&self) -> usize {
        self.sys.g_list.len()
    }

    /// Partition of units `ids` (indices into `specs`) into matchings.
    fn partition(&self, ids: &[usize], cap: Option<usize>) -> Vec<Vec<usize>> {
        let edges = ids.iter().map(|&i| self.specs[i].1.literals.iter().map(|l| l.variable).collect()).collect();
        let h = Hypergraph::new(self.sys.n, edges);
        partition_units(&h, cap).into_iter().map(|m| m.into_iter().map(|e| ids[e]).collect()).collect()
    }

    fn comparisons(&self) -> Vec<Comparison> {
        self.sys.h_groups.iter().map(|g| g.threshold.comparison(self.sys.heaviside)).collect()
    }

    fn decided_false(&self) -> bool {
        self.sys.trivially_false
            || self.comparisons().contains(&Comparison::Const(false))
            || self.sys.activation.as_ref().is_some_and(|a| {
                a.threshold.comparison(self.sys.heaviside) == Comparison::Const(false)
            })
    }
}

/// Checking layers for `matchings`; returns each unit's output qubits.
fn emit_check(pb: &mut ProgramBuilder, ctx: &Ctx, matchings: &[Vec<usize>], pools: &mut Pools) -> BTreeMap<usize, Vec<usize>> {
    let mut outs = BTreeMap::new();
    let sat = ctx.sys.kind == Some(ProblemKind::Sat);
    for m in matchings {
        let mut groups: Vec<(Template, Vec<usize>)> = Vec::new();
        for &u in m {
            let tpl = ctx.specs[u].1.template;
            match groups.iter_mut().find(|(t, _)| *t == tpl) {
                Some((_, v)) => v.push(u),
                None => groups.push((tpl, vec![u])),
            }
        }
        for (tpl, members) in groups {
            pools.temps.reset();
            let entries: Vec<(usize, Vec<_>)> =
                members.iter().map(|&u| (u, ctx.specs[u].1.literals.clone())).collect();
            let buckets = if sat && matches!(tpl, Template::Or(_)) { group_sat_negations(&entries) } else { vec![entries] };
            let block = pb.new_block();
            let (mut places, mut completing, mut layers) = (Vec::new(), Vec::new(), Layers::new());
            let mut col = 0i64;
            for bucket in buckets {
                let mut lists = Vec::new();
                for (u, lits) in &bucket {
                    let o = pools.outs.take_n(pb, tpl.outs());
                    let t = pools.temps.take_n(pb, tpl.temps());
                    let data: Vec<Lit> = lits.iter().map(|l| Lit { q: ctx.data[l.variable], neg: l.negated }).collect();
                    let spec = UnitSpec { literals: lits.clone(), ..ctx.specs[*u].1.clone() };
                    merge_parallel(&mut layers, unit_layers(&spec, &data, &o, &t));
                    lists.push(data.iter().map(|l| l.q).chain(o.iter().copied()).chain(t).collect::<Vec<_>>());
                    outs.insert(*u, o);
                }
                let p = map_positions(&lists, ctx.s).expect("units of a matching are disjoint");
                places.extend(p.positions.into_iter().map(|(q, g)| (q, g.offset(0, col))));
                completing.extend(p.completing.into_iter().map(|g| g.offset(0, col)));
                col += bucket.len().min(ctx.s) as i64;
            }
            pb.stage(block, StageLayout::Fixed { places, completing });
            emit(pb, layers);
        }
    }
    outs
}

fn qbt(pb: &mut ProgramBuilder, inputs: &[Lit], pool: &mut Pool) -> Lit {
    let block = pb.new_block();
    emit_qbt(pb, inputs, pool, QbtGeometry { block, base_row: 0, height: qbt_height(inputs.len()) })
}

/// Threshold bits of every `h` group and the activation check, each
/// computed with its adder tree already undone.
fn emit_groups(pb: &mut ProgramBuilder, ctx: &Ctx, outs: &BTreeMap<usize, Vec<usize>>, pools: &mut Pools) -> Vec<CompareResult> {
    let mut bits = Vec::new();
    let by_ref: BTreeMap<UnitRef, usize> = ctx.specs.iter().enumerate().map(|(i, (r, _))| (*r, i)).collect();
    for (gi, (group, cmp)) in ctx.sys.h_groups.iter().zip(ctx.comparisons()).enumerate() {
        let width = group.bits();
        let mut flips = Vec::new();
        let mut regs = Vec::new();
        for (j, h) in group.units.iter().enumerate() {
            let mut reg = match by_ref.get(&UnitRef::H { group: gi, index: j }) {
                Some(u) => outs[u].clone(),
                None => {
                    let l = h.literals[0];
                    if l.negated {
                        flips.push(ctx.data[l.variable]);
                    }
                    vec![ctx.data[l.variable]]
                }
            };
            while reg.len() < width {
                reg.push(pools.carry.take(pb));
            }
            regs.push(reg);
        }
        if regs.is_empty() {
            let zero = match cmp {
                Comparison::Const(b) => b,
                Comparison::Geq(k) | Comparison::Eq(k) => k == 0,
                Comparison::Leq(_) => true,
            };
            bits.push(CompareResult::Const(zero));
            continue;
        }
        pb.generic();
        pb.layer(GateKind::X, flips.iter().map(|&q| Gate::x(q)).collect());
        let before = pb.mark();
        let sum = emit_qra(pb, regs, &mut pools.carry);
        let after = pb.mark();
        bits.push(emit_compare(pb, &sum, cmp, &mut pools.merge));
        let section = pb.section();
        pb.append_inverse_range(before..after, section);
        pb.generic();
        pb.layer(GateKind::X, flips.iter().map(|&q| Gate::x(q)).collect());
    }
    if let Some(act) = &ctx.sys.activation {
        let cmp = act.threshold.comparison(ctx.sys.heaviside);
        bits.push(emit_activation(pb, act, &ctx.data, cmp, &mut pools.merge));
    }
    bits
}

/// Conjunction of `lits` and decided bits onto the phase qubit.
fn emit_phase(pb: &mut ProgramBuilder, ctx: &Ctx, lits: Vec<Lit>, decided: &[CompareResult], pools: &mut Pools) -> usize {
    if decided.contains(&CompareResult::Const(false)) {
        return pb.mark();
    }
    let root = match lits.len() {
        0 => None,
        _ => Some(qbt(pb, &lits, &mut pools.merge)),
    };
    let end = pb.mark();
    pb.set_section(Section::Phase);
    pb.generic();
    match root {
        Some(r) => pb.gate(Gate::cx((r.q, r.neg), ctx.phase)),
        None => pb.gate(Gate::x(ctx.phase)),
    }
    end
}

fn lits_of(bits: &[CompareResult]) -> Vec<Lit> {
    bits.iter().filter_map(|b| if let CompareResult::Lit(l) = b { Some(*l) } else { None }).collect()
}

/// Single-pass body: check, merge, phase, inverse.
fn emit_base(pb: &mut ProgramBuilder, ctx: &Ctx, pools: &mut Pools) -> usize {
    let ids: Vec<usize> = (0..ctx.specs.len()).collect();
    let matchings = ctx.partition(&ids, None);
    pb.set_section(Section::Check);
    let start = pb.mark();
    let outs = emit_check(pb, ctx, &matchings, pools);
    pb.set_section(Section::Merge);
    let g_outs: Vec<Lit> = (0..ctx.n_g()).map(|u| Lit::pos(outs[&u][0])).collect();
    let bits = emit_groups(pb, ctx, &outs, pools);
    let others = lits_of(&bits);
    let mut lits = g_outs;
    if !others.is_empty() && lits.len() > 1 {
        lits = vec![qbt(pb, &lits, &mut pools.merge)];
    }
    lits.extend(others);
    let end = emit_phase(pb, ctx, lits, &bits, pools);
    pb.append_inverse_range(start..end, Section::Uncompute);
    matchings.len()
}

/// Packs of consecutive matchings with at most `cap` units each.
fn packs(matchings: Vec<Vec<usize>>, cap: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut size = 0;
    for m in matchings {
        if out.is_empty() || size + m.len() > cap {
            out.push(Vec::new());
            size = 0;
        }
        size += m.len();
        out.last_mut().unwrap().push(m);
    }
    out
}

/// Computes one pack's conjunction, XORs it into `bit` and restores the
/// pack's ancillae.
fn emit_pack(pb: &mut ProgramBuilder, ctx: &Ctx, pack: &[Vec<usize>], bit: usize, pools: &mut Pools) {
    pools.outs.reset();
    pools.merge.reset();
    pb.set_section(Section::Check);
    let start = pb.mark();
    let outs = emit_check(pb, ctx, pack, pools);
    pb.set_section(Section::Merge);
    let lits: Vec<Lit> = outs.values().map(|o| Lit::pos(o[0])).collect();
    let root = qbt(pb, &lits, &mut pools.merge);
    let end = pb.mark();
    pb.generic();
    pb.gate(Gate::cx((root.q, root.neg), bit));
    pb.append_inverse_range(start..end, Section::Uncompute);
}

/// Variant body: `g` units in packs, each folded into one bit.
fn emit_variant(pb: &mut ProgramBuilder, ctx: &Ctx, pools: &mut Pools) -> (usize, usize) {
    let n = ctx.sys.n.max(1);
    let g_ids: Vec<usize> = (0..ctx.n_g()).collect();
    let matchings = ctx.partition(&g_ids, Some(n));
    let l = matchings.len();
    let packs = packs(matchings, n);
    let pack_bits = pools.bits.take_n(pb, packs.len());
    let mut pack_blocks = Vec::new();
    for (p, &b) in packs.iter().zip(&pack_bits) {
        pack_blocks.push(pb.next_block());
        emit_pack(pb, ctx, p, b, pools);
    }
    pools.outs.reset();
    pools.merge.reset();
    let h_ids: Vec<usize> = (ctx.n_g()..ctx.specs.len()).collect();
    let h_matchings = ctx.partition(&h_ids, None);
    pb.set_section(Section::Check);
    let start = pb.mark();
    let outs = emit_check(pb, ctx, &h_matchings, pools);
    pb.set_section(Section::Merge);
    let bits = emit_groups(pb, ctx, &outs, pools);
    let mut lits: Vec<Lit> = pack_bits.iter().map(|&b| Lit::pos(b)).collect();
    lits.extend(lits_of(&bits));
    let end = emit_phase(pb, ctx, lits, &bits, pools);
    pb.append_inverse_range(start..end, Section::Uncompute);
    let resume = pb.next_block();
    for ((p, &b), &blk) in packs.iter().zip(&pack_bits).zip(&pack_blocks) {
        pb.set_next_block(blk);
        emit_pack(pb, ctx, p, b, pools);
    }
    pb.set_next_block(resume.max(pb.next_block()));
    (l + h_matchings.len(), packs.len())
}

/// Matchings of `g` units grouped the way the oracle executes them: one
/// pack for the single-pass scheme, packs of at most `ñ` units otherwise.
pub fn variant_packs(sys: &ConstraintSystem, opts: OracleOptions) -> Vec<Vec<Vec<usize>>> {
    let (_, data, phase) = setup(sys);
    let ctx = Ctx::new(sys, data, phase);
    let g_ids: Vec<usize> = (0..ctx.n_g()).collect();
    let n = ctx.sys.n.max(1);
    match opts.variant_ratio {
        Some(r) if ctx.n_g() as f64 > r * n as f64 => packs(ctx.partition(&g_ids, Some(n)), n),
        _ => vec![ctx.partition(&g_ids, None)],
    }
}

/// Oracle body assuming the phase qubit holds `|−⟩`; returns
/// `(matchings, packs)`.
fn emit_body(pb: &mut ProgramBuilder, ctx: &Ctx, pools: &mut Pools, opts: OracleOptions) -> (usize, usize) {
    if ctx.decided_false() {
        return (0, 0);
    }
    let n = ctx.sys.n.max(1) as f64;
    match opts.variant_ratio {
        Some(r) if ctx.n_g() as f64 > r * n => emit_variant(pb, ctx, pools),
        _ => (emit_base(pb, ctx, pools), 0),
    }
}

fn setup(sys: &ConstraintSystem) -> (ProgramBuilder, Vec<usize>, usize) {
    let mut pb = ProgramBuilder::new();
    let data = pb.alloc_n(Role::Data, sys.n);
    let phase = pb.alloc(Role::AncillaMerge);
    (pb, data, phase)
}

fn shape(pb: &ProgramBuilder, ctx: &Ctx, counts: (usize, usize)) -> OracleShape {
    OracleShape {
        data: ctx.sys.n,
        phase: ctx.phase,
        num_qubits: pb.num_qubits(),
        units: ctx.specs.len(),
        matchings: counts.0,
        packs: counts.1,
    }
}

/// The oracle with its `|−⟩` preparation and release: on data states it
/// acts as `|z⟩ ↦ (−1)^{f(z)} |z⟩`, and every ancilla returns to `|0⟩`.
pub fn oracle_program(sys: &ConstraintSystem, opts: OracleOptions) -> (Program, OracleShape) {
    let (mut pb, data, phase) = setup(sys);
    let ctx = Ctx::new(sys, data, phase);
    let mut pools = Pools::new();
    pb.set_section(Section::Init);
    pb.generic();
    pb.gate(Gate::x(phase));
    pb.gate(Gate::h(phase));
    let counts = emit_body(&mut pb, &ctx, &mut pools, opts);
    pb.set_section(Section::Init);
    pb.generic();
    pb.gate(Gate::h(phase));
    pb.gate(Gate::x(phase));
    let s = shape(&pb, &ctx, counts);
    (pb.finish(), s)
}

pub fn build_oracle(sys: &ConstraintSystem, opts: OracleOptions) -> Circuit {
    oracle_program(sys, opts).0.circuit
}

/// Grover search: uniform superposition over free data qubits, then
/// `iterations` rounds of oracle and diffusion. The phase qubit is released
/// at the end, so all ancillae finish in `|0⟩`.
pub fn grover_program(sys: &ConstraintSystem, iterations: usize, opts: OracleOptions) -> (Program, OracleShape) {
    let (mut pb, data, phase) = setup(sys);
    let free: Vec<usize> = sys.free_variables().into_iter().map(|v| data[v]).collect();
    let ctx = Ctx::new(sys, data, phase);
    let mut pools = Pools::new();
    pb.set_section(Section::Init);
    pb.generic();
    pb.gate(Gate::x(phase));
    pb.generic();
    pb.layer(GateKind::H, free.iter().chain([&phase]).map(|&q| Gate::h(q)).collect());
    let first_block = pb.next_block();
    let mut counts = (0, 0);
    let mut last_block = first_block;
    for _ in 0..iterations {
        pb.set_next_block(first_block);
        pools.reset();
        counts = emit_body(&mut pb, &ctx, &mut pools, opts);
        pools.merge.reset();
        pb.set_section(Section::Diffusion);
        emit_diffusion(&mut pb, &free, &mut pools.merge);
        last_block = last_block.max(pb.next_block());
    }
    pb.set_next_block(last_block);
    pb.set_section(Section::Init);
    pb.generic();
    pb.gate(Gate::h(phase));
    pb.gate(Gate::x(phase));
    let s = shape(&pb, &ctx, counts);
    (pb.finish(), s)
}

pub fn build_grover(sys: &ConstraintSystem, iterations: usize, opts: OracleOptions) -> Circuit {
    grover_program(sys, iterations, opts).0.circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate::desk_suite;
    use crate::instances::{evaluate_f, lower, regularize};
    use crate::sim::{BasisKey, SparseState};

    fn assert_diagonal(sys: &ConstraintSystem, opts: OracleOptions) {
        let c = build_oracle(sys, opts);
        let free = sys.free_variables();
        for z in 0u64..1 << free.len() {
            let mut bits = vec![false; sys.n];
            for (i, &v) in free.iter().enumerate() {
                bits[v] = z >> i & 1 == 1;
            }
            let key = BasisKey::from_bits(bits.iter().copied().enumerate());
            let mut s = SparseState::basis(c.num_qubits(), key).unwrap();
            s.run(&c).unwrap();
            let want = if evaluate_f(sys, &bits).unwrap() { -1.0 } else { 1.0 };
            let amp = s.amplitude(&key);
            assert!((amp.re - want).abs() < 1e-9 && amp.im.abs() < 1e-9, "{:?} z={bits:?} amp={amp}", sys.kind);
            assert!((s.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn every_kind_is_diagonal() {
        for inst in desk_suite(11, 2, &[4, 5]) {
            let sys = lower(&regularize(&inst)).unwrap();
            assert_diagonal(&sys, OracleOptions::base());
            assert_diagonal(&sys, OracleOptions::default());
        }
    }

    #[test]
    fn empty_system_negates_everything() {
        let sys = ConstraintSystem::empty(2);
        assert_diagonal(&sys, OracleOptions::base());
    }
}
