use super::{and_gates, asap, emit, emit_compare, emit_qra, CompareResult, Lit, Pool};
use crate::circuit::{Circuit, Gate, Role};
use crate::error::OracleError;
use crate::instances::{lower, ActivationCheck, Comparison, ProblemInstance, ProblemKind};
use crate::program::{ProgramBuilder, Section};

/// Propagates activation from the start vertex along selected edges and
/// compares the count of active vertices with the threshold.
///
/// Each round writes a fresh bank: vertex `v` becomes active if it was, or
/// if a selected edge joins it to an active vertex. The OR is a negated AND
/// tree over the terms; edge terms are CCX products in scratch qubits that
/// are cleared again within the round. Banks stay live until the caller
/// uncomputes the whole merge.
pub fn emit_activation(
    pb: &mut ProgramBuilder,
    act: &ActivationCheck,
    data: &[usize],
    comparison: Comparison,
    pool: &mut Pool,
) -> CompareResult {
    let n = act.vertices;
    let mut bank: Vec<Option<usize>> = vec![None; n];
    let start = pool.take(pb);
    pb.generic();
    pb.gate(Gate::x(start));
    bank[act.start] = Some(start);
    for _ in 0..act.rounds {
        let mut next = vec![None; n];
        let mut gates = Vec::new();
        for (v, slot) in next.iter_mut().enumerate() {
            let mut terms: Vec<Lit> = bank[v].map(Lit::pos).into_iter().collect();
            let mut products = Vec::new();
            for &(a, b, e) in &act.edges {
                let u = if a == v { b } else if b == v { a } else { continue };
                if let Some(src) = bank[u] {
                    let t = pool.take(pb);
                    products.push(Gate::ccx((data[e], false), (src, false), t));
                    terms.push(Lit::pos(t));
                }
            }
            if terms.is_empty() {
                continue;
            }
            let out = pool.take(pb);
            let flipped: Vec<Lit> = terms.iter().map(|l| l.not()).collect();
            let temps = pool.take_n(pb, terms.len().saturating_sub(2));
            gates.extend(products.iter().cloned());
            gates.extend(and_gates(&flipped, out, &temps));
            gates.push(Gate::x(out));
            gates.extend(products.into_iter().rev());
            *slot = Some(out);
        }
        pb.generic();
        emit(pb, asap(gates));
        bank = next;
    }
    let regs: Vec<Vec<usize>> = bank.iter().flatten().map(|&q| vec![q]).collect();
    let before = pb.mark();
    let sum = emit_qra(pb, regs, pool);
    let after = pb.mark();
    let bit = emit_compare(pb, &sum, comparison, pool);
    let section = pb.section();
    pb.append_inverse_range(before..after, section);
    bit
}

/// The connectivity check of a Hamiltonian-cycle instance on its own:
/// edge-selection qubits `0..e`, and the returned qubit ends holding the
/// outcome of the activation count test.
pub fn build_hcp_connectivity(instance: &ProblemInstance) -> Result<(Circuit, usize), OracleError> {
    if instance.kind != ProblemKind::Hcp {
        return Err(OracleError::Invalid(format!("{} is not a Hamiltonian cycle instance", instance.kind)));
    }
    let sys = lower(instance).map_err(|e| OracleError::Invalid(e.to_string()))?;
    let act = sys.activation.as_ref().ok_or_else(|| OracleError::Invalid("no activation check".into()))?;
    let mut pb = ProgramBuilder::new();
    pb.set_section(Section::Merge);
    let data = pb.alloc_n(Role::Data, sys.n);
    let mut pool = Pool::new(Role::AncillaMerge);
    let out = match emit_activation(&mut pb, act, &data, act.threshold.comparison(sys.heaviside), &mut pool) {
        CompareResult::Const(b) => {
            let q = pool.take(&mut pb);
            if b {
                pb.gate(Gate::x(q));
            }
            q
        }
        CompareResult::Lit(l) => {
            if l.neg {
                pb.gate(Gate::x(l.q));
            }
            l.q
        }
    };
    Ok((pb.finish().circuit, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::evaluate_f;
    use crate::sim::{BasisKey, SparseState};

    fn run(inst: &ProblemInstance, selected: &[usize]) -> bool {
        let (c, out) = build_hcp_connectivity(inst).unwrap();
        let key = BasisKey::from_bits(selected.iter().map(|&e| (e, true)));
        let mut s = SparseState::basis(c.num_qubits(), key).unwrap();
        s.run(&c).unwrap();
        s.entries()[0].0.bit(out)
    }

    #[test]
    fn triangle_activates_everything() {
        let inst = ProblemInstance::graph(ProblemKind::Hcp, 3, vec![(0, 1), (1, 2), (0, 2)], None);
        assert!(run(&inst, &[0, 1, 2]));
        assert!(!run(&inst, &[0]));
    }

    #[test]
    fn two_triangles_fail() {
        let edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
        let inst = ProblemInstance::graph(ProblemKind::Hcp, 6, edges, None);
        assert!(!run(&inst, &[0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn square_cycle_passes() {
        let inst = ProblemInstance::graph(ProblemKind::Hcp, 4, vec![(0, 1), (1, 2), (2, 3), (0, 3)], None);
        assert!(run(&inst, &[0, 1, 2, 3]));
        let sys = lower(&inst).unwrap();
        assert!(evaluate_f(&sys, &[true; 4]).unwrap());
    }

    #[test]
    fn small_graphs_are_rejected() {
        let inst = ProblemInstance::sat(2, vec![]);
        assert!(build_hcp_connectivity(&inst).is_err());
    }
}
