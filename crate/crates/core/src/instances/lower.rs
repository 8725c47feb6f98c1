use super::{
    ccp_register_width, ActivationCheck, ConstraintSystem, GConstraint, GKind, HConstraint, HGroup, HKind, Literal,
    Payload, ProblemInstance, ProblemKind, ThresholdSpec,
};
use crate::error::InstanceError;

fn need(inst: &ProblemInstance, which: &'static str) -> Result<u64, InstanceError> {
    let v = if which == "k1" { inst.k1 } else { inst.k2 };
    v.ok_or(InstanceError::MissingThreshold { kind: inst.kind.name(), which })
}

fn identity_group(n: usize, threshold: ThresholdSpec) -> HGroup {
    HGroup {
        units: (0..n).map(|v| HConstraint { kind: HKind::Identity, literals: vec![Literal::pos(v)] }).collect(),
        threshold,
    }
}

fn payload_mismatch(inst: &ProblemInstance) -> InstanceError {
    InstanceError::Invalid(format!("{} payload does not match its kind", inst.kind))
}

/// Lowers an instance to the unified constraint form, one encoding per
/// kind. Call [`super::regularize`] first for uniform unit widths.
pub fn lower(inst: &ProblemInstance) -> Result<ConstraintSystem, InstanceError> {
    let n = inst.n_variables;
    let mut sys = ConstraintSystem::empty(n);
    sys.kind = Some(inst.kind);
    sys.frozen = inst.frozen.clone();

    match (&inst.payload, inst.kind) {
        (Payload::Clauses(clauses), ProblemKind::Sat) => {
            for c in clauses {
                add_g(&mut sys, GKind::OrClause, c.clone());
            }
        }
        (Payload::Sets(sets), ProblemKind::Scp | ProblemKind::Hsp | ProblemKind::Dsp) => {
            let k1 = need(inst, "k1")?;
            for s in sets {
                add_g(&mut sys, GKind::OrClause, s.iter().map(|&v| Literal::pos(v)).collect());
            }
            sys.h_groups.push(identity_group(n, ThresholdSpec::leq(k1)));
        }
        (Payload::Sets(sets), ProblemKind::Ecp) => {
            for s in sets {
                add_g(&mut sys, GKind::Exact { target: 1 }, s.iter().map(|&v| Literal::pos(v)).collect());
            }
        }
        (Payload::Graph { edges, .. }, ProblemKind::Ncp) => {
            let k1 = need(inst, "k1")?;
            for &(u, v) in edges {
                add_g(&mut sys, GKind::OrClause, vec![Literal::pos(u), Literal::pos(v)]);
            }
            sys.h_groups.push(identity_group(n, ThresholdSpec::leq(k1)));
        }
        (Payload::Graph { edges, .. }, ProblemKind::Cqp | ProblemKind::Mis) => {
            let k1 = need(inst, "k1")?;
            for &(u, v) in edges {
                add_g(&mut sys, GKind::NandPair, vec![Literal::pos(u), Literal::pos(v)]);
            }
            sys.h_groups.push(identity_group(n, ThresholdSpec::geq(k1)));
        }
        (Payload::Graph { edges, .. }, ProblemKind::Mcp) => {
            let k1 = need(inst, "k1")?;
            sys.h_groups.push(HGroup {
                units: edges
                    .iter()
                    .map(|&(u, v)| HConstraint { kind: HKind::XorPair, literals: vec![Literal::pos(u), Literal::pos(v)] })
                    .collect(),
                threshold: ThresholdSpec::geq(k1),
            });
        }
        (Payload::Graph { vertices, edges }, ProblemKind::Ccp) => {
            let k1 = need(inst, "k1")?;
            let m = ccp_register_width(k1);
            if n != m * vertices {
                return Err(InstanceError::Invalid(format!("CCP expects {} variables for k1 = {k1}", m * vertices)));
            }
            for &(u, v) in edges {
                let lits = (0..m).map(|i| Literal::pos(u * m + i)).chain((0..m).map(|i| Literal::pos(v * m + i)));
                add_g(&mut sys, GKind::RegisterNeq { width: m }, lits.collect());
            }
        }
        (Payload::Graph { vertices, edges }, ProblemKind::Hcp) => {
            let nv = *vertices;
            if nv < 3 {
                return Err(InstanceError::Invalid(format!("HCP needs at least 3 vertices, got {nv}")));
            }
            for v in 0..nv {
                let incident =
                    edges.iter().enumerate().filter(|(_, &(a, b))| a == v || b == v).map(|(e, _)| Literal::pos(e));
                add_g(&mut sys, GKind::Exact { target: 2 }, incident.collect());
            }
            let target = if nv % 2 == 1 { nv } else { nv - 1 };
            sys.activation = Some(ActivationCheck {
                vertices: nv,
                edges: edges.iter().enumerate().map(|(e, &(a, b))| (a, b, e)).collect(),
                start: 0,
                rounds: (nv - 1) / 2,
                threshold: ThresholdSpec::eq(target as u64),
            });
        }
        (Payload::Items(items), ProblemKind::Ksp) => {
            let k1 = need(inst, "k1")?;
            let k2 = need(inst, "k2")?;
            sys.h_groups.push(weighted_group(items.iter().map(|i| i.weight), ThresholdSpec::leq(k1)));
            sys.h_groups.push(weighted_group(items.iter().map(|i| i.value), ThresholdSpec::geq(k2)));
        }
        (Payload::Items(items), ProblemKind::Npp) => {
            let k1 = need(inst, "k1")?;
            sys.h_groups.push(weighted_group(items.iter().map(|i| i.value), ThresholdSpec::eq(k1)));
        }
        _ => return Err(payload_mismatch(inst)),
    }
    Ok(sys)
}

fn weighted_group(weights: impl Iterator<Item = u64>, threshold: ThresholdSpec) -> HGroup {
    HGroup {
        units: weights
            .enumerate()
            .filter(|&(_, w)| w > 0)
            .map(|(v, w)| HConstraint { kind: HKind::Weighted(w), literals: vec![Literal::pos(v)] })
            .collect(),
        threshold,
    }
}

/// Adds one `g`, folding constraints whose value does not depend on `z`:
/// constant-true ones are dropped, constant-false ones mark the system.
fn add_g(sys: &mut ConstraintSystem, kind: GKind, mut literals: Vec<Literal>) {
    if kind == GKind::OrClause {
        let mut uniq: Vec<Literal> = Vec::with_capacity(literals.len());
        for l in literals {
            if uniq.iter().any(|u| u.variable == l.variable && u.negated != l.negated) {
                return;
            }
            if !uniq.contains(&l) {
                uniq.push(l);
            }
        }
        literals = uniq;
    }
    if let GKind::Exact { target } = kind {
        literals.dedup();
        if literals.len() < target as usize {
            sys.trivially_false = true;
            return;
        }
    }
    if literals.is_empty() {
        sys.trivially_false = true;
        return;
    }
    sys.g_list.push(GConstraint { kind, literals });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{enumerate_solutions, evaluate_f, Direction, Item};

    #[test]
    fn three_sat_parameters() {
        let clauses: Vec<Vec<Literal>> =
            (0..7).map(|i| (0..3).map(|j| Literal::pos((i + 2 * j) % 5)).collect()).collect();
        let sys = lower(&ProblemInstance::sat(5, clauses)).unwrap();
        assert_eq!(sys.parameters(), (5, 7, 3));
    }

    #[test]
    fn mis_row() {
        let inst = ProblemInstance::graph(ProblemKind::Mis, 4, vec![(0, 1), (1, 2), (2, 3)], Some(2));
        let sys = lower(&inst).unwrap();
        assert_eq!(sys.g_list.len(), 3);
        assert!(sys.g_list.iter().all(|g| g.kind == GKind::NandPair));
        assert_eq!(sys.h_groups[0].units.len(), 4);
        assert_eq!(sys.h_groups[0].threshold.direction, Direction::Geq);
        assert_eq!(sys.unit_width(), 2);
        assert_eq!(sys.num_units(), 3);
    }

    #[test]
    fn mcp_single_edge() {
        let sys = lower(&ProblemInstance::graph(ProblemKind::Mcp, 2, vec![(0, 1)], Some(1))).unwrap();
        assert!(sys.g_list.is_empty());
        assert_eq!(sys.h_groups[0].units[0].kind, HKind::XorPair);
        assert_eq!(sys.bits(), 1);
    }

    #[test]
    fn mcp_path_solutions() {
        let sys = lower(&ProblemInstance::graph(ProblemKind::Mcp, 3, vec![(0, 1), (1, 2)], Some(2))).unwrap();
        let sols = enumerate_solutions(&sys).unwrap();
        assert_eq!(sols, vec![vec![false, true, false], vec![true, false, true]]);
    }

    #[test]
    fn mis_triangle() {
        let sys = lower(&ProblemInstance::graph(ProblemKind::Mis, 3, vec![(0, 1), (1, 2), (0, 2)], Some(2))).unwrap();
        assert!(!evaluate_f(&sys, &[true, true, false]).unwrap());
        assert!(!evaluate_f(&sys, &[true, false, false]).unwrap());
    }

    #[test]
    fn knapsack_bits() {
        let sys = lower(&ProblemInstance::items(ProblemKind::Ksp, vec![Item { weight: 2, value: 3 }], Some(2), Some(3)))
            .unwrap();
        assert_eq!(sys.h_groups[0].bits(), 2);
        assert_eq!(sys.h_groups[1].bits(), 2);
        let empty = lower(&ProblemInstance::items(ProblemKind::Ksp, vec![], Some(2), Some(3))).unwrap();
        assert!(enumerate_solutions(&empty).unwrap().is_empty());
    }

    #[test]
    fn missing_threshold() {
        let inst = ProblemInstance::graph(ProblemKind::Mis, 2, vec![(0, 1)], None);
        assert!(matches!(lower(&inst), Err(InstanceError::MissingThreshold { .. })));
    }

    #[test]
    fn hamiltonian_cycles() {
        let tri = ProblemInstance::graph(ProblemKind::Hcp, 3, vec![(0, 1), (1, 2), (0, 2)], None);
        let sys = lower(&tri).unwrap();
        assert_eq!(enumerate_solutions(&sys).unwrap(), vec![vec![true; 3]]);

        let mut edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
        edges.push((2, 3));
        let two = ProblemInstance::graph(ProblemKind::Hcp, 6, edges, None);
        let sys = lower(&two).unwrap();
        let z = [true, true, true, true, true, true, false];
        assert!(!evaluate_f(&sys, &z).unwrap());
        assert_eq!(sys.activation.as_ref().unwrap().propagate(&z).iter().filter(|&&a| !a).count(), 3);

        let sq = ProblemInstance::graph(ProblemKind::Hcp, 4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], None);
        let sys = lower(&sq).unwrap();
        assert!(evaluate_f(&sys, &[true; 4]).unwrap());
    }
}
