use serde::{Deserialize, Serialize};

use super::{ConstraintSystem, UnitRef};
use crate::error::InstanceError;

/// Largest free-variable count [`enumerate_solutions`] will walk.
pub const ENUMERATION_LIMIT: usize = 24;

/// Classical `f(z)`. Frozen variables must be 0 in `z`.
pub fn evaluate_f(system: &ConstraintSystem, z: &[bool]) -> Result<bool, InstanceError> {
    if z.len() != system.n {
        return Err(InstanceError::AssignmentLength { got: z.len(), expected: system.n });
    }
    if let Some(v) = system.frozen.iter().find(|&&v| z[v]) {
        return Err(InstanceError::Invalid(format!("frozen variable {v} is set")));
    }
    if system.trivially_false {
        return Ok(false);
    }
    if !system.g_list.iter().all(|g| g.eval(z)) {
        return Ok(false);
    }
    for group in &system.h_groups {
        let sum: u64 = group.units.iter().map(|h| h.eval(z)).sum();
        if !group.threshold.holds(sum, system.heaviside) {
            return Ok(false);
        }
    }
    if let Some(act) = &system.activation {
        let count = act.propagate(z).into_iter().filter(|&a| a).count() as u64;
        if !act.threshold.holds(count, system.heaviside) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every satisfying assignment, frozen variables at 0, in increasing order
/// of the free-variable bit pattern.
pub fn enumerate_solutions(system: &ConstraintSystem) -> Result<Vec<Vec<bool>>, InstanceError> {
    let free = system.free_variables();
    if free.len() > ENUMERATION_LIMIT {
        return Err(InstanceError::TooManyVariables { count: free.len(), limit: ENUMERATION_LIMIT });
    }
    let mut out = Vec::new();
    let mut z = vec![false; system.n];
    for pattern in 0u64..1 << free.len() {
        for (j, &v) in free.iter().enumerate() {
            z[v] = pattern >> j & 1 == 1;
        }
        if evaluate_f(system, &z)? {
            out.push(z.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub vertex_count: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.iter().all(|e| !e.is_empty() && e.iter().all(|&v| v < vertex_count)));
        Hypergraph { vertex_count, edges }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

/// One hyperedge per retained checking unit, in [`ConstraintSystem::retained_units`] order.
pub fn to_hypergraph(system: &ConstraintSystem) -> Hypergraph {
    let edges = system
        .retained_units()
        .into_iter()
        .map(|(_, vars): (UnitRef, Vec<usize>)| vars)
        .collect();
    Hypergraph::new(system.n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{GConstraint, GKind, HConstraint, HGroup, HKind, Literal, ThresholdSpec};

    #[test]
    fn clause_evaluation() {
        let mut s = ConstraintSystem::empty(3);
        s.g_list.push(GConstraint {
            kind: GKind::OrClause,
            literals: vec![Literal::pos(0), Literal::neg(1), Literal::pos(2)],
        });
        assert!(!evaluate_f(&s, &[false, true, false]).unwrap());
        assert!(evaluate_f(&s, &[false, false, false]).unwrap());
        assert!(evaluate_f(&s, &[true]).is_err());
    }

    #[test]
    fn empty_system_is_true() {
        let s = ConstraintSystem::empty(2);
        assert_eq!(enumerate_solutions(&s).unwrap().len(), 4);
    }

    #[test]
    fn empty_group_applies_threshold_to_zero() {
        let mut s = ConstraintSystem::empty(1);
        s.h_groups.push(HGroup { units: vec![], threshold: ThresholdSpec::geq(1) });
        assert!(enumerate_solutions(&s).unwrap().is_empty());
    }

    #[test]
    fn hypergraph_skips_identity_units() {
        let mut s = ConstraintSystem::empty(3);
        s.h_groups.push(HGroup {
            units: vec![
                HConstraint { kind: HKind::Identity, literals: vec![Literal::pos(0)] },
                HConstraint { kind: HKind::XorPair, literals: vec![Literal::pos(1), Literal::pos(2)] },
            ],
            threshold: ThresholdSpec::geq(1),
        });
        assert_eq!(to_hypergraph(&s).edges, vec![vec![1, 2]]);
    }
}
