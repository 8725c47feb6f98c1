//! Lowered systems against plain evaluators written on the raw payload.

use rydberg_np::instances::generate::{random_instance, rng_for};
use rydberg_np::instances::{ccp_register_width, evaluate_f, lower, regularize, Payload, ProblemInstance, ProblemKind};

fn count(z: &[bool]) -> u64 {
    z.iter().filter(|&&b| b).count() as u64
}

fn hamiltonian(vertices: usize, edges: &[(usize, usize)], z: &[bool]) -> bool {
    let chosen: Vec<(usize, usize)> = edges.iter().zip(z).filter(|(_, &b)| b).map(|(&e, _)| e).collect();
    if chosen.len() != vertices || (0..vertices).any(|v| chosen.iter().filter(|&&(a, b)| a == v || b == v).count() != 2) {
        return false;
    }
    // Degree two everywhere: one cycle iff vertex 0 reaches all.
    let mut seen = vec![false; vertices];
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend(chosen.iter().filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None }));
        }
    }
    seen.into_iter().all(|s| s)
}

fn by_hand(inst: &ProblemInstance, z: &[bool]) -> bool {
    let k1 = inst.k1.unwrap_or(0);
    let any = |vars: &Vec<usize>| vars.iter().any(|&v| z[v]);
    match (&inst.payload, inst.kind) {
        (Payload::Clauses(cs), _) => cs.iter().all(|c| c.iter().any(|l| l.eval(z))),
        (Payload::Sets(sets), ProblemKind::Ecp) => sets.iter().all(|s| s.iter().filter(|&&v| z[v]).count() == 1),
        (Payload::Sets(sets), _) => sets.iter().all(any) && count(z) <= k1,
        (Payload::Graph { edges, .. }, ProblemKind::Ncp) => edges.iter().all(|&(u, v)| z[u] || z[v]) && count(z) <= k1,
        (Payload::Graph { edges, .. }, ProblemKind::Mis | ProblemKind::Cqp) => {
            edges.iter().all(|&(u, v)| !(z[u] && z[v])) && count(z) >= k1
        }
        (Payload::Graph { edges, .. }, ProblemKind::Mcp) => edges.iter().filter(|&&(u, v)| z[u] != z[v]).count() as u64 >= k1,
        (Payload::Graph { edges, .. }, ProblemKind::Ccp) => {
            let m = ccp_register_width(k1);
            edges.iter().all(|&(u, v)| z[u * m..(u + 1) * m] != z[v * m..(v + 1) * m])
        }
        (Payload::Graph { vertices, edges }, ProblemKind::Hcp) => hamiltonian(*vertices, edges, z),
        (Payload::Items(items), kind) => {
            let pick = |f: fn(&rydberg_np::instances::Item) -> u64| -> u64 {
                items.iter().zip(z).filter(|(_, &b)| b).map(|(i, _)| f(i)).sum()
            };
            match kind {
                ProblemKind::Ksp => pick(|i| i.weight) <= k1 && pick(|i| i.value) >= inst.k2.unwrap_or(0),
                _ => pick(|i| i.value) == k1,
            }
        }
        (p, k) => panic!("unexpected payload {p:?} for {k}"),
    }
}

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |x| (0..n).map(|i| x >> i & 1 == 1).collect())
}

#[test]
fn every_kind_matches_its_definition() {
    for kind in ProblemKind::ALL {
        let mut satisfiable = 0;
        for trial in 0..12 {
            let inst = random_instance(kind, 4 + trial % 5, &mut rng_for(900 + trial as u64, kind as u64));
            let sys = lower(&inst).unwrap();
            for z in assignments(inst.n_variables) {
                let want = by_hand(&inst, &z);
                satisfiable += want as usize;
                assert_eq!(evaluate_f(&sys, &z).unwrap(), want, "{kind} trial {trial} z={z:?}");
            }
        }
        assert!(satisfiable > 0, "{kind}: no trial had a solution");
    }
}

#[test]
fn padding_preserves_solutions() {
    for kind in ProblemKind::ALL.into_iter().filter(|k| k.regularizable()) {
        for trial in 0..8 {
            let inst = random_instance(kind, 5, &mut rng_for(40 + trial, kind as u64));
            let reg = regularize(&inst);
            let sys = lower(&reg).unwrap();
            for z in assignments(inst.n_variables) {
                let mut padded = z.clone();
                padded.resize(reg.n_variables, false);
                assert_eq!(evaluate_f(&sys, &padded).unwrap(), by_hand(&inst, &z), "{kind} trial {trial}");
            }
        }
    }
}

#[test]
fn hamiltonian_cycles_on_small_graphs() {
    // Square with one diagonal: two of the five edges are never on a cycle.
    let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)];
    let inst = ProblemInstance::graph(ProblemKind::Hcp, 4, edges.clone(), None);
    let sys = lower(&inst).unwrap();
    let sols: Vec<Vec<bool>> = assignments(5).filter(|z| evaluate_f(&sys, z).unwrap()).collect();
    assert_eq!(sols, vec![vec![true, false, true, true, true]]);
    // Two disjoint triangles have degree two everywhere but no cycle.
    let tri = vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)];
    let inst = ProblemInstance::graph(ProblemKind::Hcp, 6, tri, None);
    assert!(!evaluate_f(&lower(&inst).unwrap(), &[true; 6]).unwrap());
}
