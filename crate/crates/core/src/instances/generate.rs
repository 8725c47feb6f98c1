//! Seeded random instances for tests and experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Item, Literal, ProblemInstance, ProblemKind};

/// Seeded generator: one stream per `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_graph(v: usize, p: f64, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    if edges.is_empty() && v >= 2 {
        edges.push((0, 1));
    }
    edges
}

/// Element lists for a covering-style set system: each of `elements`
/// entries names 1 to 3 of the `n` subsets.
fn random_sets(n: usize, elements: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..n).collect();
    (0..elements)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(n));
            let mut s: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
            s.sort_unstable();
            s
        })
        .collect()
}

/// Random `k`-SAT with `m` clauses over `n` variables, distinct variables
/// per clause.
pub fn random_ksat(n: usize, m: usize, k: usize, rng: &mut impl Rng) -> ProblemInstance {
    let all: Vec<usize> = (0..n).collect();
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<usize> = all.choose_multiple(rng, k.min(n)).copied().collect();
            vars.sort_unstable();
            vars.into_iter().map(|v| Literal { variable: v, negated: rng.gen_bool(0.5) }).collect()
        })
        .collect();
    ProblemInstance::sat(n, clauses)
}

/// A random instance of `kind` with about `size` variables (at most
/// `size`). Thresholds are drawn so that both outcomes are plausible.
pub fn random_instance(kind: ProblemKind, size: usize, rng: &mut impl Rng) -> ProblemInstance {
    let n = size.max(3);
    match kind {
        ProblemKind::Sat => random_ksat(n, (3 * n) / 2, 3, rng),
        ProblemKind::Scp | ProblemKind::Hsp => {
            let sets = random_sets(n, n, rng);
            ProblemInstance::sets(kind, n, sets, Some(rng.gen_range(1..=n as u64 / 2 + 1)))
        }
        ProblemKind::Ecp => {
            let sets = random_sets(n, n.div_ceil(2), rng);
            ProblemInstance::sets(kind, n, sets, None)
        }
        ProblemKind::Dsp => {
            let edges = random_graph(n, 0.35, rng);
            ProblemInstance::graph(kind, n, edges, Some(rng.gen_range(1..=n as u64 / 2)))
        }
        ProblemKind::Ncp | ProblemKind::Cqp | ProblemKind::Mis | ProblemKind::Mcp => {
            let edges = random_graph(n, 0.4, rng);
            let k1 = match kind {
                ProblemKind::Mcp => rng.gen_range(1..=edges.len() as u64),
                _ => rng.gen_range(1..=n as u64 / 2 + 1),
            };
            ProblemInstance::graph(kind, n, edges, Some(k1))
        }
        ProblemKind::Ccp => {
            let k1 = *[2u64, 3, 4].choose(rng).unwrap();
            let v = if k1 == 2 { n } else { (n / 2).max(2) };
            let edges = random_graph(v, 0.5, rng);
            ProblemInstance::graph(kind, v, edges, Some(k1))
        }
        ProblemKind::Hcp => {
            // A hidden cycle plus chords, capped at `n` edge variables.
            let v = (3..=6).rev().find(|&v| v <= n).unwrap_or(3);
            let mut order: Vec<usize> = (0..v).collect();
            order.shuffle(rng);
            let mut edges: Vec<(usize, usize)> =
                (0..v).map(|i| (order[i].min(order[(i + 1) % v]), order[i].max(order[(i + 1) % v]))).collect();
            if rng.gen_bool(0.3) {
                edges.pop();
            }
            for a in 0..v {
                for b in a + 1..v {
                    if edges.len() < n && !edges.contains(&(a, b)) && rng.gen_bool(0.4) {
                        edges.push((a, b));
                    }
                }
            }
            edges.sort_unstable();
            ProblemInstance::graph(kind, v, edges, None)
        }
        ProblemKind::Ksp => {
            let items: Vec<Item> =
                (0..n).map(|_| Item { weight: rng.gen_range(1..=7), value: rng.gen_range(1..=7) }).collect();
            let tw: u64 = items.iter().map(|i| i.weight).sum();
            let tv: u64 = items.iter().map(|i| i.value).sum();
            ProblemInstance::items(kind, items, Some(tw / 2), Some(tv / 3))
        }
        ProblemKind::Npp => {
            let items: Vec<Item> = (0..n).map(|_| Item { weight: 0, value: rng.gen_range(1..=7) }).collect();
            let total: u64 = items.iter().map(|i| i.value).sum();
            ProblemInstance::items(kind, items, Some(total / 2), None)
        }
    }
}

/// `per_kind` instances of every kind with sizes cycling through
/// `sizes`, all deterministic in `seed`.
pub fn desk_suite(seed: u64, per_kind: usize, sizes: &[usize]) -> Vec<ProblemInstance> {
    let mut out = Vec::new();
    for (ki, kind) in ProblemKind::ALL.into_iter().enumerate() {
        for i in 0..per_kind {
            let mut rng = rng_for(seed, (ki * 1000 + i) as u64);
            out.push(random_instance(kind, sizes[i % sizes.len()], &mut rng));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::lower;

    #[test]
    fn suite_lowers_within_size() {
        for inst in desk_suite(7, 3, &[5, 6, 8]) {
            let sys = lower(&inst).unwrap_or_else(|e| panic!("{}: {e}", inst.kind));
            assert!(sys.n <= 8, "{} has {} variables", inst.kind, sys.n);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a = desk_suite(3, 2, &[6]);
        let b = desk_suite(3, 2, &[6]);
        assert_eq!(a, b);
    }
}
