use super::{Literal, Payload, ProblemInstance};

/// Pads every constraint to the largest constraint size with frozen
/// auxiliary variables, shared between constraints: a constraint of size `d`
/// receives auxiliaries `1..=d_max-d`. Frozen auxiliaries stay at 0, which
/// leaves every OR / exact-one constraint unchanged. Instances that are
/// already uniform, and kinds that never need it, are returned unchanged.
pub fn regularize(instance: &ProblemInstance) -> ProblemInstance {
    if !instance.kind.regularizable() {
        return instance.clone();
    }
    let mut out = instance.clone();
    let n = instance.n_variables;
    match &mut out.payload {
        Payload::Clauses(clauses) => {
            for c in clauses.iter_mut() {
                let mut seen = Vec::with_capacity(c.len());
                c.retain(|l| {
                    let fresh = !seen.contains(l);
                    seen.push(*l);
                    fresh
                });
            }
            let Some((lo, hi)) = size_range(clauses.iter().map(Vec::len)) else { return out };
            if lo == hi {
                return out;
            }
            for c in clauses.iter_mut() {
                let pad = hi - c.len();
                c.extend((0..pad).map(|i| Literal::pos(n + i)));
            }
            add_aux(&mut out, n, hi - lo);
        }
        Payload::Sets(sets) => {
            let Some((lo, hi)) = size_range(sets.iter().map(Vec::len)) else { return out };
            if lo == hi {
                return out;
            }
            for s in sets.iter_mut() {
                let pad = hi - s.len();
                s.extend(n..n + pad);
            }
            add_aux(&mut out, n, hi - lo);
        }
        _ => {}
    }
    out
}

fn size_range(sizes: impl Iterator<Item = usize>) -> Option<(usize, usize)> {
    sizes.fold(None, |acc, s| match acc {
        None => Some((s, s)),
        Some((lo, hi)) => Some((lo.min(s), hi.max(s))),
    })
}

fn add_aux(inst: &mut ProblemInstance, n: usize, count: usize) {
    inst.n_variables = n + count;
    inst.frozen.extend(n..n + count);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ProblemKind;

    #[test]
    fn one_auxiliary_for_degrees_two_and_three() {
        let inst = ProblemInstance::sets(ProblemKind::Scp, 3, vec![vec![0, 1], vec![0, 1, 2]], Some(2));
        let r = regularize(&inst);
        assert_eq!(r.n_variables, 4);
        assert_eq!(r.payload, Payload::Sets(vec![vec![0, 1, 3], vec![0, 1, 2]]));
        assert_eq!(r.frozen.iter().copied().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn three_auxiliaries_for_degrees_one_and_four() {
        let inst = ProblemInstance::sets(ProblemKind::Ecp, 4, vec![vec![0], vec![0, 1, 2, 3], vec![1, 2]], None);
        let r = regularize(&inst);
        assert_eq!(r.n_variables, 7);
        assert_eq!(r.payload, Payload::Sets(vec![vec![0, 4, 5, 6], vec![0, 1, 2, 3], vec![1, 2, 4, 5]]));
    }

    #[test]
    fn regular_input_is_a_fixed_point() {
        let inst = ProblemInstance::sets(ProblemKind::Hsp, 4, vec![vec![0, 1, 2], vec![1, 2, 3]], Some(1));
        let r = regularize(&inst);
        assert_eq!(r, inst);
        assert_eq!(regularize(&r), r);
    }
}
