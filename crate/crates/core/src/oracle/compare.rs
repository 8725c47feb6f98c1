use super::{and_gates, asap, emit, Lit, Pool};
use crate::circuit::{Circuit, Gate, Role};
use crate::error::OracleError;
use crate::instances::{Comparison, Heaviside, ThresholdSpec};
use crate::program::{ProgramBuilder, Section};

/// Outcome of a comparison: decided at compile time, or held by a literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareResult {
    Const(bool),
    Lit(Lit),
}

/// `s ≥ k` as the carry out of `s + (2^W - k)`. Constant zero bits AND the
/// carry with the sum bit, constant one bits OR it; the carry is `None`
/// while it is known to be zero.
fn geq_gates(reg: &[usize], k: u64, out: usize, pool: &mut Pool, pb: &mut ProgramBuilder) -> Vec<Gate> {
    let w = reg.len();
    let c = (1u64 << w) - k;
    let mut compute = Vec::new();
    let mut carry: Option<Lit> = None;
    for (i, &q) in reg.iter().enumerate() {
        let s = Lit::pos(q);
        carry = match (c >> i & 1 == 1, carry) {
            (false, None) => None,
            (true, None) => Some(s),
            (false, Some(cy)) => {
                let t = pool.take(pb);
                compute.push(Gate::ccx(s.ctl(), cy.ctl(), t));
                Some(Lit::pos(t))
            }
            (true, Some(cy)) => {
                let t = pool.take(pb);
                compute.push(Gate::ccx(s.not().ctl(), cy.not().ctl(), t));
                Some(Lit { q: t, neg: true })
            }
        };
    }
    let carry = carry.expect("2^W - k has a set bit");
    let mut gates = compute.clone();
    gates.push(Gate::cx(carry.ctl(), out));
    gates.extend(compute.into_iter().rev());
    gates
}

/// Writes the comparison of little-endian `reg` onto one fresh qubit in a
/// generic stage. All scratch qubits are restored.
pub fn emit_compare(pb: &mut ProgramBuilder, reg: &[usize], cmp: Comparison, pool: &mut Pool) -> CompareResult {
    let w = reg.len();
    let cap = if w >= 64 { u64::MAX } else { 1u64 << w };
    let (k, negate, eq) = match cmp {
        Comparison::Const(b) => return CompareResult::Const(b),
        Comparison::Geq(0) => return CompareResult::Const(true),
        Comparison::Geq(k) if k >= cap => return CompareResult::Const(false),
        Comparison::Leq(k) if k.saturating_add(1) >= cap => return CompareResult::Const(true),
        Comparison::Eq(k) if k >= cap => return CompareResult::Const(false),
        Comparison::Geq(k) => (k, false, false),
        Comparison::Leq(k) => (k + 1, true, false),
        Comparison::Eq(k) => (k, false, true),
    };
    let out = pool.take(pb);
    let gates = if eq {
        let lits: Vec<Lit> = reg.iter().enumerate().map(|(i, &q)| Lit { q, neg: k >> i & 1 == 0 }).collect();
        let temps = pool.take_n(pb, w.saturating_sub(2));
        and_gates(&lits, out, &temps)
    } else {
        geq_gates(reg, k, out, pool, pb)
    };
    pb.generic();
    emit(pb, asap(gates));
    CompareResult::Lit(Lit { q: out, neg: negate })
}

/// Standalone comparator on register qubits `0..width`; the returned qubit
/// ends holding the comparison outcome.
pub fn build_threshold_compare(
    width: usize,
    spec: ThresholdSpec,
    heaviside: Heaviside,
) -> Result<(Circuit, usize), OracleError> {
    if width < 64 && spec.bound >= 1u64 << width {
        return Err(OracleError::ThresholdOverflow { k: spec.bound, width });
    }
    let mut pb = ProgramBuilder::new();
    pb.set_section(Section::Merge);
    let reg = pb.alloc_n(Role::AncillaCheck, width);
    let mut pool = Pool::new(Role::AncillaMerge);
    let out = match emit_compare(&mut pb, &reg, spec.comparison(heaviside), &mut pool) {
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
    use crate::sim::{BasisKey, SparseState};

    fn run(width: usize, spec: ThresholdSpec, h: Heaviside, s: u64) -> bool {
        let (c, out) = build_threshold_compare(width, spec, h).unwrap();
        let mut st = SparseState::basis(c.num_qubits(), BasisKey::from_bits((0..width).map(|i| (i, s >> i & 1 == 1))))
            .unwrap();
        st.run(&c).unwrap();
        let (key, _) = st.entries()[0];
        for q in width..c.num_qubits() {
            if q != out {
                assert!(!key.bit(q), "scratch qubit {q} left dirty");
            }
        }
        key.bit(out)
    }

    #[test]
    fn exhaustive_small_widths() {
        for w in 1..=4usize {
            for k in 0..1u64 << w {
                for spec in [ThresholdSpec::geq(k), ThresholdSpec::leq(k), ThresholdSpec::eq(k)] {
                    for h in [Heaviside::Inclusive, Heaviside::Strict] {
                        for s in 0..1u64 << w {
                            assert_eq!(run(w, spec, h, s), spec.holds(s, h), "w={w} {spec:?} {h:?} s={s}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn overflowing_constant_is_rejected() {
        assert!(build_threshold_compare(2, ThresholdSpec::geq(4), Heaviside::Inclusive).is_err());
    }
}
