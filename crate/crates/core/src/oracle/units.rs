use super::qra::qra_layers;
use super::{and_gates, asap, qra_shape, Layers, Lit};
use crate::circuit::{Circuit, CircuitBuilder, Gate, GateKind, Role};
use crate::error::OracleError;
use crate::instances::{GConstraint, GKind, HConstraint, HKind, Literal};

/// Gate structure of a checking unit. Units with equal templates produce
/// layer sequences of equal length and kinds, so they can share layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Template {
    /// Disjunction of `t` literals.
    Or(usize),
    Nand,
    Xor,
    /// A `bits`-wide constant written under one literal.
    Weighted { bits: usize },
    /// Two `m`-bit registers differ.
    RegNeq(usize),
    /// Exactly `target` of `width` literals hold.
    Exact { width: usize, target: u32 },
    /// One activation step: edge variable AND source vertex.
    Activation,
}

impl Template {
    pub fn data(&self) -> usize {
        match *self {
            Template::Or(t) => t,
            Template::Nand | Template::Xor | Template::Activation => 2,
            Template::Weighted { .. } => 1,
            Template::RegNeq(m) => 2 * m,
            Template::Exact { width, .. } => width,
        }
    }

    pub fn outs(&self) -> usize {
        match *self {
            Template::Weighted { bits } => bits,
            _ => 1,
        }
    }

    pub fn temps(&self) -> usize {
        match *self {
            Template::Or(t) => t.saturating_sub(2),
            Template::RegNeq(m) if m >= 2 => m + m - 2,
            Template::Exact { width, .. } => {
                let (carries, w) = qra_shape(width, 1);
                carries + w.saturating_sub(2)
            }
            _ => 0,
        }
    }
}

/// A unit instance: its template, literals in order, and the constant
/// weight for weighted terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSpec {
    pub template: Template,
    pub literals: Vec<Literal>,
    pub weight: u64,
}

impl UnitSpec {
    pub fn from_g(g: &GConstraint) -> Self {
        let t = g.literals.len();
        let template = match g.kind {
            GKind::OrClause => Template::Or(t),
            GKind::NandPair => Template::Nand,
            GKind::Exact { target } => Template::Exact { width: t, target },
            GKind::RegisterNeq { width } => Template::RegNeq(width),
            GKind::Activation => Template::Activation,
        };
        UnitSpec { template, literals: g.literals.clone(), weight: 0 }
    }

    /// `None` for identity terms, which need no unit.
    pub fn from_h(h: &HConstraint) -> Option<Self> {
        let (template, weight) = match h.kind {
            HKind::Identity => return None,
            HKind::XorPair => (Template::Xor, 0),
            HKind::Weighted(w) => (Template::Weighted { bits: h.bits() }, w),
        };
        Some(UnitSpec { template, literals: h.literals.clone(), weight })
    }
}

fn x_layer(qs: impl IntoIterator<Item = usize>) -> (GateKind, Vec<Gate>) {
    (GateKind::X, qs.into_iter().map(Gate::x).collect())
}

fn mirrored(mut compute: Layers, middle: Layers) -> Layers {
    let undo: Layers = compute.iter().rev().cloned().collect();
    compute.extend(middle);
    compute.extend(undo);
    compute
}

/// Layers of one unit. `data[i]` carries literal `i` (polarity included),
/// `outs` start in `|0⟩` and end holding the unit value, `temps` are
/// restored.
pub fn unit_layers(spec: &UnitSpec, data: &[Lit], outs: &[usize], temps: &[usize]) -> Layers {
    let tpl = spec.template;
    assert_eq!(data.len(), tpl.data(), "unit data width");
    assert!(outs.len() >= tpl.outs() && temps.len() >= tpl.temps(), "unit scratch");
    let out = outs[0];
    let ctl = |l: Lit| (l.q, l.neg);
    match tpl {
        Template::Or(1) => vec![(GateKind::CX, vec![Gate::cx(ctl(data[0]), out)])],
        Template::Or(_) => {
            let flipped: Vec<Lit> = data.iter().map(|l| l.not()).collect();
            let mut layers = asap(and_gates(&flipped, out, temps));
            layers.push(x_layer([out]));
            layers
        }
        Template::Nand => vec![
            (GateKind::CCX, vec![Gate::ccx(ctl(data[0]), ctl(data[1]), out)]),
            x_layer([out]),
        ],
        Template::Activation => vec![(GateKind::CCX, vec![Gate::ccx(ctl(data[0]), ctl(data[1]), out)])],
        Template::Xor => vec![
            (GateKind::CX, vec![Gate::cx(ctl(data[0]), out)]),
            (GateKind::CX, vec![Gate::cx(ctl(data[1]), out)]),
        ],
        Template::Weighted { bits } => (0..bits)
            .map(|j| {
                let g = if spec.weight >> j & 1 == 1 { vec![Gate::cx(ctl(data[0]), outs[j])] } else { vec![] };
                (GateKind::CX, g)
            })
            .collect(),
        Template::RegNeq(1) => vec![
            (GateKind::CX, vec![Gate::cx(ctl(data[0]), out)]),
            (GateKind::CX, vec![Gate::cx(ctl(data[1]), out)]),
        ],
        Template::RegNeq(m) => {
            let xs = &temps[..m];
            let compute = vec![
                (GateKind::CX, (0..m).map(|i| Gate::cx(ctl(data[i]), xs[i])).collect()),
                (GateKind::CX, (0..m).map(|i| Gate::cx(ctl(data[m + i]), xs[i])).collect()),
            ];
            let zero: Vec<Lit> = xs.iter().map(|&q| Lit { q, neg: true }).collect();
            let mut middle = asap(and_gates(&zero, out, &temps[m..]));
            middle.push(x_layer([out]));
            mirrored(compute, middle)
        }
        Template::Exact { width, target } => {
            let flips = x_layer(data.iter().filter(|l| l.neg).map(|l| l.q));
            let (carries, rest) = temps.split_at(qra_shape(width, 1).0);
            let mut it = carries.iter().copied();
            let regs = data.iter().map(|l| vec![l.q]).collect();
            let (adds, sum) = qra_layers(regs, || it.next().expect("carry count from qra_shape"));
            let lits: Vec<Lit> =
                sum.iter().enumerate().map(|(i, &q)| Lit { q, neg: (target as u64) >> i & 1 == 0 }).collect();
            let mut compute = vec![flips];
            compute.extend(adds);
            mirrored(compute, asap(and_gates(&lits, out, rest)))
        }
    }
}

/// Standalone unit: data qubits `0..t` in literal order (a negated literal
/// reads its qubit complemented), then outputs, then temps. Returns the
/// circuit and the output qubits.
pub fn build_checking_unit(spec: &UnitSpec) -> Result<(Circuit, Vec<usize>), OracleError> {
    let tpl = spec.template;
    if spec.literals.len() != tpl.data() || tpl.data() == 0 {
        return Err(OracleError::Invalid(format!("{tpl:?} cannot take {} literals", spec.literals.len())));
    }
    let mut cb = CircuitBuilder::new();
    let data: Vec<Lit> = spec
        .literals
        .iter()
        .map(|l| Lit { q: cb.alloc(Role::Data), neg: l.negated })
        .collect();
    let outs = cb.alloc_n(Role::AncillaCheck, tpl.outs());
    let temps = cb.alloc_n(Role::AncillaCheck, tpl.temps());
    for (k, g) in unit_layers(spec, &data, &outs, &temps) {
        cb.layer(k, g);
    }
    Ok((cb.finish(), outs))
}
