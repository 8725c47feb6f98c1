//! NP instances and their lowering to a conjunction of local constraints
//! plus thresholded sums.
//!
//! A [`ProblemInstance`] holds an instance in its native vocabulary.
//! [`lower`] turns it into a [`ConstraintSystem`]: boolean checks `g`, integer
//! terms `h` grouped under a threshold, and (for Hamiltonian cycle) an
//! activation-propagation connectivity check. [`evaluate_f`] and
//! [`enumerate_solutions`] are the classical reference for every quantum
//! construction downstream.

mod eval;
pub mod generate;
mod lower;
mod parse;
mod regularize;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use eval::{enumerate_solutions, evaluate_f, to_hypergraph, Hypergraph, ENUMERATION_LIMIT};
pub use lower::lower;
pub use parse::{parse_dimacs_cnf, parse_edge_list, parse_set_system};
pub use regularize::regularize;

use crate::error::InstanceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemKind {
    Sat,
    Scp,
    Ncp,
    Hsp,
    Cqp,
    Ecp,
    Mcp,
    Ksp,
    Mis,
    Dsp,
    Npp,
    Ccp,
    Hcp,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 13] = [
        ProblemKind::Sat,
        ProblemKind::Scp,
        ProblemKind::Ncp,
        ProblemKind::Hsp,
        ProblemKind::Cqp,
        ProblemKind::Ecp,
        ProblemKind::Mcp,
        ProblemKind::Ksp,
        ProblemKind::Mis,
        ProblemKind::Dsp,
        ProblemKind::Npp,
        ProblemKind::Ccp,
        ProblemKind::Hcp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Sat => "SAT",
            ProblemKind::Scp => "SCP",
            ProblemKind::Ncp => "NCP",
            ProblemKind::Hsp => "HSP",
            ProblemKind::Cqp => "CQP",
            ProblemKind::Ecp => "ECP",
            ProblemKind::Mcp => "MCP",
            ProblemKind::Ksp => "KSP",
            ProblemKind::Mis => "MIS",
            ProblemKind::Dsp => "DSP",
            ProblemKind::Npp => "NPP",
            ProblemKind::Ccp => "CCP",
            ProblemKind::Hcp => "HCP",
        }
    }

    pub fn needs_k1(self) -> bool {
        !matches!(self, ProblemKind::Sat | ProblemKind::Ecp | ProblemKind::Hcp)
    }

    pub fn needs_k2(self) -> bool {
        self == ProblemKind::Ksp
    }

    /// Kinds whose non-uniform instances are padded by [`regularize`].
    pub fn regularizable(self) -> bool {
        matches!(self, ProblemKind::Sat | ProblemKind::Hsp | ProblemKind::Scp | ProblemKind::Ecp | ProblemKind::Dsp)
    }

    pub fn is_graph(self) -> bool {
        matches!(
            self,
            ProblemKind::Mis | ProblemKind::Mcp | ProblemKind::Ncp | ProblemKind::Cqp | ProblemKind::Ccp | ProblemKind::Hcp
        )
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| InstanceError::Invalid(format!("unknown problem kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(variable: usize) -> Self {
        Literal { variable, negated: false }
    }

    pub fn neg(variable: usize) -> Self {
        Literal { variable, negated: true }
    }

    pub fn eval(&self, z: &[bool]) -> bool {
        z[self.variable] != self.negated
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub weight: u64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Payload {
    Clauses(Vec<Vec<Literal>>),
    /// Edges stored verbatim; complement semantics are applied by
    /// [`ProblemInstance::complement`], never implicitly.
    Graph { vertices: usize, edges: Vec<(usize, usize)> },
    /// One variable list per constraint: for SCP/ECP the subsets containing
    /// an element, for HSP the elements of a subset, for DSP a closed
    /// neighbourhood.
    Sets(Vec<Vec<usize>>),
    Items(Vec<Item>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub kind: ProblemKind,
    pub n_variables: usize,
    pub payload: Payload,
    pub k1: Option<u64>,
    pub k2: Option<u64>,
    /// Variables pinned to 0; only populated by [`regularize`].
    pub frozen: BTreeSet<usize>,
    pub warnings: Vec<String>,
}

impl ProblemInstance {
    fn new(kind: ProblemKind, n_variables: usize, payload: Payload) -> Self {
        ProblemInstance { kind, n_variables, payload, k1: None, k2: None, frozen: BTreeSet::new(), warnings: Vec::new() }
    }

    pub fn sat(n: usize, clauses: Vec<Vec<Literal>>) -> Self {
        Self::new(ProblemKind::Sat, n, Payload::Clauses(clauses))
    }

    /// Graph problem over `vertices` with the stored edge list.
    pub fn graph(kind: ProblemKind, vertices: usize, edges: Vec<(usize, usize)>, k1: Option<u64>) -> Self {
        assert!(kind.is_graph() || kind == ProblemKind::Dsp, "{kind} is not a graph problem");
        if kind == ProblemKind::Dsp {
            let mut sets: Vec<Vec<usize>> = (0..vertices).map(|v| vec![v]).collect();
            for &(u, v) in &edges {
                sets[u].push(v);
                sets[v].push(u);
            }
            return Self::sets(kind, vertices, sets, k1);
        }
        let n_variables = match kind {
            ProblemKind::Hcp => edges.len(),
            ProblemKind::Ccp => ccp_register_width(k1.unwrap_or(2)) * vertices,
            _ => vertices,
        };
        let mut inst = Self::new(kind, n_variables, Payload::Graph { vertices, edges });
        inst.k1 = k1;
        inst
    }

    pub fn sets(kind: ProblemKind, n: usize, sets: Vec<Vec<usize>>, k1: Option<u64>) -> Self {
        let mut inst = Self::new(kind, n, Payload::Sets(sets));
        inst.k1 = k1;
        inst
    }

    pub fn items(kind: ProblemKind, items: Vec<Item>, k1: Option<u64>, k2: Option<u64>) -> Self {
        let mut inst = Self::new(kind, items.len(), Payload::Items(items));
        inst.k1 = k1;
        inst.k2 = k2;
        inst
    }

    pub fn with_k1(mut self, k1: u64) -> Self {
        self.k1 = Some(k1);
        if let (ProblemKind::Ccp, Payload::Graph { vertices, .. }) = (self.kind, &self.payload) {
            self.n_variables = ccp_register_width(k1) * vertices;
        }
        self
    }

    pub fn with_k2(mut self, k2: u64) -> Self {
        self.k2 = Some(k2);
        self
    }

    /// Replaces the edge set of a graph instance by its complement.
    pub fn complement(&self) -> Result<Self, InstanceError> {
        let Payload::Graph { vertices, edges } = &self.payload else {
            return Err(InstanceError::Invalid(format!("{} has no graph to complement", self.kind)));
        };
        let present: BTreeSet<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let mut comp = Vec::new();
        for u in 0..*vertices {
            for v in u + 1..*vertices {
                if !present.contains(&(u, v)) {
                    comp.push((u, v));
                }
            }
        }
        let mut out = self.clone();
        if self.kind == ProblemKind::Hcp {
            out.n_variables = comp.len();
        }
        out.payload = Payload::Graph { vertices: *vertices, edges: comp };
        Ok(out)
    }

    pub fn vertex_count(&self) -> Option<usize> {
        match &self.payload {
            Payload::Graph { vertices, .. } => Some(*vertices),
            _ => None,
        }
    }
}

/// Bits per vertex for clique-cover labels: `⌈log₂ k₁⌉`, at least one.
pub fn ccp_register_width(k1: u64) -> usize {
    let mut m = 0;
    while (1u64 << m) < k1 {
        m += 1;
    }
    m.max(1)
}

/// Bits needed to hold `w` in binary.
pub fn bits_for(w: u64) -> usize {
    (64 - w.leading_zeros() as usize).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GKind {
    /// Disjunction of literals.
    OrClause,
    /// `¬(a ∧ b)`.
    NandPair,
    /// Exactly `target` of the literals are true.
    Exact { target: u32 },
    /// Two `width`-bit little-endian registers differ; literals are the
    /// first register followed by the second.
    RegisterNeq { width: usize },
    /// Activation propagation along one edge (Hamiltonian cycle).
    Activation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GConstraint {
    pub kind: GKind,
    pub literals: Vec<Literal>,
}

impl GConstraint {
    pub fn eval(&self, z: &[bool]) -> bool {
        let vals = self.literals.iter().map(|l| l.eval(z));
        match self.kind {
            GKind::OrClause => vals.into_iter().any(|v| v),
            GKind::NandPair => !vals.into_iter().all(|v| v),
            GKind::Exact { target } => vals.filter(|&v| v).count() == target as usize,
            GKind::RegisterNeq { width } => {
                let v: Vec<bool> = vals.collect();
                v[..width] != v[width..]
            }
            GKind::Activation => true,
        }
    }

    pub fn variables(&self) -> Vec<usize> {
        self.literals.iter().map(|l| l.variable).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HKind {
    Identity,
    XorPair,
    Weighted(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HConstraint {
    pub kind: HKind,
    pub literals: Vec<Literal>,
}

impl HConstraint {
    pub fn eval(&self, z: &[bool]) -> u64 {
        match self.kind {
            HKind::Identity => self.literals[0].eval(z) as u64,
            HKind::XorPair => (self.literals[0].eval(z) ^ self.literals[1].eval(z)) as u64,
            HKind::Weighted(w) => self.literals[0].eval(z) as u64 * w,
        }
    }

    /// Width of the output register this term needs.
    pub fn bits(&self) -> usize {
        match self.kind {
            HKind::Identity | HKind::XorPair => 1,
            HKind::Weighted(w) => bits_for(w),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == HKind::Identity
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Geq,
    Leq,
    Eq,
}

/// How `H(0)` is read: inclusive makes `≥ k` succeed at equality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Heaviside {
    #[default]
    Inclusive,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThresholdSpec {
    pub direction: Direction,
    pub bound: u64,
}

/// A threshold rewritten in inclusive form, or decided outright.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Const(bool),
    Geq(u64),
    Leq(u64),
    Eq(u64),
}

impl ThresholdSpec {
    pub fn geq(bound: u64) -> Self {
        ThresholdSpec { direction: Direction::Geq, bound }
    }

    pub fn leq(bound: u64) -> Self {
        ThresholdSpec { direction: Direction::Leq, bound }
    }

    pub fn eq(bound: u64) -> Self {
        ThresholdSpec { direction: Direction::Eq, bound }
    }

    pub fn comparison(&self, heaviside: Heaviside) -> Comparison {
        let k = self.bound;
        match (self.direction, heaviside) {
            (Direction::Eq, _) => Comparison::Eq(k),
            (Direction::Geq, Heaviside::Inclusive) if k == 0 => Comparison::Const(true),
            (Direction::Geq, Heaviside::Inclusive) => Comparison::Geq(k),
            (Direction::Geq, Heaviside::Strict) => Comparison::Geq(k + 1),
            (Direction::Leq, Heaviside::Inclusive) => Comparison::Leq(k),
            (Direction::Leq, Heaviside::Strict) if k == 0 => Comparison::Const(false),
            (Direction::Leq, Heaviside::Strict) => Comparison::Leq(k - 1),
        }
    }

    pub fn holds(&self, sum: u64, heaviside: Heaviside) -> bool {
        match self.comparison(heaviside) {
            Comparison::Const(b) => b,
            Comparison::Geq(k) => sum >= k,
            Comparison::Leq(k) => sum <= k,
            Comparison::Eq(k) => sum == k,
        }
    }
}

/// Integer terms summed and compared against one threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGroup {
    pub units: Vec<HConstraint>,
    pub threshold: ThresholdSpec,
}

impl HGroup {
    /// Bits per term output, `b`.
    pub fn bits(&self) -> usize {
        self.units.iter().map(HConstraint::bits).max().unwrap_or(1)
    }

    pub fn max_sum(&self) -> u64 {
        self.units
            .iter()
            .map(|u| match u.kind {
                HKind::Weighted(w) => w,
                _ => 1,
            })
            .sum()
    }
}

/// Connectivity check for Hamiltonian cycle: activation spreads from
/// `start` along selected edges for `rounds` levels; the final level must
/// hold exactly `threshold.bound` active vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivationCheck {
    pub vertices: usize,
    /// `(u, v, edge variable)`.
    pub edges: Vec<(usize, usize, usize)>,
    pub start: usize,
    pub rounds: usize,
    pub threshold: ThresholdSpec,
}

impl ActivationCheck {
    pub fn propagate(&self, z: &[bool]) -> Vec<bool> {
        let mut level = vec![false; self.vertices];
        level[self.start] = true;
        for _ in 0..self.rounds {
            let mut next = level.clone();
            for &(u, v, e) in &self.edges {
                if z[e] {
                    next[v] |= level[u];
                    next[u] |= level[v];
                }
            }
            level = next;
        }
        level
    }
}

/// The unified decision form: `f(z) = ⋀ g(z) ∧ ⋀_groups H(Σ h(z) − k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub kind: Option<ProblemKind>,
    /// Data-qubit count `ñ`.
    pub n: usize,
    pub g_list: Vec<GConstraint>,
    pub h_groups: Vec<HGroup>,
    pub activation: Option<ActivationCheck>,
    pub frozen: BTreeSet<usize>,
    pub heaviside: Heaviside,
    /// Set when lowering found a constraint with no variables that can
    /// never hold; the system then has no solutions.
    pub trivially_false: bool,
}

/// Reference to one retained checking unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitRef {
    G(usize),
    H { group: usize, index: usize },
}

impl ConstraintSystem {
    pub fn empty(n: usize) -> Self {
        ConstraintSystem {
            kind: None,
            n,
            g_list: Vec::new(),
            h_groups: Vec::new(),
            activation: None,
            frozen: BTreeSet::new(),
            heaviside: Heaviside::Inclusive,
            trivially_false: false,
        }
    }

    /// Checking units that need a circuit: every `g` and every
    /// non-identity `h`, in that order.
    pub fn retained_units(&self) -> Vec<(UnitRef, Vec<usize>)> {
        let mut out: Vec<(UnitRef, Vec<usize>)> =
            self.g_list.iter().enumerate().map(|(i, g)| (UnitRef::G(i), g.variables())).collect();
        for (gi, group) in self.h_groups.iter().enumerate() {
            for (j, h) in group.units.iter().enumerate() {
                if !h.is_identity() {
                    out.push((UnitRef::H { group: gi, index: j }, h.literals.iter().map(|l| l.variable).collect()));
                }
            }
        }
        out
    }

    /// Checking-unit count `N`.
    pub fn num_units(&self) -> usize {
        self.retained_units().len()
    }

    /// Data qubits per unit `t`.
    pub fn unit_width(&self) -> usize {
        self.retained_units().iter().map(|(_, v)| v.len()).max().unwrap_or(0)
    }

    /// Bits per `h` output `b`, maximised over groups.
    pub fn bits(&self) -> usize {
        self.h_groups.iter().map(HGroup::bits).max().unwrap_or(1)
    }

    pub fn free_variables(&self) -> Vec<usize> {
        (0..self.n).filter(|v| !self.frozen.contains(v)).collect()
    }

    /// `(ñ, N, t)`.
    pub fn parameters(&self) -> (usize, usize, usize) {
        (self.n, self.num_units(), self.unit_width())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trips_through_str() {
        for k in ProblemKind::ALL {
            assert_eq!(k.name().to_lowercase().parse::<ProblemKind>().unwrap(), k);
        }
        assert!("foo".parse::<ProblemKind>().is_err());
    }

    #[test]
    fn register_widths() {
        assert_eq!(ccp_register_width(1), 1);
        assert_eq!(ccp_register_width(2), 1);
        assert_eq!(ccp_register_width(3), 2);
        assert_eq!(ccp_register_width(4), 2);
        assert_eq!(ccp_register_width(5), 3);
        assert_eq!(bits_for(2), 2);
        assert_eq!(bits_for(3), 2);
        assert_eq!(bits_for(4), 3);
        assert_eq!(bits_for(1), 1);
    }

    #[test]
    fn heaviside_conventions() {
        assert!(ThresholdSpec::geq(0).holds(0, Heaviside::Inclusive));
        assert!(!ThresholdSpec::geq(0).holds(0, Heaviside::Strict));
        assert!(ThresholdSpec::leq(2).holds(2, Heaviside::Inclusive));
        assert!(!ThresholdSpec::leq(2).holds(2, Heaviside::Strict));
        assert_eq!(ThresholdSpec::leq(0).comparison(Heaviside::Strict), Comparison::Const(false));
        assert!(ThresholdSpec::eq(1).holds(1, Heaviside::Strict));
    }

    #[test]
    fn complement_of_path() {
        let inst = ProblemInstance::graph(ProblemKind::Mis, 3, vec![(0, 1), (1, 2)], Some(1));
        let comp = inst.complement().unwrap();
        assert_eq!(comp.payload, Payload::Graph { vertices: 3, edges: vec![(0, 2)] });
    }
}
