//! Layered atom schedules: gate layers interleaved with AOD move phases.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind, Layer, QubitId, Role};
use crate::error::{CircuitError, ScheduleFormatError};
use crate::grid::{is_partial_product_form, GridPos, TensorGrid};
use crate::program::Section;

pub const SCHEDULE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub qubit: usize,
    pub from: GridPos,
    pub to: GridPos,
}

/// Moves carried out together by one AOD transport.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovePhase {
    pub moves: Vec<Move>,
}

impl MovePhase {
    /// Phase duration: moves run in parallel, each taking the square root
    /// of its Chebyshev distance.
    pub fn time(&self) -> f64 {
        self.moves.iter().map(|m| (m.from.chebyshev(m.to) as f64).sqrt()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Move(MovePhase),
    /// Gates of one kind; stored unchecked so malformed schedules can be
    /// represented and rejected by [`validate_schedule`].
    Gates { kind: GateKind, gates: Vec<Gate> },
}

/// Steps emitted for one section of the program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionSpan {
    pub section: Section,
    pub steps: Range<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub qubits: Vec<QubitId>,
    pub initial: BTreeMap<usize, GridPos>,
    pub steps: Vec<Step>,
    pub spans: Vec<SectionSpan>,
}

impl Schedule {
    pub fn transport_count(&self) -> usize {
        self.phases().map(|p| p.moves.len()).sum()
    }

    pub fn depth(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Gates { .. })).count()
    }

    pub fn phases(&self) -> impl Iterator<Item = &MovePhase> {
        self.steps.iter().filter_map(|s| if let Step::Move(p) = s { Some(p) } else { None })
    }

    /// Moves inside spans of `section`; with `first_only`, only up to the
    /// first span of another section that follows a span of `section`.
    pub fn transports_in(&self, section: Section, first_only: bool) -> usize {
        let mut total = 0;
        let mut seen = false;
        for span in &self.spans {
            if span.section == section {
                seen = true;
                total += self.steps[span.steps.clone()]
                    .iter()
                    .map(|s| if let Step::Move(p) = s { p.moves.len() } else { 0 })
                    .sum::<usize>();
            } else if seen && first_only && !matches!(span.section, Section::Init) {
                break;
            }
        }
        total
    }

    /// Gate layers in a section, summed over its spans.
    pub fn depth_in(&self, section: Section) -> usize {
        self.spans
            .iter()
            .filter(|s| s.section == section)
            .map(|s| self.steps[s.steps.clone()].iter().filter(|st| matches!(st, Step::Gates { .. })).count())
            .sum()
    }

    /// The gate content as a circuit; move phases carry no unitary.
    pub fn to_circuit(&self) -> Result<Circuit, CircuitError> {
        let mut layers = Vec::new();
        for s in &self.steps {
            if let Step::Gates { kind, gates } = s {
                layers.push(Layer::new(*kind, gates.clone())?);
            }
        }
        Circuit::new(self.qubits.clone(), layers)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckKind {
    /// Two atoms share a site before the first step.
    InitialPlacement,
    /// Wrong arity, repeated or undeclared operand, or a completing atom
    /// used as an operand.
    Operands,
    /// Two gates of a layer share a qubit.
    Overlap,
    /// An operand set's tensor grid holds a foreign atom.
    GridClean,
    /// The operand-to-operand map is not product form.
    ProductForm,
    /// A move starts away from the atom's current site.
    MoveSource,
    /// Two moves end on the same site.
    MoveDuplicate,
    /// A move ends on a site held by an atom that stays.
    MoveCollision,
    /// The moved set cannot be picked up as one grid or would cross.
    MoveTransport,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub step: usize,
    pub check: CheckKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub steps_checked: usize,
    pub first_violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

struct Sites {
    at: HashMap<usize, GridPos>,
    who: HashMap<GridPos, usize>,
}

impl Sites {
    /// Atoms other than `allowed` (and completing atoms) inside the grid
    /// spanned by `points`.
    fn foreign_in(&self, points: &[GridPos], allowed: &HashSet<usize>, roles: &[QubitId]) -> Option<(usize, GridPos)> {
        let g = TensorGrid::spanned_by(points);
        if g.len() <= self.at.len() {
            g.points()
                .filter_map(|p| self.who.get(&p).map(|&q| (q, p)))
                .find(|(q, _)| !allowed.contains(q) && roles[*q].role != Role::Completing)
        } else {
            self.at
                .iter()
                .filter(|(_, p)| g.contains(**p))
                .map(|(&q, &p)| (q, p))
                .filter(|(q, _)| !allowed.contains(q) && roles[*q].role != Role::Completing)
                .min()
        }
    }
}

fn check_gates(kind: GateKind, gates: &[Gate], sites: &Sites, qubits: &[QubitId]) -> Result<(), (CheckKind, String)> {
    let mut seen = HashSet::new();
    for g in gates {
        let distinct: HashSet<_> = g.qubits.iter().collect();
        if g.kind != kind || g.qubits.len() != kind.arity() || distinct.len() != g.qubits.len() {
            return Err((CheckKind::Operands, format!("malformed {} gate {:?}", kind, g.qubits)));
        }
        for &q in &g.qubits {
            match qubits.get(q) {
                None => return Err((CheckKind::Operands, format!("qubit {q} is not declared"))),
                Some(id) if id.role == Role::Completing => {
                    return Err((CheckKind::Operands, format!("completing atom {q} carries a gate")))
                }
                Some(_) if !sites.at.contains_key(&q) => {
                    return Err((CheckKind::Operands, format!("qubit {q} has no site")))
                }
                Some(_) => {}
            }
            if !seen.insert(q) {
                return Err((CheckKind::Overlap, format!("qubit {q} is used by two gates")));
            }
        }
    }
    let arity = kind.arity();
    let operand_sets: Vec<Vec<GridPos>> =
        (0..arity).map(|j| gates.iter().map(|g| sites.at[&g.qubits[j]]).collect()).collect();
    for (j, pts) in operand_sets.iter().enumerate() {
        let allowed: HashSet<usize> = gates.iter().map(|g| g.qubits[j]).collect();
        if let Some((q, p)) = sites.foreign_in(pts, &allowed, qubits) {
            return Err((CheckKind::GridClean, format!("operand {j} grid holds qubit {q} at ({}, {})", p.x, p.y)));
        }
    }
    for j in 1..arity {
        let pairs: Vec<(GridPos, GridPos)> =
            operand_sets[0].iter().copied().zip(operand_sets[j].iter().copied()).collect();
        if !is_partial_product_form(&pairs) {
            return Err((CheckKind::ProductForm, format!("operand 0 to operand {j} map is not product form")));
        }
    }
    Ok(())
}

fn check_moves(phase: &MovePhase, sites: &Sites, qubits: &[QubitId]) -> Result<(), (CheckKind, String)> {
    let moving: HashSet<usize> = phase.moves.iter().map(|m| m.qubit).collect();
    if moving.len() != phase.moves.len() {
        return Err((CheckKind::MoveSource, "a qubit moves twice in one phase".into()));
    }
    let mut dests = HashSet::new();
    for m in &phase.moves {
        if sites.at.get(&m.qubit) != Some(&m.from) {
            return Err((CheckKind::MoveSource, format!("qubit {} is not at ({}, {})", m.qubit, m.from.x, m.from.y)));
        }
        if !dests.insert(m.to) {
            return Err((CheckKind::MoveDuplicate, format!("two moves end at ({}, {})", m.to.x, m.to.y)));
        }
        if let Some(&q) = sites.who.get(&m.to) {
            if !moving.contains(&q) {
                return Err((CheckKind::MoveCollision, format!("({}, {}) is held by qubit {q}", m.to.x, m.to.y)));
            }
        }
    }
    let sources: Vec<GridPos> = phase.moves.iter().map(|m| m.from).collect();
    let all_roles: Vec<QubitId> = qubits.iter().map(|q| QubitId { role: Role::Data, ..*q }).collect();
    if let Some((q, _)) = sites.foreign_in(&sources, &moving, &all_roles) {
        return Err((CheckKind::MoveTransport, format!("pickup grid also holds qubit {q}")));
    }
    let pairs: Vec<(GridPos, GridPos)> = phase.moves.iter().map(|m| (m.from, m.to)).collect();
    if !is_partial_product_form(&pairs) {
        return Err((CheckKind::MoveTransport, "moves do not preserve row and column order".into()));
    }
    Ok(())
}

/// Replays the schedule and reports the first step that breaks a rule.
pub fn validate_schedule(s: &Schedule) -> ValidationReport {
    let fail = |step: usize, (check, detail): (CheckKind, String)| ValidationReport {
        steps_checked: step,
        first_violation: Some(Violation { step, check, detail }),
    };
    let mut sites = Sites { at: HashMap::new(), who: HashMap::new() };
    for (&q, &p) in &s.initial {
        if sites.who.insert(p, q).is_some() || q >= s.qubits.len() {
            return fail(0, (CheckKind::InitialPlacement, format!("site ({}, {}) or qubit {q} invalid", p.x, p.y)));
        }
        sites.at.insert(q, p);
    }
    for (i, step) in s.steps.iter().enumerate() {
        match step {
            Step::Gates { kind, gates } => {
                if let Err(e) = check_gates(*kind, gates, &sites, &s.qubits) {
                    return fail(i, e);
                }
            }
            Step::Move(phase) => {
                if let Err(e) = check_moves(phase, &sites, &s.qubits) {
                    return fail(i, e);
                }
                for m in &phase.moves {
                    sites.who.remove(&m.from);
                }
                for m in &phase.moves {
                    sites.who.insert(m.to, m.qubit);
                    sites.at.insert(m.qubit, m.to);
                }
            }
        }
    }
    ValidationReport { steps_checked: s.steps.len(), first_violation: None }
}

/// Measured cost of a schedule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Resources {
    /// Qubits that carry gates (completing atoms excluded).
    pub qubits: usize,
    pub depth: usize,
    pub transports: usize,
    pub transport_time: f64,
}

pub fn count_resources(s: &Schedule) -> Resources {
    Resources {
        qubits: s.qubits.iter().filter(|q| q.role != Role::Completing).count(),
        depth: s.depth(),
        transports: s.transport_count(),
        transport_time: s.phases().map(MovePhase::time).sum(),
    }
}

#[derive(Serialize, Deserialize)]
struct Doc {
    version: u32,
    qubits: Vec<(usize, Role)>,
    initial: Vec<(usize, [i64; 2])>,
    steps: Vec<StepDoc>,
    spans: Vec<(Section, usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "lowercase")]
enum StepDoc {
    Move { moves: Vec<(usize, [i64; 2], [i64; 2])> },
    Gate { kind: GateKind, gates: Vec<(Vec<usize>, u8)>, at: Vec<Vec<[i64; 2]>> },
}

fn xy(p: GridPos) -> [i64; 2] {
    [p.x, p.y]
}

fn pos([x, y]: [i64; 2]) -> GridPos {
    GridPos::new(x, y)
}

impl Schedule {
    /// Versioned JSON document; operand sites are written next to each gate.
    pub fn to_json(&self) -> String {
        let mut at: HashMap<usize, GridPos> = self.initial.iter().map(|(&q, &p)| (q, p)).collect();
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Move(p) => {
                    for m in &p.moves {
                        at.insert(m.qubit, m.to);
                    }
                    StepDoc::Move { moves: p.moves.iter().map(|m| (m.qubit, xy(m.from), xy(m.to))).collect() }
                }
                Step::Gates { kind, gates } => StepDoc::Gate {
                    kind: *kind,
                    gates: gates.iter().map(|g| (g.qubits.clone(), g.neg)).collect(),
                    at: gates
                        .iter()
                        .map(|g| g.qubits.iter().map(|q| at.get(q).map_or([i64::MIN, i64::MIN], |&p| xy(p))).collect())
                        .collect(),
                },
            })
            .collect();
        let doc = Doc {
            version: SCHEDULE_VERSION,
            qubits: self.qubits.iter().map(|q| (q.index, q.role)).collect(),
            initial: self.initial.iter().map(|(&q, &p)| (q, xy(p))).collect(),
            steps,
            spans: self.spans.iter().map(|s| (s.section, s.steps.start, s.steps.end)).collect(),
        };
        serde_json::to_string(&doc).expect("schedule documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ScheduleFormatError> {
        #[derive(Deserialize)]
        struct Head {
            version: u32,
        }
        let head: Head = serde_json::from_str(text).map_err(|e| ScheduleFormatError::Malformed(e.to_string()))?;
        if head.version != SCHEDULE_VERSION {
            return Err(ScheduleFormatError::Version(head.version));
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| ScheduleFormatError::Malformed(e.to_string()))?;
        let steps = doc
            .steps
            .into_iter()
            .map(|s| match s {
                StepDoc::Move { moves } => Step::Move(MovePhase {
                    moves: moves.into_iter().map(|(qubit, f, t)| Move { qubit, from: pos(f), to: pos(t) }).collect(),
                }),
                StepDoc::Gate { kind, gates, .. } => {
                    Step::Gates { kind, gates: gates.into_iter().map(|(qubits, neg)| Gate { kind, qubits, neg }).collect() }
                }
            })
            .collect();
        Ok(Schedule {
            qubits: doc.qubits.into_iter().map(|(index, role)| QubitId { index, role }).collect(),
            initial: doc.initial.into_iter().map(|(q, p)| (q, pos(p))).collect(),
            steps,
            spans: doc.spans.into_iter().map(|(section, a, b)| SectionSpan { section, steps: a..b }).collect(),
        })
    }
}
