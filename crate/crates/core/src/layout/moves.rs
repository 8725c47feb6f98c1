use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::LayoutError;
use crate::grid::{GridPos, TensorGrid};
use crate::schedule::{Move, MovePhase};

/// Who sits where. Staging cells are searched row-major from
/// `reserve_row` across `reserve_width` columns.
#[derive(Clone, Debug, Default)]
pub struct Occupancy {
    at: HashMap<usize, GridPos>,
    who: HashMap<GridPos, usize>,
    pub reserve_row: i64,
    pub reserve_width: i64,
}

impl Occupancy {
    pub fn new(reserve_row: i64, reserve_width: i64) -> Self {
        Occupancy { reserve_row, reserve_width: reserve_width.max(1), ..Default::default() }
    }

    pub fn place(&mut self, q: usize, p: GridPos) {
        if let Some(old) = self.at.insert(q, p) {
            self.who.remove(&old);
        }
        self.who.insert(p, q);
    }

    pub fn position(&self, q: usize) -> Option<GridPos> {
        self.at.get(&q).copied()
    }

    pub fn occupant(&self, p: GridPos) -> Option<usize> {
        self.who.get(&p).copied()
    }

    /// First free reserve cell not in `taken`.
    pub fn free_cell(&self, taken: &HashSet<GridPos>) -> GridPos {
        (0..)
            .map(|i| GridPos::new(self.reserve_row + i / self.reserve_width, i % self.reserve_width))
            .find(|p| !self.who.contains_key(p) && !taken.contains(p))
            .unwrap()
    }

    /// Some atom failing `allowed` inside the grid spanned by `points`.
    pub fn foreign_in(&self, points: &[GridPos], allowed: impl Fn(usize) -> bool) -> Option<usize> {
        let g = TensorGrid::spanned_by(points);
        if g.len() <= self.at.len() {
            g.points().filter_map(|p| self.occupant(p)).find(|&q| !allowed(q))
        } else {
            self.at.iter().filter(|(&q, p)| g.contains(**p) && !allowed(q)).map(|(&q, _)| q).min()
        }
    }

    pub fn apply(&mut self, phase: &MovePhase) {
        for m in &phase.moves {
            self.who.remove(&m.from);
        }
        for m in &phase.moves {
            self.who.insert(m.to, m.qubit);
            self.at.insert(m.qubit, m.to);
        }
    }
}

/// Moves every atom in `targets` to its target. Phases are translations of
/// a clean pickup grid; atoms in the way are sent to reserve cells, and a
/// blocked cycle is broken by parking one atom there. `occ` is updated.
pub fn plan_moves(occ: &mut Occupancy, targets: &[(usize, GridPos)]) -> Result<Vec<MovePhase>, LayoutError> {
    let mut dest: BTreeMap<usize, GridPos> = BTreeMap::new();
    let mut claimed: HashSet<GridPos> = HashSet::new();
    for &(q, p) in targets {
        if !claimed.insert(p) || dest.insert(q, p).is_some_and(|old| old != p) {
            return Err(LayoutError::DuplicateTarget { row: p.x, col: p.y });
        }
    }
    let mut pending: BTreeMap<usize, GridPos> = BTreeMap::new();
    for (&q, &p) in &dest {
        if occ.position(q) != Some(p) {
            pending.insert(q, p);
        }
        if let Some(o) = occ.occupant(p) {
            if !dest.contains_key(&o) {
                let c = occ.free_cell(&claimed);
                claimed.insert(c);
                pending.insert(o, c);
            }
        }
    }
    let mut phases = Vec::new();
    while !pending.is_empty() {
        let mut groups: BTreeMap<(i64, i64), Vec<(GridPos, usize)>> = BTreeMap::new();
        for (&q, &to) in &pending {
            let from = occ.position(q).expect("moved atoms have a site");
            groups.entry((to.x - from.x, to.y - from.y)).or_default().push((from, q));
        }
        let mut best: Vec<Move> = Vec::new();
        for ((dx, dy), mut ms) in groups {
            ms.sort();
            let mut set: HashSet<usize> = HashSet::new();
            let mut pts: Vec<GridPos> = Vec::new();
            let mut chosen = Vec::new();
            for (from, q) in ms {
                let to = from.offset(dx, dy);
                if occ.occupant(to).is_some_and(|o| !set.contains(&o)) {
                    continue;
                }
                set.insert(q);
                pts.push(from);
                if occ.foreign_in(&pts, |o| set.contains(&o)).is_some() {
                    set.remove(&q);
                    pts.pop();
                    continue;
                }
                chosen.push(Move { qubit: q, from, to });
            }
            if chosen.len() > best.len() {
                best = chosen;
            }
        }
        if best.is_empty() {
            let (&q, _) = pending.iter().next().unwrap();
            let from = occ.position(q).unwrap();
            let c = occ.free_cell(&claimed);
            best.push(Move { qubit: q, from, to: c });
        } else {
            for m in &best {
                pending.remove(&m.qubit);
            }
        }
        let phase = MovePhase { moves: best };
        occ.apply(&phase);
        phases.push(phase);
    }
    Ok(phases)
}
