use std::collections::BTreeMap;

use crate::error::LayoutError;
use crate::grid::GridPos;
use crate::instances::Literal;

/// Resting positions of one unit set, plus completing atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Placement {
    pub positions: BTreeMap<usize, GridPos>,
    pub completing: Vec<GridPos>,
}

/// Zero-based form of the unit placement: unit `mu`, slot `tau`, units
/// laid across `s` columns in bands of `band` rows.
pub fn eq7_position(mu: usize, tau: usize, band: usize, s: usize) -> GridPos {
    GridPos::new((band * (mu / s) + tau) as i64, (mu % s) as i64)
}

/// Column height `⌈√n⌉`, at least one.
pub fn column_height(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    s.max(1)
}

/// Places unit `mu`'s qubits `units[mu]` (slot order) by [`eq7_position`].
/// When the units spill past one band the last band is filled with
/// completing atoms so every slot's positions form a full grid.
pub fn map_positions(units: &[Vec<usize>], s: usize) -> Result<Placement, LayoutError> {
    let band = units.iter().map(Vec::len).max().unwrap_or(0);
    let mut p = Placement::default();
    for (mu, qs) in units.iter().enumerate() {
        for (tau, &q) in qs.iter().enumerate() {
            if p.positions.insert(q, eq7_position(mu, tau, band, s)).is_some() {
                return Err(LayoutError::DuplicateQubit { qubit: q });
            }
        }
    }
    let o = units.len();
    if o > s && !o.is_multiple_of(s) {
        for mu in o..o.div_ceil(s) * s {
            p.completing.extend((0..band).map(|tau| eq7_position(mu, tau, band, s)));
        }
    }
    Ok(p)
}

/// Buckets clauses by negation count, each clause's literals reordered
/// negated first. Buckets come in ascending count; entries keep the
/// caller's index.
pub fn group_sat_negations(units: &[(usize, Vec<Literal>)]) -> Vec<Vec<(usize, Vec<Literal>)>> {
    let mut buckets: BTreeMap<usize, Vec<(usize, Vec<Literal>)>> = BTreeMap::new();
    for (i, lits) in units {
        let mut sorted = lits.clone();
        sorted.sort_by_key(|l| !l.negated);
        let a = lits.iter().filter(|l| l.negated).count();
        buckets.entry(a).or_default().push((*i, sorted));
    }
    buckets.into_values().collect()
}

/// Stacks columns of qubits into a rectangle of height `s`, column-major in
/// input order. Full columns keep their index.
pub fn stack_columns(columns: &[Vec<usize>], s: usize) -> BTreeMap<usize, GridPos> {
    columns
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, &q)| (q, GridPos::new((i % s) as i64, (i / s) as i64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TensorGrid;

    #[test]
    fn formula_examples() {
        // t = 3, n = 9: bands of four rows across three columns.
        assert_eq!(eq7_position(0, 0, 4, 3), GridPos::new(0, 0));
        assert_eq!(eq7_position(1, 1, 4, 3), GridPos::new(1, 1));
        assert_eq!(eq7_position(3, 0, 4, 3), GridPos::new(4, 0));
    }

    #[test]
    fn slot_grids_are_translates() {
        let units: Vec<Vec<usize>> = (0..7).map(|u| (0..4).map(|t| u * 4 + t).collect()).collect();
        let p = map_positions(&units, 3).unwrap();
        assert_eq!(p.completing.len(), 2 * 4);
        let slot = |tau: usize| -> Vec<GridPos> {
            let mut v: Vec<GridPos> = units.iter().map(|u| p.positions[&u[tau]]).collect();
            v.extend(p.completing.iter().filter(|c| c.x % 4 == tau as i64));
            v.sort();
            v
        };
        let base = slot(0);
        let g = TensorGrid::spanned_by(&base);
        assert_eq!(g.len(), base.len());
        for tau in 1..4 {
            let shifted: Vec<GridPos> = base.iter().map(|q| q.offset(tau as i64, 0)).collect();
            assert_eq!(slot(tau), shifted);
        }
    }

    #[test]
    fn duplicate_qubit_is_an_error() {
        assert!(map_positions(&[vec![0, 1], vec![1, 2]], 2).is_err());
    }

    #[test]
    fn negation_buckets() {
        let c = |neg: &[bool]| -> Vec<Literal> {
            neg.iter().enumerate().map(|(i, &n)| Literal { variable: i, negated: n }).collect()
        };
        let units = vec![
            (0, c(&[false, false, false])),
            (1, c(&[false, true, false])),
            (2, c(&[true, false, false])),
            (3, c(&[false, true, true])),
        ];
        let b = group_sat_negations(&units);
        assert_eq!(b.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert!(b[1][0].1[0].negated);
        assert_eq!(b[2][0].1.iter().take_while(|l| l.negated).count(), 2);
    }

    #[test]
    fn stacking() {
        let cols = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9]];
        let r = stack_columns(&cols, 4);
        assert_eq!(r[&5], GridPos::new(1, 1));
        assert_eq!(r[&9], GridPos::new(1, 2));
    }
}
