//! Grid positions, tensor grids and the product-form test.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::LayoutError;

/// A trap site: `x` is the row, `y` the column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPos {
    pub x: i64,
    pub y: i64,
}

impl GridPos {
    pub const fn new(x: i64, y: i64) -> Self {
        GridPos { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        GridPos { x: self.x + dx, y: self.y + dy }
    }

    pub fn chebyshev(self, other: GridPos) -> i64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn manhattan(self, other: GridPos) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }
}

/// `R × C`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorGrid {
    pub rows: BTreeSet<i64>,
    pub cols: BTreeSet<i64>,
}

impl TensorGrid {
    pub fn new(rows: impl IntoIterator<Item = i64>, cols: impl IntoIterator<Item = i64>) -> Self {
        TensorGrid { rows: rows.into_iter().collect(), cols: cols.into_iter().collect() }
    }

    /// Smallest tensor grid containing every position.
    pub fn spanned_by<'a>(points: impl IntoIterator<Item = &'a GridPos>) -> Self {
        let mut g = TensorGrid::default();
        for p in points {
            g.rows.insert(p.x);
            g.cols.insert(p.y);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() || self.cols.is_empty()
    }

    pub fn contains(&self, p: GridPos) -> bool {
        self.rows.contains(&p.x) && self.cols.contains(&p.y)
    }

    pub fn points(&self) -> impl Iterator<Item = GridPos> + '_ {
        self.rows.iter().flat_map(move |&x| self.cols.iter().map(move |&y| GridPos::new(x, y)))
    }
}

/// Whether `mapping`, defined on all of `grid`, factors as
/// `(x, y) ↦ (f_r(x), f_c(y))` with both factors strictly increasing.
pub fn is_product_form(grid: &TensorGrid, mapping: &HashMap<GridPos, GridPos>) -> Result<bool, LayoutError> {
    let mut pairs = Vec::with_capacity(grid.len());
    for p in grid.points() {
        let q = mapping.get(&p).ok_or(LayoutError::NotTotal)?;
        pairs.push((p, *q));
    }
    Ok(is_partial_product_form(&pairs))
}

/// Product-form test restricted to the given pairs: the row image depends
/// only on the source row, the column image only on the source column, and
/// both induced maps are strictly increasing.
pub fn is_partial_product_form(pairs: &[(GridPos, GridPos)]) -> bool {
    let mut fr: BTreeMap<i64, i64> = BTreeMap::new();
    let mut fc: BTreeMap<i64, i64> = BTreeMap::new();
    for &(p, q) in pairs {
        if *fr.entry(p.x).or_insert(q.x) != q.x || *fc.entry(p.y).or_insert(q.y) != q.y {
            return false;
        }
    }
    strictly_increasing(fr.values()) && strictly_increasing(fc.values())
}

fn strictly_increasing<'a>(vals: impl Iterator<Item = &'a i64>) -> bool {
    let mut prev: Option<i64> = None;
    for &v in vals {
        if prev.is_some_and(|p| p >= v) {
            return false;
        }
        prev = Some(v);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(grid: &TensorGrid, f: impl Fn(GridPos) -> GridPos) -> HashMap<GridPos, GridPos> {
        grid.points().map(|p| (p, f(p))).collect()
    }

    #[test]
    fn translation_is_product_form() {
        let g = TensorGrid::new([0, 1, 2], [0, 3]);
        assert!(is_product_form(&g, &map(&g, |p| p.offset(2, 0))).unwrap());
    }

    #[test]
    fn column_swap_is_not() {
        let g = TensorGrid::new([0], [0, 1]);
        assert!(!is_product_form(&g, &map(&g, |p| GridPos::new(p.x, 1 - p.y))).unwrap());
    }

    #[test]
    fn shear_is_not() {
        let g = TensorGrid::new([0, 1], [0, 1]);
        assert!(!is_product_form(&g, &map(&g, |p| GridPos::new(p.x, p.y + p.x))).unwrap());
    }

    #[test]
    fn partial_map_is_rejected() {
        let g = TensorGrid::new([0, 1], [0]);
        let mut m = HashMap::new();
        m.insert(GridPos::new(0, 0), GridPos::new(5, 5));
        assert_eq!(is_product_form(&g, &m), Err(LayoutError::NotTotal));
    }
}
