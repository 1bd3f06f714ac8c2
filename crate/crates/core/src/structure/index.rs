use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use crate::grid::{Coordinate, Rect};

/// Row- and column-keyed view of a coordinate set for range queries.
#[derive(Debug, Clone, Default)]
pub(crate) struct CellIndex {
    by_row: BTreeMap<u32, BTreeSet<u32>>,
    by_col: BTreeMap<u32, BTreeSet<u32>>,
}

impl CellIndex {
    pub fn new<'a, I: IntoIterator<Item = &'a Coordinate>>(cells: I) -> Self {
        let mut idx = CellIndex::default();
        for c in cells {
            idx.by_row.entry(c.row).or_default().insert(c.col);
            idx.by_col.entry(c.col).or_default().insert(c.row);
        }
        idx
    }

    pub fn any_in_row(&self, row: u32, cols: RangeInclusive<u32>) -> bool {
        self.by_row.get(&row).is_some_and(|s| s.range(cols).next().is_some())
    }

    pub fn any_in_col(&self, col: u32, rows: RangeInclusive<u32>) -> bool {
        self.by_col.get(&col).is_some_and(|s| s.range(rows).next().is_some())
    }

    pub fn any_in(&self, r: &Rect) -> bool {
        if r.height() <= r.width() {
            self.by_row
                .range(r.top()..=r.bottom())
                .any(|(_, cols)| cols.range(r.left()..=r.right()).next().is_some())
        } else {
            self.by_col
                .range(r.left()..=r.right())
                .any(|(_, rows)| rows.range(r.top()..=r.bottom()).next().is_some())
        }
    }

    /// Rows in `rows` (descending) that hold an indexed cell within `cols`.
    pub fn rows_with_cells(&self, rows: RangeInclusive<u32>, cols: RangeInclusive<u32>) -> Vec<u32> {
        self.by_row
            .range(rows)
            .rev()
            .filter(|(_, c)| c.range(cols.clone()).next().is_some())
            .map(|(r, _)| *r)
            .collect()
    }

    /// Columns in `cols` (descending) that hold an indexed cell within `rows`.
    pub fn cols_with_cells(&self, cols: RangeInclusive<u32>, rows: RangeInclusive<u32>) -> Vec<u32> {
        self.by_col
            .range(cols)
            .rev()
            .filter(|(_, r)| r.range(rows.clone()).next().is_some())
            .map(|(c, _)| *c)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_queries() {
        let cells: Vec<Coordinate> = ["A1", "C3", "C7", "E2"].iter().map(|s| s.parse().unwrap()).collect();
        let idx = CellIndex::new(&cells);
        assert!(idx.any_in(&"B2:D4".parse().unwrap()));
        assert!(!idx.any_in(&"B4:D6".parse().unwrap()));
        assert!(idx.any_in(&"C1:C9".parse().unwrap()));
        assert!(idx.any_in_row(2, 1..=5));
        assert!(!idx.any_in_col(2, 1..=9));
        assert_eq!(idx.rows_with_cells(1..=9, 3..=5), vec![7, 3, 2]);
        assert_eq!(idx.cols_with_cells(1..=9, 1..=2), vec![5, 1]);
    }
}
