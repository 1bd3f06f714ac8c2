use std::collections::{BTreeSet, HashSet};

use crate::grid::{Coordinate, Rect, SheetId};

use super::index::CellIndex;
use super::{Block, GroupRef};

/// A blockable group: a partitioned formula group or a merged reference group.
#[derive(Debug, Clone)]
pub(crate) struct Member {
    pub id: GroupRef,
    pub rect: Rect,
}

impl Member {
    fn cells(&self) -> impl Iterator<Item = Coordinate> {
        self.rect.cells()
    }
}

const REACH: [(i64, i64); 9] = [
    (0, 0),
    (1, 0),
    (2, 0),
    (-1, 0),
    (-2, 0),
    (0, 1),
    (0, 2),
    (0, -1),
    (0, -2),
];

/// Whether some cell of `group` shares a row or column with a cell of `block` at distance ≤ 2.
pub fn block_neighbor<'a, I>(block: &HashSet<Coordinate>, group: I) -> bool
where
    I: IntoIterator<Item = &'a Coordinate>,
{
    group.into_iter().any(|c| {
        REACH
            .iter()
            .filter_map(|&(dc, dr)| c.offset(dc, dr))
            .any(|n| block.contains(&n))
    })
}

/// Greedy neighbour absorption. Members are visited in (top-left, bottom-right, kind) order;
/// a group may end up in several blocks.
pub(crate) fn build_blocks(sheet: SheetId, mut members: Vec<Member>, nb: &CellIndex) -> Vec<Block> {
    members.sort_by_key(|m| (m.rect.top_left, m.rect.bottom_right, m.id));
    let mut consumed = vec![false; members.len()];
    let mut out = Vec::new();
    for seed in 0..members.len() {
        if consumed[seed] {
            continue;
        }
        consumed[seed] = true;
        let mut ids = BTreeSet::from([seed]);
        let mut rect = members[seed].rect;
        let mut cells: HashSet<Coordinate> = members[seed].cells().collect();
        loop {
            let mut grew = false;
            for (j, m) in members.iter().enumerate() {
                if ids.contains(&j) {
                    continue;
                }
                let joined = rect.union(&m.rect);
                if !nb.any_in(&joined) && block_neighbor(&cells, &m.cells().collect::<Vec<_>>()) {
                    ids.insert(j);
                    consumed[j] = true;
                    rect = joined;
                    cells.extend(m.cells());
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        let mut groups: Vec<GroupRef> = ids.iter().map(|&i| members[i].id).collect();
        groups.sort();
        out.push(Block { sheet, rect, groups });
    }
    out
}
