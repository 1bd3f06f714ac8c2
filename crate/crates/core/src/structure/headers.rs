use std::collections::BTreeSet;

use crate::grid::{Coordinate, Rect};

use super::index::CellIndex;
use super::{Block, HeaderLayer, LayerOrientation, MetaHeader};

/// Column layers above and row layers left of each block, in block order.
pub(crate) fn build_layers(blocks: &[Block], nb: &CellIndex) -> Vec<HeaderLayer> {
    let mut out = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        let r = b.rect;
        let others = || {
            blocks
                .iter()
                .enumerate()
                .filter(move |(i, _)| *i != bi)
                .map(|(_, o)| o.rect)
        };

        // Nearest row above `r` that crosses another block within r's columns.
        let stop_row = others()
            .filter(|o| o.top() < r.top() && o.left() <= r.right() && o.right() >= r.left())
            .map(|o| o.bottom().min(r.top() - 1))
            .max()
            .unwrap_or(0);
        if stop_row + 1 < r.top() {
            let rows = nb.rows_with_cells(stop_row + 1..=r.top() - 1, r.left()..=r.right());
            for (level, row) in rows.into_iter().enumerate() {
                out.push(HeaderLayer {
                    block: bi,
                    orientation: LayerOrientation::ColumnLayer,
                    level: level as u32 + 1,
                    span: Rect::new(Coordinate::new(r.left(), row), Coordinate::new(r.right(), row)),
                    meta_header: None,
                });
            }
        }

        let stop_col = others()
            .filter(|o| o.left() < r.left() && o.top() <= r.bottom() && o.bottom() >= r.top())
            .map(|o| o.right().min(r.left() - 1))
            .max()
            .unwrap_or(0);
        if stop_col + 1 < r.left() {
            let cols = nb.cols_with_cells(stop_col + 1..=r.left() - 1, r.top()..=r.bottom());
            for (level, col) in cols.into_iter().enumerate() {
                out.push(HeaderLayer {
                    block: bi,
                    orientation: LayerOrientation::RowLayer,
                    level: level as u32 + 1,
                    span: Rect::new(Coordinate::new(col, r.top()), Coordinate::new(col, r.bottom())),
                    meta_header: None,
                });
            }
        }
    }
    out
}

/// Links each non-blockable cell outside every layer to the nearest row layer below it
/// (same column, only empty cells between), else to the nearest column layer to its right
/// (same row, same gap rule). Sets `meta_header` on the chosen layers.
pub(crate) fn assign_meta_headers(
    layers: &mut [HeaderLayer],
    non_blockables: &BTreeSet<Coordinate>,
    occupied: &CellIndex,
) -> Vec<MetaHeader> {
    let mut out = Vec::new();
    for &c in non_blockables {
        if layers.iter().any(|l| l.span.contains(c)) {
            continue;
        }
        let below = layers
            .iter()
            .enumerate()
            .filter(|(_, l)| {
                l.orientation == LayerOrientation::RowLayer
                    && l.span.left() == c.col
                    && l.span.top() > c.row
                    && (c.row + 1 > l.span.top() - 1 || !occupied.any_in_col(c.col, c.row + 1..=l.span.top() - 1))
            })
            .min_by_key(|(i, l)| (l.span.top(), *i));
        let right = || {
            layers
                .iter()
                .enumerate()
                .filter(|(_, l)| {
                    l.orientation == LayerOrientation::ColumnLayer
                        && l.span.top() == c.row
                        && l.span.left() > c.col
                        && (c.col + 1 > l.span.left() - 1 || !occupied.any_in_row(c.row, c.col + 1..=l.span.left() - 1))
                })
                .min_by_key(|(i, l)| (l.span.left(), *i))
        };
        if let Some((i, _)) = below.or_else(right) {
            out.push(MetaHeader { cell: c, layer: i });
        }
    }
    for m in &out {
        layers[m.layer].meta_header.get_or_insert(m.cell);
    }
    out
}
