use std::collections::BTreeSet;

use proptest::prelude::*;
use sheetlint::structure::{GroupRef, StructureModel};
use sheetlint::{parse_formula_a1, CellContent, Coordinate, Origin, Rect, Scalar, Workbook, WorkbookBuilder};

/// One sheet named `S` from `(address, content)` pairs; content starting with `=` is a formula.
fn sheet(cells: &[(&str, &str)]) -> Workbook {
    let mut b = WorkbookBuilder::new("mem");
    let s = b.add_sheet("S").unwrap();
    for (addr, text) in cells {
        let coord: Coordinate = addr.parse().unwrap();
        let content = if text.starts_with('=') {
            CellContent::Formula {
                formula: parse_formula_a1(text, Origin::new("S", coord)).unwrap(),
                cached: None,
            }
        } else if let Ok(n) = text.parse::<f64>() {
            CellContent::Literal(Scalar::Number(n))
        } else {
            CellContent::Literal(Scalar::Text(text.to_string()))
        };
        b.set_cell(s, coord, content).unwrap();
    }
    b.build()
}

fn fill(range: &str, text: &'static str) -> Vec<(String, &'static str)> {
    range
        .parse::<Rect>()
        .unwrap()
        .cells()
        .map(|c| (c.to_string(), text))
        .collect()
}

fn build(parts: Vec<Vec<(String, &'static str)>>) -> (Workbook, StructureModel) {
    let owned: Vec<(String, &str)> = parts.into_iter().flatten().collect();
    let cells: Vec<(&str, &str)> = owned.iter().map(|(a, t)| (a.as_str(), *t)).collect();
    let wb = sheet(&cells);
    let model = StructureModel::build(&wb);
    (wb, model)
}

fn block_groups(model: &StructureModel) -> Vec<(String, BTreeSet<String>)> {
    let st = &model.sheets[0];
    st.blocks
        .iter()
        .map(|b| {
            let groups = b.groups.iter().map(|g| model.group_rect(*g).to_string()).collect();
            (b.rect.to_string(), groups)
        })
        .collect()
}

#[test]
fn row_groups_split_by_a_label_give_disjoint_blocks() {
    let (_, model) = build(vec![
        fill("B2:D2", "=1"),
        fill("B3:D3", "=2"),
        fill("B4:D4", "=3"),
        fill("F3:F8", "=4"),
        fill("B7", "label"),
    ]);
    let blocks = block_groups(&model);
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].0, "B2:D4");
    assert_eq!(blocks[1].0, "F3:F8");
    assert!(blocks[0].1.is_disjoint(&blocks[1].1));
}

#[test]
fn column_groups_split_by_a_label_share_groups() {
    let (_, model) = build(vec![
        fill("B2:B4", "=1"),
        fill("C2:C4", "=2"),
        fill("D2:D4", "=3"),
        fill("F3:F8", "=4"),
        fill("B7", "label"),
    ]);
    let blocks = block_groups(&model);
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].0, "B2:D4");
    assert_eq!(blocks[1].0, "C2:F8");
    let shared: BTreeSet<_> = blocks[0].1.intersection(&blocks[1].1).cloned().collect();
    assert_eq!(shared, ["C2:C4", "D2:D4"].iter().map(|s| s.to_string()).collect());
}

#[test]
fn isolated_group_is_its_own_block() {
    let (_, model) = build(vec![fill("C3:C6", "=7")]);
    assert_eq!(
        block_groups(&model),
        vec![("C3:C6".to_string(), ["C3:C6".to_string()].into())]
    );
}

#[test]
fn block_at_the_corner_has_no_layers() {
    let (_, model) = build(vec![fill("A1:A3", "=1"), fill("C5", "note")]);
    assert!(model.sheets[0].layers.is_empty());
}

#[test]
fn layer_scan_stops_at_another_block() {
    let (_, model) = build(vec![
        fill("B2:C2", "=1"),
        fill("B3", "head"),
        fill("B6:C8", "=2"),
        fill("B5", "x"),
        fill("B4", "y"),
    ]);
    let st = &model.sheets[0];
    let lower = st.blocks.iter().position(|b| b.rect.to_string() == "B6:C8").unwrap();
    let spans: Vec<String> = st.layers_of(lower).map(|l| l.span.to_string()).collect();
    assert_eq!(spans, ["B5:C5", "B4:C4", "B3:C3"]);
    // An empty row between labels is skipped, yet the scan still halts at row 2.
    let (_, model) = build(vec![fill("B2:C2", "=1"), fill("B6:C8", "=2"), fill("B4", "y")]);
    let st = &model.sheets[0];
    let lower = st.blocks.iter().position(|b| b.rect.to_string() == "B6:C8").unwrap();
    let levels: Vec<(u32, String)> = st.layers_of(lower).map(|l| (l.level, l.span.to_string())).collect();
    assert_eq!(levels, [(1, "B4:C4".to_string())]);
}

#[test]
fn missing_formula_references_are_reported_not_fatal() {
    let (_, model) = build(vec![vec![("B2".to_string(), "=Nowhere!A1+A1")]]);
    assert_eq!(model.issues.len(), 1);
    assert!(model.issues[0].error.contains("Nowhere"));
    assert_eq!(model.reference_groups.len(), 1);
}

fn random_sheet() -> impl Strategy<Value = Vec<(u32, u32, u8, u32, u32)>> {
    prop::collection::vec((1u32..=9, 1u32..=9, 0u8..6, 1u32..=9, 1u32..=9), 0..40)
}

fn materialize(spec: &[(u32, u32, u8, u32, u32)]) -> Workbook {
    let mut b = WorkbookBuilder::new("rand");
    let s = b.add_sheet("S").unwrap();
    let mut seen = BTreeSet::new();
    for &(col, row, kind, rc, rr) in spec {
        let at = Coordinate::new(col, row);
        if !seen.insert(at) {
            continue;
        }
        let target = Coordinate::new(rc, rr);
        let text = match kind {
            0 => None,
            1 => Some(format!("={target}+1")),
            2 => Some(format!("=SUM({}:{})", target, Coordinate::new(col, row.min(rr)))),
            3 => Some("=1".to_string()),
            _ => None,
        };
        let content = match text {
            Some(t) => CellContent::Formula {
                formula: parse_formula_a1(&t, Origin::new("S", at)).unwrap(),
                cached: None,
            },
            None if kind == 0 => CellContent::Literal(Scalar::Text("t".into())),
            None => CellContent::Literal(Scalar::Number(kind as f64)),
        };
        b.set_cell(s, at, content).unwrap();
    }
    b.build()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn blocks_never_contain_non_blockables(spec in random_sheet()) {
        let wb = materialize(&spec);
        let model = StructureModel::build(&wb);
        let st = &model.sheets[0];
        for b in &st.blocks {
            prop_assert!(st.non_blockables.iter().all(|c| !b.rect.contains(*c)), "{}", b.rect);
            for g in &b.groups {
                prop_assert!(b.rect.contains_rect(&model.group_rect(*g)));
            }
        }
        for (id, _) in model.sheet_formula_groups(st.sheet) {
            prop_assert!(st.blocks.iter().any(|b| b.groups.contains(&GroupRef::Formula(id))));
        }
        for id in &st.reference_groups {
            prop_assert!(st.blocks.iter().any(|b| b.groups.contains(&GroupRef::Reference(*id))));
        }
        for l in &st.layers {
            prop_assert!(st.blocks.iter().all(|b| !b.rect.intersects(&l.span)));
            let b = &st.blocks[l.block];
            match l.orientation {
                sheetlint::structure::LayerOrientation::ColumnLayer => {
                    prop_assert_eq!((l.span.left(), l.span.right()), (b.rect.left(), b.rect.right()))
                }
                sheetlint::structure::LayerOrientation::RowLayer => {
                    prop_assert_eq!((l.span.top(), l.span.bottom()), (b.rect.top(), b.rect.bottom()))
                }
            }
        }
    }

    #[test]
    fn type_groups_partition_the_sheet(spec in random_sheet()) {
        let wb = materialize(&spec);
        let model = StructureModel::build(&wb);
        let ws = &wb.sheets()[0];
        let mut union = BTreeSet::new();
        let mut total = 0;
        for g in &model.sheets[0].type_groups {
            total += g.cells.len();
            union.extend(g.cells.iter().copied());
            prop_assert!(sheetlint::grid::connected(&g.cells).unwrap());
            prop_assert!(g.cells.iter().all(|c| ws.cell_type(*c) == g.group_type));
        }
        let all: BTreeSet<Coordinate> = ws.cells().map(|c| c.coord).collect();
        prop_assert_eq!(total, all.len());
        prop_assert_eq!(union, all);
        for (_, g) in model.sheet_formula_groups(ws.id()) {
            prop_assert!(g.cells.iter().all(|c| ws.get(*c).unwrap().formula.as_ref().unwrap().r1c1_text() == g.formula));
        }
    }

    #[test]
    fn merged_groups_cover_each_cell_once_per_axis(spec in random_sheet()) {
        use sheetlint::structure::Orientation;
        let wb = materialize(&spec);
        let model = StructureModel::build(&wb);
        let mut rows = BTreeSet::new();
        let mut cols = BTreeSet::new();
        for g in model.merged_reference_groups(wb.sheets()[0].id()) {
            for c in g.cells() {
                match g.orientation {
                    Orientation::Row => prop_assert!(rows.insert(c)),
                    Orientation::Column => prop_assert!(cols.insert(c)),
                    Orientation::Singleton => prop_assert!(!rows.contains(&c) && !cols.contains(&c)),
                    Orientation::Rectangle => prop_assert!(false, "unsplit rectangle"),
                }
            }
        }
    }

    #[test]
    fn build_is_deterministic(spec in random_sheet()) {
        let a = serde_json::to_string(&StructureModel::build(&materialize(&spec))).unwrap();
        let b = serde_json::to_string(&StructureModel::build(&materialize(&spec))).unwrap();
        prop_assert_eq!(a, b);
    }
}
