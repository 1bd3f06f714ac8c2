//! Baseline pattern finder counts on the bundled three-sheet homework corpus.
//!
//! Planted deviants (no border rule, hand-enumerated):
//! - Grades (20 rows x 5 cols): B9 "absent", A10 42 and D14 TRUE are flagged by column.
//!   C7/C8 repeat each other, B3 sits near the B1 header, D18 lies in the border band and
//!   E11 (a constant in a formula column) has the same evaluated type as its neighbours.
//! - Attendance (12 x 16): M6 "#DIV/0!" and J7 "x" by column; H6 "sick" and J7 by row.
//!   H6 repeats the H1 header within five rows; D8/E8 are in the column border band.
//! - Budget (16 x 8): E7 "tbd" and H10 (an IF with a string result) by column. D12/D13
//!   repeat each other. The sheet is too narrow for any row flag outside the border.
//!
//! The border-inclusive sets were produced by a separate brute-force script and are frozen.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use sheetlint::eval::{evaluate_corpus, EvalConfig};
use sheetlint::formula::static_result_type;
use sheetlint::ingest::load;
use sheetlint::smells::{baseline_pattern_cells, PatternFinderVariant, PatternOrientation, SmellKind};
use sheetlint::{CellType, Coordinate, ResultType, Worksheet};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/homework")
}

fn sheet(file: &str) -> Worksheet {
    load(&corpus().join(file)).unwrap().sheets()[0].clone()
}

const FILES: [&str; 3] = ["hw-attendance.json", "hw-budget.json", "hw-grades.json"];

fn variant(o: PatternOrientation, include_border: bool) -> PatternFinderVariant {
    PatternFinderVariant {
        orientation: o,
        include_border,
        evaluated_types: false,
    }
}

fn expected(file: &str, o: PatternOrientation, border: bool) -> Vec<&'static str> {
    use PatternOrientation::*;
    match (file, o, border) {
        ("hw-grades.json", Column, false) => vec!["A10", "B9", "D14"],
        ("hw-grades.json", Row | Combined, false) => vec![],
        ("hw-grades.json", Column, true) => vec!["A10", "B9", "C1", "D1", "D14", "D18", "E1"],
        ("hw-grades.json", Row, true) => vec![
            "A11", "A12", "A13", "A15", "A16", "A17", "A19", "A2", "A20", "A4", "A5", "A6", "D14",
        ],
        ("hw-grades.json", Combined, true) => vec!["D14"],
        ("hw-attendance.json", Column, false) => vec!["J7", "M6"],
        ("hw-attendance.json", Row, false) => vec!["H6", "J7"],
        ("hw-attendance.json", Combined, false) => vec!["J7"],
        ("hw-attendance.json", Column, true) => vec![
            "B1", "C1", "D1", "D8", "E1", "E8", "F1", "G1", "I1", "J1", "J7", "K1", "L1", "L9", "M1", "M6", "N1", "O1",
            "P1",
        ],
        ("hw-attendance.json", Row, true) => vec![
            "A10", "A11", "A12", "A2", "A3", "A4", "A5", "A6", "A7", "A9", "H6", "J7", "L9", "M6",
        ],
        ("hw-attendance.json", Combined, true) => vec!["J7", "L9", "M6"],
        ("hw-budget.json", Column, false) => vec!["E7", "H10"],
        ("hw-budget.json", Row | Combined, false) => vec![],
        ("hw-budget.json", Column, true) => vec!["B1", "C1", "D1", "E1", "E7", "F1", "G1", "H1", "H10"],
        ("hw-budget.json", Row, true) => vec![
            "A10", "A11", "A14", "A15", "A16", "A2", "A3", "A4", "A5", "A6", "A8", "A9", "D12", "D13", "H10",
        ],
        ("hw-budget.json", Combined, true) => vec!["H10"],
        _ => unreachable!(),
    }
}

fn names(cells: &BTreeSet<Coordinate>) -> BTreeSet<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

/// Dense re-implementation: every 4-cell window over a padded type grid.
fn oracle(ws: &Worksheet, vertical: bool, border: bool) -> BTreeSet<String> {
    let b = ws.bounds();
    let (rows, cols) = (b.max_row as usize, b.max_col as usize);
    // Index 0 and the padding past the used range read as empty.
    let pad = 10;
    let mut grid = vec![vec![None; cols + pad]; rows + pad];
    for c in ws.cells() {
        grid[c.coord.row as usize][c.coord.col as usize] = Some(static_result_type(c));
    }
    let empty = Some(ResultType::Known(CellType::Empty));
    let norm = |t: Option<ResultType>| t.or(empty);
    let mut out = BTreeSet::new();
    for r in 1..=rows {
        for c in 1..=cols {
            let Some(t) = grid[r][c] else { continue };
            if matches!(t, ResultType::Unknown | ResultType::Known(CellType::Empty)) {
                continue;
            }
            let (pos, len) = if vertical { (r, rows) } else { (c, cols) };
            if !border && (pos <= 5 || pos > len.saturating_sub(5)) {
                continue;
            }
            let get = |p: usize| norm(if vertical { grid[p][c] } else { grid[r][p] });
            let mut hit = false;
            for start in pos.saturating_sub(3).max(1)..=pos {
                let others: Vec<_> = (start..start + 4).filter(|&p| p != pos).map(get).collect();
                let first = others[0];
                if others.iter().all(|&o| o == first)
                    && first != Some(t)
                    && first != empty
                    && first != Some(ResultType::Unknown)
                {
                    hit = true;
                }
            }
            let near = (pos.saturating_sub(5).max(1)..=pos + 5).any(|p| p != pos && get(p) == Some(t));
            if hit && !near {
                out.insert(Coordinate::new(c as u32, r as u32).to_string());
            }
        }
    }
    out
}

#[test]
fn pattern_finder_matches_hand_enumeration() {
    for file in FILES {
        let ws = sheet(file);
        for o in [
            PatternOrientation::Column,
            PatternOrientation::Row,
            PatternOrientation::Combined,
        ] {
            for border in [false, true] {
                let got = names(&baseline_pattern_cells(&ws, variant(o, border)));
                let want: BTreeSet<String> = expected(file, o, border).into_iter().map(String::from).collect();
                assert_eq!(got, want, "{file} {o:?} border={border}");
            }
        }
    }
}

#[test]
fn pattern_finder_matches_dense_oracle() {
    for file in FILES {
        let ws = sheet(file);
        for border in [false, true] {
            let col = oracle(&ws, true, border);
            let row = oracle(&ws, false, border);
            let both: BTreeSet<String> = col.intersection(&row).cloned().collect();
            for (o, want) in [
                (PatternOrientation::Column, col),
                (PatternOrientation::Row, row),
                (PatternOrientation::Combined, both),
            ] {
                assert_eq!(
                    names(&baseline_pattern_cells(&ws, variant(o, border))),
                    want,
                    "{file} {o:?}"
                );
            }
        }
    }
}

#[test]
fn harness_totals_on_the_homework_corpus() {
    let out = tempfile::tempdir().unwrap();
    let cfg = EvalConfig {
        detectors: vec![SmellKind::BaselinePatternFinder],
        ..EvalConfig::default()
    };
    let res = evaluate_corpus(&corpus(), &cfg, out.path()).unwrap();
    assert_eq!(res.summary.files_analyzed, 3);
    assert_eq!(res.summary.worksheets, 3);
    let got: BTreeMap<&str, (f64, usize)> = res
        .summary
        .metrics
        .iter()
        .map(|(k, m)| (k.as_str(), (m.total, m.worksheets_gt0)))
        .collect();
    let want = BTreeMap::from([
        ("baseline-pattern-finder:column", (7.0, 3)),
        ("baseline-pattern-finder:row", (2.0, 1)),
        ("baseline-pattern-finder:combined", (1.0, 1)),
        ("baseline-pattern-finder:column+border", (35.0, 3)),
        ("baseline-pattern-finder:row+border", (42.0, 3)),
        ("baseline-pattern-finder:combined+border", (5.0, 3)),
    ]);
    assert_eq!(got, want);
}
