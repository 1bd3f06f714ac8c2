use std::fs;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use rust_xlsxwriter::{Formula, Workbook as XlsxBook};
use sheetlint::ingest::{
    classify_file, load, load_xlsx, load_xlsx_with_warnings, parse_canonical, preprocess_corpus, serialize_canonical,
    FileClass, PreprocessFilter,
};
use sheetlint::structure::StructureModel;
use sheetlint::{parse_formula_a1, CellContent, Coordinate, Origin, Scalar, WorkbookBuilder};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Writes a canonical document's cells into an XLSX file, formulas with their cached results.
fn canonical_to_xlsx(doc: &serde_json::Value, path: &Path) {
    let mut book = XlsxBook::new();
    for sheet in doc["sheets"].as_array().unwrap() {
        let ws = book.add_worksheet();
        ws.set_name(sheet["name"].as_str().unwrap()).unwrap();
        for cell in sheet["cells"].as_array().unwrap() {
            let at: Coordinate = cell["addr"].as_str().unwrap().parse().unwrap();
            let (row, col) = (at.row - 1, (at.col - 1) as u16);
            match cell["type"].as_str().unwrap() {
                "numeric" => ws.write_number(row, col, cell["value"].as_f64().unwrap()).map(|_| ()),
                "string" => ws.write_string(row, col, cell["value"].as_str().unwrap()).map(|_| ()),
                "boolean" => ws.write_boolean(row, col, cell["value"].as_bool().unwrap()).map(|_| ()),
                "formula" => {
                    let f = Formula::new(format!("={}", cell["formula"].as_str().unwrap()))
                        .set_result(cell["cached"].to_string());
                    ws.write_formula(row, col, f).map(|_| ())
                }
                other => panic!("unexpected type {other}"),
            }
            .unwrap();
        }
    }
    book.save(path).unwrap();
}

#[test]
fn xlsx_running_example_matches_canonical() {
    let json = fs::read_to_string(fixture("running-example.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("running.xlsx");
    canonical_to_xlsx(&doc, &path);

    let canonical = load(&fixture("running-example.json")).unwrap();
    let (from_xlsx, warnings) = load_xlsx_with_warnings(&path).unwrap();
    assert!(warnings.is_empty(), "{warnings:?}");
    assert_eq!(
        serialize_canonical(&from_xlsx).unwrap(),
        serialize_canonical(&canonical).unwrap()
    );
    for (a, b) in canonical.sheets().iter().zip(from_xlsx.sheets()) {
        assert_eq!(a.name(), b.name());
        assert!(a.cells().eq(b.cells()), "{}", a.name());
    }
    let ma = serde_json::to_string(&StructureModel::build(&canonical)).unwrap();
    let mb = serde_json::to_string(&StructureModel::build(&from_xlsx)).unwrap();
    assert_eq!(ma, mb);
}

#[test]
fn corrupt_xlsx_is_unreadable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.xlsx");
    fs::write(&path, b"PK\x03\x04 definitely not a zip archive").unwrap();
    let err = load_xlsx(&path).unwrap_err();
    assert!(err.is_unreadable(), "{err}");
    assert!(matches!(classify_file(&path), FileClass::Unreadable(_)));
}

#[test]
fn constants_only_xlsx_loads_without_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("consts.xlsx");
    let mut book = XlsxBook::new();
    let ws = book.add_worksheet();
    ws.write_string(0, 0, "Name").unwrap();
    ws.write_number(1, 0, 3.5).unwrap();
    book.save(&path).unwrap();
    let wb = load(&path).unwrap();
    assert!(!wb.has_formulas());
    assert_eq!(wb.sheets()[0].len(), 2);
    assert_eq!(classify_file(&path), FileClass::NoFormulas);
}

fn three_file_corpus() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("corrupt.xlsx"), b"garbage").unwrap();
    fs::write(
        dir.path().join("consts.json"),
        r#"{"schema_version":1,"sheets":[{"name":"S","cells":[{"addr":"A1","type":"numeric","value":1}]}]}"#,
    )
    .unwrap();
    fs::copy(fixture("running-example.json"), dir.path().join("formulas.json")).unwrap();
    dir
}

#[test]
fn preprocess_one_file_per_rule() {
    let dir = three_file_corpus();
    let r = preprocess_corpus(dir.path(), PreprocessFilter::Complete).unwrap();
    assert_eq!(r.total_files, 3);
    assert_eq!(r.accepted, ["formulas.json"]);
    assert_eq!(r.excluded_unreadable, 1);
    assert_eq!(r.excluded_no_formulas, 1);
    assert_eq!(r.excluded_unprocessable, 0);
    assert_eq!(preprocess_corpus(dir.path(), PreprocessFilter::Complete).unwrap(), r);

    let only3 = preprocess_corpus(dir.path(), PreprocessFilter::HasFormulas).unwrap();
    assert_eq!(only3.excluded_no_formulas, 1);
    assert_eq!(only3.excluded_unreadable, 0);
    assert_eq!(only3.accepted, ["corrupt.xlsx", "formulas.json"]);

    let only1 = preprocess_corpus(dir.path(), PreprocessFilter::ReadableOnly).unwrap();
    assert_eq!(only1.excluded_unreadable, 1);
    assert_eq!(only1.accepted, ["consts.json", "formulas.json"]);
}

#[test]
fn preprocess_counts_unsupported_formulas() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("names.json"),
        r#"{"schema_version":1,"sheets":[{"name":"S","cells":[{"addr":"A1","type":"formula","formula":"SUM(myRange)"}]}]}"#,
    )
    .unwrap();
    let r = preprocess_corpus(dir.path(), PreprocessFilter::Complete).unwrap();
    assert_eq!(r.excluded_unprocessable, 1);
    assert_eq!(
        r.total_files,
        r.accepted.len() + r.excluded_unreadable + r.excluded_unprocessable + r.excluded_no_formulas
    );
}

#[test]
fn preprocess_empty_and_missing_directories() {
    let dir = tempfile::tempdir().unwrap();
    let r = preprocess_corpus(dir.path(), PreprocessFilter::Complete).unwrap();
    assert_eq!(r, Default::default());
    assert!(preprocess_corpus(&dir.path().join("missing"), PreprocessFilter::Complete).is_err());
}

#[test]
fn document_edge_cases() {
    let wb = parse_canonical(r#"{"schema_version":1,"sheets":[]}"#, "mem").unwrap();
    assert!(wb.sheets().is_empty());
    let err = parse_canonical(
        r#"{"schema_version":1,"sheets":[{"name":"S","cells":[{"addr":"B3","type":"formula"}]}]}"#,
        "mem",
    )
    .unwrap_err();
    assert!(err.to_string().contains("B3"), "{err}");
}

fn random_cells() -> impl Strategy<Value = Vec<(usize, u32, u32, u8, i32)>> {
    prop::collection::vec((0usize..2, 1u32..=12, 1u32..=12, 0u8..6, -50i32..50), 0..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_round_trip(cells in random_cells()) {
        let names = ["Data", "Sheet Two"];
        let mut b = WorkbookBuilder::new("mem");
        let ids: Vec<_> = names.iter().map(|n| b.add_sheet(*n).unwrap()).collect();
        let mut seen = std::collections::BTreeSet::new();
        for (s, col, row, kind, v) in cells {
            let at = Coordinate::new(col, row);
            if !seen.insert((s, at)) {
                continue;
            }
            let content = match kind {
                0 => CellContent::Literal(Scalar::Number(v as f64 / 4.0)),
                1 => CellContent::Literal(Scalar::Text(format!("t{v}"))),
                2 => CellContent::Literal(Scalar::Bool(v > 0)),
                3 => CellContent::Literal(Scalar::Error("#REF!".into())),
                4 => CellContent::Formula {
                    formula: parse_formula_a1(&format!("SUM($A$1:B{})*{v}", row.max(2)), Origin::new(names[s], at)).unwrap(),
                    cached: Some(Scalar::Number(v as f64)),
                },
                _ => CellContent::Formula {
                    formula: parse_formula_a1("'Sheet Two'!C3&\"x\"", Origin::new(names[s], at)).unwrap(),
                    cached: None,
                },
            };
            b.set_cell(ids[s], at, content).unwrap();
        }
        let wb = b.build();
        let text = serialize_canonical(&wb).unwrap();
        let back = parse_canonical(&text, "mem").unwrap();
        prop_assert_eq!(serialize_canonical(&back).unwrap(), text.clone());
        for (x, y) in wb.sheets().iter().zip(back.sheets()) {
            prop_assert!(x.cells().eq(y.cells()));
        }
    }
}
