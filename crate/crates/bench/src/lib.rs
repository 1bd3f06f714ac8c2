//! Synthetic workbooks for benchmarks.

use sheetlint::{parse_formula_a1, CellContent, Coordinate, Origin, Scalar, Workbook, WorkbookBuilder};

/// `sheets` copies of a department table: `rows` x `cols` numbers with row sums on the
/// right, column sums below, and a summary sheet reading every table's total column.
pub fn department_workbook(sheets: usize, rows: u32, cols: u32) -> Workbook {
    let mut b = WorkbookBuilder::new("synthetic");
    let names: Vec<String> = (1..=sheets).map(|i| format!("Dept{i}")).collect();
    let formula = |text: &str, sheet: &str, at: Coordinate| CellContent::Formula {
        formula: parse_formula_a1(text, Origin::new(sheet, at)).expect("generated formula parses"),
        cached: None,
    };
    let sum_col = cols + 2;
    for name in &names {
        let id = b.add_sheet(name.clone()).expect("unique sheet name");
        b.set_cell(
            id,
            Coordinate::new(1, 1),
            CellContent::Literal(Scalar::Text(name.clone())),
        )
        .unwrap();
        for c in 2..=cols + 1 {
            b.set_cell(
                id,
                Coordinate::new(c, 2),
                CellContent::Literal(Scalar::Text(format!("H{c}"))),
            )
            .unwrap();
        }
        for r in 3..rows + 3 {
            b.set_cell(
                id,
                Coordinate::new(1, r),
                CellContent::Literal(Scalar::Text(format!("R{r}"))),
            )
            .unwrap();
            for c in 2..=cols + 1 {
                let v = ((r * 31 + c * 17) % 97) as f64;
                b.set_cell(id, Coordinate::new(c, r), CellContent::Literal(Scalar::Number(v)))
                    .unwrap();
            }
            let at = Coordinate::new(sum_col, r);
            let text = format!("SUM({}:{})", Coordinate::new(2, r), Coordinate::new(cols + 1, r));
            b.set_cell(id, at, formula(&text, name, at)).unwrap();
        }
        let last = rows + 2;
        for c in 2..=sum_col {
            let at = Coordinate::new(c, last + 1);
            let text = format!("SUM({}:{})", Coordinate::new(c, 3), Coordinate::new(c, last));
            b.set_cell(id, at, formula(&text, name, at)).unwrap();
        }
    }
    let summary = b.add_sheet("Summary").expect("unique sheet name");
    for (i, name) in names.iter().enumerate() {
        let at = Coordinate::new(2, i as u32 + 1);
        let text = format!("{name}!{}*2", Coordinate::new(sum_col, rows + 3));
        b.set_cell(summary, at, formula(&text, "Summary", at)).unwrap();
    }
    b.build()
}

/// One sheet where every formula reads its left neighbour, giving chains of length `cols`.
pub fn chain_workbook(rows: u32, cols: u32) -> Workbook {
    let mut b = WorkbookBuilder::new("chains");
    let id = b.add_sheet("S").unwrap();
    for r in 1..=rows {
        b.set_cell(
            id,
            Coordinate::new(1, r),
            CellContent::Literal(Scalar::Number(r as f64)),
        )
        .unwrap();
        for c in 2..=cols {
            let at = Coordinate::new(c, r);
            let text = format!("{}+1", Coordinate::new(c - 1, r));
            let f = parse_formula_a1(&text, Origin::new("S", at)).unwrap();
            b.set_cell(
                id,
                at,
                CellContent::Formula {
                    formula: f,
                    cached: None,
                },
            )
            .unwrap();
        }
    }
    b.build()
}
