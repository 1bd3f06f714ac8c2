use std::fmt;

use serde::Serialize;

use crate::grid::{Cell, CellType};

/// Value type of a cell as the spreadsheet would display it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum ResultType {
    Known(CellType),
    /// Never equal to any known type.
    Unknown,
}

impl fmt::Display for ResultType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResultType::Known(t) => t.fmt(f),
            ResultType::Unknown => f.write_str("unknown"),
        }
    }
}

const NUMERIC_FUNCTIONS: &[&str] = &[
    "ABS",
    "ACOS",
    "ASIN",
    "ATAN",
    "ATAN2",
    "AVERAGE",
    "AVERAGEA",
    "AVERAGEIF",
    "AVERAGEIFS",
    "CEILING",
    "COLUMN",
    "COLUMNS",
    "CORREL",
    "COS",
    "COUNT",
    "COUNTA",
    "COUNTBLANK",
    "COUNTIF",
    "COUNTIFS",
    "DATE",
    "DATEVALUE",
    "DAY",
    "DAYS360",
    "DEGREES",
    "EVEN",
    "EXP",
    "FACT",
    "FIND",
    "FLOOR",
    "FORECAST",
    "FV",
    "GCD",
    "HOUR",
    "INT",
    "INTERCEPT",
    "IRR",
    "LARGE",
    "LCM",
    "LEN",
    "LN",
    "LOG",
    "LOG10",
    "MATCH",
    "MAX",
    "MAXA",
    "MEDIAN",
    "MIN",
    "MINA",
    "MINUTE",
    "MOD",
    "MODE",
    "MONTH",
    "NOW",
    "NPER",
    "NPV",
    "ODD",
    "PERCENTILE",
    "PERCENTRANK",
    "PI",
    "PMT",
    "POWER",
    "PRODUCT",
    "PV",
    "QUARTILE",
    "QUOTIENT",
    "RADIANS",
    "RAND",
    "RANDBETWEEN",
    "RANK",
    "RATE",
    "ROUND",
    "ROUNDDOWN",
    "ROUNDUP",
    "ROW",
    "ROWS",
    "SEARCH",
    "SECOND",
    "SIGN",
    "SIN",
    "SLOPE",
    "SMALL",
    "SQRT",
    "STDEV",
    "STDEVA",
    "STDEVP",
    "SUBTOTAL",
    "SUM",
    "SUMIF",
    "SUMIFS",
    "SUMPRODUCT",
    "SUMSQ",
    "TAN",
    "TIME",
    "TODAY",
    "TRUNC",
    "VALUE",
    "VAR",
    "VARP",
    "WEEKDAY",
    "YEAR",
];

const STRING_FUNCTIONS: &[&str] = &[
    "CHAR",
    "CLEAN",
    "CONCAT",
    "CONCATENATE",
    "DOLLAR",
    "FIXED",
    "LEFT",
    "LOWER",
    "MID",
    "PROPER",
    "REPLACE",
    "REPT",
    "RIGHT",
    "SUBSTITUTE",
    "T",
    "TEXT",
    "TEXTJOIN",
    "TRIM",
    "UPPER",
];

const BOOLEAN_FUNCTIONS: &[&str] = &[
    "AND",
    "EXACT",
    "FALSE",
    "ISBLANK",
    "ISERR",
    "ISERROR",
    "ISEVEN",
    "ISLOGICAL",
    "ISNA",
    "ISNONTEXT",
    "ISNUMBER",
    "ISODD",
    "ISREF",
    "ISTEXT",
    "NOT",
    "OR",
    "TRUE",
    "XOR",
];

/// Result type of a call to `name`, if it is fixed regardless of arguments.
pub(crate) fn function_result(name: &str) -> Option<CellType> {
    let base = name.split('.').next().unwrap_or(name);
    if NUMERIC_FUNCTIONS.contains(&base) {
        Some(CellType::Numeric)
    } else if STRING_FUNCTIONS.contains(&base) {
        Some(CellType::String)
    } else if BOOLEAN_FUNCTIONS.contains(&base) {
        Some(CellType::Boolean)
    } else if base == "NA" {
        Some(CellType::Error)
    } else {
        None
    }
}

/// Cached value type, else the type implied by the formula's outermost operator or function.
pub fn static_result_type(c: &Cell) -> ResultType {
    match &c.formula {
        None => ResultType::Known(c.cell_type),
        Some(f) => match (&c.cached_value, f.inferred_type()) {
            (Some(v), _) => ResultType::Known(v.cell_type()),
            (None, Some(t)) => ResultType::Known(t),
            (None, None) => ResultType::Unknown,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula_a1, Origin};
    use crate::grid::{CellContent, Coordinate, Scalar, SheetId};

    fn formula_cell(text: &str, cached: Option<Scalar>) -> Cell {
        let coord = Coordinate::new(3, 3);
        let f = parse_formula_a1(text, Origin::new("S", coord)).unwrap();
        Cell::new(SheetId(0), coord, CellContent::Formula { formula: f, cached })
    }

    fn inferred(text: &str) -> ResultType {
        static_result_type(&formula_cell(text, None))
    }

    #[test]
    fn cached_value_wins() {
        let c = formula_cell("SUM(B4:E4)", Some(Scalar::Number(77.0)));
        assert_eq!(static_result_type(&c), ResultType::Known(CellType::Numeric));
        let c = formula_cell("A1&B1", Some(Scalar::Error("#VALUE!".into())));
        assert_eq!(static_result_type(&c), ResultType::Known(CellType::Error));
    }

    #[test]
    fn literals_keep_their_type() {
        let c = Cell::new(
            SheetId(0),
            Coordinate::new(1, 1),
            CellContent::Literal(Scalar::Text("Q1".into())),
        );
        assert_eq!(static_result_type(&c), ResultType::Known(CellType::String));
    }

    #[test]
    fn outermost_operator_table() {
        let n = ResultType::Known(CellType::Numeric);
        let s = ResultType::Known(CellType::String);
        let b = ResultType::Known(CellType::Boolean);
        assert_eq!(inferred("A1&B1"), s);
        assert_eq!(inferred("A1+B1&\"x\""), s);
        assert_eq!(inferred("(A1&B1)=\"ab\""), b);
        assert_eq!(inferred("A1*2"), n);
        assert_eq!(inferred("-A1"), n);
        assert_eq!(inferred("A1%"), n);
        assert_eq!(inferred("((SUM(A1:A3)))"), n);
        assert_eq!(inferred("LEFT(A1,2)"), s);
        assert_eq!(inferred("ISBLANK(A1)"), b);
        assert_eq!(inferred("STDEV.S(A1:A9)"), n);
        assert_eq!(inferred("\"x\""), s);
        assert_eq!(inferred("#N/A"), ResultType::Known(CellType::Error));
        assert_eq!(inferred("A1"), ResultType::Unknown);
        assert_eq!(inferred("IF(A1,1,\"x\")"), ResultType::Unknown);
        assert_eq!(inferred("MYUDF(A1)"), ResultType::Unknown);
        assert_ne!(ResultType::Unknown, n);
    }
}
