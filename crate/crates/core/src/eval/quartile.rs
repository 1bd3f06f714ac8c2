use serde::Serialize;

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuartileSeries {
    pub kind: String,
    /// (percentile, value), percentiles ascending and ending at 100.
    pub points: Vec<(f64, f64)>,
}

/// For each percentile p at multiples of `step` (and 100), the smallest value v with
/// at least p% of the values ≤ v.
pub fn quartile_series(kind: &str, values: &[f64], step: f64) -> Result<QuartileSeries, EvalError> {
    if values.is_empty() {
        return Err(EvalError::EmptySeries(kind.to_string()));
    }
    if !(step > 0.0 && step <= 100.0) {
        return Err(EvalError::Config(format!("percentile step {step} outside (0, 100]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points = Vec::new();
    let mut i = 1u32;
    loop {
        let p = (step * i as f64).min(100.0);
        // Rank of the first value covering p percent; the epsilon absorbs float noise in p·n.
        let k = ((p * n / 100.0) - 1e-9).ceil().max(1.0) as usize;
        points.push((p, sorted[k.min(sorted.len()) - 1]));
        if p >= 100.0 {
            break;
        }
        i += 1;
    }
    Ok(QuartileSeries {
        kind: kind.to_string(),
        points,
    })
}
