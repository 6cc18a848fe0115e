//! JSON and CSV encodings of measurement results.
//!
//! Every float passes through [`round_sig`], so both formats carry the same
//! numbers and repeated runs produce identical bytes.

use num_complex::Complex64;
use serde_json::{json, Value};

use seqmeas_core::{OutcomeDistribution, StateVector, ValueDistribution};

use crate::CliError;

/// Significant digits kept in serialized floats.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits; `-0` becomes `0`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

fn number(x: f64) -> Value {
    json!(round_sig(x))
}

fn amplitudes(state: &StateVector) -> Value {
    Value::Array(
        state
            .canonical()
            .amplitudes()
            .iter()
            .map(|c: &Complex64| json!([number(c.re), number(c.im)]))
            .collect(),
    )
}

pub fn distribution_json(dist: &OutcomeDistribution) -> Value {
    let m = &dist.metadata;
    let outcomes: Vec<Value> = dist
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "labels": o.affirmative_labels.iter().collect::<Vec<_>>(),
                "probability": number(o.probability),
                "final_state": amplitudes(&o.final_state),
            })
        })
        .collect();
    json!({
        "metadata": {
            "device_size": m.device_size,
            "dimension": m.dimension,
            "labels": m.labels,
            "mode": m.mode.to_string(),
            "samples": m.samples,
            "seed": m.seed,
        },
        "outcomes": outcomes,
    })
}

/// Reported-value table, plus the collapsed state for one reading.
pub fn imprecise_json(
    table: &ValueDistribution,
    reported: f64,
    post_state: &StateVector,
    overlap: f64,
) -> Value {
    let rows: Vec<Value> = table
        .entries()
        .iter()
        .map(|&(value, p)| json!({"reported": number(value), "probability": number(p)}))
        .collect();
    json!({
        "probabilities": rows,
        "reported": number(reported),
        "post_state": amplitudes(post_state),
        "orthogonality_metric": number(overlap),
    })
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_json_string(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

fn cell(x: f64) -> String {
    number(x).to_string()
}

/// One row per outcome: labels joined by `;`, probability, then the real
/// and imaginary part of each final-state amplitude.
pub fn distribution_csv(dist: &OutcomeDistribution) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["labels".to_string(), "probability".to_string()];
    for i in 0..dist.metadata.dimension {
        header.push(format!("re{i}"));
        header.push(format!("im{i}"));
    }
    writer.write_record(&header).map_err(csv_error)?;
    for o in &dist.outcomes {
        let labels: Vec<&str> = o.affirmative_labels.iter().map(String::as_str).collect();
        let mut row = vec![labels.join(";"), cell(o.probability)];
        for c in o.final_state.canonical().amplitudes() {
            row.push(cell(c.re));
            row.push(cell(c.im));
        }
        writer.write_record(&row).map_err(csv_error)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields is UTF-8"))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}
