//! CSV and JSON result files. Every float is written with 6 significant
//! digits; JSON documents carry a schema version.

use super::memory::LogicalRateEstimate;
use serde::Serialize;
use serde_json::Value;
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 10] = ["d", "p", "R_e", "p_m", "eta", "trials", "failures", "p_L", "ci_low", "ci_high"];

/// Round to 6 significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

/// Shortest decimal text of `sig6(x)`; infinities as `inf`.
pub fn fmt6(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{}", sig6(x))
}

pub fn write_rates_csv<W: Write>(out: W, rows: &[LogicalRateEstimate]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            fmt6(r.p),
            fmt6(r.r_e),
            fmt6(r.p_m),
            r.eta.map(fmt6).unwrap_or_default(),
            r.trials.to_string(),
            r.failures.to_string(),
            fmt6(r.p_l),
            fmt6(r.ci_low),
            fmt6(r.ci_high),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Round every float in a JSON tree to 6 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(sig6(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// `{"schema_version", "kind", "results"}` with rounded floats.
pub fn json_document<T: Serialize>(kind: &str, results: &T) -> serde_json::Result<Value> {
    let mut results = serde_json::to_value(results)?;
    round_floats(&mut results);
    Ok(serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "results": results,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseConfig;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt6(0.0093712345), "0.00937123");
        assert_eq!(fmt6(123456789.0), "123457000");
        assert_eq!(fmt6(0.0), "0");
        assert_eq!(fmt6(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_has_documented_columns() {
        let cfg = NoiseConfig::biased(0.01, f64::INFINITY);
        let rows = [LogicalRateEstimate::new(5, &cfg, 1000, 7)];
        let mut buf = Vec::new();
        write_rates_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[0], "5");
        assert_eq!(fields[4], "inf");
        assert_eq!(fields[7], "0.007");
    }

    #[test]
    fn json_is_versioned_and_rounded() {
        let doc = json_document("test", &serde_json::json!({"x": 1.0 / 3.0, "v": [2.0f64.sqrt()]})).unwrap();
        assert_eq!(doc["schema_version"], SCHEMA_VERSION);
        assert_eq!(doc["results"]["x"].as_f64().unwrap(), 0.333333);
        assert_eq!(doc["results"]["v"][0].as_f64().unwrap(), 1.41421);
    }
}
