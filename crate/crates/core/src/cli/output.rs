//! Scan records and their CSV / JSON encodings.

use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Ambiguous,
    Failed,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Ambiguous => "ambiguous",
            Status::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub a: f64,
    pub value: f64,
    /// Zero for quantities that carry no enclosure.
    pub radius: f64,
    pub status: Status,
    pub method: String,
    pub terms: usize,
    pub horizon: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<f64>,
}

impl ScanRecord {
    pub fn failed(a: f64, method: &str) -> Self {
        ScanRecord {
            a,
            value: f64::NAN,
            radius: f64::NAN,
            status: Status::Failed,
            method: method.to_string(),
            terms: 0,
            horizon: 0,
            discrepancy: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub a: f64,
    pub error: String,
}

pub const CSV_HEADER: &str = "a,value,radius,status,method,terms,horizon";

/// 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, |n| {
        // round-trip through the 17-digit text so CSV and JSON agree
        serde_json::from_str(&num(n.as_f64().unwrap())).unwrap_or(Value::Number(n))
    })
}

pub fn records_csv(records: &[ScanRecord]) -> String {
    let with_disc = records.iter().any(|r| r.discrepancy.is_some());
    let mut s = String::from(CSV_HEADER);
    if with_disc {
        s.push_str(",discrepancy");
    }
    s.push('\n');
    for r in records {
        let _ = write!(
            s,
            "{},{},{},{},{},{},{}",
            num(r.a),
            num(r.value),
            num(r.radius),
            r.status.as_str(),
            r.method,
            r.terms,
            r.horizon
        );
        if with_disc {
            let _ = write!(s, ",{}", r.discrepancy.map_or("nan".into(), num));
        }
        s.push('\n');
    }
    s
}

pub fn records_json(config: Value, records: &[ScanRecord], failures: &[Failure]) -> String {
    let recs: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut v = json!({
                "a": json_num(r.a),
                "value": json_num(r.value),
                "radius": json_num(r.radius),
                "status": r.status,
                "method": r.method,
                "terms": r.terms,
                "horizon": r.horizon,
            });
            if let Some(d) = r.discrepancy {
                v["discrepancy"] = json_num(d);
            }
            v
        })
        .collect();
    let fails: Vec<Value> = failures
        .iter()
        .map(|f| json!({"a": json_num(f.a), "error": f.error}))
        .collect();
    let doc = json!({"config": config, "records": recs, "failures": fails});
    let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut o = io::stdout().lock();
            o.write_all(text.as_bytes())?;
            o.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(a: f64) -> ScanRecord {
        ScanRecord {
            a,
            value: 0.5,
            radius: 1e-12,
            status: Status::Ok,
            method: "series".into(),
            terms: 3,
            horizon: 3,
            discrepancy: None,
        }
    }

    #[test]
    fn csv_layout() {
        let s = records_csv(&[rec(2.0)]);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(
            lines.next(),
            Some("2.0000000000000000e0,5.0000000000000000e-1,9.9999999999999998e-13,ok,series,3,3")
        );
        assert!(!s.contains('\r'));
    }

    #[test]
    fn json_has_three_sections() {
        let s = records_json(json!({"count": 1}), &[rec(1.5)], &[]);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["records"][0]["a"], 1.5);
        assert!(v["failures"].as_array().unwrap().is_empty());
    }
}
