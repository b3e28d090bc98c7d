use halo_core::arith::Rational;
use halo_core::verdict::Tally;
use serde_json::{json, Value};

pub const SCHEMA_PREFIX: &str = "halo";

/// Exact rational as "a/b", always with a denominator.
pub fn q(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn tally(t: &Tally) -> Value {
    json!({ "pass": t.pass.to_string(), "inconclusive": t.inconclusive.to_string(), "fail": t.fail.to_string() })
}

/// A command's result: JSON document, CSV table (header first) and whether a check failed.
pub struct Report {
    pub json: Value,
    pub csv: Vec<Vec<String>>,
    pub failed: bool,
}

impl Report {
    pub fn new(kind: &str, body: Value, csv: Vec<Vec<String>>, failed: bool) -> Self {
        let mut json = json!({ "schema": format!("{SCHEMA_PREFIX}.{kind}/1") });
        if let (Some(dst), Value::Object(src)) = (json.as_object_mut(), body) {
            dst.extend(src);
        }
        Report { json, csv, failed }
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("values serialize") + "\n"
    }

    pub fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.csv {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}
