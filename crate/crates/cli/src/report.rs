//! Flat, ordered report records and their JSON, CSV and text renderings.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which round-trips
//! every `f64` exactly. Non-finite floats and absent values become `null` in
//! JSON and empty cells in CSV.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(u64),
    Num(f64),
    Nums(Vec<f64>),
    Str(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Null, Value::Num)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<Option<String>> for Value {
    fn from(v: Option<String>) -> Self {
        v.map_or(Value::Null, Value::Str)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<Vec<f64>> for Value {
    fn from(v: Vec<f64>) -> Self {
        Value::Nums(v)
    }
}

impl From<Option<Vec<f64>>> for Value {
    fn from(v: Option<Vec<f64>>) -> Self {
        v.map_or(Value::Null, Value::Nums)
    }
}

/// Ordered key/value pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Value)>);

impl Record {
    pub fn push(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key, value.into()));
        self
    }
}

pub fn sig17(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

fn json_value(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Num(x) => sig17(*x).unwrap_or_else(|| "null".into()),
        Value::Nums(xs) => {
            let items: Vec<String> = xs
                .iter()
                .map(|x| sig17(*x).unwrap_or_else(|| "null".into()))
                .collect();
            format!("[{}]", items.join(","))
        }
        Value::Str(s) => serde_json::to_string(s).expect("strings serialize"),
    }
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Num(x) => sig17(*x).unwrap_or_default(),
        Value::Nums(xs) => xs
            .iter()
            .map(|x| sig17(*x).unwrap_or_default())
            .collect::<Vec<_>>()
            .join(";"),
        Value::Str(s) => s.clone(),
    }
}

pub fn to_json(record: &Record) -> String {
    let body: Vec<String> = record
        .0
        .iter()
        .map(|(k, v)| format!("{}:{}", json_value(&Value::Str((*k).into())), json_value(v)))
        .collect();
    format!("{{{}}}", body.join(","))
}

/// Renders one record, or a list of records (a JSON array / CSV table).
pub fn render(records: &[Record], single: bool, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            if single && records.len() == 1 {
                format!("{}\n", to_json(&records[0]))
            } else {
                let items: Vec<String> = records.iter().map(to_json).collect();
                format!("[{}]\n", items.join(","))
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = records.first() {
                w.write_record(first.0.iter().map(|(k, _)| *k))
                    .expect("in-memory write");
            }
            for r in records {
                w.write_record(r.0.iter().map(|(_, v)| plain_value(v)))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for (i, r) in records.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let width = r.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &r.0 {
                    let shown = match v {
                        Value::Null => "-".to_string(),
                        Value::Num(x) => format!("{x}"),
                        Value::Nums(xs) => format!("{xs:?}"),
                        other => plain_value(other),
                    };
                    let _ = writeln!(out, "{k:<width$}  {shown}");
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Record {
        let mut r = Record::default();
        r.push("lambda", 2.0)
            .push("gamma", None::<f64>)
            .push("kind", "steady")
            .push("worst_point", vec![0.1, -0.2, 0.3])
            .push("seed", 7u64);
        r
    }

    #[test]
    fn json_is_flat_and_lossless() {
        let s = to_json(&sample());
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["lambda"].as_f64(), Some(2.0));
        assert!(v["gamma"].is_null());
        assert_eq!(v["worst_point"][1].as_f64(), Some(-0.2));
        assert!(s.contains("2.0000000000000000e0"));
        let x = 0.1 + 0.2;
        assert_eq!(sig17(x).unwrap().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_has_header_and_row() {
        let s = render(&[sample()], true, OutputFormat::Csv);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("lambda,gamma,kind,worst_point,seed"));
        assert!(lines.next().unwrap().starts_with("2.0000000000000000e0,,steady,"));
    }

    #[test]
    fn non_finite_is_null() {
        let mut r = Record::default();
        r.push("x", f64::INFINITY);
        assert_eq!(to_json(&r), r#"{"x":null}"#);
    }
}
