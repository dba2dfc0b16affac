//! Ordered key/value reports rendered as text lines or one JSON object.

use permest::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(u64),
    Text(String),
    Complex(Complex64),
    Counts(Vec<usize>),
}

#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(&'static str, Field)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn float(&mut self, key: &'static str, v: f64) -> &mut Self {
        self.push(key, Field::Float(v))
    }

    pub fn int(&mut self, key: &'static str, v: u64) -> &mut Self {
        self.push(key, Field::Int(v))
    }

    pub fn text(&mut self, key: &'static str, v: impl Into<String>) -> &mut Self {
        self.push(key, Field::Text(v.into()))
    }

    pub fn complex(&mut self, key: &'static str, v: Complex64) -> &mut Self {
        self.push(key, Field::Complex(v))
    }

    pub fn counts(&mut self, key: &'static str, v: &[usize]) -> &mut Self {
        self.push(key, Field::Counts(v.to_vec()))
    }

    fn push(&mut self, key: &'static str, f: Field) -> &mut Self {
        self.fields.push((key, f));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.fields.iter().map(|(k, v)| format!("{k}={}\n", text_value(v))).collect(),
            Format::Json => {
                let map: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.to_string(), json_value(v))).collect();
                format!("{}\n", Value::Object(map))
            }
        }
    }
}

// Complex values print as `re im`, the same layout as matrix files.
fn text_value(f: &Field) -> String {
    match f {
        Field::Float(v) => v.to_string(),
        Field::Int(v) => v.to_string(),
        Field::Text(s) => s.clone(),
        Field::Complex(z) => format!("{} {}", z.re, z.im),
        Field::Counts(c) => c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    }
}

fn json_value(f: &Field) -> Value {
    match f {
        Field::Float(v) => json!(v),
        Field::Int(v) => json!(v),
        Field::Text(s) => json!(s),
        Field::Complex(z) => json!([z.re, z.im]),
        Field::Counts(c) => json!(c),
    }
}
