use std::io::{self, BufWriter, Stdout, Write};

use clap::ValueEnum;
use nilbohr::serial::write_csv;
use nilbohr::WindowSet;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Record stream on stdout: one JSON object per line, or CSV with a header
/// row once everything is collected. Diagnostics go to stderr.
pub struct Sink {
    format: Format,
    out: BufWriter<Stdout>,
    rows: Vec<Map<String, Value>>,
}

impl Sink {
    pub fn new(format: Format) -> Self {
        Sink {
            format,
            out: BufWriter::new(io::stdout()),
            rows: Vec::new(),
        }
    }

    pub fn record(&mut self, v: Value) -> io::Result<()> {
        let map = match v {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        match self.format {
            Format::Json => writeln!(self.out, "{}", Value::Object(map)),
            Format::Csv => {
                self.rows.push(map);
                Ok(())
            }
        }
    }

    /// A window set: the whole object as one JSON line, or one CSV row per
    /// member. Boundary members are reported on stderr in both cases.
    pub fn set(&mut self, s: &WindowSet) -> io::Result<()> {
        for n in s.boundary() {
            diag(&format!("boundary-ambiguous n={n}"));
        }
        match self.format {
            Format::Json => {
                let v = serde_json::to_value(s).map_err(io::Error::other)?;
                writeln!(self.out, "{v}")
            }
            Format::Csv => {
                for n in s.iter() {
                    self.record(json!({ "n": n }))?;
                }
                Ok(())
            }
        }
    }

    /// A list result: `head` extended by `key: [...]` as one JSON line, or
    /// one CSV row per element.
    pub fn list(&mut self, mut head: Map<String, Value>, key: &str, items: Vec<Value>) -> io::Result<()> {
        match self.format {
            Format::Json => {
                head.insert(key.into(), Value::Array(items));
                self.record(Value::Object(head))
            }
            Format::Csv => {
                for v in items {
                    let mut row = Map::new();
                    row.insert(key.into(), v);
                    self.record(Value::Object(row))?;
                }
                Ok(())
            }
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        if self.format == Format::Csv {
            write_csv(&mut self.out, &self.rows)?;
        }
        self.out.flush()
    }
}

pub fn diag(msg: &str) {
    eprintln!("{msg}");
}
