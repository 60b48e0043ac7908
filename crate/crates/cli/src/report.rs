use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use serde_json::Value;

/// Output encoding of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One pass/fail check: `max_residual ≤ tolerance`.
#[derive(Clone, Debug)]
pub struct Record {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// One tensor component evaluated at a sample point.
#[derive(Clone, Debug)]
pub struct Component {
    pub name: String,
    pub point: usize,
    pub indices: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub enum Entry {
    Record(Record),
    Component(Component),
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub n: usize,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, n: usize) -> Self {
        Report { command, seed, n, entries: Vec::new() }
    }

    /// Adds a check; a non-finite residual fails.
    pub fn check(&mut self, name: impl Into<String>, max_residual: f64, tolerance: f64) {
        let pass = max_residual.is_finite() && max_residual <= tolerance;
        self.entries.push(Entry::Record(Record { name: name.into(), max_residual, tolerance, pass }));
    }

    pub fn component(&mut self, name: &str, point: usize, indices: Vec<usize>, value: f64) {
        self.entries.push(Entry::Component(Component { name: name.to_string(), point, indices, value }));
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Record(r) => Some(r),
            Entry::Component(_) => None,
        })
    }

    pub fn pass(&self) -> bool {
        self.records().all(|r| r.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match e {
                Entry::Record(r) => writeln!(
                    out,
                    "{{\"type\":\"record\",\"name\":{},\"max_residual\":{},\"tolerance\":{},\"pass\":{}}}",
                    Value::from(r.name.as_str()),
                    number(r.max_residual),
                    number(r.tolerance),
                    r.pass
                ),
                Entry::Component(c) => writeln!(
                    out,
                    "{{\"type\":\"component\",\"name\":{},\"point\":{},\"indices\":{},\"value\":{}}}",
                    Value::from(c.name.as_str()),
                    c.point,
                    Value::from(c.indices.clone()),
                    number(c.value)
                ),
            }
            .expect("writing to a string");
        }
        writeln!(
            out,
            "{{\"type\":\"summary\",\"command\":\"{}\",\"seed\":{},\"n\":{},\"version\":\"{}\",\"records\":{},\"pass\":{}}}",
            self.command,
            self.seed,
            self.n,
            env!("CARGO_PKG_VERSION"),
            self.records().count(),
            self.pass()
        )
        .expect("writing to a string");
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::from("type,name,point,indices,value,tolerance,pass\n");
        for e in &self.entries {
            match e {
                Entry::Record(r) => writeln!(
                    out,
                    "record,{},,,{},{},{}",
                    csv_field(&r.name),
                    csv_number(r.max_residual),
                    csv_number(r.tolerance),
                    r.pass
                ),
                Entry::Component(c) => {
                    let idx: Vec<String> = c.indices.iter().map(usize::to_string).collect();
                    writeln!(out, "component,{},{},{},{},,", csv_field(&c.name), c.point, idx.join(" "), csv_number(c.value))
                }
            }
            .expect("writing to a string");
        }
        writeln!(
            out,
            "summary,{},,seed={} n={} version={},{},,{}",
            self.command,
            self.seed,
            self.n,
            env!("CARGO_PKG_VERSION"),
            self.records().count(),
            self.pass()
        )
        .expect("writing to a string");
        out
    }
}

/// 17 significant digits; non-finite values become `null`.
pub fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn csv_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit(text: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(number(0.1), "1.0000000000000001e-1");
        assert_eq!(number(f64::NAN), "null");
    }

    #[test]
    fn non_finite_residual_fails() {
        let mut r = Report::new("check", 0, 2);
        r.check("a", 1e-12, 1e-10);
        assert!(r.pass());
        r.check("b", f64::NAN, 1e-10);
        assert!(!r.pass());
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn json_lines_parse() {
        let mut r = Report::new("check", 7, 3);
        r.check("x", 0.5, 1.0);
        r.component("S", 0, vec![1, 2, 3], -2.0);
        for line in r.render(Format::Json).lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            assert!(v.get("type").is_some());
        }
    }
}
