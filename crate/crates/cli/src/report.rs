//! Tabular results and their csv / json / plotdata renderings.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), so output
//! round-trips exactly and is byte-identical between runs.

use crate::config::{Format, RunConfig};
use serde::Serialize;
use serde_json::ser::Formatter;
use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

pub fn fmt_f(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    /// (column name, unit) pairs; the unit appears in plotdata headers.
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Table {
            name: name.into(),
            columns: columns
                .iter()
                .map(|(c, u)| (c.to_string(), u.to_string()))
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// One run: config echo, result tables, scalar error estimates and notes.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub tables: Vec<Table>,
    pub estimates: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            command: command.into(),
            config: config.clone(),
            tables: Vec::new(),
            estimates: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn estimate(&mut self, name: &str, v: f64) {
        self.estimates.push((name.into(), v));
    }

    pub fn render(&self, format: Format, w: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.csv(&self.tables, w),
            Format::Plotdata => self.plotdata(&self.tables, w),
            Format::Json => self.json(w),
        }
    }

    /// Renders only the named tables (used to split output across files).
    pub fn render_tables(
        &self,
        format: Format,
        names: &[&str],
        w: &mut dyn Write,
    ) -> io::Result<()> {
        let t: Vec<Table> = self
            .tables
            .iter()
            .filter(|t| names.contains(&t.name.as_str()))
            .cloned()
            .collect();
        match format {
            Format::Csv => self.csv(&t, w),
            Format::Plotdata => self.plotdata(&t, w),
            Format::Json => {
                let r = Report {
                    tables: t,
                    ..self.clone()
                };
                r.json(w)
            }
        }
    }

    fn csv(&self, tables: &[Table], w: &mut dyn Write) -> io::Result<()> {
        for (k, t) in tables.iter().enumerate() {
            if k > 0 {
                writeln!(w)?;
            }
            let head: Vec<String> = t.columns.iter().map(|c| csv_field(&c.0)).collect();
            writeln!(w, "{}", head.join(","))?;
            for r in &t.rows {
                let cells: Vec<String> = r
                    .iter()
                    .map(|c| match c {
                        Cell::F(v) => fmt_f(*v),
                        Cell::I(v) => v.to_string(),
                        Cell::S(s) => csv_field(s),
                    })
                    .collect();
                writeln!(w, "{}", cells.join(","))?;
            }
        }
        Ok(())
    }

    fn plotdata(&self, tables: &[Table], w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "# latticebands {}", self.command)?;
        writeln!(
            w,
            "# d = {}, alpha0 = {}, kappa = {}, eta = {}",
            self.config.model.d,
            fmt_f(self.config.model.alpha0),
            fmt_f(self.config.model.kappa),
            fmt_f(self.config.ewald.eta)
        )?;
        writeln!(
            w,
            "# lengths in lattice spacings a, alpha = omega a / (2 pi c), tau = c t / a"
        )?;
        for (name, v) in &self.estimates {
            writeln!(w, "# estimate {name} = {}", fmt_f(*v))?;
        }
        for n in &self.notes {
            writeln!(w, "# note: {n}")?;
        }
        for t in tables {
            writeln!(w)?;
            writeln!(w, "# table {}", t.name)?;
            let head: Vec<String> = t
                .columns
                .iter()
                .enumerate()
                .map(|(i, (c, u))| {
                    if u.is_empty() {
                        format!("{}:{c}", i + 1)
                    } else {
                        format!("{}:{c}[{u}]", i + 1)
                    }
                })
                .collect();
            writeln!(w, "# {}", head.join(" "))?;
            for r in &t.rows {
                let cells: Vec<String> = r
                    .iter()
                    .map(|c| match c {
                        Cell::F(v) => fmt_f(*v),
                        Cell::I(v) => v.to_string(),
                        Cell::S(s) if s.is_empty() => "-".into(),
                        Cell::S(s) => s.replace(char::is_whitespace, "_"),
                    })
                    .collect();
                writeln!(w, "{}", cells.join(" "))?;
            }
        }
        Ok(())
    }

    fn json(&self, w: &mut dyn Write) -> io::Result<()> {
        use serde_json::{Map, Value};
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    Value::Array(
                        r.iter()
                            .map(|c| match c {
                                Cell::F(v) => serde_json::Number::from_f64(*v)
                                    .map_or(Value::Null, Value::Number),
                                Cell::I(v) => Value::from(*v),
                                Cell::S(s) => Value::from(s.clone()),
                            })
                            .collect(),
                    )
                })
                .collect();
            let mut obj = Map::new();
            obj.insert(
                "columns".into(),
                Value::from(t.columns.iter().map(|c| c.0.clone()).collect::<Vec<_>>()),
            );
            obj.insert(
                "units".into(),
                Value::from(t.columns.iter().map(|c| c.1.clone()).collect::<Vec<_>>()),
            );
            obj.insert("rows".into(), Value::Array(rows));
            tables.insert(t.name.clone(), Value::Object(obj));
        }
        let mut est = Map::new();
        for (k, v) in &self.estimates {
            est.insert(
                k.clone(),
                serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            );
        }
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(self.command.clone()));
        doc.insert(
            "config".into(),
            serde_json::to_value(&self.config).map_err(io::Error::other)?,
        );
        doc.insert("results".into(), Value::Object(tables));
        doc.insert("error_estimates".into(), Value::Object(est));
        doc.insert("notes".into(), Value::from(self.notes.clone()));
        let mut ser = serde_json::Serializer::with_formatter(&mut *w, Sig17::default());
        Value::Object(doc)
            .serialize(&mut ser)
            .map_err(io::Error::other)?;
        writeln!(w)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Pretty JSON with 17-significant-digit floats.
#[derive(Default)]
struct Sig17 {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{}", fmt_f(v))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("sum", &RunConfig::default());
        let mut t = Table::new("sum", &[("term", ""), ("re", ""), ("im", "")]);
        t.push(vec!["total".into(), 0.1.into(), (-2.5e-7).into()]);
        r.tables.push(t);
        r.estimate("quad_error", 1e-13);
        r
    }

    fn render(f: Format) -> String {
        let mut v = Vec::new();
        sample().render(f, &mut v).unwrap();
        String::from_utf8(v).unwrap()
    }

    #[test]
    fn csv_has_header_and_17_digits() {
        let s = render(Format::Csv);
        assert_eq!(
            s,
            "term,re,im\ntotal,1.0000000000000001e-1,-2.4999999999999999e-7\n"
        );
    }

    #[test]
    fn plotdata_columns_follow_hash_headers() {
        let s = render(Format::Plotdata);
        let data: Vec<&str> = s
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .collect();
        assert_eq!(
            data,
            vec!["total 1.0000000000000001e-1 -2.4999999999999999e-7"]
        );
        assert!(s.contains("# 1:term 2:re 3:im"));
    }

    #[test]
    fn json_is_valid_and_exact() {
        let s = render(Format::Json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["results"]["sum"]["rows"][0][1].as_f64(), Some(0.1));
        assert_eq!(v["error_estimates"]["quad_error"].as_f64(), Some(1e-13));
        assert_eq!(v["config"]["model"]["d"].as_u64(), Some(1));
        assert!(s.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("Γ"), "Γ");
    }
}
