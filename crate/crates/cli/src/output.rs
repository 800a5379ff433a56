//! Rendering of command results in the three output formats.
//!
//! Machine formats print every float with 17 significant digits so that the
//! bytes depend only on the value; pretty mode uses the shortest string that
//! parses back to the same float.

use std::fmt::Write as _;
use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::ser::Formatter;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

/// `d.dddddddddddddddde±x`, with `-0` folded into `0`.
pub fn fixed17(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Shortest round-trip rendering; exponent form outside `[1e-4, 1e7)`.
pub fn shortest(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e7).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn shortest_complex(re: f64, im: f64) -> String {
    match (re == 0.0, im == 0.0) {
        (_, true) => shortest(re),
        (true, false) => format!("{}i", shortest(im)),
        _ if im < 0.0 => format!("{} - {}i", shortest(re), shortest(-im)),
        _ => format!("{} + {}i", shortest(re), shortest(im)),
    }
}

struct Fixed17;

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fixed17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Compact JSON with fixed-width floats, newline terminated.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn machine(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => fixed17(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    /// Written as `# ...` above the header.
    pub comment: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            comment: None,
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<Vec<u8>> {
        let mut buf = Vec::new();
        if let Some(c) = &self.comment {
            writeln!(buf, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::machine))?;
        }
        w.flush()?;
        drop(w);
        Ok(buf)
    }
}

/// One command result in all three renderings.
pub struct Rendered {
    pub json: serde_json::Value,
    pub table: Table,
    pub pretty: String,
}

impl Rendered {
    pub fn bytes(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        Ok(match format {
            Format::Json => to_json(&self.json)?,
            Format::Csv => self.table.to_csv()?,
            Format::Pretty => {
                let mut s = self.pretty.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s.into_bytes()
            }
        })
    }
}

/// Appends a line to a pretty buffer.
pub fn line(buf: &mut String, args: std::fmt::Arguments<'_>) {
    buf.write_fmt(args).expect("writing to a String");
    buf.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 3f64.sqrt() / 16.0, 1e-300, 6.02e23, f64::MIN_POSITIVE] {
            let s = fixed17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.len(), 18, "{s}");
        }
        assert_eq!(fixed17(-0.0), fixed17(0.0));
    }

    #[test]
    fn shortest_round_trips() {
        for x in [0.1, 1.3877787807814457e-17, -2.5e12, 0.10825317547305482, 0.0] {
            assert_eq!(shortest(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(shortest(1.3877787807814457e-17), "1.3877787807814457e-17");
        assert_eq!(shortest_complex(0.5, -0.25), "0.5 - 0.25i");
    }

    #[test]
    fn json_uses_fixed_floats() {
        let v = serde_json::json!({"x": 0.5, "n": 3});
        assert_eq!(to_json(&v).unwrap(), b"{\"n\":3,\"x\":5.0000000000000000e-1}\n");
    }
}
