use std::fmt::Display;
use std::io::Write;

use crate::error::Result;

/// Rectangular CSV output with `#`-prefixed footer metadata.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    footer: Vec<(String, String)>,
}

/// Formats a float with the shortest representation that round-trips.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), ..Self::default() }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn footer(&self) -> &[(String, String)] {
        &self.footer
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Display) {
        self.footer.push((key.to_string(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric view of a column; empty cells read as NaN.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let Some(c) = self.column(name) else { return Vec::new() };
        self.rows.iter().map(|r| r[c].parse().unwrap_or(f64::NAN)).collect()
    }

    pub fn footer_value(&self, key: &str) -> Option<&str> {
        self.footer.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Header and rows only, the part that must be reproducible.
    pub fn body(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        out.write_all(self.body()?.as_bytes())?;
        for (k, v) in &self.footer {
            writeln!(out, "# {k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let mut t = CsvTable::new(["a", "b"]);
        t.push(vec![num(1.5), "x".into()]);
        t.note("seed", 7);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1.5,x\n# seed = 7\n");
        assert_eq!(t.numbers("a"), vec![1.5]);
    }
}
