//! Column tables with a fixed text rendering.

use serde::{Deserialize, Serialize};

/// Named columns with units, rows of numbers and optional `#` comments.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub units: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Per-row note, written as a trailing text column when any is set.
    pub notes: Vec<String>,
}

/// 12 significant digits, `nan` for missing values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

impl Table {
    pub fn new(columns: &[(&str, &str)]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.0.to_string()).collect(),
            units: columns.iter().map(|c| c.1.to_string()).collect(),
            ..Table::default()
        }
    }

    pub fn comment(&mut self, text: impl Into<String>) -> &mut Self {
        self.comments.push(text.into());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self.notes.push(String::new());
    }

    pub fn push_with_note(&mut self, row: Vec<f64>, note: impl Into<String>) {
        self.push(row);
        *self.notes.last_mut().unwrap() = note.into();
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str(&format!("# {c}\n"));
        }
        let units: Vec<String> = self
            .columns
            .iter()
            .zip(&self.units)
            .map(|(c, u)| format!("{c} [{u}]"))
            .collect();
        out.push_str(&format!("# units: {}\n", units.join(", ")));
        let with_notes = self.notes.iter().any(|n| !n.is_empty());
        let mut header = self.columns.join(",");
        if with_notes {
            header.push_str(",note");
        }
        out.push_str(&header);
        out.push('\n');
        for (row, note) in self.rows.iter().zip(&self.notes) {
            let mut line: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
            if with_notes {
                line.push(note.replace(',', ";"));
            }
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn renders_units_and_notes() {
        let mut t = Table::new(&[("p", "mbar"), ("T", "K")]);
        t.push(vec![1.0, 2.0]);
        t.push_with_note(vec![3.0, f64::NAN], "Unstable");
        let s = t.to_csv();
        assert!(s.starts_with("# units: p [mbar], T [K]\np,T,note\n"));
        assert!(s.ends_with("nan,Unstable\n"));
    }
}
