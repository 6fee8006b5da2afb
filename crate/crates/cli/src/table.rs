//! Tables written as CSV with `#` header comments, or as one JSON object
//! {meta, columns, rows}.

use darboux::C64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Real,
    Complex,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Complex(C64),
    Text(String),
}

impl Cell {
    fn is_finite(&self) -> bool {
        match self {
            Cell::Real(x) => x.is_finite(),
            Cell::Complex(z) => z.re.is_finite() && z.im.is_finite(),
            Cell::Text(_) => true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<(String, Kind)>,
    pub rows: Vec<Vec<Cell>>,
    /// Grid points dropped because a value was not finite.
    pub excluded: Vec<f64>,
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn complex(z: C64) -> String {
    format!("{}{}{}i", num(z.re), if z.im.is_sign_negative() { "" } else { "+" }, num(z.im))
}

impl Table {
    pub fn new(command: &str) -> Self {
        let mut t = Self::default();
        t.meta("generator", format!("darboux {}", env!("CARGO_PKG_VERSION")));
        t.meta("command", command);
        t
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn column(&mut self, name: impl Into<String>, kind: Kind) {
        self.columns.push((name.into(), kind));
    }

    /// Adds a grid row, or records `x` as excluded when a value is not finite.
    pub fn grid_row(&mut self, x: f64, cells: Vec<Cell>) {
        if cells.iter().all(Cell::is_finite) {
            self.rows.push(cells);
        } else {
            self.excluded.push(x);
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let ex: Vec<String> = self.excluded.iter().map(|&x| num(x)).collect();
        out.push_str(&format!("# excluded = [{}]\n", ex.join(" ")));
        let header: Vec<String> = self
            .columns
            .iter()
            .flat_map(|(name, kind)| match kind {
                Kind::Complex => vec![format!("{name}_re"), format!("{name}_im")],
                _ => vec![name.clone()],
            })
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .flat_map(|c| match c {
                    Cell::Real(x) => vec![num(*x)],
                    Cell::Complex(z) => vec![num(z.re), num(z.im)],
                    Cell::Text(s) => vec![s.clone()],
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        meta.insert("excluded".into(), json!(self.excluded));
        let columns: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| match c {
                            Cell::Real(x) => json!(x),
                            Cell::Complex(z) => json!([z.re, z.im]),
                            Cell::Text(s) => json!(s),
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "meta": meta, "columns": columns, "rows": rows })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("table serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("test");
        t.meta("a2", "-5");
        t.column("x", Kind::Real);
        t.column("u", Kind::Complex);
        t.grid_row(0.5, vec![Cell::Real(0.5), Cell::Complex(C64::new(1.0, -0.25))]);
        t.grid_row(0.75, vec![Cell::Real(0.75), Cell::Complex(C64::new(f64::NAN, 0.0))]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# generator = darboux "));
        assert!(lines.contains(&"# excluded = [7.5000000000000000e-1]"));
        assert!(lines.contains(&"x,u_re,u_im"));
        assert_eq!(*lines.last().unwrap(), "5.0000000000000000e-1,1.0000000000000000e0,-2.5000000000000000e-1");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["columns"], json!(["x", "u"]));
        assert_eq!(v["rows"][0], json!([0.5, [1.0, -0.25]]));
        assert_eq!(v["meta"]["a2"], "-5");
        assert_eq!(v["meta"]["excluded"], json!([0.75]));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(num(f64::INFINITY), "inf");
    }
}
