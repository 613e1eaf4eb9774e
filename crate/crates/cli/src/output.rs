//! CSV and JSON rendering with fixed float formatting.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

use crate::compute::Row;
use crate::scenario::{Format, Point};

/// Shortest round-trip decimal; scientific outside `[1e-4, 1e15)`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub struct Table {
    pub params: Vec<String>,
    pub components: Vec<String>,
    pub rows: Vec<(Point, Row)>,
}

impl Table {
    /// Column layout: sorted parameter names, value, components, error_estimate.
    pub fn new(rows: Vec<(Point, Row)>) -> Table {
        let mut params: Vec<String> = rows.iter().flat_map(|(p, _)| p.keys().cloned()).collect();
        params.sort();
        params.dedup();
        let mut components: Vec<String> = Vec::new();
        for (_, r) in &rows {
            for (name, _) in &r.components {
                if !components.contains(name) {
                    components.push(name.clone());
                }
            }
        }
        Table { params, components, rows }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = self.params.clone();
        h.push("value".into());
        h.extend(self.components.iter().cloned());
        h.push("error_estimate".into());
        h
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn cells(&self, point: &Point, row: &Row) -> Vec<Option<f64>> {
        let mut out: Vec<Option<f64>> = self.params.iter().map(|k| point.get(k).copied()).collect();
        out.push(Some(row.value));
        for c in &self.components {
            out.push(row.components.iter().find(|(k, _)| k == c).map(|(_, v)| *v));
        }
        out.push(Some(row.error_estimate));
        out
    }

    fn csv(&self) -> String {
        let mut s = self.header().join(",");
        s.push('\n');
        for (p, r) in &self.rows {
            let line: Vec<String> = self.cells(p, r).into_iter().map(|c| c.map(format_float).unwrap_or_default()).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }

    fn json(&self) -> String {
        let header = self.header();
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|(p, r)| {
                let mut m = Map::new();
                for (k, c) in header.iter().zip(self.cells(p, r)) {
                    let v = match c.and_then(Number::from_f64) {
                        Some(num) => Value::Number(num),
                        None => Value::Null,
                    };
                    m.insert(k.clone(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(records)).expect("rows serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formats() {
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(2.5e-7), "2.5e-7");
        assert_eq!(format_float(-3e20), "-3e20");
        assert_eq!(format_float(0.0), "0");
        for x in [1.0 / 3.0, 1e-300, 6.02214076e23, 1e-4, 0.000123456789] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_columns() {
        let mut p = Point::new();
        p.insert("sigma".into(), 0.5);
        p.insert("n".into(), 3.0);
        let row = Row {
            value: 0.25,
            components: vec![("i_minus".into(), 0.5)],
            error_estimate: 1e-17,
        };
        let t = Table::new(vec![(p, row)]);
        assert_eq!(t.csv(), "n,sigma,value,i_minus,error_estimate\n3,0.5,0.25,0.5,1e-17\n");
    }
}
