//! Flat row model shared by every CLI report. CSV and JSON serializations
//! carry identical field names; all numeric values are exact unless a float
//! precision is requested explicitly.

use num_rational::Rational64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Int(i64),
    Rat(Rational64),
    Str(String),
    Bool(bool),
}

impl Cell {
    fn render(&self, float_precision: Option<usize>) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Rat(r) => match float_precision {
                Some(prec) => {
                    format!("{:.prec$}", *r.numer() as f64 / *r.denom() as f64)
                }
                None => {
                    if r.is_integer() {
                        r.to_integer().to_string()
                    } else {
                        format!("{}/{}", r.numer(), r.denom())
                    }
                }
            },
            Cell::Str(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self, float_precision: Option<usize>) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Rat(_) => match float_precision {
                // Decimal rendering stays a string so the precision is exact
                // as printed.
                Some(_) => serde_json::Value::from(self.render(float_precision)),
                None => serde_json::Value::from(self.render(None)),
            },
            Cell::Str(s) => serde_json::Value::from(s.as_str()),
            Cell::Bool(b) => serde_json::Value::from(*b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Header row plus one comma-separated line per row. No quoting: every
    /// field is a sign string, integer, boolean, or p/q rational.
    pub fn to_csv(&self, float_precision: Option<usize>) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.headers.len());
            let fields: Vec<String> = row.iter().map(|c| c.render(float_precision)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// One top-level array of row objects, keys matching the CSV headers.
    pub fn to_json(&self, float_precision: Option<usize>) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (h, c) in self.headers.iter().zip(row) {
                    obj.insert((*h).to_string(), c.to_json(float_precision));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::Value::Array(rows)).expect("serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        Table {
            headers: vec!["level", "main_term", "pattern", "flag"],
            rows: vec![vec![
                Cell::Int(35),
                Cell::Rat(Rational64::new(-3, 4)),
                Cell::Str("+-".into()),
                Cell::Bool(true),
            ]],
        }
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            sample().to_csv(None),
            "level,main_term,pattern,flag\n35,-3/4,+-,true\n"
        );
        assert_eq!(
            sample().to_csv(Some(3)),
            "level,main_term,pattern,flag\n35,-0.750,+-,true\n"
        );
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let emitted = sample().to_json(None);
        let parsed: serde_json::Value = serde_json::from_str(&emitted).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), emitted);
    }
}
