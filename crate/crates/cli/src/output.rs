//! JSON envelope and aligned text tables.

use serde::Serialize;
use serde_json::Value;
use spaceform_core::ENGINE_VERSION;

/// Largest integer a double represents exactly.
pub const EXACT_LIMIT: u64 = 1 << 53;

#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub command: &'a str,
    pub params: Value,
    pub results: Value,
    pub warnings: Vec<String>,
    pub engine_version: &'a str,
}

/// Replaces integers above 2^53 by decimal strings.
pub fn protect_large_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let big = match (n.as_u64(), n.as_i64()) {
                (Some(u), _) => u > EXACT_LIMIT,
                (None, Some(i)) => i.unsigned_abs() > EXACT_LIMIT,
                _ => false,
            };
            if big {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(protect_large_numbers).collect()),
        Value::Object(o) => Value::Object(
            o.into_iter()
                .map(|(k, v)| (k, protect_large_numbers(v)))
                .collect(),
        ),
        other => other,
    }
}

pub fn render_json(command: &str, params: Value, results: Value, warnings: Vec<String>) -> String {
    let env = Envelope {
        command,
        params: protect_large_numbers(params),
        results: protect_large_numbers(results),
        warnings,
        engine_version: ENGINE_VERSION,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("serializable");
    s.push('\n');
    s
}

/// Column-aligned text table; all-numeric columns are right-aligned.
#[derive(Debug, Default)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: ToString>(headers: &[S]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: ToString>(&mut self, cells: &[S]) {
        self.rows.push(cells.iter().map(|c| c.to_string()).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.headers.len();
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.headers).chain(&self.rows) {
            for (i, c) in r.iter().enumerate().take(cols) {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let numeric = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '/');
        let right: Vec<bool> = (0..cols)
            .map(|i| {
                self.rows
                    .iter()
                    .all(|r| r.get(i).is_some_and(|c| numeric(c) || c == "-"))
            })
            .collect();
        let line = |r: &[String]| {
            let cells: Vec<String> = (0..cols)
                .map(|i| {
                    let c = r.get(i).map(String::as_str).unwrap_or("");
                    let pad = width[i] - c.chars().count();
                    if right[i] {
                        format!("{}{c}", " ".repeat(pad))
                    } else {
                        format!("{c}{}", " ".repeat(pad))
                    }
                })
                .collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        out.push_str(
            &width
                .iter()
                .map(|w| "-".repeat(*w))
                .collect::<Vec<_>>()
                .join("  "),
        );
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// `key: value` lines with the keys padded to a common width.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs
        .iter()
        .map(|(k, v)| format!("{k:<w$}  {v}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn large_numbers_become_strings() {
        let v = protect_large_numbers(json!({"a": [1u64, 9007199254740993u64], "b": 9007199254740992u64}));
        assert_eq!(v, json!({"a": [1, "9007199254740993"], "b": 9007199254740992u64}));
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(&["name", "n"]);
        t.row(&["x", "10"]);
        t.row(&["long", "2"]);
        assert_eq!(t.render(), "name   n\n----  --\nx     10\nlong   2\n");
    }
}
