//! The versioned report document emitted by every command. Tables hold the
//! numbers; the aligned text output is rendered from the same tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The computation ran but could not settle the question.
    Inconclusive,
    /// A query with nothing to verify.
    Info,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Info => "info",
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    /// `group p=<p>` when the report is about one entry.
    pub entry: Option<String>,
    pub check: String,
    pub verdict: Verdict,
    /// Short human-readable facts backing the verdict.
    pub witnesses: Vec<String>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(check: impl Into<String>, entry: Option<String>, verdict: Verdict) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            entry,
            check: check.into(),
            verdict,
            witnesses: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn table(&self, title: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.title == title)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Aligned text form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let head = match &self.entry {
            Some(e) => format!("{} {}: {}", self.check, e, self.verdict.as_str()),
            None => format!("{}: {}", self.check, self.verdict.as_str()),
        };
        writeln!(out, "{head}").unwrap();
        for w in &self.witnesses {
            writeln!(out, "  {w}").unwrap();
        }
        for t in &self.tables {
            out.push('\n');
            out.push_str(&render_table(t));
        }
        out
    }
}

pub fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::Bool(true) => "yes".to_string(),
        Value::Bool(false) => "no".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell_text).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

pub fn render_table(t: &Table) -> String {
    let texts: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell_text).collect()).collect();
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for row in &texts {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let numeric: Vec<bool> = (0..t.columns.len())
        .map(|j| !t.rows.is_empty() && t.rows.iter().all(|r| r[j].is_number() || r[j].is_null()))
        .collect();
    let line = |cells: &[String], out: &mut String| {
        let mut s = String::new();
        for (j, c) in cells.iter().enumerate() {
            if j > 0 {
                s.push_str("  ");
            }
            let pad = widths[j] - c.chars().count();
            if numeric[j] {
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            } else {
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    let mut out = format!("{}\n", t.title);
    line(&t.columns, &mut out);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&rule, &mut out);
    for row in &texts {
        line(row, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("chow", Some("Spin_7 p=2".into()), Verdict::Pass);
        r.witness("computed from restriction data");
        let mut t = Table::new("groups", &["deg", "chow_deg", "group", "names"]);
        t.push(vec![json!(0), json!(0), json!("Z"), json!(["1"])]);
        t.push(vec![json!(4), json!(2), json!("Z/2"), json!(["c_2"])]);
        r.tables.push(t);
        r
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.render(), r.render());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        v["extra"] = json!(1);
        assert!(Report::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn tables_align() {
        let text = render_table(&sample().tables[0]);
        assert_eq!(
            text,
            "groups\ndeg  chow_deg  group  names\n---  --------  -----  -----\n  0         0  Z      1\n  4         2  Z/2    c_2\n"
        );
    }
}
