use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};

use serde::Serialize;
use serde_json::Value;

/// An exact value together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quantity {
    pub value: String,
    pub provenance: String,
}

/// One link of a verification: a named claim and its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Structured outcome of a verification recipe or scan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub parameters: BTreeMap<String, String>,
    pub quantities: BTreeMap<String, Quantity>,
    pub checks: Vec<Check>,
    pub rows: Vec<BTreeMap<String, String>>,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn quantity(&mut self, key: &str, value: impl Display, provenance: &str) -> &mut Self {
        self.quantities.insert(
            key.to_string(),
            Quantity {
                value: value.to_string(),
                provenance: provenance.to_string(),
            },
        );
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn row(&mut self, row: BTreeMap<String, String>) {
        self.rows.push(row);
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut()
            .expect("struct serializes to an object")
            .insert("passed".into(), Value::Bool(self.passed()));
        v
    }

    /// Key-sorted, pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        self.to_string()
    }
}

impl Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "claim: {}", self.claim)?;
        for (k, v) in &self.parameters {
            writeln!(out, "  {k} = {v}")?;
        }
        if !self.quantities.is_empty() {
            writeln!(out, "quantities:")?;
            let w = self.quantities.keys().map(String::len).max().unwrap_or(0);
            for (k, q) in &self.quantities {
                writeln!(out, "  {k:<w$}  {}  [{}]", q.value, q.provenance)?;
            }
        }
        if !self.rows.is_empty() {
            let cols: Vec<&String> = {
                let mut seen: Vec<&String> = Vec::new();
                for r in &self.rows {
                    for k in r.keys() {
                        if !seen.contains(&k) {
                            seen.push(k);
                        }
                    }
                }
                seen
            };
            let widths: Vec<usize> = cols
                .iter()
                .map(|c| {
                    self.rows
                        .iter()
                        .filter_map(|r| r.get(*c).map(String::len))
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            writeln!(out, "rows:")?;
            let header: Vec<String> = cols
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            writeln!(out, "  {}", header.join("  ").trim_end())?;
            for r in &self.rows {
                let line: Vec<String> = cols
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{:<w$}", r.get(*c).map_or("", String::as_str)))
                    .collect();
                writeln!(out, "  {}", line.join("  ").trim_end())?;
            }
        }
        writeln!(out, "checks:")?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "  [{mark}] {}: {}", c.name, c.detail)?;
        }
        for w in &self.witnesses {
            writeln!(out, "witness: {w}")?;
        }
        for n in &self.notes {
            writeln!(out, "note: {n}")?;
        }
        write!(
            out,
            "verdict: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_key_sorted_and_stable() {
        let mut r = VerificationReport::new("demo");
        r.param("p", 2).param("c", "3/2");
        r.quantity("o(G)", "7/2", "enumeration");
        r.check("bound", true, "7/2 < 8");
        let a = r.to_json();
        assert_eq!(a, r.clone().to_json());
        let top: Vec<&str> = a
            .lines()
            .filter_map(|l| l.strip_prefix("  \"")?.split('"').next())
            .collect();
        assert_eq!(
            top,
            [
                "checks",
                "claim",
                "notes",
                "parameters",
                "passed",
                "quantities",
                "rows",
                "witnesses"
            ]
        );
        assert!(a.find("\"c\"").unwrap() < a.find("\"p\"").unwrap());
    }

    #[test]
    fn verdict_follows_checks() {
        let mut r = VerificationReport::new("demo");
        assert!(r.passed());
        r.check("a", true, "");
        r.check("b", false, "counterexample");
        assert!(!r.passed());
        assert!(r.to_table().contains("[FAIL] b"));
        assert!(r.to_table().ends_with("verdict: FAIL"));
    }
}
