//! Pass/fail reports for exhaustive verification suites.

use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), cases: 0, failures: 0, witness: None }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Folds another check with the same name into this one.
    pub fn absorb(&mut self, other: Check) {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub note: Option<String>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new(), note: None }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn to_json(&self) -> Value {
        let results: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed(), "cases": c.cases, "failures": c.failures}))
            .collect();
        let mut out = json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.len(),
            "cases": self.cases(),
            "results": results,
        });
        if let Some(f) = self.first_failure() {
            out["counterexample"] = json!({"check": f.name, "witness": f.witness});
        }
        if let Some(n) = &self.note {
            out["note"] = json!(n);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            s.push_str(&format!("{status} {} ({} cases)\n", c.name, c.cases));
            if let Some(w) = &c.witness {
                s.push_str(&format!("     witness: {w}\n"));
            }
        }
        s.push_str(&format!(
            "{}: {} ({} checks, {} cases)\n",
            self.suite,
            if self.passed() { "passed" } else { "FAILED" },
            self.checks.len(),
            self.cases()
        ));
        if let Some(n) = &self.note {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_witness_is_kept() {
        let mut c = Check::new("x");
        c.record(true, || json!(0));
        c.record(false, || json!(1));
        c.record(false, || json!(2));
        assert_eq!(c.failures, 2);
        assert_eq!(c.witness, Some(json!(1)));
        let mut r = Report::new("s");
        r.push(c);
        let j = r.to_json();
        assert_eq!(j["passed"], json!(false));
        assert_eq!(j["counterexample"]["witness"], json!(1));
    }

    #[test]
    fn all_pass_shape() {
        let mut r = Report::new("s");
        let mut c = Check::new("y");
        c.record(true, || json!(null));
        r.push(c);
        let j = r.to_json();
        assert_eq!(j["suite"], json!("s"));
        assert_eq!(j["passed"], json!(true));
        assert_eq!(j["checks"], json!(1));
        assert!(j.get("counterexample").is_none());
    }
}
