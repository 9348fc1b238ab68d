//! Structured results for verification runs.
//!
//! Every command that checks something produces a [`Report`]: an ordered
//! list of named checks, each with the measured quantity, the allowed bound,
//! and a one-line detail.  Rendering is deterministic (fixed field order,
//! fixed float formatting), so identical inputs give byte-identical output.

use serde::Serialize;

#[derive(Serialize, Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub allowed: f64,
    pub detail: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub command: String,
    pub n: usize,
    pub gamma: Vec<String>,
    pub items: Vec<CheckItem>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, n: usize, gamma: Vec<String>) -> Self {
        Report { command: command.to_string(), n, gamma, items: Vec::new(), passed: true }
    }

    /// Records a check that passes when `measured <= allowed`.
    pub fn check(&mut self, name: &str, measured: f64, allowed: f64, detail: String) {
        let passed = measured.is_finite() && measured <= allowed;
        self.push(name, passed, measured, allowed, detail);
    }

    /// Records a check with an externally decided outcome (rank equalities,
    /// sign conditions).
    pub fn push(&mut self, name: &str, passed: bool, measured: f64, allowed: f64, detail: String) {
        self.passed &= passed;
        self.items.push(CheckItem { name: name.to_string(), passed, measured, allowed, detail });
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{}: n = {}, gamma = [{}]\n",
            self.command,
            self.n,
            self.gamma.join(", ")
        ));
        let width = self.items.iter().map(|i| i.name.len()).max().unwrap_or(0);
        for item in &self.items {
            let flag = if item.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  [{flag}] {:<width$}  measured {:>12}  allowed {:>12}",
                item.name,
                fmt_float(item.measured),
                fmt_float(item.allowed),
            ));
            if !item.detail.is_empty() {
                out.push_str(&format!("  {}", item.detail));
            }
            out.push('\n');
        }
        let ok = self.items.iter().filter(|i| i.passed).count();
        out.push_str(&format!(
            "result: {} ({ok}/{} checks)\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.items.len()
        ));
        out
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

fn fmt_float(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x}")
    } else {
        format!("{x:.6e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_item_fails_the_report() {
        let mut r = Report::new("verify", 2, vec!["1".into(), "0".into()]);
        r.check("alpha", 1e-12, 1e-10, String::new());
        assert!(r.passed);
        r.check("beta", 2e-3, 1e-10, "residual too large".into());
        assert!(!r.passed);
        assert_eq!(r.items.len(), 2);
        let text = r.human();
        assert!(text.contains("[PASS] alpha"));
        assert!(text.contains("[FAIL] beta"));
        assert!(text.contains("result: FAIL (1/2 checks)"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let build = || {
            let mut r = Report::new("quantize", 1, vec!["1/2".into()]);
            r.check("mass", 3.5e-9, 1e-6, "target 6 pi".into());
            r
        };
        assert_eq!(build().human(), build().human());
        assert_eq!(build().json(), build().json());
        // field order in JSON is declaration order
        let j = build().json();
        let name_pos = j.find("\"name\"").unwrap();
        let passed_pos = j.find("\"passed\"").unwrap();
        assert!(name_pos < passed_pos);
    }

    #[test]
    fn non_finite_measurement_never_passes() {
        let mut r = Report::new("verify", 1, vec!["0".into()]);
        r.check("nan-check", f64::NAN, 1.0, String::new());
        assert!(!r.passed);
    }
}
