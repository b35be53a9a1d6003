//! Deterministic job reports: a text report for reading and a JSON twin
//! for scripts. Neither carries timestamps or absolute paths.

use std::fmt::{Display, Write};

use randlab_core::format::sha256_hex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRef {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub job: String,
    pub seed: u64,
    pub config_sha256: String,
    pub checks: Vec<Check>,
    pub quantities: Vec<Quantity>,
    pub files: Vec<FileRef>,
    /// A module error that stopped the job early.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub passed: bool,
    pub digest: String,
}

impl Report {
    pub fn new(job: &str, seed: u64, config_text: &str) -> Self {
        Report {
            job: job.to_string(),
            seed,
            config_sha256: sha256_hex(config_text.as_bytes()),
            checks: Vec::new(),
            quantities: Vec::new(),
            files: Vec::new(),
            error: None,
            passed: false,
            digest: String::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: None,
        });
    }

    pub fn check_detail(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: Some(detail.into()),
        });
    }

    pub fn quantity(&mut self, name: impl Into<String>, value: impl Display) {
        self.quantities.push(Quantity {
            name: name.into(),
            value: value.to_string(),
        });
    }

    pub fn file(&mut self, name: impl Into<String>, content: &str) {
        self.files.push(FileRef {
            name: name.into(),
            sha256: sha256_hex(content.as_bytes()),
        });
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Sets `passed` and `digest`. Call once, after the last check.
    pub fn seal(&mut self) {
        self.passed = self.error.is_none() && self.checks.iter().all(|c| c.passed);
        self.digest = String::new();
        self.digest = sha256_hex(self.unsealed_json().as_bytes());
    }

    fn unsealed_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("digest");
        serde_json::to_string(&v).expect("value serializes")
    }

    /// Recomputes the digest from the other fields.
    pub fn digest_matches(&self) -> bool {
        sha256_hex(self.unsealed_json().as_bytes()) == self.digest
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "job: {}", self.job).unwrap();
        writeln!(s, "seed: {}", self.seed).unwrap();
        writeln!(s, "config-sha256: {}", self.config_sha256).unwrap();
        writeln!(s, "result: {}", if self.passed { "PASS" } else { "FAIL" }).unwrap();
        if let Some(e) = &self.error {
            writeln!(s, "error: {e}").unwrap();
        }
        s.push_str("\n[checks]\n");
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(s, "{tag} {} ({d})", c.name),
                None => writeln!(s, "{tag} {}", c.name),
            }
            .unwrap();
        }
        s.push_str("\n[quantities]\n");
        for q in &self.quantities {
            writeln!(s, "{} = {}", q.name, q.value).unwrap();
        }
        s.push_str("\n[files]\n");
        for f in &self.files {
            writeln!(s, "{} sha256={}", f.name, f.sha256).unwrap();
        }
        writeln!(s, "\ndigest: {}", self.digest).unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("slow-cover", 7, "eps = \"1/2\"\n");
        r.check("i1", true);
        r.quantity("T", "1/3");
        r.file("trace.csv", "i\n");
        r.seal();
        r
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = sample();
        assert!(a.passed);
        assert!(a.digest_matches());
        assert_eq!(a.digest, sample().digest);
        let mut b = sample();
        b.check("i2", false);
        b.seal();
        assert!(!b.passed);
        assert_ne!(a.digest, b.digest);
    }

    #[test]
    fn json_round_trips() {
        let a = sample();
        let back: Report = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
        assert!(back.digest_matches());
    }

    #[test]
    fn text_lists_checks_and_files() {
        let t = sample().to_text();
        assert!(t.contains("PASS i1\n"));
        assert!(t.contains("T = 1/3\n"));
        assert!(t.contains("trace.csv sha256="));
        assert!(t.contains("result: PASS"));
    }
}
