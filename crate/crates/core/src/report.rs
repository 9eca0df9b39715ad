//! Audit reports: per-law verdicts with counterexample witnesses.

use std::fmt;

/// One audited law: pass/fail plus a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub law: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl AuditEntry {
    pub fn new(law: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        AuditEntry { law: law.into(), passed, witness: if passed { None } else { witness } }
    }

    pub fn pass(law: impl Into<String>) -> Self {
        AuditEntry { law: law.into(), passed: true, witness: None }
    }

    pub fn fail(law: impl Into<String>, witness: impl Into<String>) -> Self {
        AuditEntry { law: law.into(), passed: false, witness: Some(witness.into()) }
    }
}

/// A list of audited laws over one subject. `sampled` marks reports whose
/// universe was a sample rather than an exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub subject: String,
    pub sampled: bool,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn new(subject: impl Into<String>, sampled: bool) -> Self {
        AuditReport { subject: subject.into(), sampled, entries: Vec::new() }
    }

    pub fn push(&mut self, entry: AuditEntry) {
        self.entries.push(entry);
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "audit of {}{}",
            self.subject,
            if self.sampled { " (sampled)" } else { "" }
        )?;
        for e in &self.entries {
            match &e.witness {
                Some(w) if !e.passed => writeln!(f, "  FAIL  {}  [{}]", e.law, w)?,
                _ => writeln!(f, "  {}  {}", if e.passed { "pass" } else { "FAIL" }, e.law)?,
            }
        }
        Ok(())
    }
}
