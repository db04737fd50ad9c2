//! Pass/fail reports with witnesses for validator operations.

use std::fmt;

/// One named axiom check. `witness` holds the first violating index tuple
/// (lexicographically smallest) when the check fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Vec<usize>>,
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check { name: name.into(), passed: true, witness: None, detail: None }
    }

    pub fn fail(name: impl Into<String>, witness: Vec<usize>) -> Check {
        Check { name: name.into(), passed: false, witness: Some(witness), detail: None }
    }

    pub fn fail_msg(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed: false, witness: None, detail: Some(detail.into()) }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report { checks: vec![] }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every check name, for nesting reports.
    pub fn prefixed(mut self, prefix: &str) -> Report {
        for c in &mut self.checks {
            c.name = format!("{prefix}.{}", c.name);
        }
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{status}  {}", c.name)?;
            if let Some(w) = &c.witness {
                write!(f, "  witness={w:?}")?;
            }
            if let Some(d) = &c.detail {
                write!(f, "  [{d}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
