//! Per-axiom validation reports.

use std::fmt;

/// Outcome of one named check, with every violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    /// Short axiom name such as `A2` or `AM4`.
    pub name: String,
    /// One human-readable witness per violation; empty means the check passed.
    pub violations: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Ordered collection of checks. Every check is always present, so a report
/// lists passing axioms as well as failing ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a check with no violations yet. Re-registering is a no-op.
    pub fn declare(&mut self, name: &str) {
        if !self.checks.iter().any(|c| c.name == name) {
            self.checks.push(Check {
                name: name.to_string(),
                violations: Vec::new(),
            });
        }
    }

    /// Records a violation of `name`, declaring the check if needed.
    pub fn fail(&mut self, name: &str, witness: impl Into<String>) {
        self.declare(name);
        let check = self
            .checks
            .iter_mut()
            .find(|c| c.name == name)
            .expect("declared above");
        check.violations.push(witness.into());
    }

    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Names of the failing checks, in declaration order.
    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends all checks of `other`, prefixing nothing.
    pub fn merge(&mut self, other: Report) {
        for c in other.checks {
            self.declare(&c.name);
            for v in c.violations {
                self.fail(&c.name, v);
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed() {
                writeln!(f, "{}: pass", c.name)?;
            } else {
                writeln!(f, "{}: FAIL", c.name)?;
                for v in &c.violations {
                    writeln!(f, "  - {v}")?;
                }
            }
        }
        Ok(())
    }
}
