//! Outcome records for sampled property checks.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub samples: usize,
    /// At most a few violation witnesses are kept.
    pub witnesses: Vec<String>,
    pub violations: usize,
}

impl CheckOutcome {
    pub fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            samples: 0,
            witnesses: Vec::new(),
            violations: 0,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < 3 {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl core::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{}: {status} ({} samples", self.name, self.samples)?;
        if self.violations > 0 {
            write!(f, ", {} violations", self.violations)?;
        }
        f.write_str(")")?;
        for w in &self.witnesses {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}
