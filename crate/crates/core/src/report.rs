use alloc::string::String;
use alloc::vec::Vec;

use crate::element::Element;
use crate::scalar::Coefficient;

/// A failed check: what was checked, on which inputs, and the defect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<C: Coefficient> {
    pub check: String,
    pub inputs: Vec<String>,
    pub residual: Element<C>,
}

/// Outcome of one audit sweep over a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report<C: Coefficient> {
    pub check: String,
    pub window: String,
    pub checked: usize,
    pub failures: Vec<Certificate<C>>,
}

impl<C: Coefficient> Report<C> {
    pub fn new(check: &str, window: String) -> Self {
        Report { check: String::from(check), window, checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one evaluated item; a nonzero residual becomes a certificate.
    pub fn record(&mut self, inputs: Vec<String>, residual: Element<C>) {
        self.checked += 1;
        if !residual.is_zero() {
            self.failures.push(Certificate { check: self.check.clone(), inputs, residual });
        }
    }

    pub fn merge(&mut self, other: Report<C>) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}
