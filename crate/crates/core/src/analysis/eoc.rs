//! Experimental orders of convergence under mesh doubling.

use serde::Serialize;

use super::norms::ErrorReport;

/// `log2(e_i / e_{i+1})`; absent when either error is not positive.
pub fn eoc(errors: &[f64]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| (w[0] > 0.0 && w[1] > 0.0 && w[0].is_finite() && w[1].is_finite()).then(|| (w[0] / w[1]).log2()))
        .collect()
}

/// Same as [`eoc`] but tolerating missing entries (failed levels).
pub fn eoc_optional(errors: &[Option<f64>]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => eoc(&[a, b])[0],
            _ => None,
        })
        .collect()
}

/// Named error columns over a sequence of refinement levels.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ConvergenceReport {
    pub levels: Vec<usize>,
    pub columns: Vec<String>,
    /// `errors[level][column]`; `None` for failed levels.
    pub errors: Vec<Vec<Option<f64>>>,
    /// Failure reason per level (`None` for successful levels).
    pub notes: Vec<Option<String>>,
    /// Measured quantities of every level, by name.
    pub reports: Vec<Vec<(String, ErrorReport)>>,
}

impl ConvergenceReport {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, ..Self::default() }
    }

    pub fn push(&mut self, level: usize, errors: Vec<Option<f64>>, reports: Vec<(String, ErrorReport)>) {
        assert_eq!(errors.len(), self.columns.len(), "one error per column");
        self.levels.push(level);
        self.errors.push(errors);
        self.notes.push(None);
        self.reports.push(reports);
    }

    pub fn push_failure(&mut self, level: usize, reason: String) {
        self.levels.push(level);
        self.errors.push(vec![None; self.columns.len()]);
        self.notes.push(Some(reason));
        self.reports.push(Vec::new());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let c = self.column_index(name)?;
        Some(self.errors.iter().map(|row| row[c]).collect())
    }

    /// Rates of column `name`, aligned with levels (first entry is `None`).
    pub fn rates(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let col = self.column(name)?;
        Some(std::iter::once(None).chain(eoc_optional(&col)).collect())
    }

    pub fn n_failures(&self) -> usize {
        self.notes.iter().filter(|n| n.is_some()).count()
    }
}
