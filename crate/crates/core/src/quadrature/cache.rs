use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::radau::{build_weighted_radau, WeightedRadauRule};
use crate::error::Result;

/// Thread-safe cache of reference rules keyed by `(q, σ)` with `σ` rounded
/// to `1e-14`.
#[derive(Debug, Default)]
pub struct RuleCache {
    rules: Mutex<HashMap<(usize, i64), Arc<WeightedRadauRule>>>,
}

impl RuleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, q: usize, sigma: f64) -> Result<Arc<WeightedRadauRule>> {
        let key = (q, (sigma * 1e14).round() as i64);
        if let Some(rule) = self.rules.lock().unwrap().get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(build_weighted_radau(q, sigma)?);
        let mut guard = self.rules.lock().unwrap();
        Ok(Arc::clone(guard.entry(key).or_insert(rule)))
    }

    pub fn len(&self) -> usize {
        self.rules.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
