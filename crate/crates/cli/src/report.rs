use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Result of one command: per-method counts, agreement flags and timing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    /// count reported by each method that was run
    pub counts: BTreeMap<String, u64>,
    /// `counts` is always present and true iff every entry of `counts` is equal
    pub agreement: BTreeMap<String, bool>,
    pub wall_time: f64,
    pub version: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<Criterion>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl RunReport {
    pub fn new(command: &str, parameters: Value, seed: Option<u64>) -> Self {
        RunReport {
            command: command.into(),
            parameters,
            seed,
            counts: BTreeMap::new(),
            agreement: BTreeMap::from([("counts".to_string(), true)]),
            wall_time: 0.0,
            version: VERSION.into(),
            criteria: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn count(&mut self, method: &str, n: u64) {
        self.counts.insert(method.into(), n);
        let mut it = self.counts.values();
        let first = it.next().copied();
        let same = it.all(|&v| Some(v) == first);
        self.agreement.insert("counts".into(), same);
    }

    pub fn flag(&mut self, name: &str, ok: bool) {
        self.agreement.insert(name.into(), ok);
    }

    pub fn criterion(&mut self, c: Criterion) {
        self.flag(&format!("criterion_{}", c.id), c.passed);
        self.criteria.push(c);
    }

    pub fn finish(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed().as_secs_f64();
        self
    }

    pub fn all_agree(&self) -> bool {
        self.agreement.values().all(|&b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_flag_tracks_agreement() {
        let mut r = RunReport::new("count", Value::Null, None);
        assert!(r.all_agree());
        r.count("closed_form", 24);
        r.count("numeric", 24);
        assert!(r.agreement["counts"]);
        r.count("structured", 23);
        assert!(!r.agreement["counts"]);
        assert!(!r.all_agree());
        r.count("structured", 24);
        assert!(r.all_agree());
        r.flag("stable", false);
        assert!(!r.all_agree());
    }
}
