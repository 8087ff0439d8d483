//! JSON audit reports shared by the sampling checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Serialize, Deserialize, Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub params: Value,
    pub trials: usize,
    pub violations: usize,
    pub witnesses: Vec<Value>,
    pub precision_flags: usize,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub stats: Map<String, Value>,
}

impl AuditReport {
    pub fn new(params: Value) -> Self {
        Self {
            params,
            ..Default::default()
        }
    }

    pub fn stat(&mut self, key: &str, value: impl Into<Value>) {
        self.stats.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Independent generator for trial `i` of an audit seeded with `master`.
pub fn trial_rng(master: u64, i: u64) -> ChaCha8Rng {
    let mut z = master ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}
