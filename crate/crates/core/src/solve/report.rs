//! Uniform experiment output: tabular data stamped with the crate version,
//! the seed, and a hash of the generating configuration.

use serde::Serialize;

/// A finished experiment as a stamped table.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
    pub params: serde_json::Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// FNV-1a over the canonical JSON encoding of the parameters.
pub fn config_hash(params: &serde_json::Value) -> String {
    let text = params.to_string();
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

impl ExperimentReport {
    pub fn new(
        id: impl Into<String>,
        seed: u64,
        params: serde_json::Value,
        columns: Vec<String>,
    ) -> Self {
        Self {
            id: id.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config_hash: config_hash(&params),
            params,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// CSV with stamped comment headers.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# id={}\n", self.id));
        out.push_str(&format!("# version={}\n", self.version));
        out.push_str(&format!("# seed={}\n", self.seed));
        out.push_str(&format!("# config_hash={}\n", self.config_hash));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
