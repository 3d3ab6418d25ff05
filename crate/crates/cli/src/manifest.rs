//! Run manifests and input loading.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::failure::Failure;

/// Everything needed to reproduce a report. Wall time, thread count and
/// file paths are left out so that reruns compare byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Input role to SHA-256 of the file contents.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub budgets: BTreeMap<String, usize>,
    pub parameters: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> Self {
        RunManifest {
            tool: "relhyp",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs: BTreeMap::new(),
            seed,
            budgets: BTreeMap::new(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn read(&mut self, role: &str, path: &Path) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.insert(role.to_string(), hex::encode(Sha256::digest(text.as_bytes())));
        Ok(text)
    }

    pub fn budget(&mut self, name: &str, value: usize) {
        self.budgets.insert(name.to_string(), value);
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) {
        self.parameters
            .insert(name.to_string(), serde_json::to_value(value).expect("parameter JSON"));
    }
}

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub manifest: &'a RunManifest,
    pub result: T,
}
