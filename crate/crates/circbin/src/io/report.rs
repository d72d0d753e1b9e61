//! JSON result documents.
//!
//! Every command that reports results writes one [`ResultDocument`]. Object
//! keys are emitted in sorted order, so two runs of the same configuration
//! produce byte-identical files.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Result;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    /// `gen`, `embed`, `eval`, `sweep` or `validate`.
    pub experiment: String,
    /// Parameter echo: everything needed to rerun.
    pub params: Value,
    pub results: Value,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ResultDocument {
    pub fn new(experiment: &str, params: impl Serialize, results: impl Serialize) -> Result<Self> {
        Ok(Self {
            schema_version: SCHEMA_VERSION.to_owned(),
            experiment: experiment.to_owned(),
            params: serde_json::to_value(params)?,
            results: serde_json::to_value(results)?,
            warnings: Vec::new(),
        })
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    /// Pretty-printed JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        // Going through `Value` sorts the struct fields along with everything else.
        let mut text = serde_json::to_string_pretty(&serde_json::to_value(self)?)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
