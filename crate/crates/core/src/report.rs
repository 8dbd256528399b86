//! Versioned JSON reports.
//!
//! Reports are serialized through `serde_json::Value`, whose maps are
//! ordered, so keys come out sorted and the text is a deterministic
//! function of the content. Timing is the only field allowed to differ
//! between runs; [`Report::canonical_json`] leaves it out.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::commands::AnalysisConfig;
use crate::error::{Error, Result};
use crate::metastability::Verdict;
use crate::rates::Refutation;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: AnalysisConfig,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub results: serde_json::Value,
    /// Every refutation produced by the command, replayable on its own.
    pub refutations: Vec<Refutation>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(command: &str, config: &AnalysisConfig, verdict: Verdict, results: serde_json::Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config: config.clone(),
            exit_code: verdict.exit_code(),
            verdict,
            results,
            refutations: Vec::new(),
            notes: Vec::new(),
            timing: None,
        }
    }

    fn render(&self, with_timing: bool) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if !with_timing {
            if let Some(map) = value.as_object_mut() {
                map.remove("timing");
            }
        }
        let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
        text.push('\n');
        text
    }

    pub fn to_json(&self) -> String {
        self.render(true)
    }

    /// The comparison surface: everything except timing.
    pub fn canonical_json(&self) -> String {
        self.render(false)
    }

    pub fn write(&self, path: &Path, with_timing: bool) -> Result<()> {
        fs::write(path, self.render(with_timing)).map_err(|e| Error::io(path, e))
    }

    /// Replays every embedded refutation from its own data.
    pub fn replay_all(&self) -> bool {
        self.refutations.iter().all(Refutation::replay_standalone)
    }
}

/// Pulls the refutations back out of a report's JSON text.
pub fn refutations_from_json(text: &str) -> Result<Vec<Refutation>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let list = value
        .get("refutations")
        .cloned()
        .ok_or_else(|| Error::config("report", "missing `refutations`"))?;
    Ok(serde_json::from_value(list)?)
}
