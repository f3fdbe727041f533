use std::fs;
use std::path::Path;
use std::time::Duration;

use defcheck::engine::EvalOptions;
use defcheck::Exactness;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const DEFAULT_DEPTH: usize = 6;

/// Flags resolved into library options.
pub struct Settings {
    pub depth: Option<usize>,
    pub budget: u128,
    pub module: Option<String>,
    pub options: EvalOptions,
}

impl Settings {
    pub fn depth(&self) -> usize {
        self.depth.unwrap_or(DEFAULT_DEPTH)
    }
}

/// What a command produced: the verdict decides the exit status.
pub struct Outcome {
    pub verdict: bool,
    pub exactness: Option<Exactness>,
    pub result: Value,
    pub text: String,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct Input {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Flags {
    depth: Option<usize>,
    budget: Option<u128>,
    module: Option<String>,
    focus: Vec<String>,
    strategy: &'static str,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

/// The JSON report. Everything except `timing` is a function of the inputs
/// and flags.
#[derive(Serialize)]
pub struct RunReport {
    command: &'static str,
    inputs: Vec<Input>,
    flags: Flags,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exactness: Option<Exactness>,
    #[serde(skip_serializing_if = "Value::is_null")]
    result: Value,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    timing: Timing,
}

impl RunReport {
    pub fn new(
        command: &'static str,
        depth: Option<usize>,
        budget: Option<u128>,
        module: &Option<String>,
        focus: &[String],
        naive: bool,
    ) -> Self {
        RunReport {
            command,
            inputs: Vec::new(),
            flags: Flags {
                depth,
                budget,
                module: module.clone(),
                focus: focus.to_vec(),
                strategy: if naive { "naive" } else { "semi-naive" },
            },
            verdict: None,
            exactness: None,
            result: Value::Null,
            warnings: Vec::new(),
            error: None,
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    /// Reads an input file and records its hash.
    pub fn read(&mut self, path: &Path) -> Result<String, String> {
        let bytes = fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        self.inputs.push(Input {
            path: path.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| format!("{} is not valid UTF-8", path.display()))
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.timing.elapsed_ms = d.as_secs_f64() * 1000.0;
    }

    pub fn finish(&mut self, outcome: Outcome) {
        self.verdict = Some(outcome.verdict);
        self.exactness = outcome.exactness;
        self.result = outcome.result;
        self.warnings = outcome.warnings;
    }

    pub fn fail(&mut self, message: String) {
        self.error = Some(message);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
