//! Run manifest embedded in (or written alongside) every output file:
//! the exact command, the solver configuration, the tool version, and a
//! UTC timestamp.

use crate::output::{json_config, json_string};
use chrono::{DateTime, Utc};
use indefspec_core::SolverConfig;

pub struct RunManifest {
    pub command: String,
    pub config: SolverConfig,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    /// Captures the current invocation. Honors `SOURCE_DATE_EPOCH` (the
    /// reproducible-builds convention) so identical runs can be made
    /// byte-identical.
    pub fn capture(command: String, config: &SolverConfig) -> Self {
        let timestamp = match std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse::<i64>().ok())
            .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        {
            Some(t) => t,
            None => Utc::now(),
        };
        Self {
            command,
            config: config.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        format!(
            "{{\"command\":{},\"tool_version\":{},\"timestamp\":{},\"config\":{}}}",
            json_string(&self.command),
            json_string(&self.tool_version),
            json_string(&self.timestamp),
            json_config(&self.config),
        )
    }
}
