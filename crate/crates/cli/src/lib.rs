//! Library half of the `amm` binary: scenario files, the profile table, and
//! curve sampling, each returning JSON or CSV text so they can be tested
//! without spawning a process.

pub mod scenario;
pub mod table;

use std::fmt;

use amm_core::analysis::round_significant;
use amm_core::AmmError;
use serde::Serialize;
use serde_json::{json, Value};

/// Significant digits used for every number the CLI prints.
pub const DIGITS: usize = 12;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Parse(String),
    Amm(AmmError),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Amm(e) => match e.root_cause() {
                AmmError::InsufficientLiquidity(_) | AmmError::NegativeReserveRejected { .. } => 4,
                AmmError::NoConvergence { .. } | AmmError::CostDrift { .. } => 5,
                _ => 3,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse_error",
            CliError::Amm(e) => e.root_cause().kind(),
        }
    }

    /// Structured error object, tagged with the failing action when known.
    pub fn to_json(&self, action_index: Option<usize>) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Amm(AmmError::InfeasibleAttack { leg, .. }) = self {
            body["leg"] = json!(leg);
        }
        if let Some(i) = action_index {
            body["action_index"] = json!(i);
        }
        json!({ "error": body })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Amm(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<AmmError> for CliError {
    fn from(e: AmmError) -> Self {
        CliError::Amm(e)
    }
}

/// Serializes `value` with every float rounded to [`DIGITS`] significant digits.
pub fn to_rounded_json<T: Serialize>(value: &T) -> Value {
    round_value(serde_json::to_value(value).expect("output types serialize"))
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(0.0), DIGITS);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}
