//! Line-delimited JSON exchanged with an evaluator process.
//!
//! The evaluator first prints `{"protocol": 1}`. Each request is then one
//! line with the trial id and decoded parameters, answered by one line with
//! either `fitness` or `error` for the same trial id.

use crate::evaluator::EvalError;
use crate::space::{Activation, TrialParams};
use serde::{Deserialize, Serialize};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub trial_id: u64,
    pub neurons: u32,
    pub learning_rate: f64,
    pub batch_size: u32,
    pub epochs: u32,
    pub activation: Activation,
}

impl Request {
    pub fn new(trial_id: u64, p: &TrialParams) -> Self {
        Self {
            trial_id,
            neurons: p.neurons,
            learning_rate: p.learning_rate,
            batch_size: p.batch_size,
            epochs: p.epochs,
            activation: p.activation,
        }
    }

    pub fn params(&self) -> TrialParams {
        TrialParams {
            neurons: self.neurons,
            learning_rate: self.learning_rate,
            batch_size: self.batch_size,
            epochs: self.epochs,
            activation: self.activation,
        }
    }

    /// The request as one line, newline included.
    pub fn to_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("request fields serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReply {
    trial_id: u64,
    fitness: Option<f64>,
    error: Option<String>,
}

#[derive(Debug, Deserialize)]
struct Handshake {
    protocol: u32,
}

/// Reads a reply line for `expected` into a fitness or an error.
pub fn parse_reply(line: &str, expected: u64) -> Result<f64, EvalError> {
    let raw: RawReply =
        serde_json::from_str(line.trim()).map_err(|e| EvalError::Malformed(format!("{e}: {}", line.trim())))?;
    if raw.trial_id != expected {
        return Err(EvalError::Malformed(format!("reply for trial {} while waiting for {expected}", raw.trial_id)));
    }
    match (raw.fitness, raw.error) {
        (Some(f), None) if f.is_finite() => Ok(f),
        (Some(f), None) => Err(EvalError::Malformed(format!("non-finite fitness {f}"))),
        (None, Some(msg)) => Err(EvalError::Rejected(msg)),
        (Some(_), Some(_)) => Err(EvalError::Malformed("reply carries both fitness and error".into())),
        (None, None) => Err(EvalError::Malformed("reply carries neither fitness nor error".into())),
    }
}

pub fn check_handshake(line: &str) -> Result<(), EvalError> {
    let h: Handshake = serde_json::from_str(line.trim())
        .map_err(|e| EvalError::Malformed(format!("bad handshake {:?}: {e}", line.trim())))?;
    if h.protocol != PROTOCOL_VERSION {
        return Err(EvalError::Malformed(format!(
            "evaluator speaks protocol {}, expected {PROTOCOL_VERSION}",
            h.protocol
        )));
    }
    Ok(())
}
