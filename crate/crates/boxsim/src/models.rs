//! Named strategies selectable from the command line.

use boxsim_core::protocol::steerable_output_strategy;
use boxsim_core::Strategy;

use crate::error::{CliError, CliResult};

pub const MODEL_NAMES: [&str; 4] = ["input-signaling", "output-signaling", "xor-signaling", "near-vertex"];

/// Weights of the near-vertex model: 9 parts copy vertex, 1 part PR box.
pub const NEAR_VERTEX_WEIGHTS: (u32, u32) = (9, 1);

pub fn model(name: &str) -> CliResult<Strategy> {
    match name {
        "input-signaling" => Ok(Strategy::input_signaling()),
        "output-signaling" => Ok(Strategy::output_signaling()),
        "xor-signaling" => Ok(Strategy::xor_signaling()),
        "near-vertex" => Ok(steerable_output_strategy(NEAR_VERTEX_WEIGHTS.0, NEAR_VERTEX_WEIGHTS.1)?),
        other => Err(CliError::Usage(format!(
            "unknown model {other:?}; expected one of {}",
            MODEL_NAMES.join(", ")
        ))),
    }
}
