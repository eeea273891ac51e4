//! Command-line front end: JSON scenario configs in, CSV/JSON/SVG reports
//! out, plus a replay of the worked examples as a pass/fail suite.

pub mod config;
pub mod error;
pub mod registry;
pub mod report;
pub mod trajectory;
pub mod verify;

use std::path::Path;

use condenlab::ownership::OwnershipNetwork;

use crate::config::{parse_config, ScenarioConfig};
use crate::error::CliError;
use crate::registry::RunContext;
use crate::trajectory::{Metadata, Trajectory};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reads and validates a config file. A relative `network` path is taken
/// relative to the config file's directory.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut config = parse_config(&text)?;
    if let Some(network) = config.network.as_mut() {
        if network.is_relative() {
            if let Some(dir) = path.parent() {
                *network = dir.join(&*network);
            }
        }
    }
    Ok(config)
}

pub fn load_network(path: &Path) -> Result<OwnershipNetwork, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    OwnershipNetwork::parse(&text).map_err(|source| CliError::Network {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs a validated config. Same config and seed, same trajectory.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Trajectory, CliError> {
    let spec = config.scenario;
    let network = match &config.network {
        Some(path) => load_network(path)?,
        None => OwnershipNetwork::three_banks(),
    };
    let metadata = Metadata {
        scenario: spec.name.to_string(),
        seed: config.seed,
        params: config.params.to_json(),
        network: spec.uses_network.then(|| network.to_text()),
        tool_version: TOOL_VERSION.to_string(),
        summary: Default::default(),
    };
    let ctx = RunContext {
        params: &config.params,
        seed: config.seed,
        network: &network,
    };
    (spec.run)(&ctx, metadata).map_err(|source| CliError::Scenario {
        scenario: spec.name.to_string(),
        source,
    })
}
