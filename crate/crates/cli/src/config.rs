//! Run configuration, its hash, and the report envelope.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Version of the envelope every report is wrapped in.
pub const ENVELOPE_SCHEMA: u32 = 1;

/// Directory that relative `--output` paths are resolved against.
pub const OUT_DIR_VAR: &str = "P3BUNDLES_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
    Text,
}

/// Everything that determines a run's output.
///
/// `grid` holds the numeric parameters and bounds of the subcommand, keyed by flag name.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub format: Format,
    pub grid: BTreeMap<String, i64>,
    pub options: BTreeMap<String, String>,
    pub retries: usize,
    pub scripts: Vec<PathBuf>,
}

impl RunConfig {
    /// Hex SHA-256 of the canonical JSON of the config.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn render<T: Serialize>(&self, result: &T, text: impl FnOnce() -> String, tsv: impl FnOnce() -> String) -> String {
        match self.format {
            Format::Json => {
                let env = Envelope {
                    schema: ENVELOPE_SCHEMA,
                    command: &self.command,
                    seed: self.seed,
                    config_hash: self.hash(),
                    result,
                };
                let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => format!("{}{}", self.header(), text()),
            Format::Tsv => format!("{}{}", self.header(), tsv()),
        }
    }

    fn header(&self) -> String {
        format!("# p3bundles {}\n# seed {}\n# config sha256:{}\n", self.command, self.seed, self.hash())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: u32,
    command: &'a str,
    seed: u64,
    config_hash: String,
    result: &'a T,
}
