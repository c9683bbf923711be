//! JSON config files and their merge with command-line flags.
//!
//! Every key mirrors a flag; a flag given on the command line wins over the
//! file, and the file wins over built-in defaults. The seed falls back to
//! `OPCAP_SEED` and then to the library default.

use std::path::{Path, PathBuf};

use opcap_core::infomeasures::DEFAULT_SEED;
use serde::Deserialize;

use crate::args::{parse_seed, ChannelArgs, CommonArgs};
use crate::error::CliError;

pub const SEED_ENV: &str = "OPCAP_SEED";

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NumOrText {
    Num(f64),
    Text(String),
}

impl NumOrText {
    fn text(&self) -> String {
        match self {
            NumOrText::Num(x) => format!("{x}"),
            NumOrText::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum DensityValue {
    Weights(Vec<f64>),
    Name(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub family: Option<String>,
    pub group: Option<String>,
    pub dim: Option<usize>,
    pub k: Option<usize>,
    pub case: Option<String>,
    pub f: Option<DensityValue>,
    pub p: Option<Vec<NumOrText>>,
    pub trials: Option<usize>,
    pub seed: Option<NumOrText>,
    pub restarts: Option<usize>,
    pub steps: Option<usize>,
    pub numerics: Option<bool>,
    pub objective: Option<String>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub ln_dm: Option<f64>,
    pub units: Option<String>,
    pub json: Option<bool>,
    pub output: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }

    /// Multiplier from nats to the display unit.
    pub fn factor(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => std::f64::consts::LOG2_E,
        }
    }
}

/// Settings shared by every subcommand after merging.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub json: bool,
    pub units: Units,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub file: ConfigFile,
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs) -> Result<Self, CliError> {
        let env = std::env::var(SEED_ENV).ok();
        Self::resolve_with_env(common, env.as_deref())
    }

    pub fn resolve_with_env(common: &CommonArgs, env_seed: Option<&str>) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let units = if common.bits {
            Units::Bits
        } else {
            match file.units.as_deref() {
                None | Some("nats") => Units::Nats,
                Some("bits") => Units::Bits,
                Some(other) => return Err(CliError::Config(format!("unknown units '{other}'"))),
            }
        };
        let seed = match (common.seed, &file.seed, env_seed) {
            (Some(s), _, _) => s,
            (None, Some(s), _) => parse_seed(&s.text()).map_err(CliError::Config)?,
            (None, None, Some(s)) => {
                parse_seed(s).map_err(|e| CliError::Config(format!("{SEED_ENV}: {e}")))?
            }
            (None, None, None) => DEFAULT_SEED,
        };
        Ok(Self {
            json: common.json || file.json.unwrap_or(false),
            units,
            output: common.output.clone().or_else(|| file.output.clone()),
            seed,
            file,
        })
    }

    /// Channel flags with gaps filled from the file.
    pub fn channel(&self, flags: &ChannelArgs) -> ChannelArgs {
        let f = &self.file;
        ChannelArgs {
            family: flags.family.clone().or_else(|| f.family.clone()),
            group: flags.group.clone().or_else(|| f.group.clone()),
            dim: flags.dim.or(f.dim),
            k: flags.k.or(f.k),
            case: flags.case.clone().or_else(|| f.case.clone()),
            f: flags.f.clone().or_else(|| {
                f.f.as_ref().map(|v| match v {
                    DensityValue::Name(s) => s.clone(),
                    DensityValue::Weights(w) => {
                        w.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
                    }
                })
            }),
        }
    }

    pub fn p_values(&self, flags: &[String]) -> Vec<String> {
        if !flags.is_empty() {
            return flags.to_vec();
        }
        self.file.p.iter().flatten().map(NumOrText::text).collect()
    }
}
