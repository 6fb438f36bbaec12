//! Run configuration and its validation.

use std::path::PathBuf;
use std::str::FromStr;

use logvoa_core::{Params, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum ModuleSel {
    #[value(name = "V")]
    V,
    #[value(name = "MV")]
    Mv,
    #[value(name = "VL")]
    Vl,
    #[value(name = "M")]
    M,
    #[value(name = "fields")]
    Fields,
    #[value(name = "all")]
    All,
}

impl ModuleSel {
    pub fn as_str(self) -> &'static str {
        match self {
            ModuleSel::V => "V",
            ModuleSel::Mv => "MV",
            ModuleSel::Vl => "VL",
            ModuleSel::M => "M",
            ModuleSel::Fields => "fields",
            ModuleSel::All => "all",
        }
    }

    pub fn includes(self, other: ModuleSel) -> bool {
        self == ModuleSel::All || self == other
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error(transparent)]
    Params(#[from] logvoa_core::Error),
    #[error("invalid weight {0:?}: expected an integer or a fraction a/b")]
    BadWeight(String),
    #[error("max weight must be non-negative, got {0}")]
    NegativeWeight(Rational),
    #[error("--jobs must be at least 1")]
    NoJobs,
}

/// Parse `"6"` or `"13/2"`.
pub fn parse_weight(s: &str) -> Result<Rational, ConfigError> {
    Rational::from_str(s.trim()).map_err(|_| ConfigError::BadWeight(s.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u32,
    pub p_prime: u32,
    pub max_weight: Rational,
    pub module: ModuleSel,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub stretch: bool,
}

impl RunConfig {
    pub fn new(p: u32, p_prime: u32, max_weight: Rational, module: ModuleSel) -> Self {
        Self { p, p_prime, max_weight, module, cache_dir: None, out: None, jobs: 1, stretch: false }
    }

    pub fn validate(&self) -> Result<Params, ConfigError> {
        let params = Params::new(self.p, self.p_prime)?;
        if self.max_weight < Rational::from_integer(0) {
            return Err(ConfigError::NegativeWeight(self.max_weight));
        }
        if self.jobs == 0 {
            return Err(ConfigError::NoJobs);
        }
        Ok(params)
    }
}
