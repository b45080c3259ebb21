use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use lrpc_core::CodeParams;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("missing required parameter '{0}'")]
    Missing(&'static str),
    #[error("invalid value for '{key}': {value}")]
    InvalidValue { key: String, value: String },
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("line {0}: expected key=value")]
    Syntax(usize),
    #[error("{0}")]
    Invariant(String),
}

pub const DEFAULT_TARGET_FAILURES: u64 = 1000;
pub const DEFAULT_MAX_TRIALS: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub p: u64,
    pub r: u32,
    pub m: usize,
    pub lambda: usize,
    pub n: usize,
    pub k: usize,
    pub t_range: RangeInclusive<usize>,
    pub target_failures: u64,
    pub max_trials: u64,
    pub seed: u64,
    pub modulus: Option<Vec<u64>>,
    pub random_codeword: bool,
    pub out_path: Option<PathBuf>,
}

impl SimConfig {
    /// The parameters of the published experiment.
    pub fn reference() -> Self {
        Self {
            p: 2,
            r: 2,
            m: 20,
            lambda: 2,
            n: 20,
            k: 8,
            t_range: 1..=7,
            target_failures: DEFAULT_TARGET_FAILURES,
            max_trials: DEFAULT_MAX_TRIALS,
            seed: DEFAULT_SEED,
            modulus: None,
            random_codeword: false,
            out_path: None,
        }
    }

    pub fn code_params(&self) -> CodeParams {
        CodeParams {
            p: self.p,
            r: self.r,
            m: self.m,
            lambda: self.lambda,
            n: self.n,
            k: self.k,
            modulus: self.modulus.clone(),
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.code_params().validate().map_err(|e| ConfigError::Invariant(e.to_string()))?;
        if self.t_range.is_empty() {
            return Err(ConfigError::Invariant("empty t range".into()));
        }
        if self.t_range.end() * self.lambda > self.m {
            return Err(ConfigError::Invariant(format!(
                "t_max * lambda = {} exceeds m = {}",
                self.t_range.end() * self.lambda,
                self.m
            )));
        }
        if self.target_failures == 0 || self.max_trials == 0 {
            return Err(ConfigError::Invariant("stop rule needs positive counts".into()));
        }
        Ok(())
    }
}

/// Parses `a:b` or a single `t`.
pub fn parse_t_range(s: &str) -> Result<RangeInclusive<usize>, ConfigError> {
    let bad = || ConfigError::InvalidValue { key: "t".into(), value: s.into() };
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once(':') {
        Some((a, b)) => Ok(parse(a)?..=parse(b)?),
        None => {
            let t = parse(s)?;
            Ok(t..=t)
        }
    }
}

/// Comma- or space-separated coefficients, constant term first.
pub fn parse_modulus(s: &str) -> Result<Vec<u64>, ConfigError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| ConfigError::InvalidValue { key: "modulus".into(), value: s.into() }))
        .collect()
}

/// Partially specified configuration, filled from a key=value file and
/// command-line flags before defaults apply.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigDraft {
    pub p: Option<u64>,
    pub r: Option<u32>,
    pub m: Option<usize>,
    pub lambda: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub t_range: Option<RangeInclusive<usize>>,
    pub target_failures: Option<u64>,
    pub max_trials: Option<u64>,
    pub seed: Option<u64>,
    pub modulus: Option<Vec<u64>>,
    pub random_codeword: Option<bool>,
    pub out_path: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue { key: key.into(), value: value.into() })
}

impl ConfigDraft {
    /// Reads `key = value` lines; `#` starts a comment. Keys use the flag
    /// names with dashes or underscores.
    pub fn from_kv(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax(idx + 1))?;
            entries.insert(key.trim().replace('-', "_"), value.trim().to_string());
        }
        let mut draft = Self::default();
        for (key, value) in &entries {
            let v = value.as_str();
            match key.as_str() {
                "p" => draft.p = Some(parse_value(key, v)?),
                "r" => draft.r = Some(parse_value(key, v)?),
                "m" => draft.m = Some(parse_value(key, v)?),
                "lambda" => draft.lambda = Some(parse_value(key, v)?),
                "n" => draft.n = Some(parse_value(key, v)?),
                "k" => draft.k = Some(parse_value(key, v)?),
                "t" => draft.t_range = Some(parse_t_range(v)?),
                "target_failures" => draft.target_failures = Some(parse_value(key, v)?),
                "max_trials" => draft.max_trials = Some(parse_value(key, v)?),
                "seed" => draft.seed = Some(parse_value(key, v)?),
                "modulus" => draft.modulus = Some(parse_modulus(v)?),
                "random_codeword" => draft.random_codeword = Some(parse_value(key, v)?),
                "out" => draft.out_path = Some(PathBuf::from(v)),
                _ => return Err(ConfigError::UnknownKey(key.clone())),
            }
        }
        Ok(draft)
    }

    /// Fields set in `other` win.
    pub fn overlay(self, other: ConfigDraft) -> Self {
        Self {
            p: other.p.or(self.p),
            r: other.r.or(self.r),
            m: other.m.or(self.m),
            lambda: other.lambda.or(self.lambda),
            n: other.n.or(self.n),
            k: other.k.or(self.k),
            t_range: other.t_range.or(self.t_range),
            target_failures: other.target_failures.or(self.target_failures),
            max_trials: other.max_trials.or(self.max_trials),
            seed: other.seed.or(self.seed),
            modulus: other.modulus.or(self.modulus),
            random_codeword: other.random_codeword.or(self.random_codeword),
            out_path: other.out_path.or(self.out_path),
        }
    }

    pub fn finish(self) -> Result<SimConfig, ConfigError> {
        let config = SimConfig {
            p: self.p.ok_or(ConfigError::Missing("p"))?,
            r: self.r.ok_or(ConfigError::Missing("r"))?,
            m: self.m.ok_or(ConfigError::Missing("m"))?,
            lambda: self.lambda.ok_or(ConfigError::Missing("lambda"))?,
            n: self.n.ok_or(ConfigError::Missing("n"))?,
            k: self.k.ok_or(ConfigError::Missing("k"))?,
            t_range: self.t_range.ok_or(ConfigError::Missing("t"))?,
            target_failures: self.target_failures.unwrap_or(DEFAULT_TARGET_FAILURES),
            max_trials: self.max_trials.unwrap_or(DEFAULT_MAX_TRIALS),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            modulus: self.modulus,
            random_codeword: self.random_codeword.unwrap_or(false),
            out_path: self.out_path,
        };
        config.validate()?;
        Ok(config)
    }
}
