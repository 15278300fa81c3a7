//! Flat `key = value` configuration, merged with command-line flags.
//!
//! Keys use dashes; underscores are accepted and normalised. Flags replace
//! file values key by key, except that `t` and `t-range` replace each other.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

/// Every recognised key.
pub const KEYS: &[&str] = &[
    "command",
    "t",
    "t-range",
    "t-max",
    "tol",
    "k",
    "m",
    "ratio",
    "sieve-limit",
    "profile",
    "seed",
    "n-samples",
    "output-dir",
    "format",
    "threads",
    "pairs",
    "input-dir",
    "zeros",
    "expression",
    "blocks",
    "j",
    "power",
    "coef",
];

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "ZMOMENTS_OUTPUT_DIR";

const DEFAULT_OUTPUT_DIR: &str = "runs";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

fn normalise_key(key: &str) -> Result<String, ConfigError> {
    let k = key.trim().replace('_', "-");
    if KEYS.contains(&k.as_str()) {
        Ok(k)
    } else {
        err(format!("unknown configuration key {:?}", key.trim()))
    }
}

/// Raw key/value pairs in canonical key form.
pub type RawConfig = BTreeMap<String, String>;

/// Parses a config file body. `#` starts a comment line; duplicates are rejected.
pub fn parse_config_text(text: &str) -> Result<RawConfig, ConfigError> {
    let mut out = RawConfig::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(format!("line {}: expected key = value, got {line:?}", lineno + 1));
        };
        let key = normalise_key(key)?;
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return err(format!("line {}: duplicate key {key:?}", lineno + 1));
        }
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<RawConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// `flags` over `file`.
pub fn merge(mut file: RawConfig, flags: RawConfig) -> Result<RawConfig, ConfigError> {
    if flags.contains_key("t") || flags.contains_key("t-range") {
        file.remove("t");
        file.remove("t-range");
    }
    for (k, v) in flags {
        file.insert(normalise_key(&k)?, v);
    }
    Ok(file)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => err(format!("format must be csv or json, got {other:?}")),
        }
    }
}

/// Validated configuration of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: String,
    /// Heights from `t` or `t-range`, in the given order.
    pub ts: Vec<f64>,
    pub t_max: Option<f64>,
    pub tol: f64,
    pub ks: Vec<f64>,
    pub m: i32,
    pub ratio: f64,
    pub sieve_limit: u64,
    pub profile: String,
    pub seed: u64,
    pub n_samples: usize,
    pub output_dir: PathBuf,
    pub format: Format,
    pub threads: Option<usize>,
    pub pairs: Vec<(u64, u64)>,
    pub input_dir: Option<PathBuf>,
    /// Zero-table CSV to reuse; its JSON sidecar sits next to it.
    pub zeros: Option<PathBuf>,
    /// Empty means every registered expression.
    pub expressions: Vec<String>,
    pub blocks: Vec<usize>,
    pub j: usize,
    pub power: u32,
    pub coef: f64,
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse {v:?}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError> {
    let items: Vec<T> = v
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num(key, s))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return err(format!("{key}: empty list"));
    }
    Ok(items)
}

fn positive(key: &str, x: f64) -> Result<f64, ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        err(format!("{key} must be positive and finite, got {x}"))
    }
}

fn parse_pairs(v: &str) -> Result<Vec<(u64, u64)>, ConfigError> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| ConfigError(format!("pairs: expected a:b, got {p:?}")))?;
            let a: u64 = parse_num("pairs", a)?;
            let b: u64 = parse_num("pairs", b)?;
            if a == 0 || b == 0 {
                return err(format!("pairs must be positive, got {p:?}"));
            }
            Ok((a, b))
        })
        .collect()
}

const DEFAULT_PAIRS: &str = "1:1,2:1,3:1,4:1,3:2,6:1";

impl RunConfig {
    /// Validates merged raw configuration. `output-dir` falls back to `env_output_dir`, then `runs`.
    pub fn from_raw(raw: &RawConfig, env_output_dir: Option<&str>) -> Result<Self, ConfigError> {
        for key in raw.keys() {
            normalise_key(key)?;
        }
        let get = |k: &str| raw.get(k).map(String::as_str);
        let Some(command) = get("command").map(str::to_string) else {
            return err("no command given");
        };
        if get("t").is_some() && get("t-range").is_some() {
            return err("give either t or t-range, not both");
        }
        let ts = match (get("t"), get("t-range")) {
            (Some(v), _) => vec![parse_num("t", v)?],
            (_, Some(v)) => parse_list("t-range", v)?,
            _ => vec![1000.0],
        };
        for &t in &ts {
            positive("t", t)?;
        }
        let t_max = get("t-max").map(|v| parse_num("t-max", v)).transpose()?;
        if let Some(t) = t_max {
            positive("t-max", t)?;
        }
        let ks: Vec<f64> = parse_list("k", get("k").unwrap_or("1"))?;
        for &k in &ks {
            if !(k >= 0.0 && k.is_finite()) {
                return err(format!("k must be non-negative and finite, got {k}"));
            }
        }
        let tol = positive("tol", parse_num("tol", get("tol").unwrap_or("1e-10"))?)?;
        let m: i32 = parse_num("m", get("m").unwrap_or("1"))?;
        if m < 1 {
            return err(format!("m must be positive, got {m}"));
        }
        let ratio = positive("ratio", parse_num("ratio", get("ratio").unwrap_or("20"))?)?;
        let sieve_limit: u64 = parse_num("sieve-limit", get("sieve-limit").unwrap_or("10000000"))?;
        if sieve_limit < 2 {
            return err("sieve-limit must be at least 2");
        }
        let profile = get("profile").unwrap_or("standard").to_string();
        let seed: u64 = parse_num("seed", get("seed").unwrap_or("24301"))?;
        let n_samples: usize = parse_num("n-samples", get("n-samples").unwrap_or("100000"))?;
        if n_samples == 0 {
            return err("n-samples must be positive");
        }
        let output_dir = PathBuf::from(
            get("output-dir")
                .or(env_output_dir.filter(|s| !s.is_empty()))
                .unwrap_or(DEFAULT_OUTPUT_DIR),
        );
        let format = get("format").unwrap_or("csv").parse()?;
        let threads = get("threads").map(|v| parse_num::<usize>("threads", v)).transpose()?;
        if threads == Some(0) {
            return err("threads must be positive");
        }
        let pairs = parse_pairs(get("pairs").unwrap_or(DEFAULT_PAIRS))?;
        let expressions = get("expression")
            .map(|v| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
            .unwrap_or_default();
        let blocks: Vec<usize> = parse_list("blocks", get("blocks").unwrap_or("1"))?;
        if blocks.contains(&0) {
            return err("blocks are 1-based");
        }
        let j: usize = parse_num("j", get("j").unwrap_or("1"))?;
        if j == 0 {
            return err("j is 1-based");
        }
        let coef = parse_num("coef", get("coef").unwrap_or("1"))?;
        Ok(Self {
            command,
            ts,
            t_max,
            tol,
            ks,
            m,
            ratio,
            sieve_limit,
            profile,
            seed,
            n_samples,
            output_dir,
            format,
            threads,
            pairs,
            input_dir: get("input-dir").map(PathBuf::from),
            zeros: get("zeros").map(PathBuf::from),
            expressions,
            blocks,
            j,
            power: parse_num("power", get("power").unwrap_or("0"))?,
            coef,
        })
    }

    /// Largest requested height.
    pub fn t_top(&self) -> f64 {
        self.ts.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Fully resolved key/value form; parsing it back yields the same config.
    pub fn snapshot(&self) -> RawConfig {
        let join = |xs: &[String]| xs.join(",");
        let nums = |xs: &[f64]| join(&xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>());
        let mut m = RawConfig::new();
        m.insert("command".into(), self.command.clone());
        if self.ts.len() == 1 {
            m.insert("t".into(), format!("{:?}", self.ts[0]));
        } else {
            m.insert("t-range".into(), nums(&self.ts));
        }
        if let Some(t) = self.t_max {
            m.insert("t-max".into(), format!("{t:?}"));
        }
        m.insert("tol".into(), format!("{:?}", self.tol));
        m.insert("k".into(), nums(&self.ks));
        m.insert("m".into(), self.m.to_string());
        m.insert("ratio".into(), format!("{:?}", self.ratio));
        m.insert("sieve-limit".into(), self.sieve_limit.to_string());
        m.insert("profile".into(), self.profile.clone());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("n-samples".into(), self.n_samples.to_string());
        m.insert("output-dir".into(), self.output_dir.display().to_string());
        m.insert("format".into(), self.format.extension().into());
        if let Some(n) = self.threads {
            m.insert("threads".into(), n.to_string());
        }
        m.insert(
            "pairs".into(),
            join(&self.pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>()),
        );
        if let Some(p) = &self.input_dir {
            m.insert("input-dir".into(), p.display().to_string());
        }
        if let Some(p) = &self.zeros {
            m.insert("zeros".into(), p.display().to_string());
        }
        if !self.expressions.is_empty() {
            m.insert("expression".into(), join(&self.expressions));
        }
        m.insert(
            "blocks".into(),
            join(&self.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>()),
        );
        m.insert("j".into(), self.j.to_string());
        m.insert("power".into(), self.power.to_string());
        m.insert("coef".into(), format!("{:?}", self.coef));
        m
    }
}
