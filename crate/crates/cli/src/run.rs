//! Run context: artifact emission, stage timing, warnings and the manifest.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{ConfigError, Format, RawConfig, RunConfig};

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub const MANIFEST_NAME: &str = "manifest.json";

pub const VERSION: &str = env!("ZMOMENTS_VERSION");

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Engine(zetamoments::Error),
    /// An exact invariant did not hold.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use zetamoments::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Engine(
                E::Domain(_) | E::UnknownName { .. } | E::InsufficientPoints { .. } | E::SieveLimit { .. },
            ) => EXIT_CONFIG,
            CliError::Engine(_) | CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<zetamoments::Error> for CliError {
    fn from(e: zetamoments::Error) -> Self {
        CliError::Engine(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Engine(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Engine(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Engine(e.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, Serialize)]
pub struct StageTime {
    pub name: String,
    pub wall_ms: f64,
}

/// Machine-readable record of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RawConfig,
    pub start_unix_ms: u128,
    pub end_unix_ms: u128,
    pub stages: Vec<StageTime>,
    pub warnings: Vec<String>,
    pub artifacts: Vec<String>,
    pub exit_code: i32,
    pub error: Option<String>,
}

fn unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Mutable state threaded through one experiment.
pub struct RunContext {
    pub output_dir: PathBuf,
    pub format: Format,
    artifacts: Vec<PathBuf>,
    stages: Vec<StageTime>,
    warnings: Vec<String>,
    start_unix_ms: u128,
}

impl RunContext {
    pub fn new(config: &RunConfig) -> CliResult<Self> {
        std::fs::create_dir_all(&config.output_dir).map_err(|e| {
            CliError::Config(format!("cannot create output dir {}: {e}", config.output_dir.display()))
        })?;
        Ok(Self {
            output_dir: config.output_dir.clone(),
            format: config.format,
            artifacts: Vec::new(),
            stages: Vec::new(),
            warnings: Vec::new(),
            start_unix_ms: unix_ms(),
        })
    }

    /// Runs `f` as a named, timed stage.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> CliResult<T>) -> CliResult<T> {
        let start = Instant::now();
        let out = f();
        self.stages.push(StageTime {
            name: name.to_string(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        out
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        log::warn!("{msg}");
        self.warnings.push(msg);
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Path of an artifact named `name`; records it for cleanup.
    pub fn artifact_path(&mut self, file_name: &str) -> PathBuf {
        let p = self.output_dir.join(file_name);
        self.artifacts.push(p.clone());
        p
    }

    /// Writes `rows` as `<stem>.csv` or `<stem>.json` per the configured format.
    pub fn emit<S: Serialize>(&mut self, stem: &str, rows: &[S]) -> CliResult<PathBuf> {
        let path = self.artifact_path(&format!("{stem}.{}", self.format.extension()));
        write_rows(&path, self.format, rows)?;
        Ok(path)
    }

    /// Removes every recorded artifact.
    pub fn remove_artifacts(&mut self) {
        for p in self.artifacts.drain(..) {
            let _ = std::fs::remove_file(p);
        }
    }

    /// Writes the manifest and returns its path.
    pub fn finish(&self, config: &RunConfig, exit_code: i32, error: Option<String>) -> CliResult<PathBuf> {
        let manifest = RunManifest {
            tool: "zmoments",
            version: VERSION,
            command: config.command.clone(),
            config: config.snapshot(),
            start_unix_ms: self.start_unix_ms,
            end_unix_ms: unix_ms(),
            stages: self.stages.clone(),
            warnings: self.warnings.clone(),
            artifacts: self
                .artifacts
                .iter()
                .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
                .collect(),
            exit_code,
            error,
        };
        let path = self.output_dir.join(MANIFEST_NAME);
        let tmp = self.output_dir.join(format!(".{MANIFEST_NAME}.tmp"));
        std::fs::write(&tmp, serde_json::to_vec_pretty(&manifest)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

/// Rows as CSV with a header, or as a JSON array.
pub fn write_rows<S: Serialize>(path: &Path, format: Format, rows: &[S]) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => std::fs::write(path, serde_json::to_vec_pretty(rows)?)?,
    }
    Ok(())
}

/// Writes string records with an explicit header, so empty tables keep their schema.
pub fn write_table(path: &Path, format: Format, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let objs: Vec<BTreeMap<&str, &str>> = rows
                .iter()
                .map(|r| header.iter().map(String::as_str).zip(r.iter().map(String::as_str)).collect())
                .collect();
            std::fs::write(path, serde_json::to_vec_pretty(&objs)?)?;
        }
    }
    Ok(())
}
