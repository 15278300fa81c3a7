//! `zmoments`: configuration, orchestration and artifact emission for the
//! experiments in `zetamoments`.
//!
//! Each subcommand is an [`Experiment`] in [`EXPERIMENTS`]. A run writes its
//! tables into the output directory and always finishes with `manifest.json`;
//! on failure the tables are removed and the manifest records the error.

pub mod config;
pub mod experiments;
pub mod fit;
pub mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use config::{Format, RawConfig, RunConfig};
pub use experiments::{experiment_names, find_experiment, Experiment, EXPERIMENTS};
pub use fit::{fit_growth, FitPoint, GrowthFit};
pub use run::{CliError, RunContext, RunManifest, EXIT_CONFIG, EXIT_INVARIANT, EXIT_OK, MANIFEST_NAME, VERSION};

/// Command-line flags. Every option is also a config-file key of the same name.
#[derive(Debug, Parser)]
#[command(name = "zmoments", version = VERSION, about = "Discrete moments of zeta' at the zeros of zeta")]
pub struct Cli {
    /// One of: zeros, moments, landau, mollifier, holder, random-model, classify, report, sweep.
    pub command: Option<String>,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Single height T.
    #[arg(long)]
    pub t: Option<String>,
    /// Comma-separated heights.
    #[arg(long)]
    pub t_range: Option<String>,
    /// Upper end of the zero table for `zeros`.
    #[arg(long)]
    pub t_max: Option<String>,
    /// Half-width of each zero bracket.
    #[arg(long)]
    pub tol: Option<String>,
    /// Comma-separated moment exponents.
    #[arg(long)]
    pub k: Option<String>,
    /// Block cutoff exponent: alpha_j <= 10^-M.
    #[arg(long)]
    pub m: Option<String>,
    /// Ratio of consecutive block exponents.
    #[arg(long)]
    pub ratio: Option<String>,
    #[arg(long)]
    pub sieve_limit: Option<String>,
    /// Precision profile: standard or oracle.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub n_samples: Option<String>,
    /// Defaults to $ZMOMENTS_OUTPUT_DIR, then `runs`.
    #[arg(long)]
    pub output_dir: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Caps the worker threads.
    #[arg(long)]
    pub threads: Option<String>,
    /// Landau pairs as `a:b,a:b`.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Directory scanned by `report`.
    #[arg(long)]
    pub input_dir: Option<String>,
    /// Reuse a zero-table CSV (with its JSON sidecar).
    #[arg(long)]
    pub zeros: Option<String>,
    /// Comma-separated expression ids for `random-model`.
    #[arg(long)]
    pub expression: Option<String>,
    /// Comma-separated 1-based block indices.
    #[arg(long)]
    pub blocks: Option<String>,
    /// Weight index j of G_{l,j}.
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long)]
    pub power: Option<String>,
    #[arg(long)]
    pub coef: Option<String>,
}

impl Cli {
    /// Flags given on the command line, keyed like the config file.
    pub fn flags(&self) -> RawConfig {
        let pairs: [(&str, &Option<String>); 23] = [
            ("command", &self.command),
            ("t", &self.t),
            ("t-range", &self.t_range),
            ("t-max", &self.t_max),
            ("tol", &self.tol),
            ("k", &self.k),
            ("m", &self.m),
            ("ratio", &self.ratio),
            ("sieve-limit", &self.sieve_limit),
            ("profile", &self.profile),
            ("seed", &self.seed),
            ("n-samples", &self.n_samples),
            ("output-dir", &self.output_dir),
            ("format", &self.format),
            ("threads", &self.threads),
            ("pairs", &self.pairs),
            ("input-dir", &self.input_dir),
            ("zeros", &self.zeros),
            ("expression", &self.expression),
            ("blocks", &self.blocks),
            ("j", &self.j),
            ("power", &self.power),
            ("coef", &self.coef),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => config::read_config_file(p)?,
            None => RawConfig::new(),
        };
        let raw = config::merge(file, self.flags())?;
        let env = std::env::var(config::OUTPUT_DIR_ENV).ok();
        Ok(RunConfig::from_raw(&raw, env.as_deref())?)
    }
}

/// Outcome of [`run`].
#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub manifest: Option<PathBuf>,
    pub error: Option<String>,
}

/// Runs the configured experiment and writes its manifest.
pub fn run(config: &RunConfig) -> RunOutcome {
    let fail = |e: CliError| RunOutcome {
        exit_code: e.exit_code(),
        manifest: None,
        error: Some(e.to_string()),
    };
    let Some(exp) = find_experiment(&config.command) else {
        return fail(CliError::Config(format!(
            "unknown command {:?}; known: {}",
            config.command,
            experiment_names().join(", ")
        )));
    };
    let mut ctx = match RunContext::new(config) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let result = match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| exp.run(config, &mut ctx)),
            Err(e) => Err(CliError::Config(format!("cannot start {n} threads: {e}"))),
        },
        None => exp.run(config, &mut ctx),
    };
    let (exit_code, error) = match result {
        Ok(()) => (EXIT_OK, None),
        Err(e) => {
            ctx.remove_artifacts();
            (e.exit_code(), Some(e.to_string()))
        }
    };
    match ctx.finish(config, exit_code, error.clone()) {
        Ok(path) => RunOutcome {
            exit_code,
            manifest: Some(path),
            error,
        },
        Err(e) => RunOutcome {
            exit_code: exit_code.max(EXIT_INVARIANT),
            manifest: None,
            error: Some(error.unwrap_or_else(|| e.to_string())),
        },
    }
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let config = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("zmoments: {e}");
            return e.exit_code();
        }
    };
    let out = run(&config);
    if let Some(e) = &out.error {
        eprintln!("zmoments: {e}");
    }
    if let Some(m) = &out.manifest {
        println!("manifest: {}", m.display());
    }
    out.exit_code
}
