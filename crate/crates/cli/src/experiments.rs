//! Registry of experiments, one per subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use zetamoments::analytic::{find_zeros, rvm_main_term, rvm_slack, PrecisionProfile, ZeroTable};
use zetamoments::arithmetic::ArithmeticTable;
use zetamoments::mollifier::{expand_coefficients, BlockScheme, PreparedScheme};
use zetamoments::moments::{
    classify_zeros, diagonal_upper, exceptional_shape, holder_from, landau_sum, moment_from_values,
    mollify_zeros, twisted_scale, twisted_sum_from, zeta_prime_at_zeros, HolderCheck, MomentReport,
};
use zetamoments::random_model::{build_expression, mc_expectation, ExpressionParams, McConfig, McRow, EXPRESSIONS};
use zetamoments::Error;

use crate::config::RunConfig;
use crate::fit::fit_growth;
use crate::run::{write_table, CliError, CliResult, RunContext};

pub trait Experiment: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()>;
}

pub static EXPERIMENTS: &[&dyn Experiment] = &[
    &Zeros,
    &Moments,
    &Landau,
    &Mollifier,
    &Holder,
    &RandomModel,
    &Classify,
    &Report,
    &Sweep,
];

pub fn find_experiment(name: &str) -> Option<&'static dyn Experiment> {
    EXPERIMENTS.iter().copied().find(|e| e.name() == name)
}

pub fn experiment_names() -> Vec<&'static str> {
    EXPERIMENTS.iter().map(|e| e.name()).collect()
}

fn profile(cfg: &RunConfig) -> CliResult<PrecisionProfile> {
    Ok(PrecisionProfile::by_name(&cfg.profile)?)
}

/// Zeros on `(0, t_max]`, read from `cfg.zeros` when given.
fn zero_table(cfg: &RunConfig, ctx: &mut RunContext, t_max: f64) -> CliResult<ZeroTable> {
    let p = profile(cfg)?;
    ctx.stage("zeros", || match &cfg.zeros {
        Some(csv) => {
            let table = ZeroTable::read(csv, &csv.with_extension("json"))?;
            if table.t_lo > 0.0 || table.t_max < t_max {
                return Err(Error::Coverage {
                    lo: 0.0,
                    hi: t_max,
                    have: table.t_max,
                }
                .into());
            }
            Ok(table)
        }
        None => Ok(find_zeros(0.0, t_max, cfg.tol, &p)?),
    })
}

fn zeta_primes(cfg: &RunConfig, ctx: &mut RunContext, table: &ZeroTable) -> CliResult<Vec<Complex64>> {
    let p = profile(cfg)?;
    ctx.stage("zeta-prime", || Ok(zeta_prime_at_zeros(&table.zeros, &p)?))
}

/// Block scheme with primes from a sieve sized to the last block.
fn scheme(cfg: &RunConfig, ctx: &mut RunContext, t: f64, k: f64) -> CliResult<PreparedScheme> {
    let s = BlockScheme::build(t, k, cfg.m, cfg.ratio)?;
    if s.degenerate {
        ctx.warn(format!(
            "degenerate block scheme at T = {t}, k = {k}: alpha_1 = {:.4} > 10^-{}, J = 1",
            s.blocks[0].alpha, cfg.m
        ));
    }
    let hi = s.blocks.last().map_or(2.0, |b| b.hi);
    let needed = hi.floor().max(2.0) as u64;
    if !(hi.is_finite() && needed <= cfg.sieve_limit) {
        return Err(Error::SieveLimit {
            needed,
            limit: cfg.sieve_limit,
        }
        .into());
    }
    Ok(s.with_primes(&ArithmeticTable::new(needed + 1))?)
}

fn positive_ks(cfg: &RunConfig) -> CliResult<()> {
    if cfg.ks.iter().any(|&k| k <= 0.0) {
        return Err(CliError::Config(format!("{} needs k > 0", cfg.command)));
    }
    Ok(())
}

struct Zeros;

impl Experiment for Zeros {
    fn name(&self) -> &'static str {
        "zeros"
    }
    fn summary(&self) -> &'static str {
        "zero table on (0, t-max] as CSV with a JSON sidecar"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        let t_max = cfg.t_max.unwrap_or(cfg.t_top());
        let p = profile(cfg)?;
        let table = ctx.stage("zeros", || Ok(find_zeros(0.0, t_max, cfg.tol, &p)?))?;
        let csv = ctx.artifact_path("zeros.csv");
        let json = ctx.artifact_path("zeros.json");
        table.write(&csv, &json)?;
        let gap = (table.len() as f64 - rvm_main_term(t_max)).abs();
        if gap > rvm_slack(t_max) {
            return Err(CliError::Invariant(format!(
                "{} zeros up to {t_max}, main term {:.3}",
                table.len(),
                rvm_main_term(t_max)
            )));
        }
        println!("{} zeros on (0, {t_max}]", table.len());
        Ok(())
    }
}

fn moment_reports(cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<Vec<MomentReport>> {
    let table = zero_table(cfg, ctx, cfg.t_top())?;
    let values = zeta_primes(cfg, ctx, &table)?;
    ctx.stage("moments", || {
        let mut out = Vec::new();
        for &t in &cfg.ts {
            let sub = table.truncated(t)?;
            for &k in &cfg.ks {
                let r = moment_from_values(&sub, &values[..sub.len()], t, k)?;
                if k == 0.0 && r.j_k != 1.0 {
                    return Err(CliError::Invariant(format!("J_0({t}) = {} != 1", r.j_k)));
                }
                out.push(r);
            }
        }
        Ok(out)
    })
}

struct Moments;

impl Experiment for Moments {
    fn name(&self) -> &'static str {
        "moments"
    }
    fn summary(&self) -> &'static str {
        "discrete moments J_k(T) for every T and k"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        let rows = moment_reports(cfg, ctx)?;
        ctx.emit("moments", &rows)?;
        Ok(())
    }
}

struct Sweep;

impl Experiment for Sweep {
    fn name(&self) -> &'static str {
        "sweep"
    }
    fn summary(&self) -> &'static str {
        "growth exponent of J_k(T) against log log T over t-range"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        let mut distinct = cfg.ts.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        if distinct.len() < 3 {
            return Err(Error::InsufficientPoints {
                needed: 3,
                got: distinct.len(),
            }
            .into());
        }
        let reports = moment_reports(cfg, ctx)?;
        let mut fits = Vec::new();
        let mut points = Vec::new();
        for &k in &cfg.ks {
            let pts: Vec<(f64, f64)> = reports.iter().filter(|r| r.k == k).map(|r| (r.t, r.j_k)).collect();
            let (fit, rows) = fit_growth(k, &pts)?;
            fits.push(fit);
            points.extend(rows);
        }
        ctx.emit("sweep", &fits)?;
        ctx.emit("sweep_points", &points)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct LandauOut {
    a: u64,
    b: u64,
    #[serde(rename = "T")]
    t: f64,
    count: usize,
    lhs_re: f64,
    lhs_im: f64,
    main_re: f64,
    envelope: f64,
    error_ratio: f64,
}

struct Landau;

impl Experiment for Landau {
    fn name(&self) -> &'static str {
        "landau"
    }
    fn summary(&self) -> &'static str {
        "sums of (a/b)^{i gamma} over (T, 2T] against their main terms"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        let table = zero_table(cfg, ctx, 2.0 * cfg.t_top())?;
        let mut rows = Vec::new();
        ctx.stage("landau", || {
            for &t in &cfg.ts {
                for &(a, b) in &cfg.pairs {
                    let c = landau_sum(a, b, t, &table)?;
                    if a == b && (c.lhs != Complex64::new(c.count as f64, 0.0) || c.main_term.re != c.count as f64) {
                        return Err(CliError::Invariant(format!("a = b = {a} at T = {t}: {} vs {}", c.lhs, c.count)));
                    }
                    rows.push(LandauOut {
                        a,
                        b,
                        t,
                        count: c.count,
                        lhs_re: c.lhs.re,
                        lhs_im: c.lhs.im,
                        main_re: c.main_term.re,
                        envelope: c.error_envelope,
                        error_ratio: c.error_ratio(),
                    });
                }
            }
            Ok(())
        })?;
        ctx.emit("landau", &rows)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct SchemeRow {
    #[serde(rename = "T")]
    t: f64,
    k: f64,
    m: i32,
    ratio: f64,
    num_blocks: usize,
    degenerate: bool,
    j: usize,
    alpha: f64,
    lo: f64,
    hi: f64,
    threshold: f64,
    order: usize,
    n_primes: usize,
    reciprocal_prime_sum: f64,
}

#[derive(Serialize)]
struct DiagonalRow {
    #[serde(rename = "T")]
    t: f64,
    k: f64,
    num_blocks: usize,
    ln_product: f64,
    ln_normalizer: f64,
    ln_ratio: f64,
}

#[derive(Serialize)]
struct CoefficientRow {
    #[serde(rename = "T")]
    t: f64,
    k: f64,
    alpha: f64,
    n: u64,
    a_alpha_n: f64,
    omega: u32,
    big_omega: u32,
}

struct Mollifier;

impl Experiment for Mollifier {
    fn name(&self) -> &'static str {
        "mollifier"
    }
    fn summary(&self) -> &'static str {
        "block scheme, coefficients of N(k) and N(k-1), and the diagonal bound"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        positive_ks(cfg)?;
        let mut blocks = Vec::new();
        let mut diagonal = Vec::new();
        let mut coefficients = Vec::new();
        for &t in &cfg.ts {
            for &k in &cfg.ks {
                let s = scheme(cfg, ctx, t, k)?;
                let sums = s.reciprocal_prime_sums();
                for (b, sum) in s.blocks().iter().zip(sums) {
                    blocks.push(SchemeRow {
                        t,
                        k,
                        m: cfg.m,
                        ratio: cfg.ratio,
                        num_blocks: s.num_blocks(),
                        degenerate: s.scheme.degenerate,
                        j: b.index,
                        alpha: b.alpha,
                        lo: b.lo,
                        hi: b.hi,
                        threshold: b.threshold,
                        order: b.order,
                        n_primes: s.primes(b.index)?.len(),
                        reciprocal_prime_sum: sum,
                    });
                }
                if !s.scheme.degenerate && s.scheme.length_exponent() > s.scheme.length_bound_exponent() {
                    return Err(CliError::Invariant(format!("support length bound fails at T = {t}, k = {k}")));
                }
                let expanded = ctx.stage("coefficients", || {
                    let mut out = Vec::new();
                    for alpha in [k, k - 1.0] {
                        match expand_coefficients(&s, alpha) {
                            Ok(c) => out.push(c),
                            Err(Error::SupportSize(m)) => return Ok(Err(m)),
                            Err(e) => return Err(e.into()),
                        }
                    }
                    Ok(Ok(out))
                })?;
                match expanded {
                    Ok(list) => {
                        for c in list {
                            let bad = c.coefficient_bound_violations();
                            if !bad.is_empty() {
                                return Err(CliError::Invariant(format!(
                                    "coefficient bound fails for alpha = {} at n = {:?}",
                                    c.alpha,
                                    &bad[..bad.len().min(5)]
                                )));
                            }
                            for (&n, term) in c.terms() {
                                coefficients.push(CoefficientRow {
                                    t,
                                    k,
                                    alpha: c.alpha,
                                    n,
                                    a_alpha_n: term.value,
                                    omega: term.omega,
                                    big_omega: term.big_omega,
                                });
                            }
                        }
                    }
                    Err(m) => ctx.warn(format!("coefficients skipped at T = {t}, k = {k}: {m}")),
                }
                match ctx.stage("diagonal", || Ok(diagonal_upper(&s, k)))? {
                    Ok(d) => {
                        let ln_normalizer = k * k * t.ln().ln();
                        diagonal.push(DiagonalRow {
                            t,
                            k,
                            num_blocks: s.num_blocks(),
                            ln_product: d.ln_product,
                            ln_normalizer,
                            ln_ratio: d.ln_product - ln_normalizer,
                        });
                    }
                    Err(Error::SupportSize(m)) => ctx.warn(format!("diagonal skipped at T = {t}, k = {k}: {m}")),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        ctx.emit("scheme", &blocks)?;
        ctx.emit("coefficients", &coefficients)?;
        ctx.emit("diagonal", &diagonal)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct TwistedRow {
    #[serde(rename = "T")]
    t: f64,
    k: f64,
    n_zeros: usize,
    re: f64,
    im: f64,
    abs: f64,
    scale: f64,
    ratio: f64,
}

struct Holder;

impl Experiment for Holder {
    fn name(&self) -> &'static str {
        "holder"
    }
    fn summary(&self) -> &'static str {
        "Hölder split of the twisted sum over zeros up to T"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        positive_ks(cfg)?;
        let table = zero_table(cfg, ctx, cfg.t_top())?;
        let values = zeta_primes(cfg, ctx, &table)?;
        let gammas = table.gammas();
        let mut checks: Vec<HolderCheck> = Vec::new();
        let mut twisted = Vec::new();
        for &t in &cfg.ts {
            let n = table.count_up_to(t);
            for &k in &cfg.ks {
                let s = scheme(cfg, ctx, t, k)?;
                let data = ctx.stage("holder", || Ok(mollify_zeros(&gammas[..n], &values[..n], &s, k)?))?;
                let h = holder_from(&data, t, k)?;
                if !h.holds() {
                    return Err(CliError::Invariant(format!("Hölder slack {} at T = {t}, k = {k}", h.slack)));
                }
                let z = twisted_sum_from(&data);
                let scale = twisted_scale(t, k);
                twisted.push(TwistedRow {
                    t,
                    k,
                    n_zeros: n,
                    re: z.re,
                    im: z.im,
                    abs: z.norm(),
                    scale,
                    ratio: z.norm() / scale,
                });
                checks.push(h);
            }
        }
        ctx.emit("holder", &checks)?;
        ctx.emit("twisted", &twisted)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct McOut {
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "expression-id")]
    expression_id: String,
    blocks: String,
    k: f64,
    n_samples: usize,
    mc_mean: f64,
    mc_stderr: f64,
    closed_form: Option<f64>,
    z_score: Option<f64>,
}

struct RandomModel;

impl Experiment for RandomModel {
    fn name(&self) -> &'static str {
        "random-model"
    }
    fn summary(&self) -> &'static str {
        "Monte Carlo expectations of registered expressions against closed forms"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        positive_ks(cfg)?;
        let ids: Vec<String> = if cfg.expressions.is_empty() {
            EXPRESSIONS.iter().map(|e| e.0.to_string()).collect()
        } else {
            cfg.expressions.clone()
        };
        let mc = McConfig {
            n_samples: cfg.n_samples,
            seed: cfg.seed,
        };
        let mut rows = Vec::new();
        for &t in &cfg.ts {
            for &k in &cfg.ks {
                let s = scheme(cfg, ctx, t, k)?;
                let params = ExpressionParams {
                    k,
                    blocks: cfg.blocks.clone(),
                    j: cfg.j,
                    power: cfg.power,
                    coef: cfg.coef,
                };
                for id in &ids {
                    let expr = build_expression(id, &s, &params)?;
                    let est = ctx.stage(&format!("mc:{id}"), || Ok(mc_expectation(expr.as_ref(), &mc)?))?;
                    let r = McRow::new(expr.as_ref(), &cfg.blocks, k, &est);
                    if let Some(z) = r.z_score.filter(|z| z.abs() > 3.0) {
                        ctx.warn(format!("{id} at T = {t}, k = {k}: z-score {z:.2}"));
                    }
                    rows.push(McOut {
                        t,
                        expression_id: r.expression_id,
                        blocks: r.blocks,
                        k: r.k,
                        n_samples: r.n_samples,
                        mc_mean: r.mc_mean,
                        mc_stderr: r.mc_stderr,
                        closed_form: r.closed_form,
                        z_score: r.z_score,
                    });
                }
            }
        }
        ctx.emit("random_model", &rows)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct ClassRow {
    #[serde(rename = "T")]
    t: f64,
    k: f64,
    set: usize,
    count: usize,
    fraction: f64,
}

#[derive(Serialize)]
struct ClassSummary {
    #[serde(rename = "T")]
    t: f64,
    k: f64,
    num_blocks: usize,
    n_zeros: usize,
    s0_count: usize,
    s0_fraction: f64,
    /// `exp(-(log log T)^2 / 10)`, the `S(0)` bound shape over `T log T`.
    s0_shape: f64,
    literal_last: usize,
}

struct Classify;

impl Experiment for Classify {
    fn name(&self) -> &'static str {
        "classify"
    }
    fn summary(&self) -> &'static str {
        "partition of the zeros in (T, 2T] into the sets S(0), ..., S(J)"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        positive_ks(cfg)?;
        let table = zero_table(cfg, ctx, 2.0 * cfg.t_top())?;
        let mut rows = Vec::new();
        let mut summary = Vec::new();
        for &t in &cfg.ts {
            let window = table.window(t, 2.0 * t)?;
            for &k in &cfg.ks {
                let s = scheme(cfg, ctx, t, k)?;
                let c = ctx.stage("classify", || Ok(classify_zeros(window, &s)?))?;
                if c.total != window.len() || c.counts.iter().sum::<usize>() != c.total {
                    return Err(CliError::Invariant(format!("classification at T = {t} is not a partition")));
                }
                for (set, &count) in c.counts.iter().enumerate() {
                    rows.push(ClassRow {
                        t,
                        k,
                        set,
                        count,
                        fraction: if c.total == 0 { 0.0 } else { count as f64 / c.total as f64 },
                    });
                }
                summary.push(ClassSummary {
                    t,
                    k,
                    num_blocks: s.num_blocks(),
                    n_zeros: c.total,
                    s0_count: c.counts[0],
                    s0_fraction: c.exceptional_fraction(),
                    s0_shape: exceptional_shape(t) / (t * t.ln()),
                    literal_last: c.literal_last,
                });
            }
        }
        ctx.emit("classify", &rows)?;
        ctx.emit("classify_summary", &summary)?;
        Ok(())
    }
}

fn collect_csv(dir: &Path, skip: Option<&Path>, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    entries.sort();
    for p in entries {
        if p.is_dir() {
            if skip.is_some_and(|s| p.canonicalize().ok().as_deref() == Some(s)) {
                continue;
            }
            collect_csv(&p, skip, out)?;
        } else if p.extension().is_some_and(|e| e == "csv") {
            out.push(p);
        }
    }
    Ok(())
}

struct Report;

impl Experiment for Report {
    fn name(&self) -> &'static str {
        "report"
    }
    fn summary(&self) -> &'static str {
        "merge the CSV tables found under input-dir, one merged table per file name"
    }
    fn run(&self, cfg: &RunConfig, ctx: &mut RunContext) -> CliResult<()> {
        let input = cfg
            .input_dir
            .as_ref()
            .ok_or_else(|| CliError::Config("report needs input-dir".into()))?;
        if !input.is_dir() {
            return Err(CliError::Config(format!("input-dir {} is not a directory", input.display())));
        }
        let skip = ctx.output_dir.canonicalize().ok();
        let mut files = Vec::new();
        collect_csv(input, skip.as_deref(), &mut files)?;
        let mut tables: BTreeMap<String, (Vec<String>, Vec<Vec<String>>)> = BTreeMap::new();
        let mut index = Vec::new();
        for f in &files {
            let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let source = f
                .parent()
                .and_then(|p| p.strip_prefix(input).ok())
                .map(|p| p.display().to_string())
                .unwrap_or_default();
            let mut r = csv::Reader::from_path(f)?;
            let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
            let entry = tables.entry(stem.clone()).or_insert_with(|| (header.clone(), Vec::new()));
            if entry.0 != header {
                return Err(CliError::Invariant(format!("schema of {} differs from other {stem} tables", f.display())));
            }
            let mut n = 0;
            for rec in r.records() {
                let mut row = vec![source.clone()];
                row.extend(rec?.iter().map(str::to_string));
                entry.1.push(row);
                n += 1;
            }
            index.push(vec![stem, source, n.to_string()]);
        }
        let ext = ctx.format.extension();
        for (stem, (header, rows)) in &tables {
            let path = ctx.artifact_path(&format!("merged_{stem}.{ext}"));
            let mut h = vec!["source".to_string()];
            h.extend(header.iter().cloned());
            write_table(&path, ctx.format, &h, rows)?;
        }
        let path = ctx.artifact_path(&format!("report.{ext}"));
        let header: Vec<String> = ["table", "source", "rows"].iter().map(|s| s.to_string()).collect();
        write_table(&path, ctx.format, &header, &index)?;
        println!("merged {} files into {} tables", files.len(), tables.len());
        Ok(())
    }
}
