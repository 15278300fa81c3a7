use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_zmoments");

fn zm(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .env_remove("ZMOMENTS_OUTPUT_DIR")
        .output()
        .expect("spawn zmoments")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let (h, rows) = csv_rows(path);
    let i = h.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name} in {h:?}"));
    rows.into_iter().map(|r| r[i].clone()).collect()
}

#[test]
fn zeros_to_one_hundred() {
    let d = tempfile::tempdir().unwrap();
    let o = zm(d.path(), &["zeros", "--t-max", "100", "--tol", "1e-9"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = csv_rows(&d.path().join("zeros.csv"));
    assert_eq!(rows.len(), 29);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("zeros.json")).unwrap()).unwrap();
    assert_eq!(side["count"], 29);
    let m = manifest(d.path());
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["command"], "zeros");
    assert_eq!(m["config"]["t-max"], "100.0");
    assert_eq!(m["stages"][0]["name"], "zeros");
    assert!(m["end_unix_ms"].as_u64().unwrap() >= m["start_unix_ms"].as_u64().unwrap());
    assert!(m["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
}

#[test]
fn zeroth_moment_is_one() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&zm(d.path(), &["moments", "--t", "1000", "--k", "0"])), 0);
    let p = d.path().join("moments.csv");
    assert_eq!(column(&p, "j_k"), vec!["1.0"]);
    assert_eq!(column(&p, "n_zeros"), vec!["649"]);
}

#[test]
fn report_on_empty_dir() {
    let d = tempfile::tempdir().unwrap();
    let input = d.path().join("runs");
    std::fs::create_dir(&input).unwrap();
    let out = d.path().join("out");
    let o = zm(&out, &["report", "--input-dir", input.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv_rows(&out.join("report.csv"));
    assert_eq!(h, vec!["table", "source", "rows"]);
    assert!(rows.is_empty());
}

#[test]
fn report_merges_runs_and_rejects_schema_clash() {
    let d = tempfile::tempdir().unwrap();
    let runs = d.path().join("runs");
    for (name, t) in [("a", "200"), ("b", "300")] {
        assert_eq!(code(&zm(&runs.join(name), &["moments", "--t", t, "--k", "0,1"])), 0);
    }
    let out = runs.join("merged");
    assert_eq!(code(&zm(&out, &["report", "--input-dir", runs.to_str().unwrap()])), 0);
    let merged = out.join("merged_moments.csv");
    assert_eq!(column(&merged, "source"), vec!["a", "a", "b", "b"]);
    // A second report over the same tree skips its own output directory.
    assert_eq!(code(&zm(&out, &["report", "--input-dir", runs.to_str().unwrap()])), 0);
    assert_eq!(column(&merged, "source").len(), 4);

    std::fs::create_dir(runs.join("c")).unwrap();
    std::fs::write(runs.join("c/moments.csv"), "T,k\n1,2\n").unwrap();
    let out2 = d.path().join("out2");
    let o = zm(&out2, &["report", "--input-dir", runs.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(!out2.join("merged_moments.csv").exists());
    assert!(!out2.join("report.csv").exists());
    let m = manifest(&out2);
    assert_eq!(m["exit_code"], 1);
    assert!(m["error"].as_str().unwrap().contains("schema"));
}

#[test]
fn sweep_fits_and_needs_three_heights() {
    let d = tempfile::tempdir().unwrap();
    let o = zm(d.path(), &["sweep", "--t-range", "200,400,800", "--k", "0,1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = d.path().join("sweep.csv");
    assert_eq!(column(&p, "exponent")[0], "0.0");
    let e1: f64 = column(&p, "exponent")[1].parse().unwrap();
    assert!(e1 > 1.0 && e1 < 5.0, "{e1}");
    assert_eq!(csv_rows(&d.path().join("sweep_points.csv")).1.len(), 6);

    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(code(&zm(d2.path(), &["sweep", "--t", "1000", "--k", "1"])), 2);
    assert_eq!(manifest(d2.path())["exit_code"], 2);
    assert!(!d2.path().join("sweep.csv").exists());
}

#[test]
fn configuration_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("bad.cfg");
    std::fs::write(&cfg, "command = moments\ncolour = red\n").unwrap();
    let out = d.path().join("o");
    assert_eq!(code(&zm(&out, &["--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&zm(&out, &["moments", "--t", "-5"])), 2);
    assert_eq!(code(&zm(&out, &["moments", "--format", "xml"])), 2);
    assert_eq!(code(&zm(&out, &["nonsense"])), 2);
    assert_eq!(code(&zm(&out, &[])), 2);
    assert_eq!(code(&zm(&out, &["--no-such-flag", "1"])), 2);
    assert_eq!(code(&zm(&out, &["holder", "--k", "0"])), 2);
    assert_eq!(code(&zm(&out, &["random-model", "--expression", "nope"])), 2);
    assert_eq!(code(&zm(&out, &["mollifier", "--sieve-limit", "3"])), 2);
    assert_eq!(code(&zm(&out, &["report"])), 2);
}

#[test]
fn flags_override_config_file() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.cfg");
    std::fs::write(&cfg, "# moments run\ncommand = moments\nt_range = 100, 200\nk = 0.5\n").unwrap();
    let out = d.path().join("o");
    assert_eq!(code(&zm(&out, &["--config", cfg.to_str().unwrap(), "--t", "150"])), 0);
    let p = out.join("moments.csv");
    assert_eq!(column(&p, "T"), vec!["150.0"]);
    assert_eq!(column(&p, "k"), vec!["0.5"]);
    let m = manifest(&out);
    assert_eq!(m["config"]["t"], "150.0");
    assert!(m["config"].get("t-range").is_none());
}

#[test]
fn output_dir_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["moments", "--t", "100", "--k", "0"])
        .env("ZMOMENTS_OUTPUT_DIR", d.path())
        .current_dir(d.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(d.path().join("moments.csv").exists());
    assert!(d.path().join("manifest.json").exists());
}

#[test]
fn runs_reproduce_from_manifest_and_across_threads() {
    let d = tempfile::tempdir().unwrap();
    let args = ["random-model", "--t", "10000", "--k", "0.7", "--n-samples", "5000", "--seed", "77"];
    let a = d.path().join("a");
    let b = d.path().join("b");
    let mut with_threads: Vec<&str> = args.to_vec();
    with_threads.extend(["--threads", "1"]);
    assert_eq!(code(&zm(&a, &args)), 0);
    assert_eq!(code(&zm(&b, &with_threads)), 0);
    let read = |p: &PathBuf| std::fs::read(p.join("random_model.csv")).unwrap();
    assert_eq!(read(&a), read(&b));

    // Replay the snapshot as a config file.
    let snap = manifest(&a)["config"].as_object().unwrap().clone();
    let text: String = snap
        .iter()
        .filter(|(k, _)| k.as_str() != "output-dir")
        .map(|(k, v)| format!("{k} = {}\n", v.as_str().unwrap()))
        .collect();
    let cfg = d.path().join("replay.cfg");
    std::fs::write(&cfg, text).unwrap();
    let c = d.path().join("c");
    assert_eq!(code(&zm(&c, &["--config", cfg.to_str().unwrap()])), 0);
    assert_eq!(read(&a), read(&c));
    assert_eq!(manifest(&c)["config"]["seed"], "77");
}

#[test]
fn reuses_a_saved_zero_table() {
    let d = tempfile::tempdir().unwrap();
    let z = d.path().join("z");
    assert_eq!(code(&zm(&z, &["zeros", "--t-max", "600"])), 0);
    let table = z.join("zeros.csv");
    let l = d.path().join("l");
    let o = zm(&l, &["landau", "--t", "250", "--pairs", "1:1,2:1", "--zeros", table.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&l);
    assert_eq!(m["config"]["zeros"], table.to_str().unwrap());
    let fresh = d.path().join("f");
    assert_eq!(code(&zm(&fresh, &["landau", "--t", "250", "--pairs", "1:1,2:1"])), 0);
    assert_eq!(column(&l.join("landau.csv"), "lhs_re"), column(&fresh.join("landau.csv"), "lhs_re"));
    // The table does not reach 2T.
    let short = d.path().join("s");
    assert_eq!(code(&zm(&short, &["landau", "--t", "400", "--zeros", table.to_str().unwrap()])), 1);
    assert!(!short.join("landau.csv").exists());
}

#[test]
fn degenerate_scheme_is_flagged_in_manifest() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&zm(d.path(), &["mollifier", "--t", "1000", "--k", "1"])), 0);
    let w = manifest(d.path())["warnings"].as_array().unwrap().clone();
    assert!(w.iter().any(|x| x.as_str().unwrap().contains("degenerate")));
    assert_eq!(column(&d.path().join("scheme.csv"), "degenerate"), vec!["true"]);
}

#[test]
fn json_format() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&zm(d.path(), &["holder", "--t", "300", "--k", "0.5,1.5", "--format", "json"])), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("holder.json")).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(r["slack"].as_f64().unwrap() <= 1.0 + 1e-12);
        for key in ["k", "T", "lhs", "f1", "f2", "f3"] {
            assert!(r[key].is_number(), "{key}");
        }
    }
    assert!(!d.path().join("holder.csv").exists());
}

/// Documented CSV schemas, by file name.
const SCHEMAS: &[(&str, &[&str])] = &[
    ("zeros.csv", &["index", "gamma", "width"]),
    ("moments.csv", &["T", "k", "n_zeros", "j_k", "normalizer", "ratio", "runtime_ms"]),
    ("sweep.csv", &["k", "exponent", "intercept", "rms_residual", "max_abs_residual", "n_points"]),
    ("sweep_points.csv", &["k", "T", "j_k", "log_log_t", "log_j_k", "residual"]),
    ("landau.csv", &["a", "b", "T", "count", "lhs_re", "lhs_im", "main_re", "envelope", "error_ratio"]),
    (
        "scheme.csv",
        &[
            "T", "k", "m", "ratio", "num_blocks", "degenerate", "j", "alpha", "lo", "hi", "threshold", "order",
            "n_primes", "reciprocal_prime_sum",
        ],
    ),
    ("coefficients.csv", &["T", "k", "alpha", "n", "a_alpha_n", "omega", "big_omega"]),
    ("diagonal.csv", &["T", "k", "num_blocks", "ln_product", "ln_normalizer", "ln_ratio"]),
    ("holder.csv", &["k", "T", "lhs", "f1", "f2", "f3", "slack"]),
    ("twisted.csv", &["T", "k", "n_zeros", "re", "im", "abs", "scale", "ratio"]),
    (
        "random_model.csv",
        &["T", "expression-id", "blocks", "k", "n_samples", "mc_mean", "mc_stderr", "closed_form", "z_score"],
    ),
    ("classify.csv", &["T", "k", "set", "count", "fraction"]),
    (
        "classify_summary.csv",
        &["T", "k", "num_blocks", "n_zeros", "s0_count", "s0_fraction", "s0_shape", "literal_last"],
    ),
    ("report.csv", &["table", "source", "rows"]),
];

/// Columns that are not numeric.
const TEXT_COLUMNS: &[&str] = &["degenerate", "expression-id", "blocks", "table", "source"];

#[test]
fn every_emitted_csv_matches_its_schema() {
    let d = tempfile::tempdir().unwrap();
    let runs = d.path().join("runs");
    let jobs: &[(&str, &[&str])] = &[
        ("zeros", &["zeros", "--t-max", "200"]),
        ("moments", &["moments", "--t-range", "100,200", "--k", "0,0.5,1"]),
        ("sweep", &["sweep", "--t-range", "100,200,400", "--k", "1"]),
        ("landau", &["landau", "--t", "150"]),
        ("mollifier", &["mollifier", "--t", "500", "--k", "0.5,1"]),
        ("holder", &["holder", "--t", "200", "--k", "0.3,2"]),
        ("random", &["random-model", "--t", "10000", "--k", "1", "--n-samples", "2000"]),
        ("classify", &["classify", "--t", "150", "--k", "1"]),
    ];
    for (dir, args) in jobs {
        let o = zm(&runs.join(dir), args);
        assert_eq!(code(&o), 0, "{dir}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let out = d.path().join("report");
    assert_eq!(code(&zm(&out, &["report", "--input-dir", runs.to_str().unwrap()])), 0);

    let mut files: Vec<PathBuf> = Vec::new();
    for dir in [runs.clone(), out.clone()] {
        for e in walk(&dir) {
            if e.extension().is_some_and(|x| x == "csv") {
                files.push(e);
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for f in &files {
        let name = f.file_name().unwrap().to_str().unwrap().to_string();
        let (header, rows) = csv_rows(f);
        let expected: Vec<String> = match name.strip_prefix("merged_") {
            Some(base) => {
                let (_, cols) = SCHEMAS.iter().find(|(n, _)| *n == base).unwrap_or_else(|| panic!("{name}"));
                std::iter::once("source").chain(cols.iter().copied()).map(str::to_string).collect()
            }
            None => {
                let (_, cols) = SCHEMAS.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no schema for {name}"));
                cols.iter().map(|c| c.to_string()).collect()
            }
        };
        assert_eq!(header, expected, "{}", f.display());
        for row in &rows {
            assert_eq!(row.len(), header.len());
            for (col, cell) in header.iter().zip(row) {
                if TEXT_COLUMNS.contains(&col.as_str()) {
                    continue;
                }
                if cell.is_empty() && (col == "closed_form" || col == "z_score") {
                    continue;
                }
                let x: f64 = cell.parse().unwrap_or_else(|_| panic!("{}: {col} = {cell:?}", f.display()));
                assert!(!x.is_nan() || col == "ratio", "{}: {col} is NaN", f.display());
            }
        }
        seen.insert(name.trim_start_matches("merged_").to_string());
    }
    for (name, _) in SCHEMAS {
        assert!(seen.contains(*name), "{name} never emitted");
    }
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}
