#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;
use std::sync::OnceLock;

use zetamoments::analytic::{find_zeros, PrecisionProfile, ZeroTable};

pub const TABLE_T: f64 = 5000.0;
pub const TABLE_TOL: f64 = 1e-10;

/// Zeros in `(0, 5000]`, computed once and cached under the cargo target dir.
pub fn zeros() -> &'static ZeroTable {
    static TABLE: OnceLock<ZeroTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
        let csv = dir.join("zeros_5000.csv");
        let json = dir.join("zeros_5000.json");
        if let Ok(t) = ZeroTable::read(&csv, &json) {
            if t.t_max == TABLE_T && t.t_lo == 0.0 {
                return t;
            }
        }
        let t = find_zeros(0.0, TABLE_T, TABLE_TOL, &PrecisionProfile::standard()).expect("zero scan");
        let tmp_csv = dir.join(format!("zeros_5000.{}.csv", std::process::id()));
        let tmp_json = dir.join(format!("zeros_5000.{}.json", std::process::id()));
        if t.write(&tmp_csv, &tmp_json).is_ok() {
            let _ = std::fs::rename(&tmp_json, &json);
            let _ = std::fs::rename(&tmp_csv, &csv);
        }
        t
    })
}
