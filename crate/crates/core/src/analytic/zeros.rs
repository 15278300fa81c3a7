//! Location of the nontrivial zeros on the critical line by sign changes of `Z(t)`.

use std::f64::consts::{E, PI};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hardy::{hardy_z, rs_theta};
use super::zeta::PrecisionProfile;
use crate::error::{Error, Result};

/// One zero `1/2 + i gamma`, bracketed to `[gamma - width, gamma + width]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub index: usize,
    pub gamma: f64,
    pub width: f64,
}

/// All zeros in `(t_lo, t_max]`, in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    pub t_lo: f64,
    pub t_max: f64,
    pub zeros: Vec<Zero>,
    /// `#zeros - round(N_main(t_max) - N_main(t_lo))`.
    pub count_check: i64,
    pub profile: String,
}

/// `(T / 2 pi) log(T / 2 pi e)`, the Riemann-von Mangoldt main term.
pub fn rvm_main_term(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    t / (2.0 * PI) * (t / (2.0 * PI * E)).ln()
}

/// Slack `2 log T` allowed between the zero count and the main term.
pub fn rvm_slack(t: f64) -> f64 {
    2.0 * t.max(E).ln()
}

impl ZeroTable {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn rvm_main(&self) -> f64 {
        rvm_main_term(self.t_max) - rvm_main_term(self.t_lo)
    }

    /// `#{gamma <= t}` among the tabulated zeros.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.zeros.partition_point(|z| z.gamma <= t)
    }

    /// Zeros with `lo < gamma <= hi`. Errors if the table does not cover the range.
    pub fn window(&self, lo: f64, hi: f64) -> Result<&[Zero]> {
        if lo < self.t_lo || hi > self.t_max {
            return Err(Error::Coverage {
                lo,
                hi,
                have: self.t_max,
            });
        }
        let a = self.zeros.partition_point(|z| z.gamma <= lo);
        let b = self.zeros.partition_point(|z| z.gamma <= hi);
        Ok(&self.zeros[a..b])
    }

    /// Restriction to `(t_lo, t]`, keeping ordinals.
    pub fn truncated(&self, t: f64) -> Result<ZeroTable> {
        if t > self.t_max {
            return Err(Error::Coverage {
                lo: self.t_lo,
                hi: t,
                have: self.t_max,
            });
        }
        let zeros = self.zeros[..self.count_up_to(t)].to_vec();
        let expected = rvm_main_term(t) - rvm_main_term(self.t_lo);
        Ok(ZeroTable {
            t_lo: self.t_lo,
            t_max: t,
            count_check: zeros.len() as i64 - expected.round() as i64,
            zeros,
            profile: self.profile.clone(),
        })
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.gamma).collect()
    }

    pub fn sidecar(&self) -> ZeroTableSidecar {
        ZeroTableSidecar {
            t_lo: self.t_lo,
            t_max: self.t_max,
            count: self.zeros.len(),
            rvm_main: self.rvm_main(),
            discrepancy: self.zeros.len() as f64 - self.rvm_main(),
            profile: self.profile.clone(),
        }
    }

    /// Writes `index,gamma,width` rows to `csv_path` and the JSON sidecar to
    /// `json_path`.
    pub fn write(&self, csv_path: &Path, json_path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(csv_path)?;
        for z in &self.zeros {
            w.serialize(z)?;
        }
        w.flush()?;
        let f = BufWriter::new(File::create(json_path)?);
        serde_json::to_writer_pretty(f, &self.sidecar())?;
        Ok(())
    }

    pub fn read(csv_path: &Path, json_path: &Path) -> Result<ZeroTable> {
        let side: ZeroTableSidecar = serde_json::from_reader(BufReader::new(File::open(json_path)?))?;
        let mut r = csv::Reader::from_path(csv_path)?;
        let zeros = r.deserialize().collect::<std::result::Result<Vec<Zero>, _>>()?;
        let expected = side.rvm_main;
        Ok(ZeroTable {
            t_lo: side.t_lo,
            t_max: side.t_max,
            count_check: zeros.len() as i64 - expected.round() as i64,
            zeros,
            profile: side.profile,
        })
    }
}

/// JSON sidecar accompanying a zero-table CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroTableSidecar {
    #[serde(default)]
    pub t_lo: f64,
    pub t_max: f64,
    pub count: usize,
    pub rvm_main: f64,
    pub discrepancy: f64,
    pub profile: String,
}

/// Grid scan plus bisection zero finder.
#[derive(Clone, Debug)]
pub struct ZeroFinder {
    pub profile: PrecisionProfile,
    /// Upper bound on the scan step.
    pub max_step: f64,
    /// Length of the independently scanned windows.
    pub window: f64,
    pub max_retries: usize,
    /// Allowed `|count - (theta(b) - theta(a))/pi|` per window before a rescan.
    pub window_slack: f64,
}

impl Default for ZeroFinder {
    fn default() -> Self {
        Self {
            profile: PrecisionProfile::standard(),
            max_step: 0.05,
            window: 25.0,
            max_retries: 3,
            window_slack: 2.0,
        }
    }
}

/// Scan step at height `t`: `min(max_step, gap/4)` with `gap = 2 pi / log(t / 2 pi)`.
pub fn scan_step(t: f64, max_step: f64) -> f64 {
    let l = (t / (2.0 * PI)).ln();
    if l <= 0.0 {
        return max_step;
    }
    max_step.min(0.25 * 2.0 * PI / l)
}

impl ZeroFinder {
    pub fn with_profile(profile: PrecisionProfile) -> Self {
        Self {
            profile,
            ..Self::default()
        }
    }

    /// All zeros in `(t_lo, t_hi]`, each refined to half-width `<= tol`.
    pub fn find_zeros(&self, t_lo: f64, t_hi: f64, tol: f64) -> Result<ZeroTable> {
        if !(t_lo >= 0.0 && t_lo < t_hi && tol > 0.0) {
            return Err(Error::Domain(format!(
                "find_zeros needs 0 <= t_lo < t_hi and tol > 0, got ({t_lo}, {t_hi}], tol {tol}"
            )));
        }
        if t_hi > self.profile.t_ceiling {
            return Err(Error::CeilingExceeded {
                t: t_hi,
                ceiling: self.profile.t_ceiling,
            });
        }
        let n_windows = ((t_hi - t_lo) / self.window).ceil().max(1.0) as usize;
        let bounds: Vec<(f64, f64)> = (0..n_windows)
            .map(|i| {
                let a = t_lo + (t_hi - t_lo) * i as f64 / n_windows as f64;
                let b = if i + 1 == n_windows {
                    t_hi
                } else {
                    t_lo + (t_hi - t_lo) * (i + 1) as f64 / n_windows as f64
                };
                (a, b)
            })
            .collect();

        let per_window: Vec<Vec<(f64, f64)>> = bounds
            .par_iter()
            .map(|&(a, b)| self.scan_window_with_retries(a, b, tol))
            .collect::<Result<_>>()?;

        let zeros: Vec<Zero> = per_window
            .into_iter()
            .flatten()
            .enumerate()
            .map(|(i, (gamma, width))| Zero {
                index: i + 1,
                gamma,
                width,
            })
            .collect();

        // Ordinals are absolute only when the scan starts at the origin.
        let expected = rvm_main_term(t_hi) - rvm_main_term(t_lo);
        let slack = if t_lo > 0.0 {
            rvm_slack(t_hi) + rvm_slack(t_lo)
        } else {
            rvm_slack(t_hi)
        };
        if (zeros.len() as f64 - expected).abs() > slack {
            return Err(Error::MissedZeros {
                t_max: t_hi,
                found: zeros.len(),
                expected,
                slack,
            });
        }
        Ok(ZeroTable {
            t_lo,
            t_max: t_hi,
            count_check: zeros.len() as i64 - expected.round() as i64,
            zeros,
            profile: self.profile.name.clone(),
        })
    }

    fn scan_window_with_retries(&self, a: f64, b: f64, tol: f64) -> Result<Vec<(f64, f64)>> {
        let expected = (rs_theta(b) - rs_theta(a)) / PI;
        let mut step_scale = 1.0;
        let mut best = self.scan_window(a, b, tol, step_scale)?;
        for _ in 0..self.max_retries {
            if (best.len() as f64 - expected).abs() <= self.window_slack {
                break;
            }
            step_scale *= 0.5;
            log::debug!(
                "rescanning ({a}, {b}] at step scale {step_scale}: {} zeros vs {expected:.2}",
                best.len()
            );
            let again = self.scan_window(a, b, tol, step_scale)?;
            if again.len() > best.len() {
                best = again;
            }
        }
        Ok(best)
    }

    /// Sign-change scan of `(a, b]` followed by bisection.
    fn scan_window(&self, a: f64, b: f64, tol: f64, step_scale: f64) -> Result<Vec<(f64, f64)>> {
        let z = |t: f64| hardy_z(t, &self.profile);
        let mut found = Vec::new();
        let mut left = a;
        let mut z_left = z(left)?;
        while left < b {
            let step = scan_step(left.max(1.0), self.max_step) * step_scale;
            let right = (left + step).min(b);
            let z_right = z(right)?;
            if z_right == 0.0 {
                found.push((right, 0.0));
            } else if z_left != 0.0 && z_left.signum() != z_right.signum() {
                found.push(self.bisect(left, right, z_left, tol)?);
            }
            left = right;
            z_left = z_right;
        }
        Ok(found)
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, z_lo: f64, tol: f64) -> Result<(f64, f64)> {
        let sign_lo = z_lo.signum();
        while 0.5 * (hi - lo) > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let zm = hardy_z(mid, &self.profile)?;
            if zm == 0.0 {
                return Ok((mid, 0.0));
            }
            if zm.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi), 0.5 * (hi - lo)))
    }
}

/// `find_zeros` with the default finder and the given profile.
pub fn find_zeros(t_lo: f64, t_hi: f64, tol: f64, profile: &PrecisionProfile) -> Result<ZeroTable> {
    ZeroFinder::with_profile(profile.clone()).find_zeros(t_lo, t_hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hundred_height() {
        let table = find_zeros(0.0, 100.0, 1e-9, &PrecisionProfile::standard()).unwrap();
        assert_eq!(table.len(), 29);
        assert!((table.zeros[0].gamma - 14.134725142).abs() < 1e-8);
        assert!((table.zeros[1].gamma - 21.022039639).abs() < 1e-8);
        assert!(table.zeros.iter().all(|z| z.width <= 1e-9));
        assert!(table.zeros.windows(2).all(|w| w[0].gamma < w[1].gamma));
        assert!(table.zeros.iter().enumerate().all(|(i, z)| z.index == i + 1));
    }

    #[test]
    fn nothing_below_fourteen() {
        let table = find_zeros(0.0, 14.0, 1e-6, &PrecisionProfile::standard()).unwrap();
        assert!(table.is_empty());
    }

    #[test]
    fn windows_and_coverage() {
        let table = find_zeros(0.0, 60.0, 1e-9, &PrecisionProfile::standard()).unwrap();
        assert_eq!(table.count_up_to(30.0), 3);
        assert_eq!(table.window(20.0, 40.0).unwrap().len(), 5);
        assert!(table.window(20.0, 70.0).is_err());
        let t = table.truncated(25.0).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn bad_arguments() {
        let p = PrecisionProfile::standard();
        assert!(find_zeros(10.0, 5.0, 1e-9, &p).is_err());
        assert!(find_zeros(0.0, 5.0, 0.0, &p).is_err());
        assert!(matches!(
            find_zeros(0.0, 2.0e5, 1e-9, &p),
            Err(Error::CeilingExceeded { .. })
        ));
    }

    #[test]
    fn csv_and_sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let table = find_zeros(0.0, 50.0, 1e-9, &PrecisionProfile::standard()).unwrap();
        let csv = dir.path().join("zeros.csv");
        let json = dir.path().join("zeros.json");
        table.write(&csv, &json).unwrap();
        let header = std::fs::read_to_string(&csv).unwrap();
        assert!(header.starts_with("index,gamma,width\n"));
        let back = ZeroTable::read(&csv, &json).unwrap();
        assert_eq!(back, table);
        let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        for key in ["t_max", "count", "rvm_main", "discrepancy", "profile"] {
            assert!(side.get(key).is_some(), "missing {key}");
        }
    }
}
