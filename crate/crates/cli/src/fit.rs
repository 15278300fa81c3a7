//! Least-squares growth exponents of `J_k(T)` against `log log T`.

use serde::Serialize;
use zetamoments::{Error, Result};

/// Fit of `log y = intercept + exponent * log log T`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub k: f64,
    pub exponent: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub max_abs_residual: f64,
    pub n_points: usize,
}

/// One fitted point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitPoint {
    pub k: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub j_k: f64,
    pub log_log_t: f64,
    pub log_j_k: f64,
    pub residual: f64,
}

/// Needs three distinct heights and positive values.
pub fn fit_growth(k: f64, points: &[(f64, f64)]) -> Result<(GrowthFit, Vec<FitPoint>)> {
    let mut heights: Vec<f64> = points.iter().map(|p| p.0).collect();
    heights.sort_by(f64::total_cmp);
    heights.dedup();
    if heights.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: heights.len(),
        });
    }
    if let Some(&(t, y)) = points.iter().find(|&&(t, y)| !(t > std::f64::consts::E && y > 0.0)) {
        return Err(Error::Domain(format!("growth fit needs T > e and J > 0, got T = {t}, J = {y}")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rows: Vec<FitPoint> = points
        .iter()
        .zip(xs.iter().zip(&ys))
        .map(|(&(t, j_k), (&x, &y))| FitPoint {
            k,
            t,
            j_k,
            log_log_t: x,
            log_j_k: y,
            residual: y - (intercept + exponent * x),
        })
        .collect();
    let rms_residual = (rows.iter().map(|r| r.residual * r.residual).sum::<f64>() / n).sqrt();
    let max_abs_residual = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    Ok((
        GrowthFit {
            k,
            exponent,
            intercept,
            rms_residual,
            max_abs_residual,
            n_points: rows.len(),
        },
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power() {
        let pts: Vec<(f64, f64)> = [500.0, 1000.0, 2000.0, 5000.0f64]
            .iter()
            .map(|&t| (t, 0.25 * t.ln().powf(3.0)))
            .collect();
        let (fit, _) = fit_growth(1.0, &pts).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-12);
        assert!((fit.intercept - 0.25f64.ln()).abs() < 1e-12);
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn constant_values_give_zero_exponent() {
        let pts = [(500.0, 1.0), (1000.0, 1.0), (2000.0, 1.0)];
        assert_eq!(fit_growth(0.0, &pts).unwrap().0.exponent, 0.0);
    }

    #[test]
    fn needs_three_heights() {
        let pts = [(500.0, 1.0), (500.0, 2.0), (1000.0, 1.0)];
        assert!(matches!(fit_growth(1.0, &pts), Err(Error::InsufficientPoints { needed: 3, got: 2 })));
    }
}
