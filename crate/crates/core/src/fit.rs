//! Ordinary least-squares line fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `y = slope·x + intercept` to already-transformed pairs.
///
/// When every `y` is identical the total variance is zero; the fit is then
/// exact and `r_squared` is reported as 1.
pub fn fit_loglinear(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::Shape { expected: xs.len(), actual: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {}", xs.len())));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("x values have zero variance".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(LineFit { slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let f = fit_loglinear(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept - 1.0).abs() < 1e-14);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn constant_ys() {
        let f = fit_loglinear(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.intercept, 4.0);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn two_points_interpolate() {
        let f = fit_loglinear(&[1.0, 3.0], &[5.0, -1.0]).unwrap();
        assert!((f.slope + 3.0).abs() < 1e-14);
        assert!((f.intercept - 8.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(fit_loglinear(&[2.0, 2.0], &[1.0, 3.0]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_loglinear(&[1.0], &[1.0]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_loglinear(&[1.0, 2.0], &[1.0]), Err(Error::Shape { .. })));
    }

    proptest! {
        #[test]
        fn r_squared_in_unit_interval(pts in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..40)) {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            if let Ok(f) = fit_loglinear(&xs, &ys) {
                prop_assert!((0.0..=1.0).contains(&f.r_squared));
                // residuals are orthogonal to the regressors
                let resid_sum: f64 = xs.iter().zip(&ys).map(|(x, y)| y - f.slope * x - f.intercept).sum();
                prop_assert!(resid_sum.abs() < 1e-8 * (1.0 + ys.iter().map(|y| y.abs()).sum::<f64>()));
            }
        }
    }
}
