//! Curve data behind the `ln r` plot and the contour plot.

use pubbias_core::model::contour_beta;
use pubbias_core::StepSelectionModel;

use crate::error::CliError;
use crate::format::round_half_away;

/// Significance levels plotted when none are given.
pub const DEFAULT_FIG2_ALPHAS: [f64; 3] = [0.01, 0.05, 0.10];
/// Interior grid points in `beta`; 99 gives `beta = .01, .02, ..., .99`.
pub const DEFAULT_FIG2_POINTS: usize = 99;
/// Contours drawn when none are given.
pub const DEFAULT_FIG3_RATIOS: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 19.0];

/// One plotted series: `points` are `(x, y)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    /// The parameter held fixed along the curve (`alpha` or `r0`).
    pub key: f64,
    pub points: Vec<(f64, f64)>,
}

/// `alpha = 0, .01, ..., .99`.
pub fn default_contour_grid() -> Vec<f64> {
    (0..100).map(|k| k as f64 / 100.0).collect()
}

/// Interior grid `k / (points + 1)`, `k = 1..=points`.
pub fn beta_grid(points: usize) -> Vec<f64> {
    let steps = (points + 1) as f64;
    (1..=points).map(|k| k as f64 / steps).collect()
}

/// `(beta, ln r)` for each `alpha`, over an interior grid of `beta`.
pub fn fig2_curves(alphas: &[f64], points: usize) -> Result<Vec<Curve>, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    let grid = beta_grid(points);
    alphas
        .iter()
        .map(|&alpha| {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(CliError::Usage(format!(
                    "alpha must lie in (0, 1) for ln r, got {alpha}"
                )));
            }
            let points = grid
                .iter()
                .map(|&beta| {
                    let r = StepSelectionModel::new(alpha, beta)?.ratio();
                    // alpha > 0 keeps p > 0
                    Ok((beta, r.value().ln()))
                })
                .collect::<Result<_, CliError>>()?;
            Ok(Curve {
                label: format!("alpha = {alpha}"),
                key: alpha,
                points,
            })
        })
        .collect()
}

/// `(alpha, beta)` along each contour `r = r0`. Grid points where the
/// contour leaves the unit square are skipped, so a curve may be empty.
pub fn fig3_curves(ratios: &[f64], alpha_grid: &[f64]) -> Result<Vec<Curve>, CliError> {
    if let Some(&a) = alpha_grid.iter().find(|&&a| !(0.0..1.0).contains(&a)) {
        return Err(CliError::Usage(format!(
            "contour grid values must lie in [0, 1), got {a}"
        )));
    }
    ratios
        .iter()
        .map(|&r0| {
            if !(r0 >= 0.0 && r0.is_finite()) {
                return Err(CliError::Usage(format!("r must be finite and >= 0, got {r0}")));
            }
            let points = alpha_grid
                .iter()
                .filter_map(|&a| contour_beta(r0, a).ok().map(|b| (a, b)))
                .collect();
            Ok(Curve {
                label: format!("r = {r0}"),
                key: r0,
                points,
            })
        })
        .collect()
}

/// Slope `d beta / d alpha = -(1 - beta) / (1 - alpha)` of a contour; close
/// to -1 over most of the square.
pub fn contour_slope(alpha: f64, beta: f64) -> f64 {
    -(1.0 - beta) / (1.0 - alpha)
}

pub fn fig2_csv(curves: &[Curve], precision: usize) -> String {
    let f = |x| round_half_away(x, precision);
    let mut out = String::from("alpha,beta,r,ln_r\n");
    for c in curves {
        for &(beta, ln_r) in &c.points {
            out += &format!("{},{},{},{}\n", f(c.key), f(beta), f(ln_r.exp()), f(ln_r));
        }
    }
    out
}

pub fn fig3_csv(curves: &[Curve], precision: usize) -> String {
    let f = |x| round_half_away(x, precision);
    let mut out = String::from("r0,alpha,beta,slope\n");
    for c in curves {
        for &(alpha, beta) in &c.points {
            out += &format!(
                "{},{},{},{}\n",
                f(c.key),
                f(alpha),
                f(beta),
                f(contour_slope(alpha, beta))
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(curve: &Curve, x: f64) -> Option<f64> {
        curve.points.iter().find(|p| p.0 == x).map(|p| p.1)
    }

    #[test]
    fn fig2_examples() {
        let curves = fig2_curves(&[0.01, 0.05], DEFAULT_FIG2_POINTS).unwrap();
        let ln_r = point(&curves[1], 0.05).unwrap();
        assert!((ln_r - 9.256410256410254f64.ln()).abs() < 1e-12);
        assert!((ln_r - 2.2254).abs() < 1e-4);
        assert!((point(&curves[0], 0.01).unwrap() - 3.897).abs() < 1e-3);
        let last = curves[1].points.last().unwrap();
        assert_eq!(last.0, 0.99);
        assert!(last.1 < -4.0);
        // decreasing towards beta -> 1
        assert!(curves[1].points.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn fig2_rejects_bad_input() {
        assert!(fig2_curves(&[0.0], 10).is_err());
        assert!(fig2_curves(&[1.0], 10).is_err());
        assert!(fig2_curves(&[0.05], 1).is_err());
    }

    #[test]
    fn fig3_examples() {
        let grid = default_contour_grid();
        let curves = fig3_curves(&[19.0, 1.0], &grid).unwrap();
        assert_eq!(point(&curves[0], 0.05), Some(0.0));
        assert!((point(&curves[1], 0.05).unwrap() - 0.47368).abs() < 1e-5);

        let table_range: Vec<f64> = (1..=50).map(|k| k as f64 / 100.0).collect();
        let curves = fig3_curves(&[189.0], &table_range).unwrap();
        assert!(curves[0].points.is_empty());
        assert!(fig3_curves(&[-1.0], &grid).is_err());
        assert!(fig3_curves(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn contour_slopes_near_minus_one() {
        let curves = fig3_curves(&[19.0], &default_contour_grid()).unwrap();
        for &(a, b) in &curves[0].points {
            let s = contour_slope(a, b);
            assert!((-1.06..=-0.94).contains(&s), "{s}");
        }
    }

    #[test]
    fn csv_shapes() {
        let c2 = fig2_curves(&[0.05], 4).unwrap();
        let csv = fig2_csv(&c2, 4);
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(csv.lines().nth(1).unwrap(), "0.0500,0.2000,3.1667,1.1527");
        let c3 = fig3_curves(&[1.0], &[0.0]).unwrap();
        assert_eq!(fig3_csv(&c3, 2), "r0,alpha,beta,slope\n1.00,0.00,0.50,-0.50\n");
    }
}
