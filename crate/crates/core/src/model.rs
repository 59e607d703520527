//! The two-parameter step selection model.
//!
//! Studies whose score falls in the upper tail (probability mass `alpha` under
//! the score density) are always published; everything else is published with
//! constant probability `beta`. Only the product `(1 - alpha)(1 - beta)`
//! matters, so nothing here depends on the shape of the density or on
//! whether `alpha` is split across one tail or two.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Ratios above this are "large".
pub const LARGE_RATIO: f64 = 50.0;
/// Ratios above this are "very large".
pub const VERY_LARGE_RATIO: f64 = 100.0;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            range: "[0, 1]",
            value,
        });
    }
    Ok(value)
}

/// Ratio of unpublished to published studies.
///
/// `Infinite` stands in for `p = 0`, where nothing is ever published.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Infinite,
}

impl Ratio {
    /// `(1 - p) / p`, or [`Ratio::Infinite`] when `p == 0`.
    pub fn from_publication_probability(p: f64) -> Self {
        if p == 0.0 {
            Ratio::Infinite
        } else {
            Ratio::Finite((1.0 - p) / p)
        }
    }

    /// The ratio as a float, `f64::INFINITY` for the infinite state.
    pub fn value(self) -> f64 {
        match self {
            Ratio::Finite(r) => r,
            Ratio::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(r) => Some(r),
            Ratio::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Ratio::Infinite)
    }

    pub fn class(self) -> RatioClass {
        classify_ratio(self)
    }

    /// Fraction of all studies that stay unpublished, `r / (r + 1)`.
    pub fn unpublished_fraction(self) -> f64 {
        match self {
            Ratio::Finite(r) => r / (r + 1.0),
            Ratio::Infinite => 1.0,
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) => fmt::Display::fmt(r, f),
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RatioClass {
    NotLarge,
    Large,
    VeryLarge,
}

impl RatioClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RatioClass::NotLarge => "not-large",
            RatioClass::Large => "large",
            RatioClass::VeryLarge => "very-large",
        }
    }
}

impl fmt::Display for RatioClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both thresholds are strict: `r = 50` is not large, `r = 100` is large.
pub fn classify_ratio(r: Ratio) -> RatioClass {
    match r {
        Ratio::Infinite => RatioClass::VeryLarge,
        Ratio::Finite(r) if r > VERY_LARGE_RATIO => RatioClass::VeryLarge,
        Ratio::Finite(r) if r > LARGE_RATIO => RatioClass::Large,
        Ratio::Finite(_) => RatioClass::NotLarge,
    }
}

/// `r / (r + 1)`, the share of studies left unpublished at ratio `r`.
///
/// `r = +inf` maps to 1.
pub fn unpublished_fraction(r: f64) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::OutOfRange {
            name: "r",
            range: "[0, inf)",
            value: r,
        });
    }
    if r.is_infinite() {
        return Ok(1.0);
    }
    Ok(r / (r + 1.0))
}

/// Publication probability together with the derived ratio and its class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublicationStats {
    pub p: f64,
    pub r: Ratio,
    pub label: RatioClass,
}

impl PublicationStats {
    pub fn from_publication_probability(p: f64) -> Self {
        let r = Ratio::from_publication_probability(p);
        PublicationStats {
            p,
            r,
            label: classify_ratio(r),
        }
    }
}

/// Step selection: publish with probability 1 above the threshold (mass
/// `alpha`) and with probability `beta` below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSelectionModel {
    alpha: f64,
    beta: f64,
}

impl StepSelectionModel {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Ok(StepSelectionModel {
            alpha: check_probability("alpha", alpha)?,
            beta: check_probability("beta", beta)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(1 - alpha)(1 - beta)`: below threshold and then rejected.
    pub fn rejection_probability(&self) -> f64 {
        (1.0 - self.alpha) * (1.0 - self.beta)
    }

    /// `p = 1 - (1 - alpha)(1 - beta)`.
    pub fn publication_probability(&self) -> f64 {
        1.0 - self.rejection_probability()
    }

    pub fn stats(&self) -> PublicationStats {
        PublicationStats::from_publication_probability(self.publication_probability())
    }

    pub fn ratio(&self) -> Ratio {
        self.stats().r
    }
}

fn check_contour_inputs(r0: f64, fixed_name: &'static str, fixed: f64) -> Result<()> {
    if r0.is_nan() || r0 < 0.0 || r0.is_infinite() {
        return Err(Error::OutOfRange {
            name: "r0",
            range: "[0, inf)",
            value: r0,
        });
    }
    if !(0.0..1.0).contains(&fixed) {
        return Err(Error::OutOfRange {
            name: fixed_name,
            range: "[0, 1)",
            value: fixed,
        });
    }
    Ok(())
}

fn solve_contour(r0: f64, fixed_name: &'static str, fixed: f64) -> Result<f64> {
    check_contour_inputs(r0, fixed_name, fixed)?;
    let rejected = r0 / (r0 + 1.0);
    let solved = 1.0 - rejected / (1.0 - fixed);
    if !(0.0..=1.0).contains(&solved) {
        return Err(Error::OffContour {
            r0,
            fixed: fixed_name,
            at: fixed,
            solved,
        });
    }
    Ok(solved)
}

/// The `beta` on the contour `r = r0` at the given `alpha`.
///
/// Solves `(1 - beta)(1 - alpha) = r0 / (r0 + 1)`. No clamping: a solution
/// outside `[0, 1]` is an [`Error::OffContour`].
pub fn contour_beta(r0: f64, alpha: f64) -> Result<f64> {
    solve_contour(r0, "alpha", alpha)
}

/// Mirror of [`contour_beta`] with the roles of `alpha` and `beta` swapped.
pub fn contour_alpha(r0: f64, beta: f64) -> Result<f64> {
    solve_contour(r0, "beta", beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(alpha: f64, beta: f64) -> StepSelectionModel {
        StepSelectionModel::new(alpha, beta).unwrap()
    }

    fn r(alpha: f64, beta: f64) -> f64 {
        step(alpha, beta).ratio().finite().unwrap()
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(StepSelectionModel::new(-0.01, 0.5).is_err());
        assert!(StepSelectionModel::new(0.5, 1.01).is_err());
        assert!(StepSelectionModel::new(f64::NAN, 0.5).is_err());
        assert!(StepSelectionModel::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn publication_probability_examples() {
        assert!((step(0.05, 0.0).publication_probability() - 0.05).abs() < 1e-15);
        assert_eq!(step(1.0, 0.3).publication_probability(), 1.0);
        // r = 9.26 in the published grid at this cell.
        assert!((step(0.05, 0.05).publication_probability() - 0.0975).abs() < 1e-15);
    }

    #[test]
    fn ratio_examples() {
        assert!((r(0.01, 0.01) - 49.25).abs() < 0.005);
        assert!((r(0.10, 0.10) - 4.26).abs() < 0.005);
        assert!((r(0.50, 0.45) - 0.38).abs() < 0.005);
        assert_eq!(r(1.0, 0.7), 0.0);
        assert_eq!(r(1.0, 0.0), 0.0);
    }

    #[test]
    fn zero_publication_is_infinite_not_an_error() {
        let stats = step(0.0, 0.0).stats();
        assert_eq!(stats.p, 0.0);
        assert!(stats.r.is_infinite());
        assert_eq!(stats.label, RatioClass::VeryLarge);
        assert_eq!(stats.r.unpublished_fraction(), 1.0);
    }

    #[test]
    fn unpublished_fraction_examples() {
        assert_eq!(unpublished_fraction(0.0).unwrap(), 0.0);
        assert_eq!(unpublished_fraction(1.0).unwrap(), 0.5);
        assert_eq!(unpublished_fraction(19.0).unwrap(), 0.95);
        // all-nulls-true corner: 1 - p = .95 at alpha = .05, beta = 0
        assert!((unpublished_fraction(r(0.05, 0.0)).unwrap() - 0.95).abs() < 1e-12);
        assert!(unpublished_fraction(-1.0).is_err());
        assert!(unpublished_fraction(f64::NAN).is_err());
    }

    #[test]
    fn contour_examples() {
        assert_eq!(contour_beta(19.0, 0.05).unwrap(), 0.0);
        let b = contour_beta(1.0, 0.05).unwrap();
        assert!((b - (1.0 - 0.5 / 0.95)).abs() < 1e-15);
        assert!((b - 0.47368).abs() < 1e-5);
        assert!((r(0.05, b) - 1.0).abs() < 1e-10);
        assert!(matches!(
            contour_beta(189.0, 0.05),
            Err(Error::OffContour { .. })
        ));
    }

    #[test]
    fn contour_alpha_mirrors_contour_beta() {
        for &r0 in &[0.5, 1.0, 2.0, 5.0] {
            for i in 0..20 {
                let x = i as f64 / 20.0;
                assert_eq!(contour_alpha(r0, x).ok(), contour_beta(r0, x).ok());
            }
        }
    }

    #[test]
    fn contour_rejects_bad_inputs() {
        assert!(contour_beta(-1.0, 0.5).is_err());
        assert!(contour_beta(1.0, 1.0).is_err());
        assert!(contour_beta(f64::INFINITY, 0.5).is_err());
    }

    #[test]
    fn classification_thresholds_are_strict() {
        let c = |x| classify_ratio(Ratio::Finite(x));
        assert_eq!(c(49.25), RatioClass::NotLarge);
        assert_eq!(c(50.0), RatioClass::NotLarge);
        assert_eq!(c(50.000001), RatioClass::Large);
        assert_eq!(c(100.0), RatioClass::Large);
        assert_eq!(c(189.0), RatioClass::VeryLarge);
        assert_eq!(classify_ratio(Ratio::Infinite), RatioClass::VeryLarge);
    }

    #[test]
    fn infinite_ratio_orders_above_everything() {
        assert!(Ratio::Infinite > Ratio::Finite(1e300));
        assert!(Ratio::Finite(2.0) > Ratio::Finite(1.0));
    }

    #[test]
    fn grid_monotone_in_both_parameters() {
        const N: usize = 50;
        let grid: Vec<f64> = (0..N).map(|i| i as f64 / N as f64).collect();
        for &a in &grid {
            for w in grid.windows(2) {
                assert!(step(a, w[0]).ratio() > step(a, w[1]).ratio(), "beta at alpha={a}");
                assert!(step(w[0], a).ratio() > step(w[1], a).ratio(), "alpha at beta={a}");
            }
        }
    }

    #[test]
    fn grid_identities() {
        const N: usize = 50;
        for i in 0..=N {
            for j in 0..=N {
                let (a, b) = (i as f64 / N as f64, j as f64 / N as f64);
                let m = step(a, b);
                let p = m.publication_probability();
                assert!((p + (1.0 - a) * (1.0 - b) - 1.0).abs() <= 1e-15);
                assert!((0.0..=1.0).contains(&p));
                if p > 0.0 {
                    let stats = m.stats();
                    let r = stats.r.finite().unwrap();
                    assert_eq!(r, (1.0 - p) / p);
                    assert!((unpublished_fraction(r).unwrap() - (1.0 - p)).abs() <= 1e-12);
                }
                assert_eq!(m.ratio(), step(b, a).ratio());
            }
        }
    }

    #[test]
    fn contour_round_trip() {
        for &r0 in &[0.5, 1.0, 2.0, 5.0, 19.0, 49.25] {
            let mut hits = 0;
            for i in 0..1000 {
                let a = i as f64 / 1000.0;
                if let Ok(b) = contour_beta(r0, a) {
                    hits += 1;
                    assert!((r(a, b) - r0).abs() <= 1e-10, "r0={r0} alpha={a}");
                }
            }
            assert!(hits > 0);
        }
    }
}
