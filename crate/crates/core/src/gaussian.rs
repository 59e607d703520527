//! Standard normal CDF and quantile, and the map between a tail mass
//! `alpha` and the threshold `z0` that cuts it off.
//!
//! `erfc` follows the FreeBSD `s_erf.c` rational approximations (Sun
//! Microsystems, 1993, freely redistributable), accurate to about one ulp.
//! The quantile is a safeguarded Newton iteration on the CDF, started from
//! Acklam's rational approximation.

// Coefficients are kept exactly as published.
#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

const ERX: f64 = 8.45062911510467529297e-01;

// erfc on [0, 0.84375]
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;

// [0.84375, 1.25]
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;

// [1.25, 1/0.35]
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;

// [1/0.35, 28]
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let negative = x < 0.0;
    let ax = x.abs();

    if ax < 0.84375 {
        let z = ax * ax;
        let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
        let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
        let y = r / s;
        // erfc(x) = 1 - erf(x) with erf(x) = x + x*y
        return if x < 0.25 {
            1.0 - (x + x * y)
        } else {
            0.5 - (x * y + (x - 0.5))
        };
    }
    if ax < 1.25 {
        let s = ax - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if negative {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if ax >= 28.0 {
        return if negative { 2.0 } else { 0.0 };
    }
    if negative && ax >= 6.0 {
        return 2.0;
    }

    let s = 1.0 / (ax * ax);
    let (r, ss) = if ax < 1.0 / 0.35 {
        (
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
            1.0 + s
                * (SA1 + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
        )
    } else {
        (
            RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
            1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
        )
    };
    // split ax so that exp(-ax^2) keeps full relative precision
    let hi = f64::from_bits(ax.to_bits() & 0xffff_ffff_0000_0000);
    let tail = (-hi * hi - 0.5625).exp() * ((hi - ax) * (hi + ax) + r / ss).exp() / ax;
    if negative {
        2.0 - tail
    } else {
        tail
    }
}

/// Standard normal density.
pub fn standard_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF without input validation; `+-inf` map to 1 and 0.
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal CDF, rejecting non-finite input.
pub fn phi_cdf(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::NonFinite { name: "z", value: z });
    }
    Ok(standard_normal_cdf(z))
}

/// Acklam's rational approximation to the lower-tail quantile, relative
/// error about 1e-9. Only used to seed the Newton iteration.
fn acklam_lower(q: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    if q < 0.02425 {
        let t = (-2.0 * q.ln()).sqrt();
        (((((C[0] * t + C[1]) * t + C[2]) * t + C[3]) * t + C[4]) * t + C[5])
            / ((((D[0] * t + D[1]) * t + D[2]) * t + D[3]) * t + 1.0)
    } else {
        let u = q - 0.5;
        let t = u * u;
        (((((A[0] * t + A[1]) * t + A[2]) * t + A[3]) * t + A[4]) * t + A[5]) * u
            / (((((B[0] * t + B[1]) * t + B[2]) * t + B[3]) * t + B[4]) * t + 1.0)
    }
}

/// Solves `Phi(z) = q` for `0 < q <= 0.5` inside the bracket `[-40, 0]`.
fn lower_quantile(q: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 0.0f64);
    let mut z = acklam_lower(q).clamp(lo, hi);
    for _ in 0..100 {
        let f = standard_normal_cdf(z) - q;
        if f.abs() <= 1e-14 * q {
            break;
        }
        if f < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let newton = z - f / standard_normal_pdf(z);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - z).abs() <= 4.0 * f64::EPSILON * z.abs().max(1.0) {
            z = next;
            break;
        }
        z = next;
    }
    z
}

/// Standard normal quantile for `q` in the open unit interval, without
/// validation. Accurate to 1e-14 relative in probability.
pub(crate) fn quantile_unchecked(q: f64) -> f64 {
    if q <= 0.5 {
        lower_quantile(q)
    } else {
        // 1 - q is exact for q >= 0.5
        -lower_quantile(1.0 - q)
    }
}

/// Inverse of [`standard_normal_cdf`] on `(0, 1)`.
pub fn standard_normal_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::OutOfRange {
            name: "probability",
            range: "(0, 1)",
            value: q,
        });
    }
    Ok(quantile_unchecked(q))
}

/// How a tail mass `alpha` sits relative to the threshold `z0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TailConvention {
    /// All of `alpha` lies above `z0`.
    #[default]
    OneSidedUpper,
    /// `alpha` is split evenly between `z > z0` and `z < -z0`.
    TwoSided,
}

/// Threshold `z0` cutting off tail mass `alpha`.
pub fn alpha_to_z0(alpha: f64, tails: TailConvention) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange {
            name: "alpha",
            range: "(0, 1)",
            value: alpha,
        });
    }
    Ok(match tails {
        TailConvention::OneSidedUpper => -quantile_unchecked(alpha),
        TailConvention::TwoSided => -quantile_unchecked(0.5 * alpha),
    })
}

/// Tail mass beyond `z0`. Two-sided thresholds must be non-negative.
pub fn z0_to_alpha(z0: f64, tails: TailConvention) -> Result<f64> {
    if !z0.is_finite() {
        return Err(Error::NonFinite {
            name: "z0",
            value: z0,
        });
    }
    match tails {
        TailConvention::OneSidedUpper => Ok(standard_normal_cdf(-z0)),
        TailConvention::TwoSided => {
            if z0 < 0.0 {
                return Err(Error::OutOfRange {
                    name: "two-sided z0",
                    range: "[0, inf)",
                    value: z0,
                });
            }
            Ok(2.0 * standard_normal_cdf(-z0))
        }
    }
}

/// A CDF known only at a finite set of points.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    points: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedCdf {
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidCdf(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        check_increasing(&points)?;
        let mut prev = 0.0;
        for (&z, &c) in points.iter().zip(&values) {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::InvalidCdf(format!("value {c} at z = {z} outside [0, 1]")));
            }
            if c < prev {
                return Err(Error::InvalidCdf(format!("decreases to {c} at z = {z}")));
            }
            prev = c;
        }
        Ok(TabulatedCdf { points, values })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn at(&self, z: f64) -> Result<f64> {
        match self.points.iter().position(|&p| p == z) {
            Some(i) => Ok(self.values[i]),
            None => Err(Error::InvalidCdf(format!("no tabulated value at z = {z}"))),
        }
    }
}

/// The score density `g(z)`, either the standard normal or a CDF supplied at
/// the breakpoints of interest.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum DensitySpec {
    #[default]
    StandardNormal,
    Tabulated(TabulatedCdf),
}

impl DensitySpec {
    /// CDF at `z`. Tabulated densities answer only at their own points.
    pub fn cdf(&self, z: f64) -> Result<f64> {
        match self {
            DensitySpec::StandardNormal => phi_cdf(z),
            DensitySpec::Tabulated(t) => t.at(z),
        }
    }
}

pub(crate) fn check_increasing(breakpoints: &[f64]) -> Result<()> {
    for (i, &b) in breakpoints.iter().enumerate() {
        if !b.is_finite() {
            return Err(Error::NonFinite {
                name: "breakpoint",
                value: b,
            });
        }
        if i > 0 && breakpoints[i - 1] >= b {
            return Err(Error::BreakpointOrder {
                index: i,
                prev: breakpoints[i - 1],
                next: b,
            });
        }
    }
    Ok(())
}

/// Masses of the `m` intervals cut by `m - 1` increasing breakpoints, the
/// outer intervals running to `-inf` and `+inf`.
pub fn discretize_density(density: &DensitySpec, breakpoints: &[f64]) -> Result<Vec<f64>> {
    check_increasing(breakpoints)?;
    let mut cdf = Vec::with_capacity(breakpoints.len() + 2);
    cdf.push(0.0);
    for &b in breakpoints {
        cdf.push(density.cdf(b)?);
    }
    cdf.push(1.0);
    Ok(cdf.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Standard normal breakpoints whose intervals carry the given masses.
///
/// Every mass must be positive, or two breakpoints would coincide.
pub fn breakpoints_for_masses(masses: &[f64]) -> Result<Vec<f64>> {
    if masses.is_empty() {
        return Err(Error::EmptyPartition);
    }
    if let Some(&a) = masses.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
        return Err(Error::OutOfRange {
            name: "interval mass",
            range: "(0, 1]",
            value: a,
        });
    }
    let mut cumulative = 0.0;
    let mut breakpoints = Vec::with_capacity(masses.len() - 1);
    for &a in &masses[..masses.len() - 1] {
        cumulative += a;
        breakpoints.push(standard_normal_quantile(cumulative)?);
    }
    check_increasing(&breakpoints)?;
    Ok(breakpoints)
}
