//! Fail-safe numbers and other "how many studies are hidden?" estimates.
//!
//! Three answers are computed side by side:
//!
//! - the Rosenthal fail-safe number: how many extra studies averaging
//!   `z = 0` would pull the Stouffer combination down to `z_crit`;
//! - the all-nulls-true total `T = k / alpha`, where the `k` published
//!   studies are the fraction `alpha` that came out significant by chance;
//! - the selection-model estimate `k * r` for a given step model.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{classify_ratio, Ratio, RatioClass, StepSelectionModel};
use crate::numeric::compensated_sum;

/// One-sided 5% critical value.
pub const DEFAULT_Z_CRIT: f64 = 1.645;

/// Reported z-scores of the published studies, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySet {
    z_scores: Vec<f64>,
}

impl StudySet {
    pub fn new(z_scores: Vec<f64>) -> Result<Self> {
        if z_scores.is_empty() {
            return Err(Error::EmptyStudySet);
        }
        if let Some(&z) = z_scores.iter().find(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                name: "z-score",
                value: z,
            });
        }
        Ok(StudySet { z_scores })
    }

    /// Parses one z-score per line. Blank lines and lines starting with `#`
    /// are skipped; errors carry the 1-based line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut z_scores = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let z = f64::from_str(line)
                .ok()
                .filter(|z| z.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: i + 1,
                    text: line.to_string(),
                })?;
            z_scores.push(z);
        }
        Self::new(z_scores)
    }

    /// Reads and parses a z-score file. I/O errors are returned separately
    /// from parse errors so callers can tell them apart.
    pub fn from_path(path: impl AsRef<Path>) -> std::io::Result<Result<Self>> {
        let text = fs::read_to_string(path)?;
        Ok(Self::parse(&text))
    }

    pub fn z_scores(&self) -> &[f64] {
        &self.z_scores
    }

    pub fn len(&self) -> usize {
        self.z_scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_scores.is_empty()
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.z_scores.iter().copied())
    }

    /// Stouffer's combined z: `sum(z) / sqrt(k)`.
    pub fn stouffer_z(&self) -> f64 {
        self.sum() / (self.len() as f64).sqrt()
    }
}

impl FromStr for StudySet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsnReport {
    pub k: usize,
    pub sum_z: f64,
    pub stouffer_z: f64,
    pub z_crit: f64,
    pub fsn: f64,
    pub fsn_floor: u64,
    pub implied_r: Ratio,
    pub implied_label: RatioClass,
}

/// Unpublished-per-published ratio implied by a fail-safe number.
pub fn implied_ratio(fsn: f64, k: usize) -> Ratio {
    Ratio::Finite(fsn / k as f64)
}

/// Rosenthal's fail-safe number `X = (sum z)^2 / z_crit^2 - k`, floored at 0.
///
/// `X` solves `sum(z) / sqrt(k + X) = z_crit`. A non-positive sum means the
/// combined result is not significant in the first place, so `X = 0`.
pub fn fail_safe_number(studies: &StudySet, z_crit: f64) -> Result<FsnReport> {
    if z_crit.is_nan() || z_crit <= 0.0 || z_crit.is_infinite() {
        return Err(Error::OutOfRange {
            name: "z_crit",
            range: "(0, inf)",
            value: z_crit,
        });
    }
    let k = studies.len();
    let sum_z = studies.sum();
    let fsn = if sum_z > 0.0 {
        let q = sum_z / z_crit;
        (q * q - k as f64).max(0.0)
    } else {
        0.0
    };
    let implied_r = implied_ratio(fsn, k);
    Ok(FsnReport {
        k,
        sum_z,
        stouffer_z: studies.stouffer_z(),
        z_crit,
        fsn,
        fsn_floor: fsn.floor() as u64,
        implied_r,
        implied_label: classify_ratio(implied_r),
    })
}

/// All-nulls-true total number of studies, `T = k / alpha`.
pub fn darlington_total(k: usize, alpha: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::EmptyStudySet);
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange {
            name: "alpha",
            range: "(0, 1]",
            value: alpha,
        });
    }
    Ok(k as f64 / alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnpublishedEstimate {
    Bounded { unpublished: f64, total: f64 },
    /// The model never publishes anything (`p = 0`).
    Unbounded,
}

impl UnpublishedEstimate {
    pub fn unpublished(&self) -> f64 {
        match self {
            UnpublishedEstimate::Bounded { unpublished, .. } => *unpublished,
            UnpublishedEstimate::Unbounded => f64::INFINITY,
        }
    }

    pub fn total(&self) -> f64 {
        match self {
            UnpublishedEstimate::Bounded { total, .. } => *total,
            UnpublishedEstimate::Unbounded => f64::INFINITY,
        }
    }
}

/// Scales `k` published studies by the model's ratio: `k * r` unpublished,
/// `k * (1 + r) = k / p` in total.
pub fn model_unpublished(k: usize, model: &StepSelectionModel) -> Result<UnpublishedEstimate> {
    if k == 0 {
        return Err(Error::EmptyStudySet);
    }
    let stats = model.stats();
    Ok(match stats.r {
        Ratio::Infinite => UnpublishedEstimate::Unbounded,
        Ratio::Finite(r) => UnpublishedEstimate::Bounded {
            unpublished: k as f64 * r,
            total: k as f64 / stats.p,
        },
    })
}
