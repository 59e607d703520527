//! Piecewise-constant selection functions over an `m`-interval partition.
//!
//! Only the interval masses `A_k` and the per-interval publication
//! probabilities `B_k` enter `p = sum A_k B_k`; where the breakpoints sit on
//! the z-line is the concern of [`crate::gaussian`].

use crate::error::{Error, Result};
use crate::model::{check_probability, PublicationStats, StepSelectionModel};
use crate::numeric::compensated_sum;

/// Allowed deviation of `sum A_k` from 1.
pub const MASS_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSelectionModel {
    masses: Vec<f64>,
    probs: Vec<f64>,
}

impl PiecewiseSelectionModel {
    /// `masses[k]` is the probability of landing in interval `k`,
    /// `probs[k]` the chance a study from that interval is published.
    ///
    /// `probs` need not be monotone.
    pub fn new(masses: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if masses.len() != probs.len() {
            return Err(Error::LengthMismatch {
                masses: masses.len(),
                probs: probs.len(),
            });
        }
        if masses.is_empty() {
            return Err(Error::EmptyPartition);
        }
        for &a in &masses {
            check_probability("interval mass", a)?;
        }
        for &b in &probs {
            check_probability("publication probability", b)?;
        }
        let sum = compensated_sum(masses.iter().copied());
        if (sum - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(Error::MassSum { sum });
        }
        Ok(PiecewiseSelectionModel { masses, probs })
    }

    /// Discrete approximation of the unit-square diagonal:
    /// `A_k = 1/m`, `B_k = k/m`.
    pub fn diagonal(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyPartition);
        }
        let mf = m as f64;
        let masses = vec![1.0 / mf; m];
        let probs = (1..=m).map(|k| k as f64 / mf).collect();
        Self::new(masses, probs)
    }

    /// The two-interval form of a step model: `A = [1 - alpha, alpha]`,
    /// `B = [beta, 1]`.
    pub fn from_step(model: &StepSelectionModel) -> Self {
        PiecewiseSelectionModel {
            masses: vec![1.0 - model.alpha(), model.alpha()],
            probs: vec![model.beta(), 1.0],
        }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// `p = sum_k A_k B_k`.
    pub fn publication_probability(&self) -> f64 {
        let p = compensated_sum(self.masses.iter().zip(&self.probs).map(|(a, b)| a * b));
        // masses may sum to 1 +- 1e-9
        p.clamp(0.0, 1.0)
    }

    pub fn stats(&self) -> PublicationStats {
        PublicationStats::from_publication_probability(self.publication_probability())
    }
}

/// `(m - 1) / (m + 1)`, the diagonal family's ratio in closed form.
pub fn diagonal_ratio_closed_form(m: usize) -> f64 {
    assert!(m >= 1, "diagonal family needs m >= 1");
    let m = m as f64;
    (m - 1.0) / (m + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pw(a: &[f64], b: &[f64]) -> PiecewiseSelectionModel {
        PiecewiseSelectionModel::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn j_shaped_example() {
        let m = pw(&[0.6, 0.3, 0.1], &[0.2, 0.4, 0.9]);
        let s = m.stats();
        assert!((s.p - 0.33).abs() < 1e-15);
        // printed as "2"; (1 - .33)/.33 = 2.0303...
        assert!((s.r.finite().unwrap() - 2.0303).abs() < 1e-4);
    }

    #[test]
    fn degenerate_probabilities() {
        assert_eq!(pw(&[0.6, 0.3, 0.1], &[1.0; 3]).publication_probability(), 1.0);
        assert!(pw(&[0.6, 0.3, 0.1], &[0.0; 3]).stats().r.is_infinite());
        assert_eq!(pw(&[0.5, 0.5], &[0.0, 1.0]).stats().r.finite(), Some(1.0));
    }

    #[test]
    fn validation() {
        assert_eq!(
            PiecewiseSelectionModel::new(vec![0.5, 0.5], vec![0.1]),
            Err(Error::LengthMismatch { masses: 2, probs: 1 })
        );
        assert_eq!(
            PiecewiseSelectionModel::new(vec![], vec![]),
            Err(Error::EmptyPartition)
        );
        assert!(matches!(
            PiecewiseSelectionModel::new(vec![0.5, 0.4], vec![0.1, 0.2]),
            Err(Error::MassSum { .. })
        ));
        assert!(PiecewiseSelectionModel::new(vec![1.2, -0.2], vec![0.1, 0.2]).is_err());
        assert!(PiecewiseSelectionModel::new(vec![0.5, 0.5], vec![0.1, 1.5]).is_err());
        // within tolerance
        assert!(PiecewiseSelectionModel::new(vec![0.5, 0.5 + 5e-10], vec![0.1, 0.2]).is_ok());
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(PiecewiseSelectionModel::diagonal(0), Err(Error::EmptyPartition));
        let d1 = PiecewiseSelectionModel::diagonal(1).unwrap();
        assert_eq!((d1.masses(), d1.probs()), (&[1.0][..], &[1.0][..]));
        let d2 = PiecewiseSelectionModel::diagonal(2).unwrap();
        assert_eq!((d2.masses(), d2.probs()), (&[0.5, 0.5][..], &[0.5, 1.0][..]));
        let d3 = PiecewiseSelectionModel::diagonal(3).unwrap();
        assert_eq!(d3.masses(), &[1.0 / 3.0; 3]);
        assert_eq!(d3.probs(), &[1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert!((d3.publication_probability() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_closed_form_examples() {
        assert_eq!(diagonal_ratio_closed_form(1), 0.0);
        assert_eq!(diagonal_ratio_closed_form(3), 0.5);
        let r = diagonal_ratio_closed_form(200_000);
        assert!(r >= 0.99999 && (1.0 - r) < 1e-5);
    }

    #[test]
    fn diagonal_matches_closed_form() {
        for m in (1..=100).chain([1_000, 1_000_000]) {
            let r = PiecewiseSelectionModel::diagonal(m).unwrap().stats().r;
            let r = r.finite().unwrap();
            assert!((r - diagonal_ratio_closed_form(m)).abs() <= 1e-12, "m={m}");
        }
    }

    #[test]
    fn step_reduction_examples() {
        let s = StepSelectionModel::new(0.05, 0.05).unwrap();
        let p = PiecewiseSelectionModel::from_step(&s);
        assert_eq!(p.masses(), &[0.95, 0.05]);
        assert_eq!(p.probs(), &[0.05, 1.0]);
        assert!((p.publication_probability() - 0.0975).abs() < 1e-15);

        let p = PiecewiseSelectionModel::from_step(&StepSelectionModel::new(0.0, 1.0).unwrap());
        assert_eq!((p.masses(), p.probs()), (&[1.0, 0.0][..], &[1.0, 1.0][..]));
        assert_eq!(p.publication_probability(), 1.0);

        let p = PiecewiseSelectionModel::from_step(&StepSelectionModel::new(0.5, 0.0).unwrap());
        assert_eq!(p.publication_probability(), 0.5);
    }

    #[test]
    fn third_parameter_variant_via_two_intervals() {
        // upper tail published with probability .8 instead of 1
        let m = pw(&[0.95, 0.05], &[0.05, 0.8]);
        assert!((m.publication_probability() - (0.95 * 0.05 + 0.05 * 0.8)).abs() < 1e-15);
    }

    fn model_strategy() -> impl Strategy<Value = PiecewiseSelectionModel> {
        prop::collection::vec((0.001f64..1.0, 0.0f64..=1.0), 1..12).prop_map(|cells| {
            let total: f64 = cells.iter().map(|c| c.0).sum();
            let masses = cells.iter().map(|c| c.0 / total).collect();
            let probs = cells.iter().map(|c| c.1).collect();
            PiecewiseSelectionModel::new(masses, probs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn step_and_two_interval_forms_agree(alpha in 0.0f64..=1.0, beta in 0.0f64..=1.0) {
            let s = StepSelectionModel::new(alpha, beta).unwrap();
            let p = PiecewiseSelectionModel::from_step(&s);
            prop_assert!((p.publication_probability() - s.publication_probability()).abs() <= 1e-15);
            match (p.stats().r, s.stats().r) {
                (crate::Ratio::Finite(a), crate::Ratio::Finite(b)) => prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0)),
                (a, b) => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn p_is_a_convex_combination(m in model_strategy()) {
            let p = m.publication_probability();
            let lo = m.probs().iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = m.probs().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(p >= lo - 1e-12 && p <= hi + 1e-12);
        }

        #[test]
        fn refining_an_interval_keeps_p(m in model_strategy(), pick in any::<prop::sample::Index>(), split in 0.0f64..=1.0) {
            let k = pick.index(m.len());
            let mut masses = m.masses().to_vec();
            let mut probs = m.probs().to_vec();
            let a = masses[k];
            masses[k] = a * split;
            masses.insert(k + 1, a - a * split);
            probs.insert(k + 1, probs[k]);
            let refined = PiecewiseSelectionModel::new(masses, probs).unwrap();
            prop_assert!((refined.publication_probability() - m.publication_probability()).abs() <= 1e-12);
        }
    }
}
