//! Seeded Monte Carlo check of the analytic publication probability.
//!
//! Each simulated study draws a score `z` from the density and is then
//! published with probability `S(z)`, the selection function evaluated at
//! that score. Counting publications estimates `p`.
//!
//! # Random streams
//!
//! Studies are processed in blocks of [`BLOCK_SIZE`]. Block `i` draws from
//! a xoshiro256** generator seeded with `seed` through SplitMix64 and then
//! advanced by `i` calls to `jump()` (2^128 steps each), so blocks never
//! overlap and the counts do not depend on how blocks are scheduled across
//! threads. A study consumes two 64-bit outputs: the first becomes the
//! score via the normal quantile, the second decides publication.
//! Uniforms are `((x >> 11) + 0.5) * 2^-53`, which lies strictly inside
//! `(0, 1)`.
//!
//! Sweeps run size `i` (0-based) with seed `seed ^ (SWEEP_SEED_STEP * (i + 1))`
//! in wrapping 64-bit arithmetic.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{
    alpha_to_z0, check_increasing, discretize_density, quantile_unchecked, DensitySpec,
    TailConvention,
};
use crate::model::{Ratio, StepSelectionModel};
use crate::piecewise::PiecewiseSelectionModel;

/// Studies per independent random stream.
pub const BLOCK_SIZE: u64 = 1 << 16;

/// Golden-ratio increment used to derive per-size sweep seeds.
pub const SWEEP_SEED_STEP: u64 = 0x9E37_79B9_7F4A_7C15;

/// Largest allowed gap between a piecewise model's masses and the masses the
/// density assigns to its breakpoints.
pub const MASS_MATCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    /// Step at `z0`, located from `alpha` under the standard normal.
    Step {
        model: StepSelectionModel,
        tails: TailConvention,
    },
    /// Piecewise-constant selection with `m - 1` explicit breakpoints.
    Piecewise {
        model: PiecewiseSelectionModel,
        breakpoints: Vec<f64>,
    },
}

impl Selection {
    pub fn step(alpha: f64, beta: f64, tails: TailConvention) -> Result<Self> {
        Ok(Selection::Step {
            model: StepSelectionModel::new(alpha, beta)?,
            tails,
        })
    }

    /// Analytic publication probability.
    pub fn publication_probability(&self) -> f64 {
        match self {
            Selection::Step { model, .. } => model.publication_probability(),
            Selection::Piecewise { model, .. } => model.publication_probability(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub n_studies: u64,
    pub seed: u64,
    pub selection: Selection,
    pub density: DensitySpec,
}

impl SimulationConfig {
    pub fn new(n_studies: u64, seed: u64, selection: Selection) -> Self {
        SimulationConfig {
            n_studies,
            seed,
            selection,
            density: DensitySpec::StandardNormal,
        }
    }

    pub fn with_density(mut self, density: DensitySpec) -> Self {
        self.density = density;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.compile().map(|_| ())
    }

    fn compile(&self) -> Result<Rule> {
        if self.n_studies == 0 {
            return Err(Error::Config("n_studies must be at least 1".into()));
        }
        match &self.selection {
            Selection::Step { model, tails } => {
                if self.density != DensitySpec::StandardNormal {
                    return Err(Error::Config(
                        "step selection locates z0 under the standard normal; \
                         use a piecewise selection for tabulated densities"
                            .into(),
                    ));
                }
                let z0 = match model.alpha() {
                    0.0 => f64::INFINITY,
                    1.0 => match tails {
                        TailConvention::OneSidedUpper => f64::NEG_INFINITY,
                        TailConvention::TwoSided => 0.0,
                    },
                    a => alpha_to_z0(a, *tails)?,
                };
                Ok(Rule::Step {
                    z0,
                    beta: model.beta(),
                    two_sided: *tails == TailConvention::TwoSided,
                })
            }
            Selection::Piecewise { model, breakpoints } => {
                if breakpoints.len() + 1 != model.len() {
                    return Err(Error::Config(format!(
                        "{} intervals need {} breakpoints, got {}",
                        model.len(),
                        model.len() - 1,
                        breakpoints.len()
                    )));
                }
                check_increasing(breakpoints)?;
                let implied = discretize_density(&self.density, breakpoints)?;
                for (k, (&a, &b)) in model.masses().iter().zip(&implied).enumerate() {
                    if (a - b).abs() > MASS_MATCH_TOLERANCE {
                        return Err(Error::Config(format!(
                            "interval {k} has mass {a} but the density puts {b} there"
                        )));
                    }
                }
                let sampler = match &self.density {
                    DensitySpec::StandardNormal => Sampler::NormalScore,
                    DensitySpec::Tabulated(_) => Sampler::CdfLevels(
                        breakpoints
                            .iter()
                            .map(|&b| self.density.cdf(b))
                            .collect::<Result<_>>()?,
                    ),
                };
                Ok(Rule::Piecewise {
                    breakpoints: breakpoints.clone(),
                    probs: model.probs().to_vec(),
                    sampler,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOutcome {
    pub n: u64,
    pub seed: u64,
    pub published: u64,
    pub unpublished: u64,
    pub p_hat: f64,
    pub r_hat: Ratio,
    pub se_p: f64,
}

impl SimulationOutcome {
    fn from_counts(n: u64, seed: u64, published: u64) -> Self {
        let unpublished = n - published;
        let p_hat = published as f64 / n as f64;
        let r_hat = if published == 0 {
            Ratio::Infinite
        } else {
            Ratio::Finite(unpublished as f64 / published as f64)
        };
        SimulationOutcome {
            n,
            seed,
            published,
            unpublished,
            p_hat,
            r_hat,
            se_p: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        }
    }

    /// Delta-method standard error of `r_hat`: `se_p / p_hat^2`.
    pub fn se_r(&self) -> f64 {
        self.se_p / (self.p_hat * self.p_hat)
    }

    /// `|p_hat - p| / se_p`, or 0 / infinity when `se_p` vanishes.
    pub fn z_distance(&self, p: f64) -> f64 {
        let d = (self.p_hat - p).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.se_p
        }
    }
}

#[derive(Debug, Clone)]
enum Sampler {
    /// Draw `z` by inverting the standard normal CDF.
    NormalScore,
    /// Only the interval matters: compare the uniform with the CDF at each
    /// breakpoint.
    CdfLevels(Vec<f64>),
}

#[derive(Debug, Clone)]
enum Rule {
    Step {
        z0: f64,
        beta: f64,
        two_sided: bool,
    },
    Piecewise {
        breakpoints: Vec<f64>,
        probs: Vec<f64>,
        sampler: Sampler,
    },
}

impl Rule {
    fn acceptance(&self, u: f64) -> f64 {
        match self {
            Rule::Step {
                z0,
                beta,
                two_sided,
            } => {
                let z = quantile_unchecked(u);
                let above = if *two_sided { z.abs() >= *z0 } else { z >= *z0 };
                if above {
                    1.0
                } else {
                    *beta
                }
            }
            Rule::Piecewise {
                breakpoints,
                probs,
                sampler,
            } => {
                let k = match sampler {
                    Sampler::NormalScore => {
                        let z = quantile_unchecked(u);
                        breakpoints.partition_point(|&b| b < z)
                    }
                    Sampler::CdfLevels(levels) => levels.partition_point(|&c| c < u),
                };
                probs[k]
            }
        }
    }
}

fn unit_open(x: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    ((x >> 11) as f64 + 0.5) * SCALE
}

fn count_block(rule: &Rule, rng: &mut Xoshiro256StarStar, n: u64) -> u64 {
    let mut published = 0;
    for _ in 0..n {
        let score = unit_open(rng.next_u64());
        let decide = unit_open(rng.next_u64());
        if decide < rule.acceptance(score) {
            published += 1;
        }
    }
    published
}

/// Simulates `n_studies` studies and counts how many get published.
///
/// Identical configs give identical counts regardless of thread count.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationOutcome> {
    let rule = config.compile()?;
    let n = config.n_studies;
    let blocks = n.div_ceil(BLOCK_SIZE);

    let mut streams = Vec::with_capacity(blocks as usize);
    let mut rng = Xoshiro256StarStar::seed_from_u64(config.seed);
    for _ in 0..blocks {
        streams.push(rng.clone());
        rng.jump();
    }

    let published: u64 = streams
        .into_par_iter()
        .enumerate()
        .map(|(i, mut stream)| {
            let start = i as u64 * BLOCK_SIZE;
            let len = BLOCK_SIZE.min(n - start);
            count_block(&rule, &mut stream, len)
        })
        .sum();

    Ok(SimulationOutcome::from_counts(n, config.seed, published))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub outcome: SimulationOutcome,
    /// `|p_hat - p|` against the analytic probability.
    pub abs_error: f64,
    /// `1 / sqrt(n)`, the expected error scale.
    pub reference: f64,
}

/// Seed used for the `index`-th size of a sweep.
pub fn sweep_seed(seed: u64, index: usize) -> u64 {
    seed ^ SWEEP_SEED_STEP.wrapping_mul(index as u64 + 1)
}

/// Runs the config once per size, each with its own derived seed.
pub fn convergence_sweep(config: &SimulationConfig, sizes: &[u64]) -> Result<Vec<SweepPoint>> {
    if sizes.is_empty() {
        return Err(Error::Config("sweep needs at least one size".into()));
    }
    let p = config.selection.publication_probability();
    sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let run = SimulationConfig {
                n_studies: n,
                seed: sweep_seed(config.seed, i),
                ..config.clone()
            };
            let outcome = run_simulation(&run)?;
            Ok(SweepPoint {
                outcome,
                abs_error: (outcome.p_hat - p).abs(),
                reference: 1.0 / (n as f64).sqrt(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{breakpoints_for_masses, TabulatedCdf};

    fn step_config(alpha: f64, beta: f64, n: u64, seed: u64) -> SimulationConfig {
        SimulationConfig::new(
            n,
            seed,
            Selection::step(alpha, beta, TailConvention::OneSidedUpper).unwrap(),
        )
    }

    fn piecewise_config(masses: &[f64], probs: &[f64], n: u64, seed: u64) -> SimulationConfig {
        let model = PiecewiseSelectionModel::new(masses.to_vec(), probs.to_vec()).unwrap();
        let breakpoints = breakpoints_for_masses(masses).unwrap();
        SimulationConfig::new(n, seed, Selection::Piecewise { model, breakpoints })
    }

    #[test]
    fn certain_publication_leaves_nothing_unpublished() {
        for n in [1, 10, 70_000] {
            let out = run_simulation(&step_config(0.05, 1.0, n, 7)).unwrap();
            assert_eq!(out.unpublished, 0);
            assert_eq!(out.r_hat, Ratio::Finite(0.0));
            assert_eq!(out.p_hat, 1.0);
        }
    }

    #[test]
    fn no_publication_gives_infinite_ratio() {
        let out = run_simulation(&step_config(0.0, 0.0, 1000, 1)).unwrap();
        assert_eq!(out.published, 0);
        assert!(out.r_hat.is_infinite());
    }

    #[test]
    fn counts_are_reproducible() {
        let cfg = step_config(0.05, 0.05, 200_000, 42);
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        assert_eq!(a, b);
        let c = run_simulation(&step_config(0.05, 0.05, 200_000, 43)).unwrap();
        assert_ne!(a.published, c.published);
    }

    #[test]
    fn counts_do_not_depend_on_thread_count() {
        let cfg = piecewise_config(&[0.6, 0.3, 0.1], &[0.2, 0.4, 0.9], 300_000, 9);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| run_simulation(&cfg)).unwrap();
        assert_eq!(single, run_simulation(&cfg).unwrap());
    }

    #[test]
    fn outcome_identities() {
        for n in [1, 2, 65_535, 65_536, 65_537, 100_000] {
            let out = run_simulation(&step_config(0.3, 0.2, n, 5)).unwrap();
            assert_eq!(out.published + out.unpublished, n);
            assert_eq!(out.p_hat, out.published as f64 / n as f64);
        }
    }

    #[test]
    fn step_estimate_matches_analytic() {
        let out = run_simulation(&step_config(0.05, 0.05, 1_000_000, 42)).unwrap();
        assert!(out.z_distance(0.0975) <= 3.0, "{out:?}");
        let r = out.r_hat.value();
        assert!((r - 9.2564).abs() <= 3.0 * out.se_r());
    }

    #[test]
    fn two_sided_step_matches_same_total_mass() {
        let cfg = SimulationConfig::new(
            1_000_000,
            11,
            Selection::step(0.05, 0.05, TailConvention::TwoSided).unwrap(),
        );
        let out = run_simulation(&cfg).unwrap();
        assert!(out.z_distance(0.0975) <= 4.0, "{out:?}");
    }

    #[test]
    fn piecewise_estimate_matches_analytic() {
        let cfg = piecewise_config(&[0.6, 0.3, 0.1], &[0.2, 0.4, 0.9], 1_000_000, 3);
        let out = run_simulation(&cfg).unwrap();
        assert!(out.z_distance(0.33) <= 3.0, "{out:?}");
    }

    #[test]
    fn tabulated_density_sampling() {
        let bps = vec![-0.5, 1.0];
        let cdf = TabulatedCdf::new(bps.clone(), vec![0.6, 0.9]).unwrap();
        let model =
            PiecewiseSelectionModel::new(vec![0.6, 0.3, 0.1], vec![0.2, 0.4, 0.9]).unwrap();
        let cfg = SimulationConfig::new(
            1_000_000,
            8,
            Selection::Piecewise {
                model,
                breakpoints: bps,
            },
        )
        .with_density(DensitySpec::Tabulated(cdf));
        let out = run_simulation(&cfg).unwrap();
        assert!(out.z_distance(0.33) <= 3.0, "{out:?}");
    }

    #[test]
    fn config_validation() {
        assert!(step_config(0.05, 0.05, 0, 1).validate().is_err());
        let model =
            PiecewiseSelectionModel::new(vec![0.6, 0.3, 0.1], vec![0.2, 0.4, 0.9]).unwrap();
        let wrong_count = SimulationConfig::new(
            10,
            1,
            Selection::Piecewise {
                model: model.clone(),
                breakpoints: vec![0.0],
            },
        );
        assert!(wrong_count.validate().is_err());
        let wrong_masses = SimulationConfig::new(
            10,
            1,
            Selection::Piecewise {
                model,
                breakpoints: vec![0.0, 1.0],
            },
        );
        assert!(matches!(wrong_masses.validate(), Err(Error::Config(_))));
        let tab = TabulatedCdf::new(vec![0.0], vec![0.5]).unwrap();
        let step_tab = step_config(0.5, 0.1, 10, 1).with_density(DensitySpec::Tabulated(tab));
        assert!(step_tab.validate().is_err());
    }

    #[test]
    fn step_edge_alphas() {
        let all = run_simulation(&step_config(1.0, 0.0, 5000, 2)).unwrap();
        assert_eq!(all.published, 5000);
        let two = SimulationConfig::new(
            5000,
            2,
            Selection::step(1.0, 0.0, TailConvention::TwoSided).unwrap(),
        );
        assert_eq!(run_simulation(&two).unwrap().published, 5000);
        let none_above = run_simulation(&step_config(0.0, 0.5, 100_000, 2)).unwrap();
        assert!(none_above.z_distance(0.5) <= 4.0);
    }

    #[test]
    fn sweep_examples() {
        let pts = convergence_sweep(&step_config(0.05, 0.05, 1, 42), &[100, 10_000, 1_000_000])
            .unwrap();
        assert_eq!(pts.len(), 3);
        let last = pts[2].outcome;
        assert!(last.z_distance(0.0975) <= 3.0);
        assert!(pts[2].abs_error < pts[0].reference);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(p.outcome.seed, sweep_seed(42, i));
        }

        let pts = convergence_sweep(&step_config(0.05, 1.0, 1, 42), &[1]).unwrap();
        assert_eq!(pts[0].outcome.p_hat, 1.0);

        let d3 = PiecewiseSelectionModel::diagonal(3).unwrap();
        let bps = breakpoints_for_masses(d3.masses()).unwrap();
        let cfg = SimulationConfig::new(
            1,
            5,
            Selection::Piecewise {
                model: d3,
                breakpoints: bps,
            },
        );
        let pts = convergence_sweep(&cfg, &[100_000]).unwrap();
        assert!(pts[0].outcome.z_distance(2.0 / 3.0) <= 3.0);

        assert!(convergence_sweep(&cfg, &[]).is_err());
    }

    #[test]
    fn sweep_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| sweep_seed(0, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
