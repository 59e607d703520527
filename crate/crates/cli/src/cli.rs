//! Argument parsing and subcommand dispatch.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pubbias_core::failsafe::{fail_safe_number, DEFAULT_Z_CRIT};
use pubbias_core::gaussian::{breakpoints_for_masses, discretize_density};
use pubbias_core::simulate::{convergence_sweep, run_simulation};
use pubbias_core::{
    DensitySpec, PiecewiseSelectionModel, Selection, SimulationConfig, StepSelectionModel,
    StudySet, TailConvention,
};

use crate::error::CliError;
use crate::figures::{
    default_contour_grid, fig2_csv, fig2_curves, fig3_csv, fig3_curves, DEFAULT_FIG2_ALPHAS,
    DEFAULT_FIG2_POINTS, DEFAULT_FIG3_RATIOS,
};
use crate::reports::{fsn_report, simulation_csv, stats_report};
use crate::svg::{self, PlotSpec};
use crate::table1;

#[derive(Debug, Parser)]
#[command(
    name = "pubbias",
    version,
    about = "Publication-bias selection models: ratio tables, contour data, fail-safe audits and simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grid of r over the standard alpha and beta values (2 decimals)
    Table1(Table1Args),
    /// ln r against beta for a few alpha values
    Fig2(Fig2Args),
    /// Contours r = r0 in the (alpha, beta) square
    Fig3(Fig3Args),
    /// Fail-safe number, all-nulls-true total and model estimate for a z-score file
    Fsn(FsnArgs),
    /// Monte Carlo estimate of the publication probability
    Simulate(SimulateArgs),
    /// p, r and its class for one selection model
    Ratio(RatioArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tails {
    One,
    Two,
}

impl From<Tails> for TailConvention {
    fn from(t: Tails) -> Self {
        match t {
            Tails::One => TailConvention::OneSidedUpper,
            Tails::Two => TailConvention::TwoSided,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal places in CSV output
    #[arg(long, default_value_t = 4)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    /// Comma-separated alpha values, one curve each
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_FIG2_ALPHAS)]
    pub alpha: Vec<f64>,
    /// Number of interior beta grid points
    #[arg(long, default_value_t = DEFAULT_FIG2_POINTS)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Fig3Args {
    /// Comma-separated contour levels
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_FIG3_RATIOS)]
    pub r: Vec<f64>,
    /// Comma-separated alpha grid (default 0, .01, ..., .99)
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FsnArgs {
    /// File with one z-score per line; '#' comments and blank lines are skipped
    #[arg(long)]
    pub z_file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_Z_CRIT)]
    pub z_crit: f64,
    /// Significance level for the all-nulls-true total and the step model
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Step size of the comparison model
    #[arg(long, default_value_t = 0.05)]
    pub beta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Step model: tail mass above the threshold [default: 0.05]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Step model: publication probability below the threshold [default: 0.05]
    #[arg(long)]
    pub beta: Option<f64>,
    /// Piecewise model: comma-separated interval masses
    #[arg(long, value_delimiter = ',')]
    pub masses: Vec<f64>,
    /// Piecewise model: comma-separated publication probabilities
    #[arg(long, value_delimiter = ',')]
    pub probs: Vec<f64>,
}

impl ModelArgs {
    fn is_piecewise(&self) -> bool {
        !self.masses.is_empty() || !self.probs.is_empty()
    }

    fn step(&self) -> Result<StepSelectionModel, CliError> {
        Ok(StepSelectionModel::new(
            self.alpha.unwrap_or(0.05),
            self.beta.unwrap_or(0.05),
        )?)
    }

    fn check_exclusive(&self) -> Result<(), CliError> {
        if self.alpha.is_some() || self.beta.is_some() {
            return Err(CliError::Usage(
                "--alpha/--beta describe a step model and cannot be combined with --masses/--probs"
                    .into(),
            ));
        }
        if self.probs.is_empty() {
            return Err(CliError::Usage("a piecewise model needs --probs".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Tail convention for locating the step threshold
    #[arg(long, value_enum)]
    pub tails: Option<Tails>,
    /// Piecewise model: comma-separated breakpoints on the z-line
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub breakpoints: Vec<f64>,
    /// Number of studies; several comma-separated sizes run a convergence sweep
    #[arg(long, value_delimiter = ',', default_value = "1000000")]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn csv_only(output: &OutputArgs, command: &str) -> Result<(), CliError> {
    if output.format == Format::Svg {
        return Err(CliError::Usage(format!(
            "--format svg is only available for fig2 and fig3, not {command}"
        )));
    }
    Ok(())
}

fn simulation_selection(args: &SimulateArgs) -> Result<Selection, CliError> {
    let m = &args.model;
    if !m.is_piecewise() {
        if !args.breakpoints.is_empty() {
            return Err(CliError::Usage(
                "--breakpoints needs a piecewise model (--probs)".into(),
            ));
        }
        return Ok(Selection::Step {
            model: m.step()?,
            tails: args.tails.map(Into::into).unwrap_or_default(),
        });
    }
    m.check_exclusive()?;
    if args.tails.is_some() {
        return Err(CliError::Usage("--tails applies to step models only".into()));
    }
    let (masses, breakpoints) = match (m.masses.is_empty(), args.breakpoints.is_empty()) {
        (true, true) => {
            return Err(CliError::Usage(
                "a piecewise model needs --masses, --breakpoints or both".into(),
            ))
        }
        (false, true) => (m.masses.clone(), breakpoints_for_masses(&m.masses)?),
        (true, false) => (
            discretize_density(&DensitySpec::StandardNormal, &args.breakpoints)?,
            args.breakpoints.clone(),
        ),
        (false, false) => (m.masses.clone(), args.breakpoints.clone()),
    };
    Ok(Selection::Piecewise {
        model: PiecewiseSelectionModel::new(masses, m.probs.clone())?,
        breakpoints,
    })
}

fn read_studies(path: &PathBuf) -> Result<StudySet, CliError> {
    let parsed = StudySet::from_path(path)
        .map_err(|e| CliError::File(format!("cannot read {}: {e}", path.display())))?;
    parsed.map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

/// Produces the text a command would print.
pub fn render(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Table1(args) => {
            csv_only(&args.output, "table1")?;
            Ok(table1::render_csv())
        }
        Command::Fig2(args) => {
            let curves = fig2_curves(&args.alpha, args.points)?;
            Ok(match args.output.format {
                Format::Csv => fig2_csv(&curves, args.output.precision),
                Format::Svg => svg::render(
                    &curves,
                    &PlotSpec {
                        title: "ln r against beta",
                        x_label: "beta",
                        y_label: "ln r",
                        x_range: (0.0, 1.0),
                        y_range: None,
                    },
                ),
            })
        }
        Command::Fig3(args) => {
            let grid = if args.alpha.is_empty() {
                default_contour_grid()
            } else {
                args.alpha.clone()
            };
            let curves = fig3_curves(&args.r, &grid)?;
            Ok(match args.output.format {
                Format::Csv => fig3_csv(&curves, args.output.precision),
                Format::Svg => svg::render(
                    &curves,
                    &PlotSpec {
                        title: "Contours of constant r",
                        x_label: "alpha",
                        y_label: "beta",
                        x_range: (0.0, 1.0),
                        y_range: Some((0.0, 1.0)),
                    },
                ),
            })
        }
        Command::Fsn(args) => {
            csv_only(&args.output, "fsn")?;
            let model = StepSelectionModel::new(args.alpha, args.beta)?;
            let studies = read_studies(&args.z_file)?;
            let fsn = fail_safe_number(&studies, args.z_crit)?;
            fsn_report(&fsn, &model, args.output.precision)
        }
        Command::Simulate(args) => {
            csv_only(&args.output, "simulate")?;
            if args.n.is_empty() || args.n.contains(&0) {
                return Err(CliError::Usage("--n values must be at least 1".into()));
            }
            let config = SimulationConfig::new(args.n[0], args.seed, simulation_selection(args)?);
            let outcomes = if args.n.len() == 1 {
                vec![run_simulation(&config)?]
            } else {
                convergence_sweep(&config, &args.n)?
                    .into_iter()
                    .map(|p| p.outcome)
                    .collect()
            };
            Ok(simulation_csv(&outcomes, args.output.precision))
        }
        Command::Ratio(args) => {
            csv_only(&args.output, "ratio")?;
            let stats = if args.model.is_piecewise() {
                args.model.check_exclusive()?;
                PiecewiseSelectionModel::new(args.model.masses.clone(), args.model.probs.clone())?
                    .stats()
            } else {
                args.model.step()?.stats()
            };
            Ok(stats_report(&stats, args.output.precision))
        }
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Table1(a) => &a.output,
        Command::Fig2(a) => &a.output,
        Command::Fig3(a) => &a.output,
        Command::Fsn(a) => &a.output,
        Command::Simulate(a) => &a.output,
        Command::Ratio(a) => &a.output,
    }
}

/// Renders the command and writes it to `--out` or standard output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = render(&cli.command)?;
    match &output_args(&cli.command).out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::File(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
