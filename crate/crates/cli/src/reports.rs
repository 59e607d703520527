//! Key/value and row-oriented CSV reports.

use pubbias_core::failsafe::{darlington_total, model_unpublished, FsnReport};
use pubbias_core::simulate::SimulationOutcome;
use pubbias_core::{PublicationStats, Ratio, StepSelectionModel};

use crate::error::CliError;
use crate::format::round_half_away;

/// Column order of simulation rows.
pub const SIMULATION_HEADER: &str = "n,seed,published,unpublished,p_hat,r_hat,se_p";

fn ratio_text(r: Ratio, precision: usize) -> String {
    match r {
        Ratio::Finite(x) => round_half_away(x, precision),
        Ratio::Infinite => "inf".into(),
    }
}

fn key_values(rows: &[(&str, String)]) -> String {
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        out += &format!("{k},{v}\n");
    }
    out
}

pub fn stats_report(stats: &PublicationStats, precision: usize) -> String {
    key_values(&[
        ("p", round_half_away(stats.p, precision)),
        ("r", ratio_text(stats.r, precision)),
        ("class", stats.label.to_string()),
    ])
}

/// The fail-safe number next to the all-nulls-true total and the
/// selection-model estimate for the same published count.
pub fn fsn_report(
    fsn: &FsnReport,
    model: &StepSelectionModel,
    precision: usize,
) -> Result<String, CliError> {
    let f = |x: f64| round_half_away(x, precision);
    let total = darlington_total(fsn.k, model.alpha())?;
    let estimate = model_unpublished(fsn.k, model)?;
    let stats = model.stats();
    Ok(key_values(&[
        ("k", fsn.k.to_string()),
        ("sum_z", f(fsn.sum_z)),
        ("stouffer_z", f(fsn.stouffer_z)),
        ("z_crit", f(fsn.z_crit)),
        ("fsn", f(fsn.fsn)),
        ("fsn_floor", fsn.fsn_floor.to_string()),
        ("fsn_implied_r", ratio_text(fsn.implied_r, precision)),
        ("fsn_implied_class", fsn.implied_label.to_string()),
        ("darlington_alpha", f(model.alpha())),
        ("darlington_total", f(total)),
        ("darlington_unpublished", f(total - fsn.k as f64)),
        ("model_alpha", f(model.alpha())),
        ("model_beta", f(model.beta())),
        ("model_r", ratio_text(stats.r, precision)),
        ("model_class", stats.label.to_string()),
        ("model_unpublished", f(estimate.unpublished())),
        ("model_total", f(estimate.total())),
    ]))
}

pub fn simulation_row(o: &SimulationOutcome, precision: usize) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        o.n,
        o.seed,
        o.published,
        o.unpublished,
        round_half_away(o.p_hat, precision),
        ratio_text(o.r_hat, precision),
        round_half_away(o.se_p, precision)
    )
}

pub fn simulation_csv(outcomes: &[SimulationOutcome], precision: usize) -> String {
    let mut out = String::from(SIMULATION_HEADER);
    out.push('\n');
    for o in outcomes {
        out += &simulation_row(o, precision);
        out.push('\n');
    }
    out
}
