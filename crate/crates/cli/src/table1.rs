//! The grid of `r` over selected significance levels and step sizes.

use pubbias_core::{Ratio, StepSelectionModel};

use crate::format::table_number;

/// Row parameters. The spacing is uneven on purpose: fine steps up to .05,
/// then steps of .05.
pub const ALPHAS: [f64; 14] = [
    0.01, 0.02, 0.03, 0.04, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
];

/// Column parameters.
pub const BETAS: [f64; 10] = [0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45];

/// Decimal places used by the table.
pub const TABLE_PLACES: usize = 2;

/// `cells()[i][j]` is `r` at `(ALPHAS[i], BETAS[j])`.
pub fn cells() -> Vec<Vec<Ratio>> {
    ALPHAS
        .iter()
        .map(|&a| {
            BETAS
                .iter()
                .map(|&b| StepSelectionModel::new(a, b).expect("grid is in range").ratio())
                .collect()
        })
        .collect()
}

fn num(x: f64) -> String {
    table_number(x, TABLE_PLACES)
}

/// CSV rendering. Two header rows carry `beta` and `1 - beta`, a third names
/// the row-label columns; every row has `2 + BETAS.len()` fields.
pub fn render_csv() -> String {
    let width = 2 + BETAS.len();
    let mut out = String::new();
    let header = |name: &str, values: Vec<String>| {
        let mut row = vec![name.to_string(), String::new()];
        row.extend(values);
        row.join(",") + "\n"
    };
    out += &header("beta", BETAS.iter().map(|&b| num(b)).collect());
    out += &header("1-beta", BETAS.iter().map(|&b| num(1.0 - b)).collect());
    let mut labels = vec!["alpha".to_string(), "1-alpha".to_string()];
    labels.resize(width, String::new());
    out += &(labels.join(",") + "\n");

    for (&a, row) in ALPHAS.iter().zip(cells()) {
        let mut fields = vec![num(a), num(1.0 - a)];
        fields.extend(row.into_iter().map(|r| num(r.value())));
        out += &(fields.join(",") + "\n");
    }
    out
}
