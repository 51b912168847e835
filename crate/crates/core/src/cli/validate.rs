//! Convergence of the scheme against the closed-form price in the
//! equal-weights case, measured in the weighted `‖·‖_{2,∞}` norm.

use serde::Serialize;

use crate::analytics;
use crate::error::{Error, Result};
use crate::operator::{MarketParams, OptionKind};
use crate::scheme::{self, SchemeConfig, StepCount};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: u32,
    pub steps: usize,
    pub error: f64,
    /// `error(m) / error(m_prev)` for the previous row of the table.
    pub ratio: Option<f64>,
}

/// Closed-form price extended to `S = 0` by its limit.
pub fn oracle_price(spot: f64, params: &MarketParams, tau: f64) -> Result<f64> {
    if spot <= 0.0 {
        return Ok(match params.kind {
            OptionKind::Call => 0.0,
            OptionKind::Put => params.strike * (-params.rate * tau).exp(),
        });
    }
    analytics::bs_closed_form(spot, params, tau)
}

/// Weighted-norm distance between the solved surface and the closed form,
/// one row per level in `levels` (each solved with `N = auto`).
pub fn convergence_table(base: &SchemeConfig, levels: &[u32]) -> Result<Vec<ConvergenceRow>> {
    if !base.weights.is_equal() {
        return Err(Error::domain(format!(
            "convergence check needs mu1 = 0.5 (the only case with a closed form), got {}",
            base.weights.mu1()
        )));
    }
    if levels.is_empty() {
        return Err(Error::domain("m_list is empty"));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
    for &level in levels {
        let mut config = *base;
        config.level = level;
        config.steps = StepCount::Auto;
        let surface = scheme::solve(&config)?;
        let grid = surface.grid();
        let params = config.params;
        let mut diffs = Vec::with_capacity(surface.row_indices().len());
        for (n, row) in surface.rows() {
            let tau = surface.tau(n);
            let diff = grid
                .iter()
                .zip(row)
                .map(|(&x, &c)| oracle_price(x, &params, tau).map(|o| c - o))
                .collect::<Result<Vec<_>>>()?;
            diffs.push(diff);
        }
        let error = scheme::weighted_norm_of(level, config.weights, diffs.iter().map(Vec::as_slice))?;
        let ratio = rows.last().map(|prev| error / prev.error);
        rows.push(ConvergenceRow {
            level,
            steps: surface.steps(),
            error,
            ratio,
        });
    }
    Ok(rows)
}
