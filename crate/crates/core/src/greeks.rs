//! Sensitivities of the solved price curve at calendar time `t = 0`.
//!
//! Delta, Gamma and Theta are finite differences on the surface itself.
//! Vega and Rho bump the parameter both ways and re-solve on a shared time
//! grid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::{self, PriceSurface, Recording, SchemeConfig, StepCount};

pub const DEFAULT_VOL_BUMP: f64 = 1e-2;
pub const DEFAULT_RATE_BUMP: f64 = 1e-3;

/// Relative volatility bump and absolute rate bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpSizes {
    pub vol: f64,
    pub rate: f64,
}

impl Default for BumpSizes {
    fn default() -> Self {
        BumpSizes {
            vol: DEFAULT_VOL_BUMP,
            rate: DEFAULT_RATE_BUMP,
        }
    }
}

/// Greeks on the interior grid `x_1 … x_{2^m − 1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreeksCurve {
    pub spots: Vec<f64>,
    pub delta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub theta: Vec<f64>,
    pub vega: Option<Vec<f64>>,
    pub rho: Option<Vec<f64>>,
    pub bumps: Option<BumpSizes>,
}

fn recorded_row(surface: &PriceSurface, n: usize) -> Result<&[f64]> {
    surface
        .row(n)
        .ok_or_else(|| Error::domain(format!("time row {n} was not recorded")))
}

/// `(C_{k+1} − C_{k−1}) / 2Δx` on row `n`.
pub fn delta_at(surface: &PriceSurface, n: usize) -> Result<Vec<f64>> {
    let row = recorded_row(surface, n)?;
    let dx = surface.spacing();
    Ok(row.windows(3).map(|w| (w[2] - w[0]) / (2.0 * dx)).collect())
}

/// `(C_{k+1} − 2C_k + C_{k−1}) / Δx²` on row `n`.
pub fn gamma_at(surface: &PriceSurface, n: usize) -> Result<Vec<f64>> {
    let row = recorded_row(surface, n)?;
    let dx = surface.spacing();
    Ok(row.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]) / (dx * dx)).collect())
}

/// `∂C/∂t` in calendar time between rows `n − 1` and `n`.
///
/// Reversed time runs the other way, so this is `(C(n−1) − C(n)) / h`.
pub fn theta_at(surface: &PriceSurface, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("theta needs a preceding time row"));
    }
    let later = recorded_row(surface, n)?;
    let earlier = recorded_row(surface, n - 1)?;
    let h = surface.h();
    let interior = 1..later.len() - 1;
    Ok(earlier[interior.clone()]
        .iter()
        .zip(&later[interior])
        .map(|(a, b)| (a - b) / h)
        .collect())
}

pub fn delta(surface: &PriceSurface) -> Vec<f64> {
    delta_at(surface, surface.steps()).expect("final row is always recorded")
}

pub fn gamma(surface: &PriceSurface) -> Vec<f64> {
    gamma_at(surface, surface.steps()).expect("final row is always recorded")
}

pub fn theta(surface: &PriceSurface) -> Vec<f64> {
    theta_at(surface, surface.steps()).expect("rows N-1 and N are always recorded")
}

/// Solves the two bumped configurations on a common `N` and returns their
/// final interior rows.
fn paired_solves(base: &SchemeConfig, down: SchemeConfig, up: SchemeConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    down.validate()?;
    up.validate()?;
    let mut steps = scheme::cfl_check(&down)?.min_steps.max(scheme::cfl_check(&up)?.min_steps);
    if let StepCount::Fixed(n) = base.steps {
        steps = steps.max(n);
    }
    let down = down.with_steps(StepCount::Fixed(steps));
    let up = up.with_steps(StepCount::Fixed(steps));
    let only_ends = Recording::Stride(steps);
    let (lo, hi) = std::thread::scope(|s| {
        let lo = s.spawn(move || scheme::solve_recorded(&down, only_ends));
        let hi = s.spawn(move || scheme::solve_recorded(&up, only_ends));
        (lo.join().expect("solver thread panicked"), hi.join().expect("solver thread panicked"))
    });
    let interior = |surface: PriceSurface| {
        let row = surface.final_row();
        row[1..row.len() - 1].to_vec()
    };
    Ok((interior(lo?), interior(hi?)))
}

/// `∂C/∂σ` by a central relative bump `σ(1 ± bump)`.
pub fn vega(config: &SchemeConfig, bump: f64) -> Result<Vec<f64>> {
    let sigma = config.params.sigma;
    if !(sigma > 0.0) {
        return Err(Error::domain("vega needs sigma > 0: a relative bump of zero volatility is degenerate"));
    }
    if !(bump > 0.0 && bump < 1.0) {
        return Err(Error::domain(format!("relative volatility bump must lie in (0, 1), got {bump}")));
    }
    let mut down = *config;
    down.params.sigma = sigma * (1.0 - bump);
    let mut up = *config;
    up.params.sigma = sigma * (1.0 + bump);
    let (lo, hi) = paired_solves(config, down, up)?;
    let width = 2.0 * sigma * bump;
    Ok(lo.iter().zip(&hi).map(|(a, b)| (b - a) / width).collect())
}

/// `∂C/∂r` by a central absolute bump `r ± bump`.
pub fn rho(config: &SchemeConfig, bump: f64) -> Result<Vec<f64>> {
    if !(bump > 0.0 && bump.is_finite()) {
        return Err(Error::domain(format!("rate bump must be > 0, got {bump}")));
    }
    let rate = config.params.rate;
    if rate - bump < 0.0 {
        return Err(Error::domain(format!("rate bump {bump} would push r = {rate} below zero")));
    }
    let mut down = *config;
    down.params.rate = rate - bump;
    let mut up = *config;
    up.params.rate = rate + bump;
    let (lo, hi) = paired_solves(config, down, up)?;
    Ok(lo.iter().zip(&hi).map(|(a, b)| (b - a) / (2.0 * bump)).collect())
}

/// Delta, Gamma and Theta of `surface`, plus Vega and Rho when `bumps` is set.
pub fn greeks_curve(surface: &PriceSurface, bumps: Option<BumpSizes>) -> Result<GreeksCurve> {
    let grid = surface.grid();
    let spots = grid[1..grid.len() - 1].to_vec();
    let (vega, rho) = match bumps {
        Some(b) => {
            let config = surface.config();
            let (v, r) = std::thread::scope(|s| {
                let v = s.spawn(|| vega(config, b.vol));
                let r = s.spawn(|| rho(config, b.rate));
                (v.join().expect("vega thread panicked"), r.join().expect("rho thread panicked"))
            });
            (Some(v?), Some(r?))
        }
        None => (None, None),
    };
    Ok(GreeksCurve {
        spots,
        delta: delta(surface),
        gamma: gamma(surface),
        theta: theta(surface),
        vega,
        rho,
        bumps,
    })
}
