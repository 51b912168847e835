//! The discrete Black-Scholes operator `BS_m` on the dyadic grid and its
//! measure-scaled version `δ_{m,k} BS_m`.
//!
//! `BS_m` is stored with a positive diagonal:
//!
//! ```text
//! BS_m u_k = −σ²q_k²/2 (u_{k+1} − 2u_k + u_{k−1}) − r q_k (u_{k+1} − u_{k−1})/2 + r u_k
//! ```
//!
//! where `q_k = x_k / Δx`. For `L = 0` this is `q_k = k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{self, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

impl std::str::FromStr for OptionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "call" => Ok(OptionKind::Call),
            "put" => Ok(OptionKind::Put),
            other => Err(Error::domain(format!("unknown option kind `{other}` (expected call or put)"))),
        }
    }
}

/// Market and contract data plus the truncation interval `[L, M]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    /// Volatility per √year.
    pub sigma: f64,
    /// Risk-free rate per year.
    pub rate: f64,
    pub strike: f64,
    /// Maturity in years.
    pub maturity: f64,
    /// Lower price bound `L`.
    pub lower: f64,
    /// Upper price bound `M`.
    pub upper: f64,
    pub kind: OptionKind,
}

impl MarketParams {
    /// Checks `σ ≥ 0`, `r ≥ 0`, `T > 0` and `0 ≤ L < K < M`.
    ///
    /// `σ = 0` is accepted: the scheme degenerates to pure drift, which is a
    /// useful limit. Operations that divide by `σ` reject it themselves.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.sigma, self.rate, self.strike, self.maturity, self.lower, self.upper]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("market parameters must be finite"));
        }
        if self.sigma < 0.0 {
            return Err(Error::domain(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if self.rate < 0.0 {
            return Err(Error::domain(format!("r must be >= 0, got {}", self.rate)));
        }
        if self.maturity <= 0.0 {
            return Err(Error::domain(format!("T must be > 0, got {}", self.maturity)));
        }
        if self.lower < 0.0 {
            return Err(Error::domain(format!("L must be >= 0, got {}", self.lower)));
        }
        if !(self.upper > self.strike && self.strike > self.lower) {
            return Err(Error::domain(format!(
                "strike must be interior to the price interval: need M > K > L, got L = {}, K = {}, M = {}",
                self.lower, self.strike, self.upper
            )));
        }
        Ok(())
    }

    /// `𝕄 = M − L`.
    pub fn span(&self) -> f64 {
        self.upper - self.lower
    }

    /// Grid spacing `Δx = 𝕄 / 2^m`.
    pub fn spacing(&self, m: u32) -> f64 {
        self.span() / (1u64 << m) as f64
    }
}

/// Values on the level-`m` vertices `x_0 = L, …, x_{2^m} = M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    level: u32,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(level: u32, values: Vec<f64>) -> Result<Self> {
        measure::check_level(level)?;
        let expected = (1usize << level) + 1;
        if values.len() != expected {
            return Err(Error::domain(format!(
                "grid function at level {level} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(GridFunction { level, values })
    }

    /// Samples `f` at every vertex.
    pub fn sample(level: u32, params: &MarketParams, f: impl Fn(f64) -> f64) -> Result<Self> {
        measure::check_level(level)?;
        let n = 1u64 << level;
        let values = (0..=n).map(|k| f(vertex(k, level, params))).collect();
        Ok(GridFunction { level, values })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

fn vertex(k: u64, m: u32, params: &MarketParams) -> f64 {
    if k == 1u64 << m {
        // Avoid round-off drifting past M.
        return params.upper;
    }
    params.lower + k as f64 * params.spacing(m)
}

/// `x_k = L + k(M − L)/2^m`.
pub fn grid_coordinate(k: u64, m: u32, params: &MarketParams) -> Result<f64> {
    measure::check_level(m)?;
    let n = 1u64 << m;
    if k > n {
        return Err(Error::domain(format!("vertex index {k} outside 0..={n} at level {m}")));
    }
    Ok(vertex(k, m, params))
}

/// Coefficients of one interior row of `BS_m` acting on `(u_{k−1}, u_k, u_{k+1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub lower: f64,
    pub diag: f64,
    pub upper: f64,
}

impl Stencil {
    pub fn apply(&self, left: f64, centre: f64, right: f64) -> f64 {
        self.lower * left + self.diag * centre + self.upper * right
    }

    pub fn sum(&self) -> f64 {
        self.lower + self.diag + self.upper
    }
}

/// `x_k / Δx`.
pub(crate) fn scaled_coordinate(k: u64, m: u32, params: &MarketParams) -> f64 {
    params.lower / params.spacing(m) + k as f64
}

/// `BS_m` at scaled coordinate `q` written with differences, so constants
/// map to exactly `r·u`.
fn bs_difference(q: f64, params: &MarketParams, left: f64, centre: f64, right: f64) -> f64 {
    let diffusion = 0.5 * params.sigma * params.sigma * q * q;
    let drift = 0.5 * params.rate * q;
    -diffusion * ((right - centre) - (centre - left)) - drift * (right - left) + params.rate * centre
}

pub(crate) fn stencil_at(q: f64, params: &MarketParams) -> Stencil {
    let diffusion = 0.5 * params.sigma * params.sigma * q * q;
    let drift = 0.5 * params.rate * q;
    Stencil {
        lower: -diffusion + drift,
        diag: 2.0 * diffusion + params.rate,
        upper: -diffusion - drift,
    }
}

pub fn discrete_bs_row(k: u64, m: u32, params: &MarketParams) -> Result<Stencil> {
    measure::check_level(m)?;
    let n = 1u64 << m;
    if k == 0 || k >= n {
        return Err(Error::domain(format!("row {k} is not interior at level {m} (need 1..={})", n - 1)));
    }
    Ok(stencil_at(scaled_coordinate(k, m, params), params))
}

/// `δ_{m,k} = 2^{-m} / ∫ψ^m_{x_k} dμ`.
pub fn delta_scaling(k: u64, m: u32, weights: Weights) -> Result<f64> {
    let integral = measure::spline_integral(k, m, weights)?;
    Ok(0.5f64.powi(m as i32) / integral)
}

/// `δ_{m,k}` for every vertex of level `m`.
pub fn delta_scalings(m: u32, weights: Weights) -> Result<Vec<f64>> {
    let scale = 0.5f64.powi(m as i32);
    Ok(measure::spline_integrals(m, weights)?.into_iter().map(|i| scale / i).collect())
}

/// `v_k = δ_{m,k} BS_m u_k` on interior vertices; boundary entries are 0.
pub fn apply_discrete_operator(u: &GridFunction, params: &MarketParams, weights: Weights) -> Result<GridFunction> {
    let m = u.level;
    if m == 0 {
        return Err(Error::domain("level 0 has no interior vertices"));
    }
    if u.values.len() != (1usize << m) + 1 {
        return Err(Error::domain("grid function length does not match its level"));
    }
    let deltas = delta_scalings(m, weights)?;
    let mut out = vec![0.0; u.values.len()];
    for k in 1..u.values.len() - 1 {
        let q = scaled_coordinate(k as u64, m, params);
        out[k] = deltas[k] * bs_difference(q, params, u.values[k - 1], u.values[k], u.values[k + 1]);
    }
    GridFunction::new(m, out)
}

/// Approximates the measure operator `BS_μ v (x)` by `δ_{m,k*} BS_m v (x_{k*})`
/// at the interior vertex `k*` nearest to `x` (ties go to the lower index).
pub fn pointwise_operator(
    v: impl Fn(f64) -> f64,
    x: f64,
    m: u32,
    params: &MarketParams,
    weights: Weights,
) -> Result<f64> {
    measure::check_level(m)?;
    if m < 2 {
        return Err(Error::domain("pointwise operator needs level m >= 2"));
    }
    if !(x > params.lower && x < params.upper) {
        return Err(Error::domain(format!(
            "point {x} is not interior to ({}, {})",
            params.lower, params.upper
        )));
    }
    let n = 1u64 << m;
    let t = (x - params.lower) / params.spacing(m);
    // Nearest vertex, ties toward the lower index.
    let mut k = t.ceil() as u64;
    if (k as f64 - t) >= 0.5 {
        k -= 1;
    }
    let k = k.clamp(1, n - 1);
    let sampled = bs_difference(
        scaled_coordinate(k, m, params),
        params,
        v(vertex(k - 1, m, params)),
        v(vertex(k, m, params)),
        v(vertex(k + 1, m, params)),
    );
    Ok(delta_scaling(k, m, weights)? * sampled)
}
