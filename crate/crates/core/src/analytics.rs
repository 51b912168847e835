//! Closed-form classical Black-Scholes, the model assumption checks, and
//! truncation bounds for the price interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{MarketParams, OptionKind};

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile, `p ∈ (0, 1)`.
///
/// Acklam's rational approximation (relative error about 1.2e-9) followed by
/// one Halley step against [`norm_cdf`], which brings it to round-off.
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("quantile level must lie in (0, 1), got {p}")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
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
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let x = if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    };

    let e = norm_cdf(x) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    Ok(x - u / (1.0 + 0.5 * x * u))
}

/// Classical Black-Scholes price with time to maturity `tau`.
///
/// With `σ = 0` or `tau = 0` the price is the discounted intrinsic value of
/// the deterministic forward, which reduces to the payoff at `tau = 0`.
pub fn bs_closed_form(spot: f64, params: &MarketParams, tau: f64) -> Result<f64> {
    if !(spot > 0.0) || !spot.is_finite() {
        return Err(Error::domain(format!("spot must be > 0, got {spot}")));
    }
    if !(tau >= 0.0) {
        return Err(Error::domain(format!("time to maturity must be >= 0, got {tau}")));
    }
    let k = params.strike;
    let r = params.rate;
    let discount = (-r * tau).exp();
    let vol = params.sigma * tau.sqrt();
    let call = if vol == 0.0 {
        (spot - k * discount).max(0.0)
    } else {
        let d1 = ((spot / k).ln() + (r + 0.5 * params.sigma * params.sigma) * tau) / vol;
        let d2 = d1 - vol;
        spot * norm_cdf(d1) - k * discount * norm_cdf(d2)
    };
    Ok(match params.kind {
        OptionKind::Call => call,
        OptionKind::Put => call - spot + k * discount,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssumptionReport {
    /// `4r > σ²`.
    pub coercivity_ok: bool,
    /// Continuous-injection constant `C₀ = (M − L)/L`; `None` when `L = 0`
    /// (the constant is unbounded).
    pub injection_constant: Option<f64>,
    /// `σ² ≥ r`.
    pub sigma_vs_r_ok: bool,
}

pub fn assumption_check(params: &MarketParams) -> AssumptionReport {
    let sigma2 = params.sigma * params.sigma;
    AssumptionReport {
        coercivity_ok: 4.0 * params.rate > sigma2,
        injection_constant: (params.lower > 0.0).then(|| params.span() / params.lower),
        sigma_vs_r_ok: sigma2 >= params.rate,
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Interval holding the risk-neutral `S_T` with probability `1 − alpha`,
/// tails split evenly, evaluated at `t = T`.
pub fn price_bounds(spot: f64, params: &MarketParams, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if !(spot > 0.0) {
        return Err(Error::domain(format!("spot must be > 0, got {spot}")));
    }
    let t = params.maturity;
    let drift = (params.rate - 0.5 * params.sigma * params.sigma) * t;
    let spread = params.sigma * t.sqrt();
    let z_low = norm_quantile(0.5 * alpha)?;
    let z_high = norm_quantile(1.0 - 0.5 * alpha)?;
    Ok((spot * (drift + spread * z_low).exp(), spot * (drift + spread * z_high).exp()))
}

/// `P(S_T > K | S_0 = spot)` under the risk-neutral lognormal law.
pub fn prob_finish_above(spot: f64, params: &MarketParams) -> f64 {
    if spot <= 0.0 {
        return 0.0;
    }
    let t = params.maturity;
    let vol = params.sigma * t.sqrt();
    let log_moneyness = (spot / params.strike).ln() + (params.rate - 0.5 * params.sigma * params.sigma) * t;
    if vol == 0.0 {
        return if log_moneyness > 0.0 { 1.0 } else { 0.0 };
    }
    norm_cdf(log_moneyness / vol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryTolerance {
    /// `P(S_T > K | S_0 = L)`.
    pub p_low: f64,
    /// `P(S_T ≤ K | S_0 = M)`.
    pub p_high: f64,
    pub low_ok: bool,
    pub high_ok: bool,
}

/// Whether the truncation points `L` and `M` are far enough from the strike
/// for the Dirichlet data to be trusted at tolerance `alpha`.
pub fn boundary_tolerance_check(params: &MarketParams, alpha: f64) -> Result<BoundaryTolerance> {
    check_alpha(alpha)?;
    let p_low = prob_finish_above(params.lower, params);
    let p_high = 1.0 - prob_finish_above(params.upper, params);
    Ok(BoundaryTolerance {
        p_low,
        p_high,
        low_ok: p_low <= alpha,
        high_ok: p_high <= alpha,
    })
}
