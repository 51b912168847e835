//! Reference computations coded independently of the library internals.

#![allow(dead_code)]

use selfsim_bs::operator::{MarketParams, OptionKind};

pub fn fixture() -> MarketParams {
    MarketParams {
        sigma: 0.3,
        rate: 0.1,
        strike: 150.0,
        maturity: 1.0,
        lower: 0.0,
        upper: 300.0,
        kind: OptionKind::Call,
    }
}

/// `∫ f dμ` over `[lower, upper]` for the self-similar measure with left
/// weight `mu1`, by subdividing every cell down to `depth`.
///
/// On each leaf cell the integrand is sampled at the cell's barycenter,
/// which sits at `left + width·μ₂`. The rule is exact for functions that
/// are affine on every leaf.
pub fn self_similar_quadrature(f: &dyn Fn(f64) -> f64, mu1: f64, lower: f64, upper: f64, depth: u32) -> f64 {
    fn walk(f: &dyn Fn(f64) -> f64, mu1: f64, left: f64, width: f64, mass: f64, depth: u32) -> f64 {
        if depth == 0 {
            return mass * f(left + width * (1.0 - mu1));
        }
        let half = width / 2.0;
        walk(f, mu1, left, half, mass * mu1, depth - 1) + walk(f, mu1, left + half, half, mass * (1.0 - mu1), depth - 1)
    }
    walk(f, mu1, lower, upper - lower, 1.0, depth)
}

/// Hat function on the level-`m` dyadic grid of `[0, 1]`, peaked at vertex `k`.
pub fn hat(k: u64, m: u32) -> impl Fn(f64) -> f64 {
    let n = (1u64 << m) as f64;
    let centre = k as f64 / n;
    move |x| (1.0 - ((x - centre) * n).abs()).max(0.0)
}

/// Classical explicit Black-Scholes stencil at `L = 0`, applied at vertex `k`:
/// `−σ²k²/2 (u₊ − 2u + u₋) − rk/2 (u₊ − u₋) + r u`.
pub fn classical_operator(u: &[f64], k: usize, sigma: f64, rate: f64) -> f64 {
    let kf = k as f64;
    let (lo, mid, hi) = (u[k - 1], u[k], u[k + 1]);
    -0.5 * sigma * sigma * kf * kf * (hi - 2.0 * mid + lo) - 0.5 * rate * kf * (hi - lo) + rate * mid
}

/// Classical explicit scheme on the uniform grid with `L = 0`, returning every
/// time row. Dirichlet data: `0` at `S = 0`, `M − K e^{−rτ}` at `S = M` (calls).
pub fn classical_explicit_call(p: &MarketParams, m: u32, steps: usize) -> Vec<Vec<f64>> {
    assert_eq!(p.lower, 0.0);
    let n = 1usize << m;
    let dx = p.upper / n as f64;
    let h = p.maturity / steps as f64;
    let mut row: Vec<f64> = (0..=n).map(|k| (k as f64 * dx - p.strike).max(0.0)).collect();
    let mut rows = vec![row.clone()];
    for step in 1..=steps {
        let mut next = vec![0.0; n + 1];
        for k in 1..n {
            next[k] = row[k] - h * classical_operator(&row, k, p.sigma, p.rate);
        }
        next[0] = 0.0;
        next[n] = p.upper - p.strike * (-p.rate * h * step as f64).exp();
        row = next;
        rows.push(row.clone());
    }
    rows
}
