//! Explicit time stepping of the measure Black-Scholes equation in reversed
//! time `τ = T − t`:
//!
//! ```text
//! C(n+1) = A C(n) + B(n),    A = I − h δ_m BS_m
//! ```
//!
//! `A` is tridiagonal and stored as three diagonals. Stability is conditional
//! on the CFL bound reported by [`cfl_check`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{self, Weights};
use crate::operator::{self, MarketParams, OptionKind};

/// Smallest level accepted by the scheme.
pub const MIN_LEVEL: u32 = 2;
/// Largest level accepted by the scheme (grid rows are held in memory).
pub const MAX_LEVEL: u32 = 24;
pub const DEFAULT_CFL_SAFETY: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepCount {
    /// Smallest CFL-compliant `N` after the safety factor.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeConfig {
    pub params: MarketParams,
    #[serde(serialize_with = "serialize_weights")]
    pub weights: Weights,
    /// Spatial level `m`; the grid has `2^m + 1` vertices.
    pub level: u32,
    pub steps: StepCount,
    pub cfl_safety: f64,
}

fn serialize_weights<S: serde::Serializer>(w: &Weights, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Weights", 2)?;
    st.serialize_field("mu1", &w.mu1())?;
    st.serialize_field("mu2", &w.mu2())?;
    st.end()
}

impl SchemeConfig {
    pub fn new(params: MarketParams, weights: Weights, level: u32) -> Self {
        SchemeConfig {
            params,
            weights,
            level,
            steps: StepCount::Auto,
            cfl_safety: DEFAULT_CFL_SAFETY,
        }
    }

    pub fn with_steps(mut self, steps: StepCount) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_cfl_safety(mut self, safety: f64) -> Self {
        self.cfl_safety = safety;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(MIN_LEVEL..=MAX_LEVEL).contains(&self.level) {
            return Err(Error::domain(format!(
                "level m must lie in {MIN_LEVEL}..={MAX_LEVEL}, got {}",
                self.level
            )));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::domain(format!("cfl_safety must lie in (0, 1], got {}", self.cfl_safety)));
        }
        if self.steps == StepCount::Fixed(0) {
            return Err(Error::domain("N must be at least 1"));
        }
        Ok(())
    }

    pub fn vertices(&self) -> usize {
        (1usize << self.level) + 1
    }
}

/// Stability diagnostics of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CflReport {
    /// Largest stable step (no safety factor). Fixed `N` is checked against this.
    pub h_limit: f64,
    /// `cfl_safety · h_limit`, the step used by `N = auto`.
    pub h_max: f64,
    /// `ceil(T / h_max)`.
    pub min_steps: usize,
    /// `σ² ≥ r`; when false some rows have a negative lower coefficient.
    pub sigma_vs_r_ok: bool,
    /// `4r > σ²`.
    pub coercivity_ok: bool,
    /// Interior rows whose lower coefficient `σ²q_k² − r q_k` is negative.
    pub negative_lower_rows: Vec<usize>,
}

/// Evaluates the CFL bound of the scheme.
///
/// The bound combines `h 2^m / min_k ∫ψ^m_{x_k} dμ ≤ (2^m/q_M)² / σ²`
/// (which is `h 2^m / ∫ψ ≤ 1/σ²` when `L = 0`) with the diagonal
/// nonnegativity condition `h δ_{m,k}(σ²q_k² + r) ≤ 1` on every row.
pub fn cfl_check(config: &SchemeConfig) -> Result<CflReport> {
    let m = config.level;
    let p = &config.params;
    let n = 1u64 << m;
    let integrals = measure::spline_integrals(m, config.weights)?;
    let deltas = operator::delta_scalings(m, config.weights)?;
    let sigma2 = p.sigma * p.sigma;

    let min_interior = integrals[1..n as usize].iter().copied().fold(f64::INFINITY, f64::min);
    let q_top = p.upper / p.spacing(m);
    let level_scale = n as f64;
    let measure_bound = if sigma2 > 0.0 {
        level_scale * min_interior / (sigma2 * q_top * q_top)
    } else {
        f64::INFINITY
    };

    let mut worst_rate = 0.0f64;
    let mut negative_lower_rows = Vec::new();
    for k in 1..n {
        let q = operator::scaled_coordinate(k, m, p);
        let stencil = operator::stencil_at(q, p);
        worst_rate = worst_rate.max(deltas[k as usize] * stencil.diag);
        if stencil.lower > 0.0 {
            negative_lower_rows.push(k as usize);
        }
    }
    let diagonal_bound = if worst_rate > 0.0 { 1.0 / worst_rate } else { f64::INFINITY };

    let h_limit = measure_bound.min(diagonal_bound);
    let h_max = config.cfl_safety * h_limit;
    let min_steps = if h_max.is_finite() {
        ((p.maturity / h_max).ceil() as usize).max(1)
    } else {
        1
    };
    Ok(CflReport {
        h_limit,
        h_max,
        min_steps,
        sigma_vs_r_ok: sigma2 >= p.rate,
        coercivity_ok: 4.0 * p.rate > sigma2,
        negative_lower_rows,
    })
}

/// Intrinsic value `(S − K)⁺` or `(K − S)⁺`.
pub fn payoff(spot: f64, params: &MarketParams) -> f64 {
    match params.kind {
        OptionKind::Call => (spot - params.strike).max(0.0),
        OptionKind::Put => (params.strike - spot).max(0.0),
    }
}

/// Dirichlet data `(C(τ, L), C(τ, M))` at reversed time `τ`.
pub fn boundary_at(tau: f64, params: &MarketParams) -> (f64, f64) {
    let discounted = params.strike * (-params.rate * tau).exp();
    match params.kind {
        OptionKind::Call => (0.0, params.upper - discounted),
        OptionKind::Put => (discounted - params.lower, 0.0),
    }
}

/// Boundary data at time index `n` with step `h`.
pub fn boundary_values(n: usize, h: f64, params: &MarketParams) -> (f64, f64) {
    boundary_at(n as f64 * h, params)
}

/// The tridiagonal iteration matrix `A` together with its boundary couplings.
#[derive(Debug, Clone)]
pub struct Assembled {
    params: MarketParams,
    level: u32,
    steps: usize,
    h: f64,
    // Row i (interior vertex k = i + 1): sub[i] multiplies C_{k−1}, sup[i] multiplies C_{k+1}.
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl Assembled {
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of interior unknowns, `2^m − 1`.
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// `A[i][i−1]` for `i = 1..dim`.
    pub fn lower_diagonal(&self) -> &[f64] {
        &self.sub[1..]
    }

    /// `A[i][i+1]` for `i = 0..dim−1`.
    pub fn upper_diagonal(&self) -> &[f64] {
        &self.sup[..self.sup.len() - 1]
    }

    /// Sum of the entries of row `i` of `A` (boundary couplings excluded).
    pub fn row_sum(&self, i: usize) -> f64 {
        let last = self.dim() - 1;
        let mut s = self.diag[i];
        if i > 0 {
            s += self.sub[i];
        }
        if i < last {
            s += self.sup[i];
        }
        s
    }

    /// Coefficients coupling the first and last interior rows to `C(τ, L)` and `C(τ, M)`.
    pub fn boundary_couplings(&self) -> (f64, f64) {
        (self.sub[0], self.sup[self.sup.len() - 1])
    }

    /// `B(n)`: boundary contribution added after `A C(n)`.
    pub fn boundary_source(&self, n: usize) -> Vec<f64> {
        let (low, high) = boundary_values(n, self.h, &self.params);
        let (c_low, c_high) = self.boundary_couplings();
        let mut source = vec![0.0; self.dim()];
        source[0] += c_low * low;
        let last = source.len() - 1;
        source[last] += c_high * high;
        source
    }

    /// Advances a full vertex row (boundaries included) from time index `n` to `n + 1`.
    pub fn advance(&self, current: &[f64], n: usize, next: &mut [f64]) {
        debug_assert_eq!(current.len(), self.dim() + 2);
        debug_assert_eq!(next.len(), current.len());
        for i in 0..self.dim() {
            let k = i + 1;
            next[k] = self.sub[i] * current[k - 1] + self.diag[i] * current[k] + self.sup[i] * current[k + 1];
        }
        let (low, high) = boundary_values(n + 1, self.h, &self.params);
        next[0] = low;
        next[self.dim() + 1] = high;
    }
}

fn resolve_steps(config: &SchemeConfig, report: &CflReport) -> Result<usize> {
    match config.steps {
        StepCount::Auto => Ok(report.min_steps),
        StepCount::Fixed(n) => {
            let h = config.params.maturity / n as f64;
            // Relative slack absorbs round-off in T/N when N sits exactly on the bound.
            if h > report.h_limit * (1.0 + 1e-12) {
                let raw_min = if report.h_limit.is_finite() {
                    (config.params.maturity / report.h_limit).ceil() as usize
                } else {
                    1
                };
                return Err(Error::Stability {
                    h,
                    limit: report.h_limit,
                    steps: n,
                    min_steps: raw_min,
                });
            }
            Ok(n)
        }
    }
}

/// Builds `A` and the boundary couplings. Fails on a fixed `N` that violates CFL.
pub fn assemble(config: &SchemeConfig) -> Result<Assembled> {
    config.validate()?;
    let report = cfl_check(config)?;
    let steps = resolve_steps(config, &report)?;
    assemble_with_steps(config, steps)
}

fn assemble_with_steps(config: &SchemeConfig, steps: usize) -> Result<Assembled> {
    let m = config.level;
    let p = config.params;
    let h = p.maturity / steps as f64;
    let deltas = operator::delta_scalings(m, config.weights)?;
    let dim = (1usize << m) - 1;
    let mut sub = Vec::with_capacity(dim);
    let mut diag = Vec::with_capacity(dim);
    let mut sup = Vec::with_capacity(dim);
    for k in 1..=dim {
        let stencil = operator::stencil_at(operator::scaled_coordinate(k as u64, m, &p), &p);
        let scale = h * deltas[k];
        sub.push(-scale * stencil.lower);
        diag.push(1.0 - scale * stencil.diag);
        sup.push(-scale * stencil.upper);
    }
    Ok(Assembled {
        params: p,
        level: m,
        steps,
        h,
        sub,
        diag,
        sup,
    })
}

/// One step on the interior unknowns: `A C(n) + B(n)`.
pub fn step(interior: &[f64], n: usize, assembled: &Assembled) -> Result<Vec<f64>> {
    if interior.len() != assembled.dim() {
        return Err(Error::domain(format!(
            "step expects {} interior values, got {}",
            assembled.dim(),
            interior.len()
        )));
    }
    let (low, high) = boundary_values(n, assembled.h, &assembled.params);
    let mut current = Vec::with_capacity(interior.len() + 2);
    current.push(low);
    current.extend_from_slice(interior);
    current.push(high);
    let mut next = vec![0.0; current.len()];
    assembled.advance(&current, n, &mut next);
    next.pop();
    next.remove(0);
    Ok(next)
}

/// Which time rows a solve keeps in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recording {
    /// Every row `0..=N`.
    Full,
    /// Rows that are multiples of the stride, plus rows `N − 1` and `N`.
    Stride(usize),
}

impl Recording {
    fn keeps(&self, n: usize, steps: usize) -> bool {
        match *self {
            Recording::Full => true,
            Recording::Stride(s) => n % s.max(1) == 0 || n + 1 >= steps,
        }
    }
}

/// Option values on the grid in reversed time; row `n` is `τ = n h`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSurface {
    config: SchemeConfig,
    h: f64,
    vertices: usize,
    row_indices: Vec<usize>,
    values: Vec<f64>,
    coercivity_warning: bool,
}

impl PriceSurface {
    /// Configuration with `steps` resolved to the `N` actually used.
    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn params(&self) -> &MarketParams {
        &self.config.params
    }

    pub fn level(&self) -> u32 {
        self.config.level
    }

    pub fn steps(&self) -> usize {
        match self.config.steps {
            StepCount::Fixed(n) => n,
            StepCount::Auto => unreachable!("surface configs always carry a resolved N"),
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn spacing(&self) -> f64 {
        self.config.params.spacing(self.config.level)
    }

    /// `4r ≤ σ²`: the run went ahead without the coercivity assumption.
    pub fn coercivity_warning(&self) -> bool {
        self.coercivity_warning
    }

    /// Indices `n` of the rows held by this surface, ascending.
    pub fn row_indices(&self) -> &[usize] {
        &self.row_indices
    }

    pub fn is_complete(&self) -> bool {
        self.row_indices.len() == self.steps() + 1
    }

    /// Row `n`, if it was recorded.
    pub fn row(&self, n: usize) -> Option<&[f64]> {
        let pos = self.row_indices.binary_search(&n).ok()?;
        Some(&self.values[pos * self.vertices..(pos + 1) * self.vertices])
    }

    pub fn value(&self, n: usize, k: usize) -> Option<f64> {
        self.row(n).and_then(|r| r.get(k).copied())
    }

    /// Recorded rows as `(n, values)`.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[f64])> {
        self.row_indices.iter().copied().zip(self.values.chunks_exact(self.vertices))
    }

    /// Prices at calendar time `t = 0`, i.e. row `N`.
    pub fn final_row(&self) -> &[f64] {
        &self.values[self.values.len() - self.vertices..]
    }

    pub fn tau(&self, n: usize) -> f64 {
        n as f64 * self.h
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.vertices)
            .map(|k| operator::grid_coordinate(k as u64, self.config.level, &self.config.params).unwrap())
            .collect()
    }
}

/// Resolves `N` and runs the scheme, handing every row `n = 0..=N` to `observe`.
///
/// Returns the resolved configuration and the step `h`. Nothing is retained
/// beyond two rows, so this is the route for very fine time grids.
pub fn solve_observed(
    config: &SchemeConfig,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<(SchemeConfig, Assembled)> {
    let assembled = assemble(config)?;
    let p = &config.params;
    let grid: Vec<f64> = (0..config.vertices())
        .map(|k| operator::grid_coordinate(k as u64, config.level, p))
        .collect::<Result<_>>()?;
    let mut current: Vec<f64> = grid.iter().map(|&x| payoff(x, p)).collect();
    // Payoff at L and M equals the Dirichlet data at τ = 0 for both kinds.
    let mut next = vec![0.0; current.len()];
    observe(0, &current);
    for n in 0..assembled.steps {
        assembled.advance(&current, n, &mut next);
        std::mem::swap(&mut current, &mut next);
        observe(n + 1, &current);
    }
    let mut resolved = *config;
    resolved.steps = StepCount::Fixed(assembled.steps);
    Ok((resolved, assembled))
}

pub fn solve(config: &SchemeConfig) -> Result<PriceSurface> {
    solve_recorded(config, Recording::Full)
}

pub fn solve_recorded(config: &SchemeConfig, recording: Recording) -> Result<PriceSurface> {
    config.validate()?;
    let coercivity_warning = {
        let p = &config.params;
        4.0 * p.rate <= p.sigma * p.sigma
    };
    let vertices = config.vertices();
    let mut row_indices = Vec::new();
    let mut values = Vec::new();
    let steps_hint = match config.steps {
        StepCount::Fixed(n) => Some(n),
        StepCount::Auto => None,
    };
    let report = cfl_check(config)?;
    let steps = steps_hint.unwrap_or(report.min_steps);
    if recording == Recording::Full {
        values.reserve((steps + 1) * vertices);
    }
    let (resolved, assembled) = solve_observed(config, |n, row| {
        if recording.keeps(n, steps) {
            row_indices.push(n);
            values.extend_from_slice(row);
        }
    })?;
    Ok(PriceSurface {
        config: resolved,
        h: assembled.h,
        vertices,
        row_indices,
        values,
        coercivity_warning,
    })
}

/// `‖·‖_{2,∞}` of a sequence of vertex rows at level `m`.
///
/// Vertex `k ≥ 1` is weighted by the mass of cell `k` (the cell whose right
/// end is `x_k`); vertex 0 carries no weight. The cell masses sum to 1.
pub fn weighted_norm_of<'a>(m: u32, weights: Weights, rows: impl IntoIterator<Item = &'a [f64]>) -> Result<f64> {
    let cells = 1u64 << m;
    let masses: Vec<f64> = (1..=cells).map(|k| measure::cell_mass(k, m, weights)).collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for row in rows {
        if row.len() != masses.len() + 1 {
            return Err(Error::domain(format!(
                "row has {} values, level {m} needs {}",
                row.len(),
                masses.len() + 1
            )));
        }
        let sum: f64 = masses.iter().zip(&row[1..]).map(|(w, v)| w * v * v).sum();
        worst = worst.max(sum.sqrt());
    }
    Ok(worst)
}

/// `max_n (Σ_k μ(cell_k) C(n,k)²)^{1/2}` over the recorded rows.
pub fn weighted_norm(surface: &PriceSurface) -> f64 {
    weighted_norm_of(surface.level(), surface.config.weights, surface.rows().map(|(_, r)| r))
        .expect("surface rows match their level")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(kind: OptionKind) -> MarketParams {
        MarketParams {
            sigma: 0.3,
            rate: 0.1,
            strike: 150.0,
            maturity: 1.0,
            lower: 0.0,
            upper: 300.0,
            kind,
        }
    }

    #[test]
    fn payoffs() {
        let call = fixture(OptionKind::Call);
        let put = fixture(OptionKind::Put);
        assert_eq!(payoff(150.0, &call), 0.0);
        assert_eq!(payoff(300.0, &call), 150.0);
        assert_eq!(payoff(0.0, &put), 150.0);
        assert_eq!(payoff(200.0, &put), 0.0);
    }

    #[test]
    fn boundaries() {
        let call = fixture(OptionKind::Call);
        assert_eq!(boundary_values(0, 0.01, &call), (0.0, 150.0));
        let (low, high) = boundary_values(100, 0.01, &call);
        assert_eq!(low, 0.0);
        assert!((high - 164.274387294606).abs() < 1e-9);
        assert_eq!(boundary_values(0, 0.01, &fixture(OptionKind::Put)), (150.0, 0.0));
    }

    #[test]
    fn cfl_examples() {
        let config = SchemeConfig::new(fixture(OptionKind::Call), Weights::EQUAL, 7).with_cfl_safety(1.0);
        let report = cfl_check(&config).unwrap();
        assert!((report.h_max - 0.25f64.powi(7) / 0.09).abs() < 1e-15);
        assert_eq!(report.min_steps, 1475);
        assert!(report.coercivity_ok);
        assert!(!report.sigma_vs_r_ok);
        assert_eq!(report.negative_lower_rows, vec![1]);

        let safe = cfl_check(&config.with_cfl_safety(0.9)).unwrap();
        assert!((safe.h_max - 0.9 * report.h_limit).abs() < 1e-18);

        let mut martin = fixture(OptionKind::Call);
        martin.sigma = 0.076675;
        martin.rate = 0.0591;
        let report = cfl_check(&SchemeConfig::new(martin, Weights::EQUAL, 5)).unwrap();
        assert!(report.coercivity_ok);
        assert!(!report.sigma_vs_r_ok);
    }

    #[test]
    fn fixed_steps_beyond_cfl_are_rejected() {
        let config = SchemeConfig::new(fixture(OptionKind::Call), Weights::EQUAL, 7)
            .with_steps(StepCount::Fixed(1000));
        match assemble(&config) {
            Err(Error::Stability { min_steps, .. }) => assert_eq!(min_steps, 1475),
            other => panic!("expected a stability error, got {other:?}"),
        }
        assert!(assemble(&config.with_steps(StepCount::Fixed(1475))).is_ok());
    }

    #[test]
    fn assembled_rows_at_zero_rate() {
        let mut p = fixture(OptionKind::Call);
        p.rate = 0.0;
        let a = assemble(&SchemeConfig::new(p, Weights::new(0.35).unwrap(), 4)).unwrap();
        let last = a.dim() - 1;
        for i in 1..last {
            assert!((a.row_sum(i) - 1.0).abs() < 1e-12);
        }
        let (c_low, c_high) = a.boundary_couplings();
        assert!((a.row_sum(0) + c_low - 1.0).abs() < 1e-12);
        assert!((a.row_sum(last) + c_high - 1.0).abs() < 1e-12);
        assert!(c_high > 0.0);
    }

    #[test]
    fn step_without_dynamics_is_identity() {
        let mut p = fixture(OptionKind::Call);
        p.sigma = 0.0;
        p.rate = 0.0;
        let a = assemble(&SchemeConfig::new(p, Weights::new(0.3).unwrap(), 3)).unwrap();
        let c: Vec<f64> = (0..7).map(|i| i as f64 * 1.5).collect();
        assert_eq!(step(&c, 0, &a).unwrap(), c);
        assert!(step(&c[1..], 0, &a).is_err());
    }

    #[test]
    fn zero_state_picks_up_only_the_boundary_source() {
        let a = assemble(&SchemeConfig::new(fixture(OptionKind::Call), Weights::EQUAL, 3)).unwrap();
        let next = step(&[0.0; 7], 2, &a).unwrap();
        assert_eq!(next, a.boundary_source(2));
        assert!(next[..6].iter().all(|&v| v == 0.0) && next[6] > 0.0);
    }

    #[test]
    fn surface_bookkeeping() {
        let config = SchemeConfig::new(fixture(OptionKind::Call), Weights::new(0.4).unwrap(), 4);
        let surface = solve(&config).unwrap();
        assert!(surface.is_complete());
        let grid = surface.grid();
        let p = fixture(OptionKind::Call);
        for (k, &x) in grid.iter().enumerate() {
            assert_eq!(surface.value(0, k).unwrap(), payoff(x, &p));
        }
        for (n, row) in surface.rows() {
            let (low, high) = boundary_values(n, surface.h(), &p);
            assert_eq!(row[0], low);
            assert_eq!(row[16], high);
        }
    }

    #[test]
    fn strided_recording_keeps_the_last_two_rows() {
        let config = SchemeConfig::new(fixture(OptionKind::Call), Weights::EQUAL, 4);
        let full = solve(&config).unwrap();
        let thin = solve_recorded(&config, Recording::Stride(50)).unwrap();
        let n = full.steps();
        assert_eq!(thin.final_row(), full.final_row());
        assert_eq!(thin.row(n - 1), full.row(n - 1));
        assert_eq!(thin.row(50), full.row(50));
        assert!(thin.row(51).is_none() || n <= 52);
    }

    #[test]
    fn weighted_norm_examples() {
        let w = Weights::new(0.3).unwrap();
        let zero = vec![0.0; 9];
        assert_eq!(weighted_norm_of(3, w, [zero.as_slice()]).unwrap(), 0.0);
        let ones = vec![1.0; 9];
        assert!((weighted_norm_of(3, w, [ones.as_slice()]).unwrap() - 1.0).abs() < 1e-14);
        let mut single = vec![0.0; 9];
        single[3] = -2.0;
        let expected = 2.0 * measure::cell_mass(3, 3, w).unwrap().sqrt();
        assert!((weighted_norm_of(3, w, [single.as_slice()]).unwrap() - expected).abs() < 1e-14);
        assert!(weighted_norm_of(3, w, [&ones[1..]]).is_err());
    }

    #[test]
    fn invalid_configs() {
        let p = fixture(OptionKind::Call);
        assert!(solve(&SchemeConfig::new(p, Weights::EQUAL, 1)).is_err());
        assert!(solve(&SchemeConfig::new(p, Weights::EQUAL, 4).with_cfl_safety(1.5)).is_err());
        assert!(solve(&SchemeConfig::new(p, Weights::EQUAL, 4).with_steps(StepCount::Fixed(0))).is_err());
    }
}
