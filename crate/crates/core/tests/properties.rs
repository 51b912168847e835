use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use selfsim_bs::analytics::{bs_closed_form, price_bounds};
use selfsim_bs::greeks;
use selfsim_bs::measure::{cell_mass, spline_integral, spline_integrals, SelfSimilarMeasure, Weights};
use selfsim_bs::operator::{delta_scalings, pointwise_operator, MarketParams, OptionKind};
use selfsim_bs::scheme::{self, SchemeConfig, StepCount};

fn params(sigma: f64, rate: f64, kind: OptionKind) -> MarketParams {
    MarketParams {
        sigma,
        rate,
        strike: 150.0,
        maturity: 1.0,
        lower: 0.0,
        upper: 300.0,
        kind,
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: &[f64]) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for &v in values {
        let t = sum + v;
        carry += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + carry
}

fn kind() -> impl Strategy<Value = OptionKind> {
    prop_oneof![Just(OptionKind::Call), Just(OptionKind::Put)]
}

proptest! {
    #[test]
    fn splines_partition_unity(mu1 in 0.01f64..0.99, m in 1u32..=16) {
        let total = compensated_sum(&spline_integrals(m, Weights::new(mu1).unwrap()).unwrap());
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cell_mass_splits_into_children(mu1 in 0.01f64..0.99, m in 0u32..=20, frac in 0.0f64..1.0) {
        let w = Weights::new(mu1).unwrap();
        let k = 1 + ((frac * (1u64 << m) as f64) as u64).min((1u64 << m) - 1);
        let parent = cell_mass(k, m, w).unwrap();
        let children = cell_mass(2 * k - 1, m + 1, w).unwrap() + cell_mass(2 * k, m + 1, w).unwrap();
        prop_assert!((parent - children).abs() <= 1e-15 * parent.max(1e-300) + 1e-300);
    }

    #[test]
    fn spline_integrals_mirror_under_swapped_weights(mu1 in 0.01f64..0.99, m in 1u32..=12, frac in 0.0f64..=1.0) {
        let w = Weights::new(mu1).unwrap();
        let n = 1u64 << m;
        let k = ((frac * n as f64) as u64).min(n);
        let a = spline_integral(k, m, w).unwrap();
        let b = spline_integral(n - k, m, w.swapped()).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * a);
    }

    #[test]
    fn cdf_is_monotone(mu1 in 0.05f64..0.95, a in 0.0f64..=300.0, b in 0.0f64..=300.0, depth in 1u32..=30) {
        let measure = SelfSimilarMeasure::new(Weights::new(mu1).unwrap(), 0.0, 300.0).unwrap();
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let fx = measure.cdf(x, depth).unwrap();
        let fy = measure.cdf(y, depth).unwrap();
        prop_assert!(fx.lower <= fy.lower + 1e-15);
        prop_assert!(fx.lower <= fx.upper);
        prop_assert!(fx.error_bound() <= mu1.max(1.0 - mu1).powi(depth as i32) * (1.0 + 1e-12));
    }

    #[test]
    fn delta_scalings_are_positive(mu1 in 0.01f64..0.99, m in 1u32..=14) {
        prop_assert!(delta_scalings(m, Weights::new(mu1).unwrap()).unwrap().iter().all(|&d| d > 0.0 && d.is_finite()));
    }

    #[test]
    fn rows_of_a_sum_to_one_without_discounting(sigma in 0.05f64..0.6, mu1 in 0.2f64..0.8, m in 2u32..=7) {
        let config = SchemeConfig::new(params(sigma, 0.0, OptionKind::Call), Weights::new(mu1).unwrap(), m);
        let a = scheme::assemble(&config).unwrap();
        let last = a.dim() - 1;
        let (c_low, c_high) = a.boundary_couplings();
        for i in 0..=last {
            let mut total = a.row_sum(i);
            if i == 0 { total += c_low; }
            if i == last { total += c_high; }
            prop_assert!((total - 1.0).abs() <= 1e-12, "row {}", i);
        }
    }

    #[test]
    fn a_is_a_convex_combination_when_sigma_dominates_rate(
        sigma in 0.3f64..0.6, frac in 0.0f64..=1.0, mu1 in 0.2f64..0.8, m in 2u32..=7,
    ) {
        let rate = frac * sigma * sigma;
        let config = SchemeConfig::new(params(sigma, rate, OptionKind::Call), Weights::new(mu1).unwrap(), m);
        let a = scheme::assemble(&config).unwrap();
        let (c_low, c_high) = a.boundary_couplings();
        prop_assert!(c_low >= 0.0 && c_high >= 0.0);
        for d in [a.diagonal(), a.lower_diagonal(), a.upper_diagonal()] {
            prop_assert!(d.iter().all(|&v| v >= 0.0));
        }
        for i in 0..a.dim() {
            prop_assert!(a.row_sum(i) <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn surfaces_stay_nonnegative(
        sigma in 0.1f64..0.5, frac in 0.0f64..=1.0, mu1 in 0.3f64..0.7, m in 3u32..=5, kind in kind(),
    ) {
        let rate = frac * sigma * sigma;
        let config = SchemeConfig::new(params(sigma, rate, kind), Weights::new(mu1).unwrap(), m);
        let mut lowest = f64::INFINITY;
        scheme::solve_observed(&config, |_, row| lowest = row.iter().copied().fold(lowest, f64::min)).unwrap();
        prop_assert!(lowest >= -1e-12, "min {}", lowest);
    }

    #[test]
    fn central_delta_telescopes(mu1 in 0.3f64..0.7, a in 1usize..32, b in 1usize..32) {
        let config = SchemeConfig::new(params(0.3, 0.1, OptionKind::Call), Weights::new(mu1).unwrap(), 5);
        let surface = scheme::solve_recorded(&config, scheme::Recording::Stride(usize::MAX)).unwrap();
        let delta = greeks::delta(&surface);
        let c = surface.final_row();
        let (k1, k2) = if a <= b { (a, b) } else { (b, a) };
        let dx = surface.spacing();
        let summed: f64 = (k1..=k2).map(|k| delta[k - 1] * 2.0 * dx).sum();
        let ends = c[k2 + 1] + c[k2] - c[k1] - c[k1 - 1];
        prop_assert!((summed - ends).abs() <= 1e-9);
    }

    #[test]
    fn closed_form_put_call_parity(spot in 1.0f64..400.0, tau in 0.0f64..3.0, sigma in 0.0f64..0.8, rate in 0.0f64..0.2) {
        let call = bs_closed_form(spot, &params(sigma, rate, OptionKind::Call), tau).unwrap();
        let put = bs_closed_form(spot, &params(sigma, rate, OptionKind::Put), tau).unwrap();
        prop_assert!((call - put - (spot - 150.0 * (-rate * tau).exp())).abs() <= 1e-9);
    }

    #[test]
    fn closed_form_call_is_monotone(sigma in 0.05f64..0.8, rate in 0.0f64..0.2, spot in 10.0f64..300.0, tau in 0.0f64..2.0) {
        let p = params(sigma, rate, OptionKind::Call);
        let base = bs_closed_form(spot, &p, tau).unwrap();
        prop_assert!(bs_closed_form(spot * 1.01, &p, tau).unwrap() >= base - 1e-12);
        prop_assert!(bs_closed_form(spot, &p, tau + 0.05).unwrap() >= base - 1e-12);
    }

    #[test]
    fn cubic_consistency_error_is_first_order(x in 1.0f64..299.0, m in 4u32..=14) {
        let p = params(0.3, 0.1, OptionKind::Call);
        let (s2, r) = (p.sigma * p.sigma, p.rate);
        let got = pointwise_operator(|y| y * y * y, x, m, &p, Weights::EQUAL).unwrap();
        let exact = -(3.0 * s2 + 2.0 * r) * x * x * x;
        let dx = p.spacing(m);
        // Nearest-vertex offset is at most Δx/2 (Δx at the clamped ends); at a vertex the stencil is off by r·x·Δx².
        let slope = 3.0 * (3.0 * s2 + 2.0 * r) * p.upper * p.upper;
        let bound = slope * dx + r * p.upper * dx * dx;
        prop_assert!((got - exact).abs() <= bound * (1.0 + 1e-9), "err {} bound {}", (got - exact).abs(), bound);
    }
}

#[test]
fn fixture_surfaces_stay_nonnegative_below_the_certificate() {
    // σ² = 0.09 < r = 0.1: row 1 carries a negative coefficient.
    for kind in [OptionKind::Call, OptionKind::Put] {
        for mu1 in [0.3, 0.5, 0.7] {
            let config = SchemeConfig::new(params(0.3, 0.1, kind), Weights::new(mu1).unwrap(), 6);
            let mut lowest = f64::INFINITY;
            scheme::solve_observed(&config, |_, row| lowest = row.iter().copied().fold(lowest, f64::min)).unwrap();
            assert!(lowest >= -1e-12, "{kind:?} mu1={mu1}: {lowest}");
        }
    }
}

#[test]
fn closed_form_is_monotone_on_grids() {
    let p = params(0.3, 0.1, OptionKind::Call);
    for tau in [0.0, 0.1, 0.5, 1.0, 2.0] {
        let prices: Vec<f64> = (1..=600).map(|i| bs_closed_form(i as f64 * 0.5, &p, tau).unwrap()).collect();
        assert!(prices.windows(2).all(|w| w[1] >= w[0]), "tau = {tau}");
    }
    for i in 1..=60 {
        let spot = i as f64 * 5.0;
        let prices: Vec<f64> = (0..=40).map(|j| bs_closed_form(spot, &p, j as f64 * 0.05).unwrap()).collect();
        assert!(prices.windows(2).all(|w| w[1] >= w[0] - 1e-12), "S = {spot}");
    }
}

#[test]
fn price_bounds_cover_simulated_terminal_prices() {
    let mut rng = StdRng::seed_from_u64(20240601);
    for (sigma, rate, alpha, spot) in [(0.3, 0.1, 0.05, 150.0), (0.2, 0.03, 0.1, 90.0), (0.6, 0.0, 0.01, 210.0)] {
        let p = params(sigma, rate, OptionKind::Call);
        let (low, high) = price_bounds(spot, &p, alpha).unwrap();
        let drift = (rate - 0.5 * sigma * sigma) * p.maturity;
        let vol = sigma * p.maturity.sqrt();
        let samples = 100_000;
        let inside = (0..samples)
            .filter(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                let s = spot * (drift + vol * z).exp();
                (low..=high).contains(&s)
            })
            .count();
        let freq = inside as f64 / samples as f64;
        assert!(freq >= 1.0 - alpha - 0.01, "sigma={sigma} alpha={alpha}: {freq}");
    }
}

#[test]
fn fixed_steps_at_exact_bound_are_accepted() {
    let config = SchemeConfig::new(params(0.3, 0.1, OptionKind::Call), Weights::EQUAL, 7).with_cfl_safety(1.0);
    let n_min = scheme::cfl_check(&config).unwrap().min_steps;
    assert!(scheme::assemble(&config.with_steps(StepCount::Fixed(n_min))).is_ok());
    assert!(scheme::assemble(&config.with_steps(StepCount::Fixed(n_min - 1))).is_err());
}
