mod common;

use selfsim_bs::cli::validate::convergence_table;
use selfsim_bs::greeks::{self, BumpSizes};
use selfsim_bs::measure::Weights;
use selfsim_bs::scheme::{self, Recording, SchemeConfig};

use common::fixture;

// Closed-form values at S = K = 150, σ = 0.3, r = 0.1, T = 1 (30-digit reference evaluation).
const DELTA_ATM: f64 = 0.685570462138822;
const GAMMA_ATM: f64 = 0.00788804798404304;
const VEGA_ATM: f64 = 53.2443238922905;
const RHO_ATM: f64 = 77.7343689472434;

fn fixture_surface(upper: f64, recording: Recording) -> scheme::PriceSurface {
    let mut p = fixture();
    p.upper = upper;
    scheme::solve_recorded(&SchemeConfig::new(p, Weights::EQUAL, 7), recording).unwrap()
}

fn index_of(curve_spots: &[f64], spot: f64) -> usize {
    curve_spots.iter().position(|&s| s == spot).unwrap()
}

#[test]
fn at_the_money_greeks_match_closed_form() {
    let surface = fixture_surface(300.0, Recording::Full);
    let curve = greeks::greeks_curve(&surface, Some(BumpSizes::default())).unwrap();
    let i = index_of(&curve.spots, 150.0);
    assert!((curve.delta[i] - DELTA_ATM).abs() <= 0.02);
    assert!((curve.gamma[i] - GAMMA_ATM).abs() <= 0.1 * GAMMA_ATM, "gamma {}", curve.gamma[i]);
    assert!(curve.theta[i] < 0.0);
    assert!((curve.vega.as_ref().unwrap()[i] - VEGA_ATM).abs() <= 0.05 * VEGA_ATM);
    assert!((curve.rho.as_ref().unwrap()[i] - RHO_ATM).abs() <= 0.05 * RHO_ATM);
}

#[test]
fn classical_limit_shape() {
    let surface = fixture_surface(300.0, Recording::Stride(usize::MAX));
    let curve = greeks::greeks_curve(&surface, Some(BumpSizes::default())).unwrap();
    assert!(curve.delta.iter().all(|&d| (-0.01..=1.01).contains(&d)));
    assert!(curve.gamma.iter().all(|&g| g >= -1e-6));
    assert!(curve.rho.as_ref().unwrap().iter().all(|&r| r > 0.0));
    // S = 2Δx ≈ 4.7, far below K.
    assert!(curve.gamma[1].abs() <= 1e-4);
    assert!(curve.theta[1].abs() <= 1e-3);
}

#[test]
fn deep_in_the_money_delta_is_one() {
    let surface = fixture_surface(600.0, Recording::Stride(usize::MAX));
    let delta = greeks::delta(&surface);
    let n = delta.len();
    // Interior index n − 2 is vertex 2^m − 2, i.e. S = M − 2Δx.
    assert!((delta[n - 2] - 1.0).abs() <= 0.02, "{}", delta[n - 2]);
}

#[test]
fn theta_rows_come_from_the_full_surface() {
    let surface = fixture_surface(300.0, Recording::Full);
    let last = greeks::theta(&surface);
    assert_eq!(last, greeks::theta_at(&surface, surface.steps()).unwrap());
    assert!(greeks::theta_at(&surface, 0).is_err());
    let thinned = fixture_surface(300.0, Recording::Stride(usize::MAX));
    assert!(greeks::delta_at(&thinned, 1).is_err());
}

#[test]
fn weighted_error_falls_by_a_constant_factor_once_truncation_is_negligible() {
    // M = 4K pushes the Dirichlet mismatch far below the discretisation error.
    let mut p = fixture();
    p.upper = 600.0;
    let rows = convergence_table(&SchemeConfig::new(p, Weights::EQUAL, 4), &[4, 5, 6, 7, 8]).unwrap();
    for row in &rows[1..] {
        let ratio = row.ratio.unwrap();
        assert!(ratio <= 0.7, "m = {}: ratio {ratio}", row.level);
    }
}
