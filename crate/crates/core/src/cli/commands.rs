use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::RunConfig;
use super::output::{fmt_sig, write_json, CsvWriter};
use super::validate::convergence_table;
use super::{CliError, Options};
use crate::analytics::{self, AssumptionReport};
use crate::greeks::{self, BumpSizes};
use crate::scheme::{self, CflReport, PriceSurface, Recording, SchemeConfig};

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a RunConfig,
    scheme: &'a SchemeConfig,
    steps: usize,
    h: f64,
    cfl: &'a CflReport,
    assumptions: &'a AssumptionReport,
    coercivity_warning: bool,
}

fn print_reports(out: &mut dyn Write, cfl: &CflReport, assumptions: &AssumptionReport) -> Result<(), CliError> {
    writeln!(
        out,
        "cfl: h_limit = {:.6e}, h_max = {:.6e}, N_min = {}",
        cfl.h_limit, cfl.h_max, cfl.min_steps
    )?;
    if cfl.sigma_vs_r_ok {
        writeln!(out, "cfl: sigma^2 >= r holds; every off-diagonal entry of A is nonnegative")?;
    } else {
        writeln!(
            out,
            "cfl: sigma^2 < r; negative lower coefficient on rows {:?}",
            cfl.negative_lower_rows
        )?;
    }
    let injection = assumptions
        .injection_constant
        .map_or_else(|| "unbounded (L = 0)".to_string(), fmt_sig);
    writeln!(
        out,
        "assumptions: coercivity (4r > sigma^2) = {}, injection constant = {}, sigma^2 >= r = {}",
        assumptions.coercivity_ok, injection, assumptions.sigma_vs_r_ok
    )?;
    Ok(())
}

/// Refuses to run without `--force` when `4r ≤ σ²`.
fn gate_coercivity(config: &SchemeConfig, opts: &Options) -> Result<(), CliError> {
    let p = &config.params;
    if 4.0 * p.rate > p.sigma * p.sigma {
        return Ok(());
    }
    let msg = format!(
        "coercivity requires 4r > sigma^2, got 4r = {} and sigma^2 = {}",
        fmt_sig(4.0 * p.rate),
        fmt_sig(p.sigma * p.sigma)
    );
    if opts.force {
        eprintln!("warning: {msg}; continuing because of --force");
        Ok(())
    } else {
        Err(CliError::Assumption(format!("{msg} (pass --force to run anyway)")))
    }
}

fn write_price_curve(path: &Path, surface: &PriceSurface) -> Result<(), CliError> {
    let mut csv = CsvWriter::create(path, &["S", "price"])?;
    for (x, c) in surface.grid().iter().zip(surface.final_row()) {
        csv.row(&[x.to_string(), fmt_sig(*c)])?;
    }
    Ok(csv.finish()?)
}

fn write_surface(path: &Path, surface: &PriceSurface) -> Result<(), CliError> {
    let grid = surface.grid();
    let mut csv = CsvWriter::create(path, &["tau", "S", "price"])?;
    for (n, row) in surface.rows() {
        let tau = surface.tau(n).to_string();
        for (x, c) in grid.iter().zip(row) {
            csv.row(&[tau.clone(), x.to_string(), fmt_sig(*c)])?;
        }
    }
    Ok(csv.finish()?)
}

fn write_manifest(
    dir: &Path,
    command: &str,
    config: &RunConfig,
    surface: &PriceSurface,
    cfl: &CflReport,
    assumptions: &AssumptionReport,
) -> Result<(), CliError> {
    let manifest = Manifest {
        command,
        config,
        scheme: surface.config(),
        steps: surface.steps(),
        h: surface.h(),
        cfl,
        assumptions,
        coercivity_warning: surface.coercivity_warning(),
    };
    Ok(write_json(&dir.join("run.json"), &manifest)?)
}

/// Writes `surface.csv`, `price_t0.csv` and `run.json`.
pub fn cmd_solve(config: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), CliError> {
    let scheme_config = config.scheme_config()?;
    let cfl = scheme::cfl_check(&scheme_config)?;
    let assumptions = analytics::assumption_check(&scheme_config.params);
    print_reports(out, &cfl, &assumptions)?;
    gate_coercivity(&scheme_config, opts)?;

    let recording = match config.surface_stride {
        1 => Recording::Full,
        n => Recording::Stride(n),
    };
    let surface = scheme::solve_recorded(&scheme_config, recording)?;
    let dir = opts.output_dir(config);
    write_surface(&dir.join("surface.csv"), &surface)?;
    write_price_curve(&dir.join("price_t0.csv"), &surface)?;
    write_manifest(&dir, "solve", config, &surface, &cfl, &assumptions)?;
    writeln!(
        out,
        "solved: m = {}, N = {}, h = {:.6e}; wrote {}",
        surface.level(),
        surface.steps(),
        surface.h(),
        dir.display()
    )?;
    Ok(())
}

fn sweep_file_name(mu1: f64) -> String {
    format!("price_t0_mu1_{mu1}.csv")
}

/// One price curve per `mu1` in `mu1_list`, plus the combined `sweep.csv`.
pub fn cmd_sweep(config: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), CliError> {
    let weights = config.mu1_list()?;
    let base = config.scheme_config()?;
    let assumptions = analytics::assumption_check(&base.params);
    print_reports(out, &scheme::cfl_check(&base)?, &assumptions)?;
    gate_coercivity(&base, opts)?;

    let results: Vec<Result<PriceSurface, crate::Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = weights
            .iter()
            .map(|&w| {
                let mut run = base;
                run.weights = w;
                s.spawn(move || scheme::solve_recorded(&run, Recording::Stride(usize::MAX)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let surfaces = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let dir = opts.output_dir(config);
    let mut combined = CsvWriter::create(&dir.join("sweep.csv"), &["mu1", "S", "price"])?;
    for (w, surface) in weights.iter().zip(&surfaces) {
        write_price_curve(&dir.join(sweep_file_name(w.mu1())), surface)?;
        for (x, c) in surface.grid().iter().zip(surface.final_row()) {
            combined.row(&[w.mu1().to_string(), x.to_string(), fmt_sig(*c)])?;
        }
        writeln!(out, "mu1 = {}: N = {}", w.mu1(), surface.steps())?;
    }
    combined.finish()?;
    writeln!(out, "wrote {} curves to {}", surfaces.len(), dir.display())?;
    Ok(())
}

/// `tau,S,delta,gamma,theta` for every time row after the first.
fn write_greeks_surface(path: &Path, surface: &PriceSurface) -> Result<(), CliError> {
    let grid = surface.grid();
    let mut csv = CsvWriter::create(path, &["tau", "S", "delta", "gamma", "theta"])?;
    for n in 1..=surface.steps() {
        let tau = surface.tau(n).to_string();
        let delta = greeks::delta_at(surface, n)?;
        let gamma = greeks::gamma_at(surface, n)?;
        let theta = greeks::theta_at(surface, n)?;
        for i in 0..delta.len() {
            csv.row(&[
                tau.clone(),
                grid[i + 1].to_string(),
                fmt_sig(delta[i]),
                fmt_sig(gamma[i]),
                fmt_sig(theta[i]),
            ])?;
        }
    }
    Ok(csv.finish()?)
}

/// Writes `greeks.csv` (`S,delta,gamma,theta[,vega,rho]`), plus
/// `greeks_surface.csv` with `--full-surface`.
pub fn cmd_greeks(config: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), CliError> {
    let scheme_config = config.scheme_config()?;
    let cfl = scheme::cfl_check(&scheme_config)?;
    let assumptions = analytics::assumption_check(&scheme_config.params);
    print_reports(out, &cfl, &assumptions)?;
    gate_coercivity(&scheme_config, opts)?;

    let recording = if opts.full_surface {
        Recording::Full
    } else {
        Recording::Stride(usize::MAX)
    };
    let surface = scheme::solve_recorded(&scheme_config, recording)?;
    let bumps = opts.bumps.then(BumpSizes::default);
    let curve = greeks::greeks_curve(&surface, bumps)?;

    let dir = opts.output_dir(config);
    let mut header = vec!["S", "delta", "gamma", "theta"];
    if bumps.is_some() {
        header.extend(["vega", "rho"]);
    }
    let mut csv = CsvWriter::create(&dir.join("greeks.csv"), &header)?;
    for i in 0..curve.spots.len() {
        let mut fields = vec![
            curve.spots[i].to_string(),
            fmt_sig(curve.delta[i]),
            fmt_sig(curve.gamma[i]),
            fmt_sig(curve.theta[i]),
        ];
        if let (Some(v), Some(r)) = (&curve.vega, &curve.rho) {
            fields.push(fmt_sig(v[i]));
            fields.push(fmt_sig(r[i]));
        }
        csv.row(&fields)?;
    }
    csv.finish()?;
    if opts.full_surface {
        write_greeks_surface(&dir.join("greeks_surface.csv"), &surface)?;
    }
    write_manifest(&dir, "greeks", config, &surface, &cfl, &assumptions)?;
    writeln!(out, "greeks: m = {}, N = {}; wrote {}", surface.level(), surface.steps(), dir.display())?;
    Ok(())
}

/// Prints the `alpha`-coverage interval for `S_T` and the boundary checks.
///
/// Tails are split evenly and the law is taken at `t = T`, where its
/// variance is largest.
pub fn cmd_bounds(config: &RunConfig, _opts: &Options, out: &mut dyn Write) -> Result<(), CliError> {
    let alpha = config.alpha()?;
    let params = config.market_params()?;
    let spot = config.spot.unwrap_or(params.strike);
    let (low, high) = analytics::price_bounds(spot, &params, alpha)?;
    let check = analytics::boundary_tolerance_check(&params, alpha)?;
    writeln!(out, "alpha = {alpha}, S0 = {spot}, T = {}", params.maturity)?;
    writeln!(out, "L_alpha = {}", fmt_sig(low))?;
    writeln!(out, "M_alpha = {}", fmt_sig(high))?;
    writeln!(
        out,
        "low_ok = {} (P(S_T > K | S_0 = L) = {})",
        check.low_ok,
        fmt_sig(check.p_low)
    )?;
    writeln!(
        out,
        "high_ok = {} (P(S_T <= K | S_0 = M) = {})",
        check.high_ok,
        fmt_sig(check.p_high)
    )?;
    Ok(())
}

/// Convergence table against the closed form; `mu1` must be 0.5.
pub fn cmd_validate(config: &RunConfig, opts: &Options, out: &mut dyn Write) -> Result<(), CliError> {
    let scheme_config = config.scheme_config()?;
    if !scheme_config.weights.is_equal() {
        return Err(CliError::Config(format!(
            "validate needs mu1 = 0.5, got {}",
            scheme_config.weights.mu1()
        )));
    }
    gate_coercivity(&scheme_config, opts)?;
    let rows = convergence_table(&scheme_config, &config.m_list)?;

    let dir = opts.output_dir(config);
    let mut csv = CsvWriter::create(&dir.join("convergence.csv"), &["m", "N", "error", "ratio"])?;
    writeln!(out, "{:>3} {:>8} {:>16} {:>10}", "m", "N", "error", "ratio")?;
    for row in &rows {
        let ratio = row.ratio.map(fmt_sig).unwrap_or_default();
        writeln!(out, "{:>3} {:>8} {:>16} {:>10}", row.level, row.steps, fmt_sig(row.error), ratio)?;
        csv.row(&[row.level.to_string(), row.steps.to_string(), fmt_sig(row.error), ratio])?;
    }
    csv.finish()?;
    Ok(())
}
