//! The experiments behind each CLI subcommand.  Every run returns a
//! [`Report`]: CSV rows, a JSON summary, and pass/fail checks with the
//! thresholds pinned here.

use crate::energy::{energy, gradient, multiplier_estimate, pohozaev_residual, PotentialSpec};
use crate::error::{Error, Result};
use crate::flow::{continuation_sweep, minimize, FlowConfig, Init, MinimizerResult};
use crate::grid::{Field, Geometry, Grid};
use crate::ground_state::{self, gn_constant, gn_ratio, GroundState};
use crate::harness::config::RunConfig;
use crate::harness::report::{Check, Report};
use crate::theory::{self, ProblemParams, Regime};
use crate::util::geomspace;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::sync::Arc;

pub fn run(experiment: &str, cfg: &RunConfig) -> Result<Report> {
    match experiment {
        "ground-state" => run_ground_state(cfg),
        "theory-table" => run_theory_table(cfg),
        "minimize" => run_minimize(cfg),
        "sweep" => run_sweep(cfg),
        "concentrate" => run_concentrate(cfg),
        "blowup" => run_blowup(cfg),
        "small-mass" => run_small_mass(cfg),
        "gn-check" => run_gn_check(cfg),
        "verify" => run_verify(cfg),
        other => Err(Error::Config(format!("unknown experiment `{other}`"))),
    }
}

fn qp(cfg: &RunConfig) -> Result<GroundState> {
    ground_state::obtain(cfg.params.dim, cfg.params.p, cfg.cache_dir.as_deref())
}

// ---------------------------------------------------------------------------
// ground-state
// ---------------------------------------------------------------------------

pub fn run_ground_state(cfg: &RunConfig) -> Result<Report> {
    let gs = qp(cfg)?;
    let mut report = Report::new("ground_state", &["x", "q"]);
    for (&x, &q) in gs.grid().nodes().iter().zip(gs.profile().values()) {
        report.push_row(vec![x, q]);
    }
    let boundary_ratio = gs.profile().values()[gs.grid().len() - 1].abs() / gs.profile().max_abs();
    report.checks.push(Check::le("pohozaev_chain_defect", gs.pohozaev_defect(), 1e-4));
    report.checks.push(Check::le("equation_residual", gs.equation_residual(), 1e-6));
    report.checks.push(Check::le("boundary_over_max", boundary_ratio, 1e-10));
    report.summary = json!({
        "N": gs.dim(),
        "p": gs.p(),
        "mass_sq": gs.mass_sq(),
        "mass": gs.mass(),
        "kinetic": gs.kinetic(),
        "pnorm": gs.pnorm(),
        "gn_constant": gn_constant(&gs),
        "grid": { "geometry": gs.grid().geometry().as_str(), "extent": gs.grid().extent(), "n": gs.grid().len() },
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// theory-table
// ---------------------------------------------------------------------------

pub fn run_theory_table(cfg: &RunConfig) -> Result<Report> {
    let gs = qp(cfg)?;
    let masses = cfg.c.expand()?;
    let base = cfg.problem_params(1.0, gs.mass())?;
    let mut report = Report::new("theory_table", &["c", "m_c", "i0", "mu_c", "at_threshold"]);
    let mut worst_residual = 0.0f64;
    for &c in &masses {
        let params = base.with_c(c);
        let sol = theory::solve_mc(&params)?;
        let i0 = theory::i0_of(&params, sol.m_c)?;
        let mu = theory::mu_of(&params, sol.m_c)?;
        if !sol.at_threshold && sol.m_c > 0.0 {
            worst_residual = worst_residual.max(theory::stationarity_residual(&params, sol.m_c));
        }
        report.push_row(vec![c, sol.m_c, i0, mu, if sol.at_threshold { 1.0 } else { 0.0 }]);
    }
    report.checks.push(Check::le("stationarity_residual", worst_residual, 1e-10));
    let c_star = theory::c_star(&base).ok();
    let rho_lim = theory::rho_limit(cfg.params.dim, cfg.params.p, gs.mass()).ok();
    report.summary = json!({
        "regime": format!("{:?}", theory::regime(cfg.params.dim, cfg.params.p)),
        "qp_mass": gs.mass(),
        "c_star": c_star,
        "rho_limit": rho_lim,
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// minimize / sweep
// ---------------------------------------------------------------------------

fn theory_row(params: &ProblemParams) -> (f64, f64, f64) {
    match theory::solve_mc(params) {
        Ok(sol) => {
            let i0 = theory::i0_of(params, sol.m_c).unwrap_or(f64::NAN);
            let mu = theory::mu_of(params, sol.m_c).unwrap_or(f64::NAN);
            (sol.m_c, i0, mu)
        }
        Err(_) => (f64::NAN, f64::NAN, f64::NAN),
    }
}

const FLOW_COLUMNS: &[&str] = &[
    "c",
    "energy",
    "kinetic_g",
    "multiplier",
    "proj_grad_norm",
    "iterations",
    "converged",
    "m_c_theory",
    "i0_theory",
    "mu_theory",
];

fn flow_row(c: f64, res: &MinimizerResult, params: &ProblemParams) -> Vec<f64> {
    let (m, i0, mu) = theory_row(params);
    vec![
        c,
        res.breakdown.total,
        res.u.grad_norm_sq(),
        res.multiplier,
        res.proj_grad_norm,
        res.iterations as f64,
        if res.converged { 1.0 } else { 0.0 },
        m,
        i0,
        mu,
    ]
}

fn push_theory_comparison(report: &mut Report, c: f64, res: &MinimizerResult, params: &ProblemParams, pot_zero: bool) {
    report.checks.push(Check::le(
        &format!("mass_conservation_c{c}"),
        (res.u.l2_norm() - c) / c,
        1e-10,
    ));
    if !pot_zero {
        return;
    }
    let (m, i0, _mu) = theory_row(params);
    if i0.is_finite() && i0 < 0.0 {
        report.checks.push(Check::le(
            &format!("energy_vs_theory_c{c}"),
            (res.breakdown.total - i0) / i0.abs(),
            1e-2,
        ));
        let g = res.u.grad_norm_sq();
        report.checks.push(Check::le(
            &format!("kinetic_vs_theory_c{c}"),
            (g - m * m) / (m * m),
            1e-2,
        ));
        if let Ok(r) = pohozaev_residual(&res.u, params) {
            report.checks.push(Check::le(&format!("pohozaev_c{c}"), r, 1e-2));
        }
    }
}

pub fn run_minimize(cfg: &RunConfig) -> Result<Report> {
    let gs = qp(cfg)?;
    let masses = cfg.c.expand()?;
    if masses.len() != 1 {
        return Err(Error::Config("minimize expects a single mass; use sweep for lists".into()));
    }
    let c = masses[0];
    let params = cfg.problem_params(c, gs.mass())?;
    let grid = cfg.flow_grid(if cfg.params.dim == 1 { 40.0 } else { 100.0 }, 1601)?;
    let pot = cfg.potential.to_spec()?.on_grid(&grid)?;
    let flow_cfg = cfg.flow.build()?;
    let res = minimize(&grid, &params, &pot, &flow_cfg, Some(&gs))?;

    let mut report = Report::new("minimize", FLOW_COLUMNS);
    report.push_row(flow_row(c, &res, &params));
    push_theory_comparison(&mut report, c, &res, &params, pot.is_zero());
    report.summary = json!({
        "converged": res.converged,
        "iterations": res.iterations,
        "proj_grad_norm": res.proj_grad_norm,
        "multiplier": res.multiplier,
        "breakdown": {
            "kinetic_a": res.breakdown.kinetic_a,
            "kirchhoff_b": res.breakdown.kirchhoff_b,
            "potential": res.breakdown.potential,
            "nonlinear": res.breakdown.nonlinear,
            "total": res.breakdown.total,
        },
        "flags": {
            "outside_existence": res.flags.outside_existence,
            "near_threshold": res.flags.near_threshold,
            "sign_changing": res.flags.sign_changing,
            "stalled": res.flags.stalled,
        },
    });
    Ok(report)
}

pub fn run_sweep(cfg: &RunConfig) -> Result<Report> {
    let gs = qp(cfg)?;
    let masses = cfg.c.expand()?;
    let base = cfg.problem_params(masses[0], gs.mass())?;
    let grid = cfg.flow_grid(if cfg.params.dim == 1 { 40.0 } else { 100.0 }, 1601)?;
    let pot = cfg.potential.to_spec()?.on_grid(&grid)?;
    let flow_cfg = cfg.flow.build()?;
    let sweep = continuation_sweep(&grid, &base, &pot, &masses, &flow_cfg, Some(&gs))?;

    let mut report = Report::new("sweep", FLOW_COLUMNS);
    let mut failures = Vec::new();
    for (c, res) in &sweep {
        match res {
            Ok(r) => {
                let params = base.with_c(*c);
                report.push_row(flow_row(*c, r, &params));
                push_theory_comparison(&mut report, *c, r, &params, pot.is_zero());
            }
            Err(e) => failures.push(json!({ "c": c, "error": e.to_string() })),
        }
    }
    report
        .checks
        .push(Check::holds("all_masses_solved", failures.is_empty(), failures.len() as f64));
    report.summary = json!({ "failures": failures, "qp_mass": gs.mass() });
    Ok(report)
}

// ---------------------------------------------------------------------------
// concentrate
// ---------------------------------------------------------------------------

/// One mass point of the concentration study.
#[derive(Debug, Clone)]
pub struct ConcentrationRecord {
    pub c: f64,
    pub i_v: f64,
    pub i0: f64,
    pub ratio_iv_i0: f64,
    pub m_c: f64,
    pub rescaled_l2_dist: f64,
    pub rho: f64,
    pub mu: f64,
    pub rho_over_mu: f64,
    pub rho_scaled: f64,
    pub grad_ratio: f64,
    pub potential_term: f64,
    pub center: f64,
}

/// L2 distance between the rescaled minimizer
/// `w(x) = (|Q|_2/c)(c/m)^{N/2} u((c/m)(x+z))` and `Q_p`, with `z` the
/// quadratically interpolated peak of `|u|`.
fn rescaled_distance(u: &Field, gs: &GroundState, c: f64, m: f64) -> (f64, f64) {
    let z = match u.grid().geometry() {
        Geometry::Line => u.argmax_abs(),
        Geometry::Radial => 0.0,
    };
    let scale = c / m;
    let amp = gs.mass() / c * scale.powf(gs.dim() as f64 / 2.0);
    let mut dist_sq = 0.0;
    for ((&x, &qv), &w) in gs
        .grid()
        .nodes()
        .iter()
        .zip(gs.profile().values())
        .zip(gs.grid().node_weights())
    {
        let wv = amp * u.sample_at(scale * x + z);
        dist_sq += (wv - qv) * (wv - qv) * w;
    }
    (dist_sq.sqrt(), z)
}

const CONCENTRATE_COLUMNS: &[&str] = &[
    "c",
    "i_V",
    "i0",
    "ratio_iV_i0",
    "m_c",
    "rescaled_L2_dist",
    "rho",
    "mu",
    "rho_over_mu",
    "rho_scaled",
    "grad_ratio",
    "potential_term",
    "z",
];

pub fn run_concentrate(cfg: &RunConfig) -> Result<Report> {
    let dim = cfg.params.dim;
    let p = cfg.params.p;
    if theory::regime(dim, p) == Regime::KirchhoffCritical
        || theory::regime(dim, p) == Regime::Supercritical
    {
        return Err(Error::Regime(format!("concentration needs 2 < p < (2N+8)/N, got p = {p}")));
    }
    if (p - 4.0).abs() < 1e-9 {
        return Err(Error::Regime("the concentration limits exclude p = 4".into()));
    }
    let spec = cfg.potential.to_spec()?;
    if spec.is_zero() {
        return Err(Error::Config("concentration requires a trapping potential".into()));
    }
    let masses = cfg.c.expand()?;
    if masses.len() < 2 || masses.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("concentration needs an ascending list of masses".into()));
    }

    let gs = qp(cfg)?;
    let grid = cfg.flow_grid(if dim == 1 { 80.0 } else { 400.0 }, 3201)?;
    let pot = spec.on_grid(&grid)?;
    let flow_cfg = cfg.flow.build()?;
    let base = cfg.problem_params(masses[0], gs.mass())?;
    let rho_lim_stated = theory::rho_limit(dim, p, gs.mass())?;
    let rho_lim = theory::rho_limit_derived(dim, p, gs.mass())?;

    let sweep = continuation_sweep(&grid, &base, &pot, &masses, &flow_cfg, Some(&gs))?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (c, res) in &sweep {
        let res = match res {
            Ok(r) => r,
            Err(e) => {
                failures.push(json!({ "c": c, "error": e.to_string() }));
                continue;
            }
        };
        let params = base.with_c(*c);
        let sol = theory::solve_mc(&params)?;
        let m = sol.m_c;
        let i0 = theory::i0_of(&params, m)?;
        let mu = theory::mu_of(&params, m)?;
        let (dist, z) = rescaled_distance(&res.u, &gs, *c, m);
        let rho = res.multiplier;
        let nd = dim as f64;
        let rho_scaled = ((1.0 / c) * (c / m).powf(nd / 2.0)).powf(p - 2.0) * rho;
        records.push(ConcentrationRecord {
            c: *c,
            i_v: res.breakdown.total,
            i0,
            ratio_iv_i0: res.breakdown.total / i0,
            m_c: m,
            rescaled_l2_dist: dist,
            rho,
            mu,
            rho_over_mu: rho / mu,
            rho_scaled,
            grad_ratio: res.u.grad_norm_sq() / (m * m),
            potential_term: res.breakdown.potential,
            center: z,
        });
    }

    let mut report = Report::new("concentrate", CONCENTRATE_COLUMNS);
    for r in &records {
        report.push_row(vec![
            r.c,
            r.i_v,
            r.i0,
            r.ratio_iv_i0,
            r.m_c,
            r.rescaled_l2_dist,
            r.rho,
            r.mu,
            r.rho_over_mu,
            r.rho_scaled,
            r.grad_ratio,
            r.potential_term,
            r.center,
        ]);
    }
    report
        .checks
        .push(Check::holds("all_masses_solved", failures.is_empty(), failures.len() as f64));
    if let Some(last) = records.last() {
        let max_increase = records
            .windows(2)
            .map(|w| w[1].rescaled_l2_dist - w[0].rescaled_l2_dist)
            .fold(f64::NEG_INFINITY, f64::max);
        report.checks.push(Check::holds(
            "rescaled_dist_strictly_decreasing",
            records.len() >= 2 && max_increase < 0.0,
            max_increase,
        ));
        report
            .checks
            .push(Check::le("rescaled_dist_final_over_qmass", last.rescaled_l2_dist / gs.mass(), 0.1));
        report.checks.push(Check::le("energy_ratio_defect_final", last.ratio_iv_i0 - 1.0, 0.1));
        report
            .checks
            .push(Check::le("rho_scaled_defect_final", last.rho_scaled / rho_lim - 1.0, 0.1));
        report.checks.push(Check::le("rho_over_mu_defect_final", last.rho_over_mu - 1.0, 0.1));
        report.checks.push(Check::le("grad_ratio_defect_final", last.grad_ratio - 1.0, 0.1));
        report
            .checks
            .push(Check::le("potential_over_i0_final", last.potential_term / last.i0.abs(), 0.05));
        // every record with i0 < 0 must respect i_V >= i0
        let min_margin = records
            .iter()
            .filter(|r| r.i0 < 0.0)
            .map(|r| (r.i_v - r.i0) / r.i0.abs())
            .fold(f64::INFINITY, f64::min);
        report
            .checks
            .push(Check::holds("iv_dominates_i0", min_margin >= -1e-6, min_margin));
    } else {
        report.checks.push(Check::holds("all_masses_solved", false, f64::NAN));
    }
    report.summary = json!({
        "qp_mass": gs.mass(),
        "rho_limit_derived": rho_lim,
        "rho_limit_stated": rho_lim_stated,
        "rho_scaled_final": records.last().map(|r| r.rho_scaled),
        "observed_grad_ratio_final": records.last().map(|r| r.grad_ratio),
        "failures": failures,
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// blow-up probe
// ---------------------------------------------------------------------------

/// Radial cutoff: 1 on the unit ball, 0 outside radius 2, C1 in between with
/// slope bounded by 2.
fn cutoff(r: f64) -> f64 {
    let r = r.abs();
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let s = r - 1.0;
        1.0 - s * s * (3.0 - 2.0 * s)
    }
}

pub fn run_blowup(cfg: &RunConfig) -> Result<Report> {
    let dim = cfg.params.dim;
    let p = cfg.params.p;
    let gs = qp(cfg)?;
    let masses = cfg.c.expand()?;
    if masses.len() != 1 {
        return Err(Error::Config("blowup expects a single mass".into()));
    }
    let c = masses[0];
    let params = cfg.problem_params(c, gs.mass())?;

    // the probe only makes sense where i_V is unbounded below
    match theory::regime(dim, p) {
        Regime::Supercritical => {}
        Regime::KirchhoffCritical => {
            let info = theory::existence_region(&params)?;
            if let theory::RegionDescriptor::CriticalMass { c_max, .. } = info.descriptor {
                if c <= c_max {
                    return Err(Error::Regime(format!(
                        "at p = (2N+8)/N the energy is bounded below up to c = {c_max}; take c above it"
                    )));
                }
            }
        }
        _ => {
            return Err(Error::Regime(format!(
                "blow-up needs p >= (2N+8)/N (unbounded regime), got p = {p}"
            )));
        }
    }

    let grid = match &cfg.grid {
        Some(g) => g.build(dim)?,
        None => {
            let geometry = if dim == 1 { Geometry::Line } else { Geometry::Radial };
            Grid::new(dim, geometry, 2.0, 16001)?
        }
    };
    let pot = cfg.potential.to_spec()?.on_grid(&grid)?;
    let t_grid = cfg
        .t_grid
        .clone()
        .unwrap_or_else(|| (0..=8).map(|k| 2f64.powi(k)).collect());
    let floor = cfg.floor.unwrap_or(-1e6);

    let mut report = Report::new(
        "blowup",
        &["t", "a_t", "i_v", "kinetic_a", "kirchhoff_b", "potential", "nonlinear"],
    );
    let nd = dim as f64;
    let mut energies = Vec::new();
    let mut a_last = f64::NAN;
    for &t in &t_grid {
        let raw = Field::from_fn(Arc::clone(&grid), |x| {
            c / gs.mass() * cutoff(x) * t.powf(nd / 2.0) * gs.profile().sample_at(t * x)
        })?;
        let norm = raw.l2_norm();
        if norm == 0.0 {
            return Err(Error::Unresolved(format!("dilation t = {t} left no mass on the grid")));
        }
        let a_t = c / norm;
        let mut u_t = raw;
        u_t.scale(a_t);
        let e = energy(&u_t, &params, &pot)?;
        report.push_row(vec![t, a_t, e.total, e.kinetic_a, e.kirchhoff_b, e.potential, e.nonlinear]);
        energies.push(e.total);
        a_last = a_t;
    }

    // strict decrease over the final stretch of the curve
    let mut suffix = 1usize;
    while suffix < energies.len() && energies[energies.len() - suffix - 1] > energies[energies.len() - suffix] {
        suffix += 1;
    }
    report.checks.push(Check::holds(
        "eventually_strictly_decreasing",
        suffix >= 3.min(energies.len()),
        suffix as f64,
    ));
    let final_energy = *energies.last().unwrap_or(&f64::NAN);
    report.checks.push(Check::holds(
        "final_energy_below_floor",
        final_energy < floor,
        final_energy,
    ));
    report.checks.push(Check::le("a_t_normalization_defect", a_last - 1.0, 1e-3));
    report.summary = json!({
        "floor": floor,
        "final_energy": final_energy,
        "decreasing_suffix_len": suffix,
        "qp_mass": gs.mass(),
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// small-mass limit
// ---------------------------------------------------------------------------

pub fn run_small_mass(cfg: &RunConfig) -> Result<Report> {
    let gs = qp(cfg)?;
    let masses = cfg.c.expand()?;
    if masses.len() < 2 || masses.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("small-mass needs a strictly descending list of masses".into()));
    }
    let grid = cfg.flow_grid(if cfg.params.dim == 1 { 40.0 } else { 100.0 }, 1601)?;
    let pot = cfg.potential.to_spec()?.on_grid(&grid)?;
    let flow_cfg = cfg.flow.build()?;
    let base = cfg.problem_params(masses[0], gs.mass())?;

    let mut report = Report::new(
        "small_mass",
        &["c", "i_v", "kinetic_a", "kirchhoff_b", "potential", "nonlinear"],
    );
    let mut abs_energies: Vec<(f64, f64)> = Vec::new();
    let mut warm: Option<Field> = None;
    let run_one = |c: f64, warm: &mut Option<Field>| -> Result<MinimizerResult> {
        let params = base.with_c(c);
        let mut fc = flow_cfg.clone();
        if let Some(prev) = warm.as_ref() {
            fc.init = Init::WarmStart(prev.clone());
        }
        let res = minimize(&grid, &params, &pot, &fc, Some(&gs))?;
        *warm = Some(res.u.clone());
        Ok(res)
    };
    for &c in &masses {
        let res = run_one(c, &mut warm)?;
        let e = res.breakdown;
        report.push_row(vec![c, e.total, e.kinetic_a, e.kirchhoff_b, e.potential, e.nonlinear]);
        abs_energies.push((c, e.total));
    }

    let max_increase = abs_energies
        .windows(2)
        .map(|w| w[1].1.abs() - w[0].1.abs())
        .fold(f64::NEG_INFINITY, f64::max);
    report.checks.push(Check::holds(
        "abs_energy_decreasing_toward_zero",
        max_increase < 0.0,
        max_increase,
    ));
    let first = abs_energies.first().unwrap().1.abs();
    let last = abs_energies.last().unwrap().1.abs();
    report.checks.push(Check::holds(
        "final_below_half_of_first",
        last < 0.5 * first,
        last / first.max(f64::MIN_POSITIVE),
    ));

    // continuity probe: a 1% mass jump moves the energy by less than 5%
    let c_probe = masses[0];
    let e_probe = run_one(c_probe * 1.01, &mut warm)?.breakdown.total;
    let e_first = abs_energies[0].1;
    let rel = (e_probe - e_first).abs() / e_first.abs().max(1e-12);
    report.checks.push(Check::le("continuity_probe_1pc", rel, 0.05));

    report.summary = json!({ "qp_mass": gs.mass() });
    Ok(report)
}

// ---------------------------------------------------------------------------
// Gagliardo-Nirenberg fuzz
// ---------------------------------------------------------------------------

/// Random smooth trial fields: single Gaussians, sech powers, and two- or
/// three-bump sums with random centers and widths.  Widths stay at or above
/// one and centers within extent/4, so every draw is resolved and contained
/// on the fuzz grids below.
pub fn random_smooth_field(grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> (Field, &'static str) {
    let radial = grid.geometry() == Geometry::Radial;
    let span = grid.extent() / 4.0;
    let center = |rng: &mut ChaCha8Rng| -> f64 {
        if radial {
            rng.gen_range(0.0..span)
        } else {
            rng.gen_range(-span..span)
        }
    };
    let kind = rng.gen_range(0..3u8);
    match kind {
        0 => {
            let w: f64 = rng.gen_range(1.0..4.0);
            let x0 = center(rng);
            let a: f64 = rng.gen_range(0.2..2.0);
            (
                Field::from_fn(Arc::clone(grid), |x| a * (-(x - x0).powi(2) / (2.0 * w * w)).exp())
                    .unwrap(),
                "gaussian",
            )
        }
        1 => {
            let w: f64 = rng.gen_range(1.0..3.0);
            let q: f64 = rng.gen_range(0.6..3.0);
            let x0 = center(rng);
            let a: f64 = rng.gen_range(0.2..2.0);
            (
                Field::from_fn(Arc::clone(grid), |x| a / ((x - x0) / w).cosh().powf(q)).unwrap(),
                "sech_power",
            )
        }
        _ => {
            let k = rng.gen_range(2..=3usize);
            let bumps: Vec<(f64, f64, f64)> = (0..k)
                .map(|_| (rng.gen_range(0.2..1.5), center(rng), rng.gen_range(1.0..3.0)))
                .collect();
            (
                Field::from_fn(Arc::clone(grid), |x| {
                    bumps
                        .iter()
                        .map(|(a, x0, w)| a * (-(x - x0).powi(2) / (2.0 * w * w)).exp())
                        .sum()
                })
                .unwrap(),
                "bump_sum",
            )
        }
    }
}

/// Grid for the sharp-inequality fuzz: fine enough that quadrature error
/// stays below the 1e-6 slack even for near-optimal draws.
pub fn fuzz_grid(dim: usize) -> Result<Arc<Grid>> {
    if dim == 1 {
        Grid::new(1, Geometry::Line, 40.0, 32001)
    } else {
        Grid::new(dim, Geometry::Radial, 40.0, 16001)
    }
}

pub fn run_gn_check(cfg: &RunConfig) -> Result<Report> {
    let gs = qp(cfg)?;
    let count = cfg.count.unwrap_or(200);
    let grid = match &cfg.grid {
        Some(g) => g.build(cfg.params.dim)?,
        None => fuzz_grid(cfg.params.dim)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut report = Report::new("gn_check", &["index", "kind", "ratio"]);
    let at_q = gn_ratio(&gs, gs.profile())?;
    report.push_row(vec![-1.0, -1.0, at_q]);
    let mut max_ratio = f64::NEG_INFINITY;
    for i in 0..count {
        let (field, kind) = random_smooth_field(&grid, &mut rng);
        let ratio = gn_ratio(&gs, &field)?;
        let kind_code = match kind {
            "gaussian" => 0.0,
            "sech_power" => 1.0,
            _ => 2.0,
        };
        report.push_row(vec![i as f64, kind_code, ratio]);
        max_ratio = max_ratio.max(ratio);
    }
    report.checks.push(Check::le("ratio_at_qp_defect", at_q - 1.0, 1e-4));
    report.checks.push(Check::holds(
        "sharp_bound_respected",
        max_ratio <= 1.0 + 1e-6,
        max_ratio,
    ));
    report.summary = json!({
        "count": count,
        "max_ratio": max_ratio,
        "ratio_at_qp": at_q,
        "gn_constant": gn_constant(&gs),
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// verify: the fast invariant battery
// ---------------------------------------------------------------------------

pub fn run_verify(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("verify", &[]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let fast = cfg.count.map(|c| c < 100).unwrap_or(false);

    // quadrature volume sums
    for (dim, geom, extent, vol, name) in [
        (1usize, Geometry::Line, 10.0, 20.0, "volume_line"),
        (1, Geometry::Radial, 10.0, 20.0, "volume_radial_1d"),
        (2, Geometry::Radial, 3.0, std::f64::consts::PI * 9.0, "volume_disk"),
        (3, Geometry::Radial, 2.0, 4.0 / 3.0 * std::f64::consts::PI * 8.0, "volume_ball"),
    ] {
        let g = Grid::new(dim, geom, extent, 513)?;
        report.checks.push(Check::le(name, (g.volume() - vol) / vol, 1e-10));
    }

    // adjoint consistency of the Laplacian
    for (dim, geom) in [(1usize, Geometry::Line), (3, Geometry::Radial)] {
        let g = Grid::new(dim, geom, 12.0, 257)?;
        let mut worst = 0.0f64;
        for _ in 0..8 {
            let u = Field::new(
                Arc::clone(&g),
                (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )?;
            let v = Field::new(
                Arc::clone(&g),
                (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )?;
            let defect = (u.laplacian().inner(&v)? + u.bilinear_grad(&v)?).abs()
                / u.bilinear_grad(&v)?.abs().max(1.0);
            worst = worst.max(defect);
        }
        report.checks.push(Check::le(
            &format!("laplacian_adjoint_{}d_{}", dim, geom.as_str()),
            worst,
            1e-10,
        ));
    }

    // ground states and the sharp inequality
    let pairs: &[(usize, f64)] = if fast { &[(1, 3.0)] } else { &[(1, 3.0), (2, 3.0), (3, 4.0), (3, 5.0)] };
    let fuzz_count = cfg.count.unwrap_or(200);
    for &(dim, p) in pairs {
        let gs = ground_state::obtain(dim, p, cfg.cache_dir.as_deref())?;
        let tag = format!("N{dim}_p{p}");
        report
            .checks
            .push(Check::le(&format!("pohozaev_{tag}"), gs.pohozaev_defect(), 1e-4));
        report
            .checks
            .push(Check::le(&format!("equation_residual_{tag}"), gs.equation_residual(), 1e-6));
        report
            .checks
            .push(Check::le(&format!("gn_at_qp_{tag}"), gn_ratio(&gs, gs.profile())? - 1.0, 1e-4));
        let fgrid = fuzz_grid(dim)?;
        let mut max_ratio = f64::NEG_INFINITY;
        for _ in 0..fuzz_count {
            let (field, _) = random_smooth_field(&fgrid, &mut rng);
            max_ratio = max_ratio.max(gn_ratio(&gs, &field)?);
        }
        report.checks.push(Check::holds(
            &format!("gn_sharp_bound_{tag}"),
            max_ratio <= 1.0 + 1e-6,
            max_ratio,
        ));
    }

    // closed-form profile, N = 1, p = 3
    {
        let gs = ground_state::obtain(1, 3.0, cfg.cache_dir.as_deref())?;
        let mut max_err = 0.0f64;
        for (&x, &q) in gs.grid().nodes().iter().zip(gs.profile().values()) {
            let exact = 15.0 / 8.0 / (5.0f64.sqrt() * x / 2.0).cosh().powi(2);
            max_err = max_err.max((q - exact).abs());
        }
        report.checks.push(Check::le("closed_form_profile_N1_p3", max_err, 1e-6));
    }

    // theory: stationarity residual per regime + mass-critical closed form
    {
        let q3 = ground_state::obtain(1, 3.0, cfg.cache_dir.as_deref())?.mass();
        let base = ProblemParams::new(1.0, 1.0, 3.0, 1, 1.0, q3)?;
        let mut worst = 0.0f64;
        for &c in &geomspace(0.5, 512.0, 7) {
            let params = base.with_c(c);
            let sol = theory::solve_mc(&params)?;
            worst = worst.max(theory::stationarity_residual(&params, sol.m_c));
        }
        report.checks.push(Check::le("stationarity_residual_subcritical", worst, 1e-10));

        // i0/c^2 strictly decreasing
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        for &c in &geomspace(0.25, 1024.0, 13) {
            let params = base.with_c(c);
            let m = theory::solve_mc(&params)?.m_c;
            let v = theory::i0_of(&params, m)? / (c * c);
            monotone &= v < prev;
            prev = v;
        }
        report.checks.push(Check::holds("i0_over_c2_strictly_decreasing", monotone, prev));

        let q6 = (3.0f64.sqrt() * std::f64::consts::PI / 2.0).sqrt();
        let mut worst = 0.0f64;
        for &c in &geomspace(1.1 * q6, 64.0 * q6, 7) {
            let params = ProblemParams::new(1.0, 1.0, 6.0, 1, c, q6)?;
            let sol = theory::solve_mc(&params)?;
            let closed = ((c / q6).powf(4.0) - 1.0).sqrt();
            worst = worst.max(((sol.m_c - closed) / closed).abs());
        }
        report.checks.push(Check::le("mass_critical_closed_vs_rootfind", worst, 1e-8));
    }

    // gradient exactness, both b = 0 and b > 0, with and without potential
    {
        let grid = Grid::new(1, Geometry::Line, 15.0, 601)?;
        let rgrid = Grid::new(3, Geometry::Radial, 15.0, 601)?;
        let eps = 1e-5;
        let mut worst = 0.0f64;
        let n_pairs = if fast { 10 } else { 50 };
        for trial in 0..n_pairs {
            let (g, params, pot) = if trial % 2 == 0 {
                let params = if trial % 4 == 0 {
                    ProblemParams::new(0.7, 0.0, 4.0, 1, 1.0, 1.0)?
                } else {
                    ProblemParams::new(1.0, 1.0, 3.0, 1, 1.0, 1.0)?
                };
                let pot = if trial % 3 == 0 {
                    PotentialSpec::Harmonic { omega: 0.5 }.on_grid(&grid)?
                } else {
                    PotentialSpec::Zero.on_grid(&grid)?
                };
                (&grid, params, pot)
            } else {
                let params = ProblemParams::new(1.0, 2.0, 3.5, 3, 1.0, 1.0)?;
                let pot = if trial % 3 == 0 {
                    PotentialSpec::Power { s: 2.0, kappa: 1.0 }.on_grid(&rgrid)?
                } else {
                    PotentialSpec::Zero.on_grid(&rgrid)?
                };
                (&rgrid, params, pot)
            };
            let (u, _) = random_smooth_field(g, &mut rng);
            let (delta, _) = random_smooth_field(g, &mut rng);
            let grad = gradient(&u, &params, &pot)?;
            let pairing = grad.inner(&delta)?;
            let ep = energy(&u.step(&delta, -eps)?, &params, &pot)?.total;
            let em = energy(&u.step(&delta, eps)?, &params, &pot)?.total;
            let fd = (ep - em) / (2.0 * eps);
            worst = worst.max(((fd - pairing) / pairing.abs().max(1.0)).abs());
        }
        report.checks.push(Check::le("gradient_directional_derivative", worst, 1e-6));
    }

    // cache integrity: round trip, then a tampered payload with a fresh
    // checksum must still be rejected by the invariants
    {
        let dir = std::env::temp_dir().join(format!("kml-verify-{}", std::process::id()));
        std::fs::create_dir_all(&dir)?;
        let gs = ground_state::obtain(1, 3.0, cfg.cache_dir.as_deref())?;
        let path = dir.join(ground_state::cache_file_name(1, 3.0, gs.grid()));
        let _ = std::fs::remove_file(&path);
        ground_state::cache_store(&gs, &path)?;
        let round = ground_state::cache_load(1, 3.0, gs.grid(), &path);
        report.checks.push(Check::holds(
            "cache_round_trip",
            round
                .as_ref()
                .map(|g| g.profile().values() == gs.profile().values())
                .unwrap_or(false),
            0.0,
        ));
        let text = std::fs::read_to_string(&path)?;
        let corrupted = text.replace("checksum=", "checksum=00");
        std::fs::write(&path, corrupted)?;
        let rejected = ground_state::cache_load(1, 3.0, gs.grid(), &path).is_err();
        report.checks.push(Check::holds("cache_checksum_rejects_corruption", rejected, 0.0));
        let _ = std::fs::remove_dir_all(&dir);
    }

    // an end-to-end flow on a coarse grid against the closed forms
    if !fast {
        let gs = ground_state::obtain(1, 3.0, cfg.cache_dir.as_deref())?;
        let grid = Grid::new(1, Geometry::Line, 30.0, 1201)?;
        let pot = PotentialSpec::Zero.on_grid(&grid)?;
        let params = ProblemParams::new(1.0, 1.0, 3.0, 1, 1.0, gs.mass())?;
        let fc = FlowConfig { tol: 1e-6, max_iter: 60_000, ..FlowConfig::default() };
        let res = minimize(&grid, &params, &pot, &fc, Some(&gs))?;
        let m = theory::solve_mc(&params)?.m_c;
        let i0 = theory::i0_of(&params, m)?;
        let mu = theory::mu_of(&params, m)?;
        report
            .checks
            .push(Check::le("flow_energy_vs_theory", (res.breakdown.total - i0) / i0.abs(), 1e-2));
        report
            .checks
            .push(Check::le("flow_multiplier_vs_theory", (res.multiplier - mu) / mu.abs(), 2e-2));
        let rho = multiplier_estimate(&res.u, &params, &pot)?;
        report.checks.push(Check::le("multiplier_consistency", rho - res.multiplier, 1e-12));
    }

    report.summary = json!({ "seed": cfg.seed, "fast": fast });
    Ok(report)
}
