//! Normalized gradient flow: projected gradient descent on the mass sphere
//! `|u|_2 = c`, the constructive side of the existence statement.
//!
//! Each step takes the full energy gradient, renormalizes back to mass `c`
//! (the sphere is a scaling orbit, so renormalization is the natural
//! projection), and backtracks the step length until the energy strictly
//! decreases.  Boundary nodes stay pinned at zero under the Dirichlet
//! truncation.

use crate::energy::{energy, gradient, multiplier_estimate, EnergyBreakdown, Potential};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::theory::{self, ProblemParams, Regime};
use crate::ground_state::GroundState;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum Init {
    /// Gaussian bump of the given width, scaled to mass `c`.
    Gaussian { width: f64 },
    /// The closed-form zero-potential minimizer, resampled onto the flow grid.
    TheoryProfile,
    /// A caller-provided state (continuation), renormalized to mass `c`.
    WarmStart(Field),
}

#[derive(Debug, Clone)]
pub struct FlowConfig {
    /// initial (and maximal) step length
    pub step0: f64,
    /// backtracking factor in (0, 1)
    pub shrink: f64,
    /// projected-gradient tolerance, scaled by `max(1, |E|)`
    pub tol: f64,
    pub max_iter: usize,
    pub init: Init,
    /// proceed outside the existence region (exploratory runs)
    pub allow_outside_existence: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            step0: 0.5,
            shrink: 0.5,
            tol: 1e-8,
            max_iter: 200_000,
            init: Init::Gaussian { width: 1.0 },
            allow_outside_existence: false,
        }
    }
}

impl FlowConfig {
    fn validate(&self) -> Result<()> {
        if !(self.step0 > 0.0) {
            return Err(Error::InvalidParam(format!("step0 must be positive, got {}", self.step0)));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidParam(format!("shrink must lie in (0,1), got {}", self.shrink)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParam(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParam("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FlowFlags {
    /// the run was forced outside the existence region
    pub outside_existence: bool,
    /// between-regime mass where `|i_0(c)| < 1e-4 c^2`, so the vanishing
    /// state competes with the minimizer
    pub near_threshold: bool,
    /// the final state changes sign beyond 1e-8 of its maximum
    pub sign_changing: bool,
    /// backtracking could not decrease the energy any further
    pub stalled: bool,
}

#[derive(Debug, Clone)]
pub struct MinimizerResult {
    pub u: Field,
    pub breakdown: EnergyBreakdown,
    pub multiplier: f64,
    pub proj_grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub flags: FlowFlags,
}

fn renormalize(u: &mut Field, c: f64, boundary: &[usize]) -> Result<()> {
    for &j in boundary {
        u.values_mut()[j] = 0.0;
    }
    let norm = u.l2_norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NonFinite("state collapsed to zero during renormalization".into()));
    }
    u.scale(c / norm);
    Ok(())
}

fn initial_state(
    grid: &Arc<Grid>,
    params: &ProblemParams,
    cfg: &FlowConfig,
    gs: Option<&GroundState>,
) -> Result<Field> {
    let mut u = match &cfg.init {
        Init::Gaussian { width } => {
            if !(*width > 0.0) {
                return Err(Error::InvalidParam(format!("gaussian width must be positive, got {width}")));
            }
            let w2 = 2.0 * width * width;
            Field::from_fn(Arc::clone(grid), |x| (-x * x / w2).exp())?
        }
        Init::TheoryProfile => {
            let gs = gs.ok_or_else(|| {
                Error::InvalidParam("theory-profile init needs a ground state".into())
            })?;
            let v = theory::minimizer_profile(params, gs)?;
            Field::from_fn(Arc::clone(grid), |x| v.sample_at(x))?
        }
        Init::WarmStart(f) => {
            if *f.grid().as_ref() != *grid.as_ref() {
                return Err(Error::GridMismatch);
            }
            f.clone()
        }
    };
    renormalize(&mut u, params.c, &grid.boundary_indices())?;
    Ok(u)
}

/// Minimize `I_V` over the mass sphere `|u|_2 = c`.
///
/// Iterates `u <- renormalize(u - tau * grad I_V(u))` with backtracking on
/// `tau`, stopping when the projected gradient norm falls below
/// `tol * max(1, |E|)`.  The energy sequence is monotone by construction and
/// asserted on every accepted step.
pub fn minimize(
    grid: &Arc<Grid>,
    params: &ProblemParams,
    pot: &Potential,
    cfg: &FlowConfig,
    gs: Option<&GroundState>,
) -> Result<MinimizerResult> {
    cfg.validate()?;
    if grid.dim() != params.dim {
        return Err(Error::InvalidParam("grid/params dimension mismatch".into()));
    }

    let mut flags = FlowFlags::default();
    let admissible = theory::flow_admissible(params, !pot.is_zero())?;
    if !admissible {
        if cfg.allow_outside_existence {
            flags.outside_existence = true;
        } else {
            return Err(Error::OutsideExistence(format!(
                "no minimizer exists for c = {} in this regime; set allow_outside_existence for exploratory runs",
                params.c
            )));
        }
    }
    if theory::regime(params.dim, params.p) == Regime::Between && params.b > 0.0 {
        let i0 = match theory::solve_mc(params) {
            Ok(sol) => theory::i0_of(params, sol.m_c)?,
            Err(Error::OutsideExistence(_)) => 0.0,
            Err(e) => return Err(e),
        };
        flags.near_threshold = i0.abs() < 1e-4 * params.c * params.c;
    }

    let boundary = grid.boundary_indices();
    let c = params.c;
    let mut u = initial_state(grid, params, cfg, gs)?;
    let mut e_curr = energy(&u, params, pot)?;
    if !e_curr.total.is_finite() {
        return Err(Error::NonFinite("energy at the initial state".into()));
    }

    let mut tau = cfg.step0;
    let mut streak = 0usize;
    let mut iterations = 0usize;
    let mut converged = false;
    let mut proj_grad_norm = f64::NAN;

    while iterations < cfg.max_iter {
        let grad = gradient(&u, params, pot)?;
        let pairing = grad.inner(&u)?;
        let mut proj = grad.clone();
        {
            let factor = pairing / (c * c);
            let uv = u.values();
            for (g, ui) in proj.values_mut().iter_mut().zip(uv) {
                *g -= factor * ui;
            }
        }
        proj_grad_norm = proj.l2_norm();
        if proj_grad_norm <= cfg.tol * e_curr.total.abs().max(1.0) {
            converged = true;
            break;
        }

        // backtracking: shrink tau until the energy strictly decreases
        let mut accepted = false;
        while tau >= 1e-18 * cfg.step0 {
            let mut trial = u.step(&grad, tau)?;
            if renormalize(&mut trial, c, &boundary).is_err() {
                tau *= cfg.shrink;
                continue;
            }
            let e_trial = energy(&trial, params, pot)?;
            if e_trial.total.is_nan() {
                return Err(Error::NonFinite(format!(
                    "energy became NaN at iteration {iterations} (tau = {tau:.3e})"
                )));
            }
            // acceptance of a step is exactly the monotonicity guarantee
            if e_trial.total < e_curr.total {
                u = trial;
                e_curr = e_trial;
                accepted = true;
                streak += 1;
                if streak >= 5 {
                    tau = (1.5 * tau).min(cfg.step0);
                    streak = 0;
                }
                break;
            }
            tau *= cfg.shrink;
            streak = 0;
        }
        iterations += 1;
        if !accepted {
            flags.stalled = true;
            // no descent direction at this resolution; report the state as-is
            converged = proj_grad_norm <= cfg.tol * e_curr.total.abs().max(1.0);
            break;
        }
    }

    let multiplier = multiplier_estimate(&u, params, pot)?;
    let max = u.max_abs();
    if max > 0.0 {
        let min = u.values().iter().cloned().fold(f64::INFINITY, f64::min);
        let pos = u.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        flags.sign_changing = min < -1e-8 * max && pos > 1e-8 * max;
    }

    Ok(MinimizerResult {
        u,
        breakdown: e_curr,
        multiplier,
        proj_grad_norm,
        iterations,
        converged,
        flags,
    })
}

/// Solve an ascending list of masses, warm-starting each run from the
/// previous minimizer rescaled to the new mass.  Per-mass failures are
/// recorded without aborting the sweep.
pub fn continuation_sweep(
    grid: &Arc<Grid>,
    params_base: &ProblemParams,
    pot: &Potential,
    c_list: &[f64],
    cfg: &FlowConfig,
    gs: Option<&GroundState>,
) -> Result<Vec<(f64, Result<MinimizerResult>)>> {
    if c_list.is_empty() {
        return Err(Error::InvalidParam("empty mass list".into()));
    }
    if c_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParam("mass list must be strictly ascending".into()));
    }
    let mut out = Vec::with_capacity(c_list.len());
    let mut warm: Option<Field> = None;
    for &c in c_list {
        let params = params_base.with_c(c);
        let mut cfg_c = cfg.clone();
        if let Some(prev) = &warm {
            cfg_c.init = Init::WarmStart(prev.clone());
        }
        let res = minimize(grid, &params, pot, &cfg_c, gs);
        if let Ok(r) = &res {
            warm = Some(r.u.clone());
        }
        out.push((c, res));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{pohozaev_residual, PotentialSpec};
    use crate::grid::Geometry;
    use crate::ground_state;

    fn quick_cfg() -> FlowConfig {
        FlowConfig { tol: 1e-6, max_iter: 60_000, ..FlowConfig::default() }
    }

    #[test]
    fn minimizer_matches_theory_n1_p3() {
        let gs = ground_state::compute(1, 3.0).unwrap();
        let grid = Grid::new(1, Geometry::Line, 30.0, 1201).unwrap();
        let pot = PotentialSpec::Zero.on_grid(&grid).unwrap();
        let params = ProblemParams::new(1.0, 1.0, 3.0, 1, 1.0, gs.mass()).unwrap();
        let res = minimize(&grid, &params, &pot, &quick_cfg(), Some(&gs)).unwrap();

        let m = theory::solve_mc(&params).unwrap().m_c;
        let i0 = theory::i0_of(&params, m).unwrap();
        let mu = theory::mu_of(&params, m).unwrap();
        assert!(
            ((res.breakdown.total - i0) / i0).abs() < 1e-2,
            "energy {} vs i0 {i0}",
            res.breakdown.total
        );
        let g = res.u.grad_norm_sq();
        assert!(((g - m * m) / (m * m)).abs() < 1e-2, "kinetic {g} vs {}", m * m);
        assert!(((res.multiplier - mu) / mu).abs() < 2e-2, "rho {} vs mu {mu}", res.multiplier);

        // mass constraint to near machine precision
        assert!(((res.u.l2_norm() - 1.0) as f64).abs() < 1e-10);
        // the converged state is single-signed and near-critical
        assert!(!res.flags.sign_changing);
        assert!(pohozaev_residual(&res.u, &params).unwrap() < 1e-2);
        // stationarity: grad - rho u has the projected-gradient norm
        let grad = gradient(&res.u, &params, &pot).unwrap();
        let el = grad.step(&res.u, res.multiplier).unwrap();
        assert!(
            (el.l2_norm() - res.proj_grad_norm).abs() < 1e-8 * res.proj_grad_norm.max(1e-30),
            "Euler-Lagrange defect differs from the projected gradient norm"
        );
    }

    #[test]
    fn theory_profile_init_is_already_near_critical() {
        let gs = ground_state::compute(1, 3.0).unwrap();
        let grid = Grid::new(1, Geometry::Line, 40.0, 2001).unwrap();
        let pot = PotentialSpec::Zero.on_grid(&grid).unwrap();
        let params = ProblemParams::new(1.0, 1.0, 3.0, 1, 2.0, gs.mass()).unwrap();
        let cfg = FlowConfig {
            init: Init::TheoryProfile,
            max_iter: 50,
            tol: 1e-10,
            ..FlowConfig::default()
        };
        let first = minimize(&grid, &params, &pot, &FlowConfig { max_iter: 1, ..cfg.clone() }, Some(&gs)).unwrap();
        let last = minimize(&grid, &params, &pot, &cfg, Some(&gs)).unwrap();
        let drop = first.breakdown.total - last.breakdown.total;
        assert!(
            drop.abs() < 1e-8 * last.breakdown.total.abs().max(1.0),
            "theory profile moved by {drop} over 50 iterations"
        );
    }

    #[test]
    fn minimizer_matches_theory_n2_p3() {
        // the two-dimensional radial measure path through the same flow
        // the c = 1 minimizer is wide (kinetic level m_c ~ 0.125, spatial
        // scale c/m_c = 8 with decay rate 0.18), so the domain must be large
        let gs = ground_state::compute(2, 3.0).unwrap();
        let grid = Grid::new(2, Geometry::Radial, 160.0, 1601).unwrap();
        let pot = PotentialSpec::Zero.on_grid(&grid).unwrap();
        let params = ProblemParams::new(1.0, 1.0, 3.0, 2, 1.0, gs.mass()).unwrap();
        let cfg = FlowConfig {
            init: Init::TheoryProfile,
            tol: 1e-6,
            max_iter: 40_000,
            ..FlowConfig::default()
        };
        let res = minimize(&grid, &params, &pot, &cfg, Some(&gs)).unwrap();
        let m = theory::solve_mc(&params).unwrap().m_c;
        let i0 = theory::i0_of(&params, m).unwrap();
        assert!(
            ((res.breakdown.total - i0) / i0).abs() < 1e-2,
            "energy {} vs i0 {i0}",
            res.breakdown.total
        );
        let g = res.u.grad_norm_sq();
        assert!(((g - m * m) / (m * m)).abs() < 1e-2, "kinetic {g} vs {}", m * m);
    }

    #[test]
    fn below_threshold_has_no_negative_energy_state() {
        // N = 3, p = 4, c = 0.5 c_*: i_0 = 0 and the flow cannot go below
        let gs = ground_state::compute(3, 4.0).unwrap();
        let params0 = ProblemParams::new(1.0, 1.0, 4.0, 3, 1.0, gs.mass()).unwrap();
        let cs = theory::c_star(&params0).unwrap();
        let grid = Grid::new(3, Geometry::Radial, 300.0, 2001).unwrap();
        let pot = PotentialSpec::Zero.on_grid(&grid).unwrap();
        let params = params0.with_c(0.5 * cs);
        let cfg = FlowConfig {
            allow_outside_existence: true,
            init: Init::Gaussian { width: 10.0 },
            max_iter: 5_000,
            tol: 1e-6,
            ..FlowConfig::default()
        };
        let res = minimize(&grid, &params, &pot, &cfg, Some(&gs)).unwrap();
        assert!(res.flags.outside_existence);
        assert!(res.breakdown.total >= -1e-3, "energy {}", res.breakdown.total);
    }

    #[test]
    fn existence_gate_errors_without_override() {
        let gs_mass = 7.0068;
        let params0 = ProblemParams::new(1.0, 1.0, 4.0, 3, 1.0, gs_mass).unwrap();
        let cs = theory::c_star(&params0).unwrap();
        let grid = Grid::new(3, Geometry::Radial, 50.0, 501).unwrap();
        let pot = PotentialSpec::Zero.on_grid(&grid).unwrap();
        let params = params0.with_c(0.5 * cs);
        let res = minimize(&grid, &params, &pot, &FlowConfig::default(), None);
        assert!(matches!(res, Err(Error::OutsideExistence(_))));
    }

    #[test]
    fn continuation_matches_theory_and_checks_order() {
        let gs = ground_state::compute(1, 3.0).unwrap();
        let grid = Grid::new(1, Geometry::Line, 30.0, 1201).unwrap();
        let pot = PotentialSpec::Zero.on_grid(&grid).unwrap();
        let base = ProblemParams::new(1.0, 1.0, 3.0, 1, 1.0, gs.mass()).unwrap();

        assert!(continuation_sweep(&grid, &base, &pot, &[2.0, 1.0], &quick_cfg(), None).is_err());

        let sweep = continuation_sweep(&grid, &base, &pot, &[1.0, 2.0, 5.0], &quick_cfg(), Some(&gs)).unwrap();
        for (c, res) in &sweep {
            let res = res.as_ref().expect("sweep entry failed");
            let params = base.with_c(*c);
            let m = theory::solve_mc(&params).unwrap().m_c;
            let i0 = theory::i0_of(&params, m).unwrap();
            assert!(
                ((res.breakdown.total - i0) / i0).abs() < 1e-2,
                "c={c}: {} vs {i0}",
                res.breakdown.total
            );
        }

        // a single-element sweep is exactly one minimize call
        let single = continuation_sweep(&grid, &base, &pot, &[1.0], &quick_cfg(), Some(&gs)).unwrap();
        let direct = minimize(&grid, &base, &pot, &quick_cfg(), Some(&gs)).unwrap();
        let (c, res) = &single[0];
        assert_eq!(*c, 1.0);
        assert_eq!(res.as_ref().unwrap().breakdown.total, direct.breakdown.total);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = FlowConfig { shrink: 1.5, ..FlowConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = FlowConfig { step0: 0.0, ..FlowConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
