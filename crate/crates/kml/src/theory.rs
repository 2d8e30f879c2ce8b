//! Closed-form predictions for the mass-constrained Kirchhoff problem with
//! zero potential: the optimal kinetic level `m_c`, the constrained infimum
//! `i_0(c)`, the Lagrange multiplier `mu_c`, the threshold mass `c_*`, and
//! the existence region of minimizers.
//!
//! Everything here is driven by the stationarity relation
//!
//! ```text
//!   a + b m^2 = (N(p-2)/4) c^{(2N-p(N-2))/2} |Q_p|_2^{2-p} m^{(N(p-2)-4)/2}
//! ```
//!
//! whose energy-minimizing positive root is `m_c`, together with
//! `i_0(c) = a D1 m_c^2 - b D2 m_c^4`.

use crate::error::{Error, Result};
use crate::ground_state::{validate_exponent, GroundState};
use crate::grid::{Field, Grid};
use crate::util::abs_pow;

/// Problem data `(a, b, p, N, c)` plus the ground-state mass `|Q_p|_2`.
#[derive(Debug, Clone, Copy)]
pub struct ProblemParams {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub dim: usize,
    pub c: f64,
    pub qp_mass: f64,
}

impl ProblemParams {
    /// `b = 0` is admitted so the local (Schrödinger) limit stays testable;
    /// the closed-form operations that divide by `b` reject it themselves.
    pub fn new(a: f64, b: f64, p: f64, dim: usize, c: f64, qp_mass: f64) -> Result<ProblemParams> {
        validate_exponent(dim, p)?;
        for (name, v) in [("a", a), ("c", c), ("qp_mass", qp_mass)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParam(format!("{name} must be positive, got {v}")));
            }
        }
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidParam(format!("b must be nonnegative, got {b}")));
        }
        Ok(ProblemParams { a, b, p, dim, c, qp_mass })
    }

    fn require_kirchhoff(&self) -> Result<()> {
        if self.b > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParam("this closed form needs b > 0".into()))
        }
    }

    pub fn with_c(&self, c: f64) -> ProblemParams {
        ProblemParams { c, ..*self }
    }
}

/// Position of `p` relative to the two critical exponents `(2N+4)/N` and
/// `(2N+8)/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `2 < p < (2N+4)/N`: minimizers for every mass.
    Subcritical,
    /// `p = (2N+4)/N`: minimizers above `a^{N/4} |Q_p|_2`.
    MassCritical,
    /// `(2N+4)/N < p < (2N+8)/N`: minimizers from `c_*` on.
    Between,
    /// `p = (2N+8)/N`: `i_0` finite up to a critical mass, never attained.
    KirchhoffCritical,
    /// `p > (2N+8)/N`: `i_0 = -infinity` for every mass.
    Supercritical,
}

const EXPONENT_EQ_TOL: f64 = 1e-9;

pub fn mass_critical_exponent(dim: usize) -> f64 {
    (2.0 * dim as f64 + 4.0) / dim as f64
}

pub fn kirchhoff_critical_exponent(dim: usize) -> f64 {
    (2.0 * dim as f64 + 8.0) / dim as f64
}

pub fn regime(dim: usize, p: f64) -> Regime {
    let p1 = mass_critical_exponent(dim);
    let p2 = kirchhoff_critical_exponent(dim);
    if (p - p1).abs() <= EXPONENT_EQ_TOL * p1 {
        Regime::MassCritical
    } else if (p - p2).abs() <= EXPONENT_EQ_TOL * p2 {
        Regime::KirchhoffCritical
    } else if p < p1 {
        Regime::Subcritical
    } else if p < p2 {
        Regime::Between
    } else {
        Regime::Supercritical
    }
}

/// `D1 = (N(p-2)-4)/(2N(p-2))`, `D2 = (2N+8-Np)/(4N(p-2))`; requires
/// `2 < p < (2N+8)/N` so that `D2 > 0`.
pub fn coefficients(dim: usize, p: f64) -> Result<(f64, f64)> {
    validate_exponent(dim, p)?;
    let nd = dim as f64;
    if p >= kirchhoff_critical_exponent(dim) - EXPONENT_EQ_TOL {
        return Err(Error::Regime(format!(
            "D2 > 0 needs p < (2N+8)/N = {}, got p = {p}",
            kirchhoff_critical_exponent(dim)
        )));
    }
    let d1 = (nd * (p - 2.0) - 4.0) / (2.0 * nd * (p - 2.0));
    let d2 = (2.0 * nd + 8.0 - nd * p) / (4.0 * nd * (p - 2.0));
    Ok((d1, d2))
}

/// Result of the `m_c` solve; `at_threshold` marks masses sitting exactly on
/// the boundary of the existence region.
#[derive(Debug, Clone, Copy)]
pub struct McSolution {
    pub m_c: f64,
    pub at_threshold: bool,
}

/// Prefactor and exponent of the right-hand side of the stationarity
/// relation: `a + b m^2 = K m^q`.
fn stationarity_rhs(params: &ProblemParams) -> (f64, f64) {
    let nd = params.dim as f64;
    let p = params.p;
    let k = nd * (p - 2.0) / 4.0 * params.c.powf((2.0 * nd - p * (nd - 2.0)) / 2.0)
        / abs_pow(params.qp_mass, p - 2.0);
    let q = (nd * (p - 2.0) - 4.0) / 2.0;
    (k, q)
}

fn stationarity_gap(params: &ProblemParams, m: f64) -> f64 {
    let (k, q) = stationarity_rhs(params);
    params.a + params.b * m * m - k * m.powf(q)
}

/// Relative residual of the stationarity relation at `m`.
pub fn stationarity_residual(params: &ProblemParams, m: f64) -> f64 {
    stationarity_gap(params, m).abs() / (params.a + params.b * m * m)
}

fn bisect_root(params: &ProblemParams, mut lo: f64, mut hi: f64) -> f64 {
    let flo = stationarity_gap(params, lo);
    debug_assert!(flo * stationarity_gap(params, hi) <= 0.0);
    for _ in 0..240 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = stationarity_gap(params, mid);
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    // secant polish
    let mut x0 = lo;
    let mut x1 = hi.max(lo * (1.0 + 1e-15));
    for _ in 0..4 {
        let (f0, f1) = (stationarity_gap(params, x0), stationarity_gap(params, x1));
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() || x2 <= 0.0 {
            break;
        }
        x0 = x1;
        x1 = x2;
    }
    x1
}

/// Positive roots of the stationarity relation, bracketed by sign changes on
/// a log-spaced scan.  The window is generous: extreme mass sweeps push the
/// root far beyond the [1e-8, 1e8] a desk run would meet.
fn scan_roots(params: &ProblemParams) -> Vec<f64> {
    const SCAN_POINTS: usize = 12001;
    let (lo_exp, hi_exp) = (-30.0f64, 30.0f64);
    let mut roots = Vec::new();
    let mut prev_m = 10f64.powf(lo_exp);
    let mut prev_f = stationarity_gap(params, prev_m);
    for i in 1..SCAN_POINTS {
        let m = 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (SCAN_POINTS - 1) as f64);
        let f = stationarity_gap(params, m);
        if prev_f == 0.0 {
            roots.push(prev_m);
        } else if prev_f * f < 0.0 {
            roots.push(bisect_root(params, prev_m, m));
        }
        prev_m = m;
        prev_f = f;
    }
    roots
}

/// The optimal kinetic level: the positive root of the stationarity relation
/// minimizing `g(m) = a D1 m^2 - b D2 m^4` (ties broken toward larger `m`).
pub fn solve_mc(params: &ProblemParams) -> Result<McSolution> {
    params.require_kirchhoff()?;
    let reg = regime(params.dim, params.p);
    match reg {
        Regime::KirchhoffCritical | Regime::Supercritical => {
            return Err(Error::Regime(format!(
                "m_c is defined for 2 < p < (2N+8)/N, got p = {}",
                params.p
            )));
        }
        Regime::MassCritical => {
            // closed form m_c = b^{-1/2} [ (c/|Q|_2)^{4/N} - a ]^{1/2}
            let x = (params.c / params.qp_mass).powf(4.0 / params.dim as f64);
            let rel = (x - params.a) / params.a;
            if rel < -1e-12 {
                return Err(Error::OutsideExistence(format!(
                    "mass-critical threshold a^{{N/4}}|Q|_2 not reached (c = {})",
                    params.c
                )));
            }
            if rel.abs() <= 1e-12 {
                return Ok(McSolution { m_c: 0.0, at_threshold: true });
            }
            let closed = ((x - params.a) / params.b).sqrt();
            // cross-check against the generic root-finder
            let roots = scan_roots(params);
            let scanned = roots
                .into_iter()
                .fold(None::<f64>, |best, r| match best {
                    Some(b) if (b - closed).abs() < (r - closed).abs() => Some(b),
                    _ => Some(r),
                })
                .ok_or_else(|| Error::NonConvergence("mass-critical root scan found nothing".into()))?;
            if ((scanned - closed) / closed).abs() > 1e-8 {
                return Err(Error::NonConvergence(format!(
                    "closed form {closed} and root-finder {scanned} disagree"
                )));
            }
            return Ok(McSolution { m_c: closed, at_threshold: false });
        }
        Regime::Subcritical | Regime::Between => {}
    }

    let (d1, d2) = coefficients(params.dim, params.p)?;
    if reg == Regime::Between {
        let cs = c_star(params)?;
        if params.c < cs * (1.0 - 1e-10) {
            return Err(Error::OutsideExistence(format!(
                "c = {} below the threshold c_* = {cs}",
                params.c
            )));
        }
        if (params.c - cs).abs() <= 1e-10 * cs {
            // tangency: double root m_{c_*} = sqrt(a D1 / (b D2))
            let m = (params.a * d1 / (params.b * d2)).sqrt();
            return Ok(McSolution { m_c: m, at_threshold: true });
        }
    }

    let mut roots = scan_roots(params);
    if roots.is_empty() && reg == Regime::Between {
        // just above c_* the dip of h below zero can be narrower than the
        // scan spacing; bracket the two roots around the analytic minimum
        let (k, q) = stationarity_rhs(params);
        let m_min = (k * q / (2.0 * params.b)).powf(1.0 / (2.0 - q));
        if stationarity_gap(params, m_min) < 0.0 {
            roots.push(bisect_root(params, 1e-30, m_min));
            roots.push(bisect_root(params, m_min, 1e30));
        }
    }
    let energy = |m: f64| params.a * d1 * m * m - params.b * d2 * m.powi(4);
    let mut best: Option<f64> = None;
    for r in roots {
        best = match best {
            None => Some(r),
            Some(b) => {
                let (eb, er) = (energy(b), energy(r));
                if er < eb || (er == eb && r > b) {
                    Some(r)
                } else {
                    Some(b)
                }
            }
        };
    }
    let m = best.ok_or_else(|| {
        Error::OutsideExistence(format!(
            "no positive stationary kinetic level for c = {}",
            params.c
        ))
    })?;
    Ok(McSolution { m_c: m, at_threshold: false })
}

/// `i_0(c) = a D1 m_c^2 - b D2 m_c^4`.
pub fn i0_of(params: &ProblemParams, m_c: f64) -> Result<f64> {
    let (d1, d2) = coefficients(params.dim, params.p)?;
    Ok(params.a * d1 * m_c * m_c - params.b * d2 * m_c.powi(4))
}

/// Lagrange multiplier of the zero-potential minimizer,
/// `mu_c = -((2N-p(N-2))/4) c^{p-2-N(p-2)/2} |Q_p|_2^{2-p} m_c^{N(p-2)/2} < 0`.
pub fn mu_of(params: &ProblemParams, m_c: f64) -> Result<f64> {
    coefficients(params.dim, params.p)?;
    if m_c == 0.0 {
        return Ok(0.0);
    }
    let nd = params.dim as f64;
    let p = params.p;
    Ok(-(2.0 * nd - p * (nd - 2.0)) / 4.0
        * params.c.powf(p - 2.0 - nd * (p - 2.0) / 2.0)
        * m_c.powf(nd * (p - 2.0) / 2.0)
        / abs_pow(params.qp_mass, p - 2.0))
}

/// Threshold mass below which `i_0(c) = 0`: zero in the subcritical range,
/// `a^{N/4} |Q_p|_2` at the mass-critical exponent, and the explicit
/// expression in between.
pub fn c_star(params: &ProblemParams) -> Result<f64> {
    let nd = params.dim as f64;
    let p = params.p;
    match regime(params.dim, p) {
        Regime::Subcritical => Ok(0.0),
        Regime::MassCritical => Ok(params.a.powf(nd / 4.0) * params.qp_mass),
        Regime::Between => {
            params.require_kirchhoff()?;
            let denom = 2.0 * nd + 8.0 - nd * p;
            let inner = 2.0 * params.a / params.b * (nd * (p - 2.0) - 4.0) / denom;
            let base = 4.0 * params.a * abs_pow(params.qp_mass, p - 2.0) / denom
                * inner.powf((4.0 - nd * (p - 2.0)) / 4.0);
            Ok(base.powf(2.0 / (2.0 * nd - p * (nd - 2.0))))
        }
        _ => Err(Error::Regime(format!(
            "c_* is defined for 2 < p < (2N+8)/N, got p = {p}"
        ))),
    }
}

/// How the existence region looks for these parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionDescriptor {
    /// `T = (0, +inf)`.
    AllMasses,
    /// `T = (c_*, +inf)`, open at the mass-critical threshold.
    OpenThreshold { c_star: f64 },
    /// `T = [c_*, +inf)`, closed at the threshold.
    ClosedThreshold { c_star: f64 },
    /// `p = (2N+8)/N`: `i_0 = 0` up to `c_max`, `-inf` beyond, no minimizer.
    CriticalMass { c_max: f64, i0_finite: bool },
    /// `p > (2N+8)/N`: `i_0 = -inf` for every mass, no minimizer.
    UnboundedBelow,
}

#[derive(Debug, Clone, Copy)]
pub struct RegionInfo {
    /// whether `i_0(c)` has a minimizer at this mass
    pub in_t: bool,
    pub descriptor: RegionDescriptor,
}

/// Classify `c` against the existence region `T` of zero-potential
/// minimizers.
pub fn existence_region(params: &ProblemParams) -> Result<RegionInfo> {
    let nd = params.dim as f64;
    match regime(params.dim, params.p) {
        Regime::Subcritical => Ok(RegionInfo { in_t: true, descriptor: RegionDescriptor::AllMasses }),
        Regime::MassCritical => {
            let cs = c_star(params)?;
            Ok(RegionInfo {
                in_t: params.c > cs * (1.0 + 1e-12),
                descriptor: RegionDescriptor::OpenThreshold { c_star: cs },
            })
        }
        Regime::Between => {
            let cs = c_star(params)?;
            Ok(RegionInfo {
                in_t: params.c >= cs * (1.0 - 1e-10),
                descriptor: RegionDescriptor::ClosedThreshold { c_star: cs },
            })
        }
        Regime::KirchhoffCritical => {
            let c_max = (0.5 * params.b * params.qp_mass.powf(8.0 / nd)).powf(nd / (8.0 - 2.0 * nd));
            Ok(RegionInfo {
                in_t: false,
                descriptor: RegionDescriptor::CriticalMass {
                    c_max,
                    i0_finite: params.c <= c_max * (1.0 + 1e-12),
                },
            })
        }
        Regime::Supercritical => {
            Ok(RegionInfo { in_t: false, descriptor: RegionDescriptor::UnboundedBelow })
        }
    }
}

/// Whether the constrained flow has a minimizer to find, which depends on
/// the potential: a confining potential restores existence for every mass in
/// the subcritical ranges.
pub fn flow_admissible(params: &ProblemParams, has_potential: bool) -> Result<bool> {
    let info = existence_region(params)?;
    Ok(match info.descriptor {
        RegionDescriptor::AllMasses
        | RegionDescriptor::OpenThreshold { .. }
        | RegionDescriptor::ClosedThreshold { .. } => {
            if has_potential {
                true
            } else {
                info.in_t
            }
        }
        RegionDescriptor::CriticalMass { i0_finite, .. } => has_potential && i0_finite,
        RegionDescriptor::UnboundedBelow => false,
    })
}

/// The unique zero-potential minimizer
/// `v_c(x) = (c/|Q_p|_2) (m_c/c)^{N/2} Q_p((m_c/c) x)`, realized by
/// relabeling the ground-state grid so no interpolation error enters.
/// Uses the discrete `|Q_p|_2`, making the discrete mass exactly `c`.
pub fn minimizer_profile(params: &ProblemParams, gs: &GroundState) -> Result<Field> {
    if gs.dim() != params.dim || (gs.p() - params.p).abs() > EXPONENT_EQ_TOL * params.p {
        return Err(Error::InvalidParam("ground state does not match parameters".into()));
    }
    if ((gs.mass() - params.qp_mass) / params.qp_mass).abs() > 1e-6 {
        return Err(Error::InvalidParam(format!(
            "params carry |Q|_2 = {} but the ground state has {}",
            params.qp_mass,
            gs.mass()
        )));
    }
    let info = existence_region(params)?;
    if !info.in_t {
        return Err(Error::OutsideExistence(format!(
            "c = {} admits no zero-potential minimizer",
            params.c
        )));
    }
    let sol = solve_mc(params)?;
    if sol.m_c <= 0.0 {
        return Err(Error::OutsideExistence("degenerate minimizer at the threshold".into()));
    }
    let scale = params.c / sol.m_c;
    let old = gs.grid();
    let grid = Grid::new(params.dim, old.geometry(), old.extent() * scale, old.len())?;
    let amp = params.c / gs.mass() * (sol.m_c / params.c).powf(params.dim as f64 / 2.0);
    let values = gs.profile().values().iter().map(|&q| amp * q).collect();
    Field::new(grid, values)
}

/// Large-mass behavior of `m_c / c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticClass {
    /// `2 < p < 4`: the ratio tends to zero.
    RatioToZero,
    /// `p = 4`: finite limit `(N / (2 b |Q_4|_2^2))^{1/(4-N)}`.
    FiniteLimit(f64),
    /// `4 < p < (2N+8)/N`: dichotomy resolved empirically — observed to vanish.
    EmpiricalToZero,
    /// `4 < p < (2N+8)/N`: dichotomy resolved empirically — observed to diverge.
    EmpiricalToInfinity,
}

/// Classify `m_c / c` as `c` grows; the `c` carried by `params` is ignored.
pub fn asymptotic_class(params: &ProblemParams) -> Result<AsymptoticClass> {
    params.require_kirchhoff()?;
    let p = params.p;
    let nd = params.dim as f64;
    if regime(params.dim, p) == Regime::KirchhoffCritical
        || regime(params.dim, p) == Regime::Supercritical
    {
        return Err(Error::Regime(format!(
            "asymptotics require 2 < p < (2N+8)/N, got p = {p}"
        )));
    }
    if (p - 4.0).abs() <= EXPONENT_EQ_TOL * 4.0 {
        let limit = (nd / (2.0 * params.b * params.qp_mass * params.qp_mass)).powf(1.0 / (4.0 - nd));
        return Ok(AsymptoticClass::FiniteLimit(limit));
    }
    if p < 4.0 {
        return Ok(AsymptoticClass::RatioToZero);
    }
    // 4 < p < (2N+8)/N: evaluate the ratio on a geometric sweep and report
    // the branch actually observed
    let cs = c_star(params)?;
    let c0 = (10.0 * cs).max(10.0);
    let mut ratios = Vec::new();
    for k in 0..7 {
        let c = c0 * 2f64.powi(k);
        let sol = solve_mc(&params.with_c(c))?;
        ratios.push(sol.m_c / c);
    }
    let first = ratios[0];
    let last = *ratios.last().unwrap();
    if last > 10.0 * first {
        Ok(AsymptoticClass::EmpiricalToInfinity)
    } else if last < 0.1 * first {
        Ok(AsymptoticClass::EmpiricalToZero)
    } else {
        Err(Error::NonConvergence(format!(
            "asymptotic branch not resolved on the sweep: ratio {first} -> {last}"
        )))
    }
}

fn rho_limit_guard(dim: usize, p: f64) -> Result<()> {
    validate_exponent(dim, p)?;
    if p >= kirchhoff_critical_exponent(dim) - EXPONENT_EQ_TOL {
        return Err(Error::Regime(format!(
            "rescaled-multiplier limit needs p < (2N+8)/N, got {p}"
        )));
    }
    if (p - 4.0).abs() <= EXPONENT_EQ_TOL * 4.0 {
        return Err(Error::Regime("the rescaled-multiplier limit excludes p = 4".into()));
    }
    Ok(())
}

/// Stated limit of the rescaled multiplier,
/// `-4 |Q_p|_2^{p-2} / (2N - p(N-2))`; undefined at `p = 4`.
///
/// Note: this is the reciprocal of [`rho_limit_derived`], which is what the
/// closed forms actually give and what the numerics reproduce.  Both are
/// kept so the discrepancy stays visible in experiment output.
pub fn rho_limit(dim: usize, p: f64, qp_mass: f64) -> Result<f64> {
    rho_limit_guard(dim, p)?;
    let nd = dim as f64;
    Ok(-4.0 * abs_pow(qp_mass, p - 2.0) / (2.0 * nd - p * (nd - 2.0)))
}

/// Scaled-multiplier constant implied by the closed forms: substituting the
/// `mu_c` expression and the stationarity relation gives
///
/// ```text
///   [(1/c)(c/m_c)^{N/2}]^{p-2} mu_c = -(2N - p(N-2)) / (4 |Q_p|_2^{p-2})
/// ```
///
/// exactly, for every admissible mass — so this constant, not its
/// reciprocal, is the limit the measured multipliers converge to.
pub fn rho_limit_derived(dim: usize, p: f64, qp_mass: f64) -> Result<f64> {
    rho_limit_guard(dim, p)?;
    let nd = dim as f64;
    Ok(-(2.0 * nd - p * (nd - 2.0)) / (4.0 * abs_pow(qp_mass, p - 2.0)))
}
