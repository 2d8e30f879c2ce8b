//! The constrained energy
//! `I_V(u) = (1/2)∫(a|∇u|² + V u²) + (b/4)(∫|∇u|²)² − (1/p)∫|u|^p`,
//! its exact discrete gradient, trapping potentials, multiplier estimates,
//! the dilation identity residual and the mass-preserving scaling.

use crate::error::{Error, Result};
use crate::grid::{Field, Geometry, Grid};
use crate::theory::ProblemParams;
use crate::util::odd_pow;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Trapping potentials: nonnegative, normalized to `inf V = 0`, growing
/// toward the truncation boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    Harmonic { omega: f64 },
    Power { s: f64, kappa: f64 },
    Tabulated { path: PathBuf },
}

impl PotentialSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            PotentialSpec::Zero => "zero",
            PotentialSpec::Harmonic { .. } => "harmonic",
            PotentialSpec::Power { .. } => "power",
            PotentialSpec::Tabulated { .. } => "tabulated",
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PotentialSpec::Zero)
    }

    /// Sample the potential on a grid and validate the trapping conditions.
    pub fn on_grid(&self, grid: &Arc<Grid>) -> Result<Potential> {
        let (values, shift) = match self {
            PotentialSpec::Zero => (vec![0.0; grid.len()], 0.0),
            PotentialSpec::Harmonic { omega } => {
                if !(*omega > 0.0) {
                    return Err(Error::InvalidPotential(format!("omega must be positive, got {omega}")));
                }
                (grid.nodes().iter().map(|&x| omega * x * x).collect(), 0.0)
            }
            PotentialSpec::Power { s, kappa } => {
                if !(*s > 0.0 && *kappa > 0.0) {
                    return Err(Error::InvalidPotential(format!(
                        "power potential needs s > 0 and kappa > 0, got s={s}, kappa={kappa}"
                    )));
                }
                (grid.nodes().iter().map(|&x| kappa * x.abs().powf(*s)).collect(), 0.0)
            }
            PotentialSpec::Tabulated { path } => load_table(path, grid)?,
        };
        let pot = Potential { grid: Arc::clone(grid), values, shift, zero: self.is_zero() };
        pot.validate()
    }
}

fn load_table(path: &Path, grid: &Arc<Grid>) -> Result<(Vec<f64>, f64)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some("V-TABLE v1") => {}
        other => {
            return Err(Error::InvalidPotential(format!(
                "expected `V-TABLE v1` header, got {other:?}"
            )))
        }
    }
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (x, v) = match (cols.next(), cols.next()) {
            (Some(x), Some(v)) => (
                x.parse::<f64>().map_err(|e| Error::InvalidPotential(format!("line {}: {e}", k + 2)))?,
                v.parse::<f64>().map_err(|e| Error::InvalidPotential(format!("line {}: {e}", k + 2)))?,
            ),
            _ => return Err(Error::InvalidPotential(format!("line {}: need two columns", k + 2))),
        };
        if let Some(&last) = xs.last() {
            if x <= last {
                return Err(Error::InvalidPotential(format!(
                    "first column must be strictly increasing (line {})",
                    k + 2
                )));
            }
        }
        if v < 0.0 {
            return Err(Error::InvalidPotential(format!("negative value {v} at line {}", k + 2)));
        }
        xs.push(x);
        vs.push(v);
    }
    if xs.len() < 2 {
        return Err(Error::InvalidPotential("table needs at least two rows".into()));
    }
    let lo = match grid.geometry() {
        Geometry::Line => -grid.extent(),
        Geometry::Radial => 0.0,
    };
    if xs[0] > lo || *xs.last().unwrap() < grid.extent() {
        return Err(Error::InvalidPotential(format!(
            "table covers [{}, {}] but the grid needs [{lo}, {}]",
            xs[0],
            xs.last().unwrap(),
            grid.extent()
        )));
    }
    let interp = |x: f64| -> f64 {
        let j = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1);
        let t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        vs[j - 1] * (1.0 - t) + vs[j] * t
    };
    let mut values: Vec<f64> = grid.nodes().iter().map(|&x| interp(x)).collect();
    // normalize so inf V = 0 over the grid; the shift is reported upward
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    for v in &mut values {
        *v -= min;
    }
    Ok((values, min))
}

/// A potential sampled on a grid.
#[derive(Debug, Clone)]
pub struct Potential {
    grid: Arc<Grid>,
    values: Vec<f64>,
    /// normalization subtracted from a tabulated potential
    shift: f64,
    zero: bool,
}

impl Potential {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn shift(&self) -> f64 {
        self.shift
    }
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    fn validate(self) -> Result<Potential> {
        let n = self.grid.len();
        if let Some(bad) = self.values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidPotential(format!("value {bad} out of range")));
        }
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let scale = self.values.iter().cloned().fold(0.0f64, f64::max).max(1.0);
        if min > 1e-8 * scale {
            return Err(Error::InvalidPotential(format!(
                "inf V = {min} not within 1e-8 of zero; grids should contain the minimum of V"
            )));
        }
        if !self.zero {
            // desk-scale surrogate for V -> infinity: the boundary dominates
            // the interior quartiles
            let q = n / 4;
            let ok = match self.grid.geometry() {
                Geometry::Radial => self.values[n - 1] > self.values[q],
                Geometry::Line => {
                    self.values[0] > self.values[q] && self.values[n - 1] > self.values[n - 1 - q]
                }
            };
            if !ok {
                return Err(Error::InvalidPotential(
                    "potential does not grow toward the truncation boundary".into(),
                ));
            }
        }
        Ok(self)
    }
}

/// Term-by-term decomposition of `I_V`.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBreakdown {
    /// `(a/2) ∫|∇u|²`
    pub kinetic_a: f64,
    /// `(b/4) (∫|∇u|²)²`
    pub kirchhoff_b: f64,
    /// `(1/2) ∫ V u²`
    pub potential: f64,
    /// `(1/p) ∫ |u|^p`
    pub nonlinear: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn build(kinetic_a: f64, kirchhoff_b: f64, potential: f64, nonlinear: f64) -> Result<EnergyBreakdown> {
        let total = kinetic_a + kirchhoff_b + potential - nonlinear;
        for (name, v) in [
            ("kinetic", kinetic_a),
            ("kirchhoff", kirchhoff_b),
            ("potential", potential),
            ("nonlinear", nonlinear),
            ("total", total),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{name} energy component")));
            }
        }
        Ok(EnergyBreakdown { kinetic_a, kirchhoff_b, potential, nonlinear, total })
    }
}

fn check_setup(u: &Field, params: &ProblemParams, pot: &Potential) -> Result<()> {
    if !Arc::ptr_eq(u.grid(), pot.grid()) && *u.grid().as_ref() != *pot.grid().as_ref() {
        return Err(Error::GridMismatch);
    }
    if u.grid().dim() != params.dim {
        return Err(Error::InvalidParam(format!(
            "grid dim {} vs params dim {}",
            u.grid().dim(),
            params.dim
        )));
    }
    Ok(())
}

/// Evaluate `I_V(u)` by quadrature.
pub fn energy(u: &Field, params: &ProblemParams, pot: &Potential) -> Result<EnergyBreakdown> {
    check_setup(u, params, pot)?;
    let g = u.grad_norm_sq();
    let vterm: f64 = u
        .values()
        .iter()
        .zip(pot.values())
        .zip(u.grid().node_weights())
        .map(|((u, v), w)| u * u * v * w)
        .sum();
    let pterm = u.lp_norm_pow(params.p)?;
    EnergyBreakdown::build(
        0.5 * params.a * g,
        0.25 * params.b * g * g,
        0.5 * vterm,
        pterm / params.p,
    )
}

/// Exact gradient of the discrete energy in the quadrature inner product:
/// `(a + b∫|∇u|²)(−Δu) + V u − |u|^{p−2}u`.
pub fn gradient(u: &Field, params: &ProblemParams, pot: &Potential) -> Result<Field> {
    check_setup(u, params, pot)?;
    let g = u.grad_norm_sq();
    let coeff = params.a + params.b * g;
    let lap = u.laplacian();
    let pm1 = params.p - 1.0;
    let values: Vec<f64> = u
        .values()
        .iter()
        .zip(lap.values())
        .zip(pot.values())
        .map(|((&ui, &li), &vi)| -coeff * li + vi * ui - odd_pow(ui, pm1))
        .collect();
    Field::new(Arc::clone(u.grid()), values)
}

/// Lagrange-multiplier estimate
/// `ρ = [(a + b g) g + ∫V u² − ∫|u|^p] / |u|₂²` with `g = ∫|∇u|²`.
pub fn multiplier_estimate(u: &Field, params: &ProblemParams, pot: &Potential) -> Result<f64> {
    check_setup(u, params, pot)?;
    let c_sq = u.l2_norm_sq();
    if c_sq == 0.0 {
        return Err(Error::ZeroField);
    }
    let g = u.grad_norm_sq();
    let vterm: f64 = u
        .values()
        .iter()
        .zip(pot.values())
        .zip(u.grid().node_weights())
        .map(|((u, v), w)| u * u * v * w)
        .sum();
    let pterm = u.lp_norm_pow(params.p)?;
    Ok(((params.a + params.b * g) * g + vterm - pterm) / c_sq)
}

/// Relative defect of the dilation identity
/// `a∫|∇u|² + b(∫|∇u|²)² = (N(p−2)/2p) ∫|u|^p`, which vanishes at critical
/// points of the zero-potential problem.
pub fn pohozaev_residual(u: &Field, params: &ProblemParams) -> Result<f64> {
    if u.grid().dim() != params.dim {
        return Err(Error::InvalidParam("grid/params dimension mismatch".into()));
    }
    if u.l2_norm_sq() == 0.0 {
        return Err(Error::ZeroField);
    }
    let g = u.grad_norm_sq();
    let lhs = params.a * g + params.b * g * g;
    let nd = params.dim as f64;
    let rhs = nd * (params.p - 2.0) / (2.0 * params.p) * u.lp_norm_pow(params.p)?;
    Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()))
}

/// Mass-preserving dilation `u^t(x) = t^{N/2} u(t x)`, resampled on the same
/// grid by cubic interpolation with zero extension.  Errors out when mass is
/// visibly lost, i.e. the scaled field is unresolved or truncated.
pub fn scale_mass_preserving(u: &Field, t: f64) -> Result<Field> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParam(format!("dilation factor must be positive, got {t}")));
    }
    let grid = u.grid();
    let amp = t.powf(grid.dim() as f64 / 2.0);
    let values: Vec<f64> = grid.nodes().iter().map(|&x| amp * u.sample_at(t * x)).collect();
    let scaled = Field::new(Arc::clone(grid), values)?;
    let before = u.l2_norm();
    if before == 0.0 {
        return Ok(scaled);
    }
    let after = scaled.l2_norm();
    let defect = ((after - before) / before).abs();
    if defect > 1e-6 {
        return Err(Error::Unresolved(format!(
            "mass defect {defect:.3e} after dilation by {t}; refine or enlarge the grid"
        )));
    }
    Ok(scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground_state;
    use crate::theory;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn params(a: f64, b: f64, p: f64, dim: usize) -> ProblemParams {
        ProblemParams::new(a, b, p, dim, 1.0, 1.0).unwrap()
    }

    fn zero_pot(grid: &Arc<Grid>) -> Potential {
        PotentialSpec::Zero.on_grid(grid).unwrap()
    }

    #[test]
    fn zero_field_has_zero_energy_and_gradient() {
        let grid = Grid::new(1, Geometry::Line, 10.0, 201).unwrap();
        let u = Field::zeros(Arc::clone(&grid));
        let pr = params(1.0, 1.0, 3.0, 1);
        let pot = zero_pot(&grid);
        let e = energy(&u, &pr, &pot).unwrap();
        assert_eq!(e.total, 0.0);
        assert_eq!(e.kinetic_a + e.kirchhoff_b + e.potential + e.nonlinear, 0.0);
        let g = gradient(&u, &pr, &pot).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn breakdown_is_consistent_and_total_matches() {
        let grid = Grid::new(1, Geometry::Line, 20.0, 1001).unwrap();
        let u = Field::from_fn(Arc::clone(&grid), |x| (-0.5 * x * x).exp()).unwrap();
        let pr = params(1.3, 0.7, 3.5, 1);
        let pot = PotentialSpec::Harmonic { omega: 1.0 }.on_grid(&grid).unwrap();
        let e = energy(&u, &pr, &pot).unwrap();
        assert_abs_diff_eq!(
            e.total,
            e.kinetic_a + e.kirchhoff_b + e.potential - e.nonlinear,
            epsilon = 0.0
        );
        assert!(e.kinetic_a >= 0.0 && e.kirchhoff_b >= 0.0 && e.potential >= 0.0);
        // I_V >= I_0 since the potential component is nonnegative
        let e0 = energy(&u, &pr, &zero_pot(&grid)).unwrap();
        assert!(e.total >= e0.total);
    }

    #[test]
    fn energy_at_ground_state_reduces_algebraically() {
        // at u = Q_p with a = 1: total = (b/4) t^2 with t = |Q_p|_2^2
        let gs = ground_state::compute(1, 3.0).unwrap();
        let pr = ProblemParams::new(1.0, 2.0, 3.0, 1, gs.mass(), gs.mass()).unwrap();
        let pot = zero_pot(gs.grid());
        let e = energy(gs.profile(), &pr, &pot).unwrap();
        let t = gs.mass_sq();
        let expected = 0.25 * pr.b * t * t;
        assert!(
            ((e.total - expected) / expected).abs() < 1e-3,
            "{} vs {}",
            e.total,
            expected
        );
    }

    fn smooth_random(grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> Field {
        let c1: f64 = rng.gen_range(-2.0..2.0);
        let c2: f64 = rng.gen_range(-2.0..2.0);
        let w1: f64 = rng.gen_range(0.5..2.0);
        let w2: f64 = rng.gen_range(0.5..2.0);
        let x1: f64 = rng.gen_range(-3.0..3.0);
        let x2: f64 = rng.gen_range(-3.0..3.0);
        Field::from_fn(Arc::clone(grid), |x| {
            c1 * (-(x - x1).powi(2) / (2.0 * w1 * w1)).exp()
                + c2 * (-(x - x2).powi(2) / (2.0 * w2 * w2)).exp()
        })
        .unwrap()
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = Grid::new(1, Geometry::Line, 15.0, 601).unwrap();
        let rgrid = Grid::new(3, Geometry::Radial, 15.0, 601).unwrap();
        let eps = 1e-5;
        for trial in 0..50 {
            let (g, pr, pot): (&Arc<Grid>, ProblemParams, Potential) = if trial % 2 == 0 {
                // alternate the local limit b = 0 with an active nonlocal term
                let pr = if trial % 4 == 0 {
                    params(0.7, 0.0, 4.0, 1)
                } else {
                    params(1.0, 1.0, 3.0, 1)
                };
                let pot = if trial % 3 == 0 {
                    PotentialSpec::Harmonic { omega: 0.5 }.on_grid(&grid).unwrap()
                } else {
                    zero_pot(&grid)
                };
                (&grid, pr, pot)
            } else {
                let pr = params(1.0, 2.0, 3.5, 3);
                let pot = if trial % 3 == 0 {
                    PotentialSpec::Power { s: 2.0, kappa: 1.0 }.on_grid(&rgrid).unwrap()
                } else {
                    zero_pot(&rgrid)
                };
                (&rgrid, pr, pot)
            };
            let u = smooth_random(g, &mut rng);
            let delta = smooth_random(g, &mut rng);
            let grad = gradient(&u, &pr, &pot).unwrap();
            let pairing = grad.inner(&delta).unwrap();
            let ep = energy(&u.step(&delta, -eps).unwrap(), &pr, &pot).unwrap().total;
            let em = energy(&u.step(&delta, eps).unwrap(), &pr, &pot).unwrap().total;
            let fd = (ep - em) / (2.0 * eps);
            let scale = pairing.abs().max(1.0);
            assert!(
                ((fd - pairing) / scale).abs() < 1e-6,
                "trial {trial}: fd {fd} vs pairing {pairing}"
            );
        }
    }

    #[test]
    fn ground_state_solves_its_equation_in_gradient_form() {
        // -k lap Q + l Q - |Q|^{p-2} Q = 0 at the computed profile
        let gs = ground_state::compute(1, 3.0).unwrap();
        assert!(gs.equation_residual() < 1e-5, "residual {}", gs.equation_residual());
        let gs = ground_state::compute(3, 4.0).unwrap();
        assert!(gs.equation_residual() < 1e-5, "residual {}", gs.equation_residual());
    }

    #[test]
    fn multiplier_at_theory_profile_matches_mu() {
        let gs = ground_state::compute(1, 3.0).unwrap();
        let pr = ProblemParams::new(1.0, 1.0, 3.0, 1, 1.0, gs.mass()).unwrap();
        let v = theory::minimizer_profile(&pr, &gs).unwrap();
        let pot = zero_pot(v.grid());
        let rho = multiplier_estimate(&v, &pr, &pot).unwrap();
        let m = theory::solve_mc(&pr).unwrap().m_c;
        let mu = theory::mu_of(&pr, m).unwrap();
        assert!(((rho - mu) / mu).abs() < 1e-2, "rho {rho} vs mu {mu}");

        // no scaling invariance is claimed for the multiplier
        let mut double = v.clone();
        double.scale(2.0);
        let rho2 = multiplier_estimate(&double, &pr, &pot).unwrap();
        assert!((rho2 - rho).abs() > 1e-3);

        let z = Field::zeros(Arc::clone(v.grid()));
        assert!(matches!(multiplier_estimate(&z, &pr, &pot), Err(Error::ZeroField)));
    }

    #[test]
    fn theory_profile_checks() {
        // mass, kinetic level and energy of the relabeled minimizer
        let gs = ground_state::compute(1, 3.0).unwrap();
        for &c in &[1.0, 2.0, 5.0] {
            let pr = ProblemParams::new(1.0, 1.0, 3.0, 1, c, gs.mass()).unwrap();
            let v = theory::minimizer_profile(&pr, &gs).unwrap();
            assert!(((v.l2_norm() - c) / c).abs() < 1e-6, "mass at c={c}");
            let m = theory::solve_mc(&pr).unwrap().m_c;
            let g = v.grad_norm_sq();
            assert!(
                ((g - m * m) / (m * m)).abs() < 1e-3,
                "kinetic {g} vs m^2 {} at c={c}",
                m * m
            );
            let e = energy(&v, &pr, &zero_pot(v.grid())).unwrap();
            let i0 = theory::i0_of(&pr, m).unwrap();
            assert!(((e.total - i0) / i0).abs() < 1e-3, "energy {} vs i0 {i0}", e.total);
        }
    }

    #[test]
    fn pohozaev_residual_cases() {
        let gs = ground_state::compute(1, 3.0).unwrap();
        let pr = ProblemParams::new(1.0, 1.0, 3.0, 1, 1.0, gs.mass()).unwrap();
        let v = theory::minimizer_profile(&pr, &gs).unwrap();
        assert!(pohozaev_residual(&v, &pr).unwrap() < 1e-3);

        // a generic field is far from critical
        let grid = Grid::new(1, Geometry::Line, 20.0, 2001).unwrap();
        let gauss = Field::from_fn(Arc::clone(&grid), |x| (-x * x).exp()).unwrap();
        assert!(pohozaev_residual(&gauss, &pr).unwrap() > 0.05);

        // at the mass-critical exponent Q_p is itself critical for a=1, b=0
        let gs6 = ground_state::compute(1, 6.0).unwrap();
        let pr6 = ProblemParams::new(1.0, 0.0, 6.0, 1, 1.0, gs6.mass()).unwrap();
        assert!(pohozaev_residual(gs6.profile(), &pr6).unwrap() < 1e-3);
    }

    #[test]
    fn mass_preserving_scaling() {
        let grid = Grid::new(1, Geometry::Line, 40.0, 8001).unwrap();
        let u = Field::from_fn(Arc::clone(&grid), |x| (-0.2 * x * x).exp()).unwrap();

        let same = scale_mass_preserving(&u, 1.0).unwrap();
        let mut max_err = 0.0f64;
        for (a, b) in same.values().iter().zip(u.values()) {
            max_err = max_err.max((a - b).abs());
        }
        assert!(max_err < 1e-10, "identity dilation deviates by {max_err}");

        let scaled = scale_mass_preserving(&u, 2.0).unwrap();
        assert!(((scaled.l2_norm() - u.l2_norm()) / u.l2_norm()).abs() < 1e-6);
        let ratio = scaled.grad_norm_sq() / u.grad_norm_sq();
        assert!((ratio - 4.0).abs() < 1e-4 * 4.0, "kinetic ratio {ratio}");

        // an absurd dilation does not silently degrade
        assert!(matches!(
            scale_mass_preserving(&u, 5e3),
            Err(Error::Unresolved(_))
        ));
        assert!(scale_mass_preserving(&u, -1.0).is_err());
    }

    #[test]
    fn dilation_energy_identity() {
        // I_0(u^t) = (a/2) t^2 g + (b/4) t^4 g^2 - t^{N(p-2)/2} P / p
        for (dim, p, geom) in [(1usize, 3.0f64, Geometry::Line), (3, 4.0, Geometry::Radial)] {
            let grid = Grid::new(dim, geom, 60.0, 24001).unwrap();
            let u = Field::from_fn(Arc::clone(&grid), |x| (-0.03 * x * x).exp()).unwrap();
            let pr = ProblemParams::new(0.8, 1.2, p, dim, 1.0, 1.0).unwrap();
            let pot = zero_pot(&grid);
            let g = u.grad_norm_sq();
            let pn = u.lp_norm_pow(p).unwrap();
            for &t in &[0.5, 1.0, 2.0, 4.0] {
                let ut = scale_mass_preserving(&u, t).unwrap();
                let lhs = energy(&ut, &pr, &pot).unwrap().total;
                let rhs = 0.5 * pr.a * t * t * g + 0.25 * pr.b * t.powi(4) * g * g
                    - t.powf(dim as f64 * (p - 2.0) / 2.0) * pn / p;
                assert!(
                    ((lhs - rhs) / rhs.abs().max(1e-10)).abs() < 1e-3,
                    "dim={dim} t={t}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn harmonic_potential_on_even_grid_is_rejected() {
        // an even node count misses x = 0, so inf V over the grid is not ~0
        let grid = Grid::new(1, Geometry::Line, 10.0, 100).unwrap();
        assert!(PotentialSpec::Harmonic { omega: 1.0 }.on_grid(&grid).is_err());
        let grid = Grid::new(1, Geometry::Line, 10.0, 101).unwrap();
        assert!(PotentialSpec::Harmonic { omega: 1.0 }.on_grid(&grid).is_ok());
    }

    #[test]
    fn tabulated_potential_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.txt");
        let mut text = String::from("V-TABLE v1\n");
        let offset = 5.0;
        let mut x = -12.0;
        while x <= 12.0 {
            text.push_str(&format!("{x} {}\n", x * x + offset));
            x += 0.05;
        }
        std::fs::write(&path, &text).unwrap();

        let grid = Grid::new(1, Geometry::Line, 10.0, 401).unwrap();
        let pot = PotentialSpec::Tabulated { path: path.clone() }.on_grid(&grid).unwrap();
        // the +5 offset is normalized away and reported
        assert_abs_diff_eq!(pot.shift(), offset, epsilon = 1e-9);
        let reference = PotentialSpec::Harmonic { omega: 1.0 }.on_grid(&grid).unwrap();
        let max_err = pot
            .values()
            .iter()
            .zip(reference.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(max_err < 1e-3, "piecewise-linear defect {max_err}");

        // header and monotonicity contracts
        std::fs::write(dir.path().join("bad1.txt"), "nope\n0 0\n1 1\n").unwrap();
        assert!(PotentialSpec::Tabulated { path: dir.path().join("bad1.txt") }
            .on_grid(&grid)
            .is_err());
        std::fs::write(
            dir.path().join("bad2.txt"),
            "V-TABLE v1\n-12 1\n-12 2\n12 3\n",
        )
        .unwrap();
        assert!(PotentialSpec::Tabulated { path: dir.path().join("bad2.txt") }
            .on_grid(&grid)
            .is_err());
    }
}
