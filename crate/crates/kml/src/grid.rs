//! Spatial discretization: uniform line / radial grids, quadrature, the
//! discrete Laplacian and the norms every energy integral is built from.
//!
//! The quadrature weights are finite-volume cell measures, so they are
//! strictly positive and sum exactly to the domain volume.  The Laplacian is
//! defined as the exact (negative) derivative of `grad_norm_sq` with respect
//! to the quadrature inner product, which makes every energy-gradient test
//! below hold to machine precision rather than to discretization order.

use crate::error::{Error, Result};
use crate::interp;
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Line,
    Radial,
}

impl Geometry {
    pub fn as_str(&self) -> &'static str {
        match self {
            Geometry::Line => "line",
            Geometry::Radial => "radial",
        }
    }

    pub fn parse(s: &str) -> Result<Geometry> {
        match s {
            "line" => Ok(Geometry::Line),
            "radial" => Ok(Geometry::Radial),
            other => Err(Error::InvalidGrid(format!("unknown geometry `{other}`"))),
        }
    }
}

/// Uniform grid on `[-L, L]` (line) or `[0, R]` (radial, with the surface
/// measure `|S^{N-1}| r^{N-1}` folded into the weights).
#[derive(Debug)]
pub struct Grid {
    dim: usize,
    geometry: Geometry,
    extent: f64,
    n: usize,
    h: f64,
    nodes: Vec<f64>,
    /// Quadrature weight per node; `integrate = sum v_i w_i`.
    node_weights: Vec<f64>,
    /// Measure of the cell `[x_i, x_{i+1}]`, used by the gradient form.
    cell_weights: Vec<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.geometry == other.geometry
            && self.extent == other.extent
            && self.n == other.n
    }
}

fn surface_measure(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => unreachable!("dim validated at construction"),
    }
}

impl Grid {
    pub fn new(dim: usize, geometry: Geometry, extent: f64, n: usize) -> Result<Arc<Grid>> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if geometry == Geometry::Line && dim != 1 {
            return Err(Error::InvalidGrid(format!(
                "line geometry is one-dimensional, got dim={dim}"
            )));
        }
        if !(extent > 0.0) || !extent.is_finite() {
            return Err(Error::InvalidGrid(format!("extent must be positive, got {extent}")));
        }
        if n < 16 {
            return Err(Error::InvalidGrid(format!("need at least 16 nodes, got {n}")));
        }

        let h = match geometry {
            Geometry::Line => 2.0 * extent / (n - 1) as f64,
            Geometry::Radial => extent / (n - 1) as f64,
        };

        let nodes: Vec<f64> = match geometry {
            Geometry::Line => (0..n).map(|i| -extent + i as f64 * h).collect(),
            Geometry::Radial => (0..n).map(|i| i as f64 * h).collect(),
        };

        let (node_weights, cell_weights) = match geometry {
            Geometry::Line => {
                let mut w = vec![h; n];
                w[0] = 0.5 * h;
                w[n - 1] = 0.5 * h;
                (w, vec![h; n - 1])
            }
            Geometry::Radial => {
                let sigma = surface_measure(dim);
                let nd = dim as f64;
                let shell = |lo: f64, hi: f64| sigma * (hi.powi(dim as i32) - lo.powi(dim as i32)) / nd;
                let w = (0..n)
                    .map(|i| {
                        let r = nodes[i];
                        let lo = (r - 0.5 * h).max(0.0);
                        let hi = (r + 0.5 * h).min(extent);
                        shell(lo, hi)
                    })
                    .collect();
                let cw = (0..n - 1).map(|i| shell(nodes[i], nodes[i + 1])).collect();
                (w, cw)
            }
        };

        Ok(Arc::new(Grid {
            dim,
            geometry,
            extent,
            n,
            h,
            nodes,
            node_weights,
            cell_weights,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }
    pub fn extent(&self) -> f64 {
        self.extent
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn spacing(&self) -> f64 {
        self.h
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    /// Total measure of the truncated domain (`2L` or `|B_R|`).
    pub fn volume(&self) -> f64 {
        self.node_weights.iter().sum()
    }

    /// Indices whose value is pinned to zero under the Dirichlet truncation.
    pub fn boundary_indices(&self) -> Vec<usize> {
        match self.geometry {
            Geometry::Line => vec![0, self.n - 1],
            Geometry::Radial => vec![self.n - 1],
        }
    }
}

/// A real scalar function sampled on the nodes of a [`Grid`].
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("field value {bad}")));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Field {
        let n = grid.len();
        Field { grid, values: vec![0.0; n] }
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Field> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Field::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &Field) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Trapezoidal/finite-volume approximation of the integral over the
    /// (truncated) domain, radial measure included.
    pub fn integrate(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.grid.node_weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&self.grid.node_weights)
            .map(|((u, v), w)| u * v * w)
            .sum())
    }

    /// `∫ |u|^p` by quadrature.
    pub fn lp_norm_pow(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParam(format!("p must be >= 1, got {p}")));
        }
        Ok(self
            .values
            .iter()
            .zip(&self.grid.node_weights)
            .map(|(v, w)| crate::util::abs_pow(*v, p) * w)
            .sum())
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.grid.node_weights)
            .map(|(v, w)| v * v * w)
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `∫ |∇u|^2` as the quadratic form of forward differences over cells.
    /// This is the exact quadratic form whose derivative is [`Field::laplacian`].
    pub fn grad_norm_sq(&self) -> f64 {
        let h2 = self.grid.h * self.grid.h;
        self.values
            .windows(2)
            .zip(&self.grid.cell_weights)
            .map(|(uv, cw)| {
                let d = uv[1] - uv[0];
                d * d / h2 * cw
            })
            .sum()
    }

    /// `∫ |∇u|^2` by fourth-order centered differences.  Unlike
    /// [`Field::grad_norm_sq`] this is not the exact quadratic form of the
    /// discrete Laplacian, but it avoids the O(h²) downward bias of forward
    /// differences; the sharp-constant checks need that accuracy.
    pub fn grad_norm_sq_highorder(&self) -> f64 {
        let g = &self.grid;
        let n = g.n;
        let h = g.h;
        let u = &self.values;
        let radial = g.geometry == Geometry::Radial;
        let at = |j: isize| -> f64 {
            if j >= 0 && (j as usize) < n {
                u[j as usize]
            } else if radial && j < 0 {
                u[(-j) as usize]
            } else {
                0.0
            }
        };
        let mut total = 0.0;
        for j in 0..n {
            let ji = j as isize;
            let du = if (2..n - 2).contains(&j) || (radial && j < 2 && n > 4) {
                (at(ji - 2) - 8.0 * at(ji - 1) + 8.0 * at(ji + 1) - at(ji + 2)) / (12.0 * h)
            } else if j == 0 {
                (u[1] - u[0]) / h
            } else if j == n - 1 {
                (u[n - 1] - u[n - 2]) / h
            } else {
                (at(ji + 1) - at(ji - 1)) / (2.0 * h)
            };
            total += du * du * g.node_weights[j];
        }
        total
    }

    /// Polarization of [`Field::grad_norm_sq`]: `∫ ∇u · ∇v`.
    pub fn bilinear_grad(&self, other: &Field) -> Result<f64> {
        self.same_grid(other)?;
        let h2 = self.grid.h * self.grid.h;
        Ok(self
            .values
            .windows(2)
            .zip(other.values.windows(2))
            .zip(&self.grid.cell_weights)
            .map(|((uv, vv), cw)| (uv[1] - uv[0]) * (vv[1] - vv[0]) / h2 * cw)
            .sum())
    }

    /// Discrete Laplacian in flux form.  On interior line nodes this is the
    /// centered second difference; on radial grids it discretizes
    /// `u'' + (N-1)/r u'` with an even reflection at `r = 0` (zero flux) and
    /// the natural closure at the outer Dirichlet boundary.  By construction
    /// `<-laplacian(u), v>_quadrature == bilinear_grad(u, v)` for all fields.
    pub fn laplacian(&self) -> Field {
        let g = &self.grid;
        let n = g.n;
        let h2 = g.h * g.h;
        let u = &self.values;
        let mut out = vec![0.0; n];
        for j in 0..n {
            let flux_right = if j + 1 < n {
                g.cell_weights[j] * (u[j + 1] - u[j])
            } else {
                0.0
            };
            let flux_left = if j > 0 {
                g.cell_weights[j - 1] * (u[j] - u[j - 1])
            } else {
                0.0
            };
            out[j] = (flux_right - flux_left) / (g.node_weights[j] * h2);
        }
        Field { grid: Arc::clone(&self.grid), values: out }
    }

    /// Pointwise evaluation anywhere in the domain by cubic interpolation.
    /// Radial fields are evenly reflected through the origin; points beyond
    /// the truncation boundary evaluate to zero.
    pub fn sample_at(&self, x: f64) -> f64 {
        let g = &self.grid;
        match g.geometry {
            Geometry::Line => {
                if x < -g.extent || x > g.extent {
                    return 0.0;
                }
                let t = (x + g.extent) / g.h;
                interp::cubic_uniform(&self.values, t, false)
            }
            Geometry::Radial => {
                let r = x.abs();
                if r > g.extent {
                    return 0.0;
                }
                interp::cubic_uniform(&self.values, r / g.h, true)
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Location of the maximum of `|u|`, refined by a quadratic fit through
    /// the discrete peak and its neighbors.
    pub fn argmax_abs(&self) -> f64 {
        let (mut idx, mut best) = (0usize, 0.0f64);
        for (i, v) in self.values.iter().enumerate() {
            if v.abs() > best {
                best = v.abs();
                idx = i;
            }
        }
        let g = &self.grid;
        if idx == 0 || idx + 1 == g.n {
            return g.nodes[idx];
        }
        let (ym, y0, yp) = (
            self.values[idx - 1].abs(),
            self.values[idx].abs(),
            self.values[idx + 1].abs(),
        );
        let denom = ym - 2.0 * y0 + yp;
        let delta = if denom.abs() > 1e-300 { 0.5 * (ym - yp) / denom } else { 0.0 };
        g.nodes[idx] + delta.clamp(-0.5, 0.5) * g.h
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }

    /// `self - tau * dir`, leaving both inputs untouched.
    pub fn step(&self, dir: &Field, tau: f64) -> Result<Field> {
        self.same_grid(dir)?;
        let values = self
            .values
            .iter()
            .zip(&dir.values)
            .map(|(u, d)| u - tau * d)
            .collect();
        Ok(Field { grid: Arc::clone(&self.grid), values })
    }
}
