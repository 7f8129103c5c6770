//! Potential grids on uniform meshes and the five-point Laplacian.

use rayon::prelude::*;

use crate::dynamics::PotentialSample;
use crate::error::{DegenError, Result};
use crate::numerics::{ExtendedComplex, ExtendedFloat};

/// Uniform mesh in either `t = x + iy` or log-polar `t = e^(s + i phi)`
/// coordinates. Index `(i, j)` runs over the first and second coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mesh {
    Cartesian { x0: f64, y0: f64, delta: f64, nx: usize, ny: usize },
    LogPolar { s0: f64, phi0: f64, delta: f64, ns: usize, nphi: usize },
}

impl Mesh {
    /// Square Cartesian mesh of `n x n` points on `[lo, hi]^2`.
    pub fn cartesian_square(lo: f64, hi: f64, n: usize) -> Self {
        let delta = (hi - lo) / (n - 1) as f64;
        Mesh::Cartesian { x0: lo, y0: lo, delta, nx: n, ny: n }
    }

    /// `n x n` log-polar mesh on `r_lo <= |t| <= r_hi`; the angular span
    /// equals the radial one so the spacing is uniform, starting at `phi0`.
    pub fn log_polar_square(r_lo: f64, r_hi: f64, phi0: f64, n: usize) -> Self {
        let s0 = r_lo.ln();
        let delta = (r_hi.ln() - s0) / (n - 1) as f64;
        Mesh::LogPolar { s0, phi0, delta, ns: n, nphi: n }
    }

    pub fn dims(&self) -> (usize, usize) {
        match *self {
            Mesh::Cartesian { nx, ny, .. } => (nx, ny),
            Mesh::LogPolar { ns, nphi, .. } => (ns, nphi),
        }
    }

    pub fn delta(&self) -> f64 {
        match *self {
            Mesh::Cartesian { delta, .. } | Mesh::LogPolar { delta, .. } => delta,
        }
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        match *self {
            Mesh::Cartesian { x0, y0, delta, .. } => (x0 + i as f64 * delta, y0 + j as f64 * delta),
            Mesh::LogPolar { s0, phi0, delta, .. } => {
                let r = (s0 + i as f64 * delta).exp();
                let phi = phi0 + j as f64 * delta;
                (r * phi.cos(), r * phi.sin())
            }
        }
    }

    /// Factor turning a coordinate Laplacian into the `t`-plane Laplacian.
    fn jacobian(&self, i: usize) -> f64 {
        match *self {
            Mesh::Cartesian { .. } => 1.0,
            Mesh::LogPolar { s0, delta, .. } => (-2.0 * (s0 + i as f64 * delta)).exp(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PotentialGrid {
    pub mesh: Mesh,
    /// Row-major in `(i, j)`.
    pub samples: Vec<PotentialSample>,
}

impl PotentialGrid {
    /// Evaluates `f` at every mesh point in parallel; samples keep mesh order.
    pub fn evaluate<F>(mesh: Mesh, prec: u32, f: F) -> Result<Self>
    where
        F: Fn(&ExtendedComplex) -> Result<PotentialSample> + Sync,
    {
        let (n1, n2) = mesh.dims();
        let samples = (0..n1 * n2)
            .into_par_iter()
            .map(|k| {
                let (x, y) = mesh.point(k / n2, k % n2);
                f(&ExtendedComplex::from_f64(prec, x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PotentialGrid { mesh, samples })
    }

    /// Grid of a closed-form function, for stencil checks.
    pub fn from_function(mesh: Mesh, prec: u32, g: impl Fn(f64, f64) -> f64) -> Self {
        let (n1, n2) = mesh.dims();
        let samples = (0..n1 * n2)
            .map(|k| {
                let (x, y) = mesh.point(k / n2, k % n2);
                PotentialSample {
                    t: ExtendedComplex::from_f64(prec, x, y),
                    value: ExtendedFloat::from_f64(prec, g(x, y)),
                    depth: 0,
                    tail_bound: ExtendedFloat::zero(prec),
                    precision: prec,
                }
            })
            .collect();
        PotentialGrid { mesh, samples }
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.samples[i * self.mesh.dims().1 + j].value.to_f64()
    }

    pub fn max_tail_bound(&self) -> f64 {
        self.samples.iter().map(|s| s.tail_bound.to_f64()).fold(0.0, f64::max)
    }
}

/// Interior values of `(1/2 pi) Laplacian`, indexed `[i - 1][j - 1]`.
pub fn laplacian_stencil(grid: &PotentialGrid) -> Result<Vec<Vec<f64>>> {
    let (n1, n2) = grid.mesh.dims();
    if n1 < 3 || n2 < 3 {
        return Err(DegenError::Precondition("the five-point stencil needs at least a 3 x 3 grid".into()));
    }
    if grid.samples.len() != n1 * n2 {
        return Err(DegenError::Precondition("grid size does not match its mesh".into()));
    }
    let d2 = grid.mesh.delta().powi(2);
    let g = |i: usize, j: usize| grid.value(i, j);
    Ok((1..n1 - 1)
        .map(|i| {
            (1..n2 - 1)
                .map(|j| {
                    let lap = (g(i + 1, j) + g(i - 1, j) + g(i, j + 1) + g(i, j - 1) - 4.0 * g(i, j)) / d2;
                    lap * grid.mesh.jacobian(i) / (2.0 * std::f64::consts::PI)
                })
                .collect()
        })
        .collect())
}
