//! Lyapunov exponent `L(f) = integral of log |f'|_sph` against the measure of
//! maximal entropy, sampled along random backward orbits.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{nondegenerate_map, EvaluatedMap, HomogeneousFamily};
use crate::error::{DegenError, Result};
use crate::numerics::roots::roots_c64;
use crate::numerics::ExtendedComplex;

/// Independent backward orbits; each gets its own ChaCha stream.
pub const PATHS: u64 = 16;
pub const DEFAULT_BURN_IN: usize = 64;
const ROOT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub burn_in: usize,
    pub seed: u64,
}

/// The map in double precision, as a homogeneous pair.
#[derive(Clone, Debug)]
struct MapC64 {
    d: usize,
    p: Vec<Complex64>,
    q: Vec<Complex64>,
}

fn form(c: &[Complex64], z: Complex64, w: Complex64) -> Complex64 {
    let d = c.len() - 1;
    let mut acc = c[d];
    let mut wp = Complex64::new(1.0, 0.0);
    for i in (0..d).rev() {
        wp *= w;
        acc = acc * z + c[i] * wp;
    }
    acc
}

/// `(dF/dz, dF/dw)` of one form.
fn form_grad(c: &[Complex64], z: Complex64, w: Complex64) -> (Complex64, Complex64) {
    let d = c.len() - 1;
    let mut dz = Complex64::new(0.0, 0.0);
    let mut dw = Complex64::new(0.0, 0.0);
    for (i, ci) in c.iter().enumerate() {
        if i >= 1 {
            dz += ci * i as f64 * z.powu(i as u32 - 1) * w.powu((d - i) as u32);
        }
        if i < d {
            dw += ci * (d - i) as f64 * z.powu(i as u32) * w.powu((d - i - 1) as u32);
        }
    }
    (dz, dw)
}

impl MapC64 {
    fn from_map(m: &EvaluatedMap) -> Self {
        let conv = |v: &[ExtendedComplex]| v.iter().map(|c| c.to_c64()).collect();
        MapC64 { d: m.degree, p: conv(&m.p), q: conv(&m.q) }
    }

    /// `log |f'|_sph` at `[z : w]` via `|det DF| |x|^2 / (d |F(x)|^2)`.
    fn log_sph_derivative(&self, x: (Complex64, Complex64)) -> f64 {
        let (z, w) = x;
        let (pz, pw) = form_grad(&self.p, z, w);
        let (qz, qw) = form_grad(&self.q, z, w);
        let det = pz * qw - pw * qz;
        let fp = form(&self.p, z, w);
        let fq = form(&self.q, z, w);
        let nx = z.norm_sqr() + w.norm_sqr();
        let nf = fp.norm_sqr() + fq.norm_sqr();
        det.norm().ln() + nx.ln() - (self.d as f64).ln() - nf.ln()
    }

    /// The `d` preimages of `[a : b]`, roots of `b P - a Q`, found in the
    /// affine chart where that form keeps full degree.
    fn preimages(&self, y: (Complex64, Complex64)) -> Result<Vec<(Complex64, Complex64)>> {
        let (a, b) = y;
        let r: Vec<Complex64> = self.p.iter().zip(&self.q).map(|(p, q)| b * p - a * q).collect();
        let one = Complex64::new(1.0, 0.0);
        if r[self.d].norm() >= r[0].norm() {
            Ok(roots_c64(&r, ROOT_TOL)?.into_iter().map(|z| (z, one)).collect())
        } else {
            // in the chart z = 1 the coefficient of w^k is r[d - k]
            let rev: Vec<Complex64> = r.iter().rev().cloned().collect();
            Ok(roots_c64(&rev, ROOT_TOL)?.into_iter().map(|w| (one, w)).collect())
        }
    }
}

fn unit(x: (Complex64, Complex64)) -> (Complex64, Complex64) {
    let n = (x.0.norm_sqr() + x.1.norm_sqr()).sqrt();
    (x.0 / n, x.1 / n)
}

fn run_path(map: &MapC64, path: u64, steps: usize, burn_in: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    let start = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let mut x = unit((start, Complex64::new(1.0, 0.0)));
    let mut out = Vec::with_capacity(steps);
    for k in 0..burn_in + steps {
        let pre = map.preimages(x)?;
        let next = unit(pre[rng.random_range(0..pre.len())]);
        if k >= burn_in {
            out.push(map.log_sph_derivative(next));
        }
        x = next;
    }
    Ok(out)
}

pub fn lyapunov(fam: &HomogeneousFamily, t: &ExtendedComplex, samples: usize, burn_in: usize, seed: u64) -> Result<LyapunovEstimate> {
    let map = nondegenerate_map(fam, t, 128)?;
    lyapunov_map(&map, samples, burn_in, seed)
}

/// Estimate for a single map; samples are split across [`PATHS`] streams and
/// reduced in path order, so the result is independent of thread scheduling.
pub fn lyapunov_map(map: &EvaluatedMap, samples: usize, burn_in: usize, seed: u64) -> Result<LyapunovEstimate> {
    if samples < 2 {
        return Err(DegenError::Precondition("need at least two samples".into()));
    }
    let m = MapC64::from_map(map);
    let base = samples / PATHS as usize;
    let extra = samples % PATHS as usize;
    let per_path: Vec<Vec<f64>> = (0..PATHS)
        .into_par_iter()
        .map(|path| {
            let steps = base + usize::from((path as usize) < extra);
            run_path(&m, path, steps, burn_in, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = per_path.into_iter().flatten().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DegenError::RootFinder("backward orbit reached a critical point".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(LyapunovEstimate { mean, std_error: (var / n).sqrt(), samples, burn_in, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(p: &[f64], q: &[f64]) -> EvaluatedMap {
        let c = |v: &[f64]| v.iter().map(|&x| ExtendedComplex::from_f64(128, x, 0.0)).collect();
        EvaluatedMap { degree: p.len() - 1, p: c(p), q: c(q), prec: 128 }
    }

    #[test]
    fn spherical_derivative_of_square_on_circle() {
        // |f'|_sph = 2 on the unit circle for z^2
        let m = MapC64::from_map(&map(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]));
        let x = unit((Complex64::from_polar(1.0, 0.7), Complex64::new(1.0, 0.0)));
        assert!((m.log_sph_derivative(x) - 2f64.ln()).abs() < 1e-14);
        // z = 0 is critical
        assert!(m.log_sph_derivative((Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))) == f64::NEG_INFINITY);
    }

    #[test]
    fn preimages_map_back() {
        let m = MapC64::from_map(&map(&[-2.0, 0.0, 1.0], &[1.0, 0.0, 0.0]));
        for y in [(Complex64::new(0.3, 0.1), Complex64::new(1.0, 0.0)), (Complex64::new(1.0, 0.0), Complex64::new(1e-3, 0.0))] {
            for x in m.preimages(y).unwrap() {
                let img = (form(&m.p, x.0, x.1), form(&m.q, x.0, x.1));
                let cross = img.0 * y.1 - img.1 * y.0;
                assert!(cross.norm() < 1e-8 * (img.0.norm() + img.1.norm()));
            }
        }
    }

    #[test]
    fn deterministic_and_consistent() {
        let m = map(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]);
        let a = lyapunov_map(&m, 2000, 32, 7).unwrap();
        assert_eq!(a, lyapunov_map(&m, 2000, 32, 7).unwrap());
        assert!((a.mean - 2f64.ln()).abs() < 0.05);
        assert!(a.mean > -3.0 * a.std_error);
    }
}
