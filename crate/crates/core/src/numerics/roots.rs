//! Simultaneous (Aberth–Ehrlich) polynomial root finding with residual
//! certification, in extended precision and in `f64`.

use num_complex::Complex64;

use super::complex::ExtendedComplex;
use super::float::ExtendedFloat;
use super::poly::ParamPoly;
use crate::error::{DegenError, Result};

const MAX_ITERS: usize = 600;

fn horner_c64(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn abs_horner_c64(coeffs: &[Complex64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    // Fujiwara-type radius bound
    let radius = (0..n).map(|k| (coeffs[k].norm() / lead).powf(1.0 / (n - k) as f64)).fold(0.0f64, f64::max).max(1e-3);
    (0..n).map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4)).collect()
}

fn aberth_step_c64(coeffs: &[Complex64], roots: &mut [Complex64]) -> f64 {
    let mut max_step = 0.0f64;
    for k in 0..roots.len() {
        let z = roots[k];
        let (p, dp) = horner_c64(coeffs, z);
        if p == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ratio = p / dp;
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, &zj) in roots.iter().enumerate() {
            if j != k && zj != z {
                sum += 1.0 / (z - zj);
            }
        }
        let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
        if step.is_finite() {
            roots[k] = z - step;
            max_step = max_step.max(step.norm() / (1.0 + z.norm()));
        }
    }
    max_step
}

/// Roots of `sum coeffs[k] z^k` (leading coefficient nonzero), each
/// certified by `|p(z)| <= tol * sum |c_k| |z|^k`.
pub fn roots_c64(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len().checked_sub(1).ok_or_else(|| DegenError::RootFinder("empty polynomial".into()))?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if coeffs[n] == Complex64::new(0.0, 0.0) {
        return Err(DegenError::RootFinder("zero leading coefficient".into()));
    }
    if n == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let mut roots = initial_guesses(coeffs);
    for _ in 0..MAX_ITERS {
        if aberth_step_c64(coeffs, &mut roots) < 1e-15 {
            break;
        }
    }
    for &z in &roots {
        let (p, _) = horner_c64(coeffs, z);
        if !(p.norm() <= tol * abs_horner_c64(coeffs, z.norm())) {
            return Err(DegenError::RootFinder(format!("residual {} at {z} above tolerance", p.norm())));
        }
    }
    Ok(roots)
}

/// Roots of `f` at the working precision of its coefficients, certified by
/// `|f(z)| <= 2^(-p/2) * sum |c_k| |z|^k`.
pub fn roots_extended(f: &ParamPoly) -> Result<Vec<ExtendedComplex>> {
    let n = f.degree();
    let prec = f.prec();
    if n == 0 {
        return Ok(Vec::new());
    }
    let c64: Vec<Complex64> = f.coeffs().iter().map(|c| c.to_c64()).collect();
    let seeds = if c64.iter().all(|c| c.is_finite()) && c64[n] != Complex64::new(0.0, 0.0) {
        let mut r = initial_guesses(&c64);
        for _ in 0..200 {
            if aberth_step_c64(&c64, &mut r) < 1e-14 {
                break;
            }
        }
        r
    } else {
        initial_guesses(&vec![Complex64::new(1.0, 0.0); n + 1])
    };
    let mut roots: Vec<ExtendedComplex> = seeds.iter().map(|&z| ExtendedComplex::from_c64(prec, z)).collect();
    let df = f.derivative();
    let stop = ExtendedFloat::one(prec).mul_2exp(-(prec as i64) + 8);
    for _ in 0..MAX_ITERS {
        let mut max_step = ExtendedFloat::zero(prec);
        for k in 0..n {
            let z = roots[k].clone();
            let p = f.eval(&z);
            if p.is_zero() {
                continue;
            }
            let dp = df.eval(&z);
            if dp.is_zero() {
                roots[k] = &z + &ExtendedComplex::from_f64(prec, 1e-6, 1e-6);
                continue;
            }
            let ratio = &p / &dp;
            let mut sum = ExtendedComplex::zero(prec);
            for (j, zj) in roots.iter().enumerate() {
                let diff = &z - zj;
                if j != k && !diff.is_zero() {
                    sum = &sum + &diff.recip();
                }
            }
            let denom = &ExtendedComplex::one(prec) - &(&ratio * &sum);
            if denom.is_zero() {
                continue;
            }
            let step = &ratio / &denom;
            let rel = step.abs_max_part().div_prec(&(&ExtendedFloat::one(prec) + &z.abs_max_part()), 32);
            if rel > max_step {
                max_step = rel;
            }
            roots[k] = &z - &step;
        }
        if max_step <= stop {
            break;
        }
    }
    let tol = ExtendedFloat::one(prec).mul_2exp(-(prec as i64) / 2);
    for z in &roots {
        let resid = f.eval(z).abs();
        let scale = f.abs_bound(&z.abs());
        if resid > &tol * &scale {
            return Err(DegenError::RootFinder(format!("residual {resid} at {z} above 2^(-p/2) scale")));
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_cubic_roots_c64() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let roots = roots_c64(&[c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-12).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2f64.sqrt()).abs() < 1e-12 && (re[1] - 2f64.sqrt()).abs() < 1e-12);
        // (z - 1)(z - i)(z + 2)
        let roots = roots_c64(&[c(0.0, 2.0), c(-2.0, -1.0), c(1.0, -1.0), c(1.0, 0.0)], 1e-12).unwrap();
        for target in [c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0)] {
            assert!(roots.iter().any(|z| (z - target).norm() < 1e-10));
        }
    }

    #[test]
    fn extended_roots_with_multiplicity() {
        let p = 128;
        let a = ExtendedComplex::from_f64(p, 0.3, -0.2);
        let lin = ParamPoly::new(vec![-&a, ExtendedComplex::one(p)], p);
        let cube = lin.mul(&lin).mul(&lin);
        let roots = roots_extended(&cube).unwrap();
        assert_eq!(roots.len(), 3);
        for z in &roots {
            assert!((z - &a).abs().to_f64() < 1e-10);
        }
        let sq = ParamPoly::from_f64(p, &[-2.0, 0.0, 1.0]);
        let roots = roots_extended(&sq).unwrap();
        let two = ExtendedFloat::from_i64(p, 2);
        for z in &roots {
            let err = (&z.square().re - &two).abs();
            assert!(err < ExtendedFloat::one(p).mul_2exp(-100));
        }
    }
}
