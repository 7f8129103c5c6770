//! Self-check: runs the invariant suites of every module and tabulates the results.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use degen_core::bifurcation::{critical_potential_sum, lyapunov, lyapunov_map, Mesh};
use degen_core::dynamics::form::random_sphere_point;
use degen_core::dynamics::{escape_rate, iteration_identity_check, potential, EvaluatedMap, HomogeneousFamily, Section};
use degen_core::families::{build_quadratic_critical_family, construct_theta, verify_schedule, ContinuedFraction, DipSchedule};
use degen_core::geometry::{chordal, ProjPoint};
use degen_core::numerics::{log_max_norm, ExtendedComplex, ExtendedFloat, TruncatedSeries};
use degen_core::{DegenError, Result};

use crate::config::{RadiiSpec, RunConfig};
use crate::dip::{dip_predict, find_dip_radius, DipContext, DipStatus};
use crate::scan::{read_csv, run_scan, write_csv};
use crate::setup::{build_setup, FamilyKind, PerturbationParams, SectionKind};

pub const SUITES: [&str; 6] = ["numerics", "geometry", "dynamics", "families", "bifurcation", "cli"];

/// Deliberate defects for testing that the suites can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Chordal distance with the cross term's sign flipped.
    Chordal,
}

#[derive(Clone, Debug)]
pub struct CheckRow {
    pub suite: &'static str,
    pub property: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:<12} {:<40} {:<6} {:>8}  {}\n", "suite", "property", "result", "seconds", "detail");
        for r in &self.rows {
            s.push_str(&format!("{:<12} {:<40} {:<6} {:>8.2}  {}\n", r.suite, r.property, if r.pass { "PASS" } else { "FAIL" }, r.seconds, r.detail));
        }
        s
    }
}

type Outcome = Result<(bool, String)>;

const P: u32 = 128;

fn ulps(prec: u32, k: f64) -> ExtendedFloat {
    ExtendedFloat::from_f64(prec, k).mul_2exp(-(prec as i64))
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xc4ec_0000 + tag)
}

fn chordal_with(fault: Fault, p: &ProjPoint, q: &ProjPoint) -> ExtendedFloat {
    match fault {
        Fault::None => chordal(p, q),
        Fault::Chordal => {
            let cross = &(&p.z * &q.w) + &(&p.w * &q.z);
            let d = cross.abs().div_prec(&p.norm2_sqr().mul_prec(&q.norm2_sqr(), P).sqrt(), P);
            ExtendedFloat::one(P).min_ref(&d).clone()
        }
    }
}

fn random_point(r: &mut ChaCha8Rng, prec: u32) -> ProjPoint {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| r.random_range(-3.0..3.0));
        if let Ok(p) = ProjPoint::from_f64(prec, (v[0], v[1]), (v[2], v[3])) {
            return p;
        }
    }
}

fn random_t(r: &mut ChaCha8Rng, lo: f64, hi: f64, prec: u32) -> ExtendedComplex {
    let rad = (r.random_range(lo.ln()..hi.ln())).exp();
    let ang = r.random_range(0.0..std::f64::consts::TAU);
    ExtendedComplex::from_f64(prec, rad * ang.cos(), rad * ang.sin())
}

// numerics

fn exp_log_round_trip() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let e2 = r.random_range(-1_000_000i64..=1_000_000);
        let x = ExtendedFloat::from_f64(P, r.random_range(0.5..1.0)).mul_2exp(e2);
        let back = x.ln().exp();
        let rel = ((&back - &x) / &x).abs();
        // exp amplifies the absolute error of ln x by |ln x|
        let allowed = ulps(P, 8.0 * (1.0 + x.ln().to_f64().abs()));
        worst = worst.max(rel.to_f64() / allowed.to_f64());
        if rel > allowed {
            return Ok((false, format!("exponent {e2}: relative error {}", rel.to_decimal(4))));
        }
    }
    Ok((true, format!("200 samples, worst {worst:.3} of tolerance")))
}

fn series_ring_laws() -> Outcome {
    let mut r = rng(2);
    let order = 10;
    let series = |r: &mut ChaCha8Rng| {
        let c: Vec<ExtendedComplex> = (0..=order).map(|_| ExtendedComplex::from_f64(P, r.random_range(-2.0..2.0), r.random_range(-2.0..2.0))).collect();
        TruncatedSeries::new(c, order, P)
    };
    let l1 = |s: &TruncatedSeries| s.coeffs().iter().fold(ExtendedFloat::zero(P), |a, c| &a + &c.abs());
    for _ in 0..50 {
        let (a, b, c) = (series(&mut r), series(&mut r), series(&mut r));
        let scale2 = &l1(&a) * &l1(&b);
        let scale3 = &scale2 * &l1(&c);
        let diff = |x: &TruncatedSeries, y: &TruncatedSeries| {
            x.coeffs().iter().zip(y.coeffs()).fold(ExtendedFloat::zero(P), |m, (u, v)| m.max_ref(&(u - v).abs()).clone())
        };
        if diff(&a.mul(&b), &b.mul(&a)) > &ulps(P, 8.0) * &scale2 {
            return Ok((false, "commutativity".into()));
        }
        if diff(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))) > &ulps(P, 8.0) * &scale3 {
            return Ok((false, "associativity".into()));
        }
    }
    Ok((true, "50 triples at order 10, 8 ulp of the l1 scale".into()))
}

fn log_max_norm_scaling() -> Outcome {
    let mut r = rng(3);
    for _ in 0..200 {
        let lam = ExtendedComplex::from_polar(
            &ExtendedFloat::from_f64(P, r.random_range(-1000.0..1000.0)).exp(),
            &ExtendedFloat::from_f64(P, r.random_range(0.0..6.3)),
        );
        let v = random_point(&mut r, P);
        let lhs = log_max_norm(&(&lam * &v.z), &(&lam * &v.w))?;
        let rhs = &lam.log_abs() + &log_max_norm(&v.z, &v.w)?;
        let scale = 1.0 + lhs.to_f64().abs();
        if (&lhs - &rhs).abs() > ulps(P, 8.0 * scale) {
            return Ok((false, format!("residual {}", (&lhs - &rhs).abs().to_decimal(4))));
        }
    }
    Ok((true, "200 scalings with |log lambda| <= 1000".into()))
}

// geometry

fn chordal_metric(fault: Fault) -> Outcome {
    let mut r = rng(4);
    let slack = ulps(P, 8.0);
    for i in 0..1000 {
        let (p, q, s) = (random_point(&mut r, P), random_point(&mut r, P), random_point(&mut r, P));
        let pq = chordal_with(fault, &p, &q);
        if (&pq - &chordal_with(fault, &q, &p)).abs() > slack {
            return Ok((false, format!("symmetry fails at triple {i}")));
        }
        if pq > &(&chordal_with(fault, &p, &s) + &chordal_with(fault, &s, &q)) + &slack {
            return Ok((false, format!("triangle inequality fails at triple {i}")));
        }
        if chordal_with(fault, &p, &p) > slack {
            return Ok((false, format!("d(p, p) > 0 at triple {i}")));
        }
    }
    Ok((true, "1000 triples".into()))
}

fn chordal_scaling(fault: Fault) -> Outcome {
    let mut r = rng(5);
    for i in 0..1000 {
        let (p, q) = (random_point(&mut r, P), random_point(&mut r, P));
        let lam =
            ExtendedComplex::from_polar(&ExtendedFloat::from_f64(P, r.random_range(-30.0..30.0)).exp(), &ExtendedFloat::from_f64(P, r.random_range(0.0..6.3)));
        let d = (&chordal_with(fault, &p.scale(&lam)?, &q) - &chordal_with(fault, &p, &q)).abs();
        if d > ulps(P, 8.0) {
            return Ok((false, format!("pair {i}: {}", d.to_decimal(4))));
        }
    }
    Ok((true, "1000 pairs".into()))
}

// dynamics

fn test_families(prec: u32) -> Result<Vec<(&'static str, HomogeneousFamily)>> {
    let g = ContinuedFraction::golden();
    let p = PerturbationParams::default();
    Ok(vec![
        ("rotation", build_setup(&FamilyKind::Rotation, &SectionKind::A, &g, &p, prec)?.family),
        ("quadratic", build_quadratic_critical_family(&g, prec)?.family),
    ])
}

fn escape_homogeneity() -> Outcome {
    let prec = 256;
    let mut r = rng(6);
    let fams = test_families(prec)?;
    for i in 0..100 {
        let (_, fam) = &fams[i % fams.len()];
        let t = random_t(&mut r, 0.05, 0.5, prec);
        let x = random_point(&mut r, prec);
        let lam = ExtendedComplex::from_polar(
            &ExtendedFloat::from_f64(prec, r.random_range(-20.0..20.0)).exp(),
            &ExtendedFloat::from_f64(prec, r.random_range(0.0..6.3)),
        );
        let a = escape_rate(fam, &t, &x, 64, prec)?;
        let b = escape_rate(fam, &t, &x.scale(&lam)?, 64, prec)?;
        let res = (&(&b.value - &a.value) - &lam.log_abs()).abs();
        let bound = &(&a.tail_bound + &b.tail_bound) + &ExtendedFloat::one(prec).mul_2exp(-(prec as i64) + 16);
        if res > bound {
            return Ok((false, format!("sample {i}: residual {}", res.to_decimal(4))));
        }
    }
    Ok((true, "100 samples at 256 bits".into()))
}

fn escape_functional_equation() -> Outcome {
    let prec = 256;
    let mut r = rng(7);
    let fams = test_families(prec)?;
    for i in 0..100 {
        let (_, fam) = &fams[i % fams.len()];
        let t = random_t(&mut r, 0.05, 0.5, prec);
        let x = random_point(&mut r, prec);
        let a = escape_rate(fam, &t, &x, 64, prec)?;
        let b = escape_rate(fam, &t, &fam.evaluate(&t, &x, prec)?, 64, prec)?;
        let d = fam.degree() as i64;
        let res = (&b.value - &a.value.mul_i64(d)).abs();
        if res > a.tail_bound.mul_i64(d + 1) {
            return Ok((false, format!("sample {i}: residual {}", res.to_decimal(4))));
        }
    }
    Ok((true, "100 samples at 256 bits".into()))
}

fn escape_depth_monotone() -> Outcome {
    let mut r = rng(8);
    let fams = test_families(P)?;
    for i in 0..40 {
        let (_, fam) = &fams[i % fams.len()];
        let t = random_t(&mut r, 0.05, 0.5, P);
        let x = random_point(&mut r, P);
        let n1 = r.random_range(8..32);
        let a = escape_rate(fam, &t, &x, n1, P)?;
        let b = escape_rate(fam, &t, &x, n1 + r.random_range(1..32), P)?;
        if (&a.value - &b.value).abs() > a.tail_bound {
            return Ok((false, format!("sample {i}")));
        }
    }
    Ok((true, "40 depth pairs".into()))
}

type MarkedFamily = (String, HomogeneousFamily, Box<dyn Section>, Rational);

/// Built-in (family, section) pairs with their heights.
fn builtin_sections(prec: u32) -> Result<Vec<MarkedFamily>> {
    let g = ContinuedFraction::golden();
    let uni = PerturbationParams { h: (1.0, 0.0), epsilon: 0.25, t_exponent: 1 };
    let cases = [
        (FamilyKind::Power, SectionKind::A, PerturbationParams::default()),
        (FamilyKind::Rotation, SectionKind::A, PerturbationParams::default()),
        (FamilyKind::Quadratic, SectionKind::A, PerturbationParams::default()),
        (FamilyKind::Quadratic, SectionKind::V, PerturbationParams::default()),
        (FamilyKind::Quadratic, SectionKind::CMinus, PerturbationParams::default()),
        (FamilyKind::Unicritical(3), SectionKind::A, uni.clone()),
        (FamilyKind::Unicritical(3), SectionKind::V, uni),
    ];
    let mut out = Vec::new();
    for (k, s, p) in cases {
        let setup = build_setup(&k, &s, &g, &p, prec)?;
        let eta = setup.eta(10, 64, prec)?;
        out.push((format!("{k}/{s}"), setup.family, setup.section, eta));
    }
    Ok(out)
}

fn ring_max(fam: &HomogeneousFamily, s: &dyn Section, eta: &Rational, radius: f64, samples: usize) -> Result<f64> {
    let mut m = f64::NEG_INFINITY;
    for k in 0..samples {
        let a = std::f64::consts::TAU * k as f64 / samples as f64;
        let t = ExtendedComplex::from_f64(P, radius * a.cos(), radius * a.sin());
        m = m.max(potential(fam, s, &t, eta, 40, P)?.value.to_f64());
    }
    Ok(m)
}

fn upper_boundedness() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (name, fam, s, eta) in builtin_sections(P)? {
        let reference = ring_max(&fam, s.as_ref(), &eta, 0.5, 64)?;
        for r in [0.4, 0.2, 0.1, 0.01] {
            let m = ring_max(&fam, s.as_ref(), &eta, r, 64)?;
            worst = worst.max(m - reference);
            if m > reference + 1.0 {
                return Ok((false, format!("{name} at |t| = {r}: {m:.4} > {reference:.4} + 1")));
            }
        }
    }
    Ok((true, format!("7 sections, worst excess {worst:.4}")))
}

fn iteration_formula() -> Outcome {
    let mut r = rng(9);
    let lambda = ContinuedFraction::golden().lambda(P);
    let phi = EvaluatedMap { degree: 1, p: vec![ExtendedComplex::zero(P), lambda], q: vec![ExtendedComplex::one(P), ExtendedComplex::zero(P)], prec: P };
    let h = ExtendedComplex::from_i64(P, -1);
    let mut worst = ExtendedFloat::zero(P);
    let mut done = 0;
    while done < 50 {
        let x = random_sphere_point(&mut r, P);
        let n = r.random_range(0..=5);
        match iteration_identity_check(&phi, &h, n, &x) {
            Ok(res) => {
                worst = worst.max_ref(&res).clone();
                done += 1;
            }
            Err(DegenError::Domain(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok((worst.to_f64() <= 1e-25, format!("50 points, worst {}", worst.to_decimal(3))))
}

// families

fn degeneration_is_real() -> Outcome {
    let mut r = rng(10);
    let g = ContinuedFraction::golden();
    let uni = PerturbationParams { h: (1.0, 0.0), epsilon: 0.25, t_exponent: 1 };
    let fams = [
        build_setup(&FamilyKind::Rotation, &SectionKind::A, &g, &PerturbationParams::default(), P)?.family,
        build_setup(&FamilyKind::Quadratic, &SectionKind::A, &g, &PerturbationParams::default(), P)?.family,
        build_setup(&FamilyKind::Unicritical(3), &SectionKind::A, &g, &uni, P)?.family,
        build_setup(&FamilyKind::Unicritical(4), &SectionKind::A, &g, &uni, P)?.family,
    ];
    for (i, fam) in fams.iter().enumerate() {
        let zero = ExtendedComplex::zero(P);
        if fam.at(&zero, P).check_nondegenerate(&zero).is_ok() {
            return Ok((false, format!("family {i} is nondegenerate at t = 0")));
        }
        for _ in 0..20 {
            let t = random_t(&mut r, 1e-3, 0.5, P);
            if let Err(e) = fam.at(&t, P).check_nondegenerate(&t) {
                return Ok((false, format!("family {i}: {e}")));
            }
        }
    }
    Ok((true, "4 families, 20 parameters each".into()))
}

fn theta_postcondition() -> Outcome {
    for (s, prec) in [("2:10", 128), ("3:60", 512), ("3:60,6:200", 2048)] {
        let sched = DipSchedule::parse(s)?;
        let cf = construct_theta(&sched, prec)?;
        verify_schedule(&cf, &sched, prec)?;
    }
    Ok((true, "3 schedules verified at 4x precision".into()))
}

fn critical_points_are_critical() -> Outcome {
    let prec = 256;
    let q = build_quadratic_critical_family(&ContinuedFraction::golden(), prec)?;
    let tol = ExtendedFloat::one(prec).mul_2exp(-128);
    let mut worst = ExtendedFloat::zero(prec);
    for k in 1..=20 {
        let t = ExtendedComplex::from_f64(prec, 0.5 * k as f64 / 21.0, 0.0);
        for s in [1i8, -1] {
            let res = q.critical_residual(s, &t, prec);
            worst = worst.max_ref(&res).clone();
        }
    }
    Ok((worst <= tol, format!("worst residual {}", worst.to_decimal(3))))
}

// bifurcation

fn power_pair(prec: u32, c: f64) -> EvaluatedMap {
    let x = |v: f64| ExtendedComplex::from_f64(prec, v, 0.0);
    EvaluatedMap { degree: 2, p: vec![x(c), x(0.0), x(1.0)], q: vec![x(1.0), x(0.0), x(0.0)], prec }
}

fn lyapunov_positive() -> Outcome {
    let q = build_quadratic_critical_family(&ContinuedFraction::golden(), P)?;
    let maps = [power_pair(P, 0.0), power_pair(P, -2.0), q.family.at(&ExtendedComplex::from_f64(P, 0.3, 0.1), P)];
    let mut detail = Vec::new();
    for m in &maps {
        let e = lyapunov_map(m, 10_000, 64, 42)?;
        detail.push(format!("{:.4}", e.mean));
        if e.mean <= -3.0 * e.std_error {
            return Ok((false, format!("mean {} with std error {}", e.mean, e.std_error)));
        }
    }
    Ok((true, format!("means {}", detail.join(", "))))
}

fn lyapunov_deterministic() -> Outcome {
    let m = power_pair(P, -2.0);
    let a = lyapunov_map(&m, 5000, 64, 11)?;
    let b = lyapunov_map(&m, 5000, 64, 11)?;
    Ok((a == b, format!("mean {}", a.mean)))
}

fn sub_mean_value() -> Outcome {
    let setup = build_setup(&FamilyKind::Rotation, &SectionKind::A, &ContinuedFraction::golden(), &PerturbationParams::default(), P)?;
    let eta = Rational::new();
    let g = |x: f64, y: f64| potential(&setup.family, setup.section.as_ref(), &ExtendedComplex::from_f64(P, x, y), &eta, 40, P);
    let mesh = Mesh::log_polar_square(0.1, 0.4, 0.0, 9);
    let (n1, n2) = mesh.dims();
    let circle = 64;
    let mut worst = f64::INFINITY;
    for i in 0..n1 {
        for j in 0..n2 {
            let (x, y) = mesh.point(i, j);
            let centre = g(x, y)?;
            let rho = 0.5 * mesh.delta() * x.hypot(y);
            let mut mean = 0.0;
            let mut tail = centre.tail_bound.to_f64();
            for k in 0..circle {
                let a = std::f64::consts::TAU * k as f64 / circle as f64;
                let s = g(x + rho * a.cos(), y + rho * a.sin())?;
                mean += s.value.to_f64() / circle as f64;
                tail = tail.max(s.tail_bound.to_f64());
            }
            let excess = mean - centre.value.to_f64() + 2.0 * tail + 1e-12;
            worst = worst.min(excess);
            if excess < 0.0 {
                return Ok((false, format!("circle mean below the centre by {:.3e} at t = ({x:.4}, {y:.4})", -excess)));
            }
        }
    }
    Ok((true, format!("81 circles, smallest slack {worst:.3e}")))
}

fn decomposition_consistency() -> Outcome {
    let q = build_quadratic_critical_family(&ContinuedFraction::golden(), P)?;
    let (cp, cm) = (q.critical_point(1), q.critical_point(-1));
    let sections: [&dyn Section; 2] = [&cp, &cm];
    let etas = [Rational::from((1, 2)), Rational::from((1, 2))];
    let mut diffs = Vec::new();
    let mut noise: f64 = 0.0;
    for k in 0..16 {
        let a = std::f64::consts::TAU * k as f64 / 16.0;
        let t = ExtendedComplex::from_f64(P, 0.3 * a.cos(), 0.3 * a.sin());
        let l = lyapunov(&q.family, &t, 10_000, 64, 1000 + k)?;
        let s = critical_potential_sum(&q.family, &sections, &etas, &t, 48, P)?;
        noise = noise.max(l.std_error + s.tail_bound.to_f64());
        diffs.push(l.mean - s.total.to_f64());
    }
    let spread = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - diffs.iter().cloned().fold(f64::INFINITY, f64::min);
    let allowed = 4.0 * noise + 0.5;
    Ok((spread <= allowed, format!("spread {spread:.4}, allowed {allowed:.4}")))
}

// cli

fn small_scan_config(kind: FamilyKind) -> Result<RunConfig> {
    let mut c = RunConfig::new(kind, SectionKind::A, RadiiSpec::parse("0.4:0.01:3", P)?, P);
    c.angles = 4;
    c.depth = 24;
    Ok(c)
}

fn csv_round_trip() -> Outcome {
    let out = run_scan(&small_scan_config(FamilyKind::Rotation)?)?;
    let mut a = Vec::new();
    write_csv(&out.rows, &mut a).map_err(|e| DegenError::Domain(e.to_string()))?;
    let rows = read_csv(a.as_slice()).map_err(|e| DegenError::Domain(e.to_string()))?;
    let mut b = Vec::new();
    write_csv(&rows, &mut b).map_err(|e| DegenError::Domain(e.to_string()))?;
    Ok((a == b, format!("{} rows", rows.len())))
}

fn scan_deterministic() -> Outcome {
    let c = small_scan_config(FamilyKind::Quadratic)?;
    let emit = || -> Result<Vec<u8>> {
        let mut v = Vec::new();
        write_csv(&run_scan(&c)?.rows, &mut v).map_err(|e| DegenError::Domain(e.to_string()))?;
        Ok(v)
    };
    Ok((emit()? == emit()?, "two identical runs".into()))
}

fn dip_remeasure() -> Outcome {
    let prec = 1536;
    let sched = DipSchedule::parse("3:60")?;
    let theta = construct_theta(&sched, prec)?;
    let setup = build_setup(&FamilyKind::Quadratic, &SectionKind::V, &theta, &PerturbationParams::default(), prec)?;
    let eta = setup.eta(8, 64, prec)?;
    let c_plus = setup.family.lemma22_constant(&ExtendedFloat::from_f64(prec, 0.5), 64, prec).c_plus.to_f64();
    let entry = sched.entries()[0];
    let pred = dip_predict(c_plus, setup.metric_constant(), &entry, setup.degree(), setup.index_shift);
    let ctx = DipContext { family: &setup.family, section: setup.section.as_ref(), eta: &eta, depth: 64, prec };
    let rep = find_dip_radius(&ctx, 1, &entry, &pred, 3.0)?;
    if rep.status != DipStatus::Confirmed {
        return Ok((false, format!("status {}", rep.status.as_str())));
    }
    let (prec2, depth2) = (2 * prec, 128);
    let setup2 = build_setup(&FamilyKind::Quadratic, &SectionKind::V, &theta, &PerturbationParams::default(), prec2)?;
    let ctx2 = DipContext { family: &setup2.family, section: setup2.section.as_ref(), eta: &eta, depth: depth2, prec: prec2 };
    let ring = ctx2.ring(&ExtendedFloat::from_f64(prec2, rep.log_radius.expect("confirmed")))?;
    let target = rep.m_ref - pred.delta + rep.slack;
    Ok((ring.min <= target, format!("re-measured {:.4} <= {:.4}", ring.min, target)))
}

type Property = (&'static str, &'static str, Box<dyn Fn() -> Outcome>);

fn properties(fault: Fault) -> Vec<Property> {
    vec![
        ("numerics", "exp(log x) = x across exponents", Box::new(exp_log_round_trip)),
        ("numerics", "series product ring laws", Box::new(series_ring_laws)),
        ("numerics", "log_max_norm scaling", Box::new(log_max_norm_scaling)),
        ("geometry", "chordal is a metric", Box::new(move || chordal_metric(fault))),
        ("geometry", "chordal lift-scaling invariance", Box::new(move || chordal_scaling(fault))),
        ("dynamics", "escape rate homogeneity", Box::new(escape_homogeneity)),
        ("dynamics", "escape rate functional equation", Box::new(escape_functional_equation)),
        ("dynamics", "depth monotonicity of certification", Box::new(escape_depth_monotone)),
        ("dynamics", "potential upper bound near t = 0", Box::new(upper_boundedness)),
        ("dynamics", "iteration formula residual", Box::new(iteration_formula)),
        ("families", "degenerate exactly at t = 0", Box::new(degeneration_is_real)),
        ("families", "theta schedule postcondition", Box::new(theta_postcondition)),
        ("families", "critical points are critical", Box::new(critical_points_are_critical)),
        ("bifurcation", "Lyapunov positivity", Box::new(lyapunov_positive)),
        ("bifurcation", "Lyapunov determinism", Box::new(lyapunov_deterministic)),
        ("bifurcation", "sub-mean-value property on circles", Box::new(sub_mean_value)),
        ("bifurcation", "decomposition consistency", Box::new(decomposition_consistency)),
        ("cli", "CSV round trip", Box::new(csv_round_trip)),
        ("cli", "scan determinism", Box::new(scan_deterministic)),
        ("cli", "confirmed dip survives re-measurement", Box::new(dip_remeasure)),
    ]
}

/// Runs every suite, or only `filter`; an unknown suite name is a configuration error.
pub fn run_check(filter: Option<&str>, fault: Fault) -> Result<CheckReport> {
    if let Some(f) = filter {
        if !SUITES.contains(&f) {
            return Err(DegenError::Precondition(format!("unknown suite '{f}' (expected one of {})", SUITES.join(", "))));
        }
    }
    let mut report = CheckReport::default();
    for (suite, property, run) in properties(fault) {
        if filter.is_some_and(|f| f != suite) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        report.rows.push(CheckRow { suite, property, pass, detail, seconds: start.elapsed().as_secs_f64() });
    }
    Ok(report)
}
