//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed; exits non-zero if any criterion fails.

use std::f64::consts::{LN_2, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use degen_cli::check::{run_check, Fault};
use degen_cli::dip::{dip_predict, find_dip_radius, DipContext, DipReport, DipStatus};
use degen_cli::setup::{build_setup, FamilyKind, FamilySetup, PerturbationParams, SectionKind};
use degen_core::bifurcation::{laplacian_stencil, lyapunov_map, relation_check_quadratic, Mesh, PotentialGrid};
use degen_core::dynamics::form::random_sphere_point;
use degen_core::dynamics::{escape_rate, iteration_identity_check, orbit_valuations, potential, EvaluatedMap, HomogeneousFamily};
use degen_core::families::{build_quadratic_critical_family, condition41_partial_sums, construct_theta, prop41_ratio_check, ContinuedFraction, DipSchedule};
use degen_core::geometry::{AffinePoint, ProjPoint};
use degen_core::numerics::{ExtendedComplex, ExtendedFloat};
use degen_core::{DegenError, Result};

type Verdict = Result<(bool, String)>;

fn c(prec: u32, re: f64, im: f64) -> ExtendedComplex {
    ExtendedComplex::from_f64(prec, re, im)
}

fn polar(prec: u32, r: f64, a: f64) -> ExtendedComplex {
    c(prec, r * a.cos(), r * a.sin())
}

fn power_family(prec: u32) -> Result<HomogeneousFamily> {
    HomogeneousFamily::constant(2, vec![c(prec, 0.0, 0.0), c(prec, 0.0, 0.0), c(prec, 1.0, 0.0)], vec![c(prec, 1.0, 0.0), c(prec, 0.0, 0.0), c(prec, 0.0, 0.0)])
}

fn golden_setup(kind: FamilyKind, section: SectionKind, prec: u32) -> Result<FamilySetup> {
    build_setup(&kind, &section, &ContinuedFraction::golden(), &PerturbationParams::default(), prec)
}

fn criterion_1() -> Verdict {
    let prec = 128;
    let r = escape_rate(&power_family(prec)?, &c(prec, 0.25, 0.0), &ProjPoint::from_f64(prec, (2.0, 0.0), (1.0, 0.0))?, 64, prec)?;
    let err = (&r.value - &ExtendedFloat::ln2(prec)).abs();
    let ok = err <= r.tail_bound && r.tail_bound.to_f64() <= 1e-15;
    Ok((ok, format!("error {}, tail bound {}", err.to_decimal(3), r.tail_bound.to_decimal(3))))
}

fn criterion_2() -> Verdict {
    let prec = 256;
    let fam = build_quadratic_critical_family(&ContinuedFraction::golden(), prec)?.family;
    let d = fam.degree() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let floor = ExtendedFloat::one(prec).mul_2exp(-(prec as i64) + 16);
    let (mut worst_h, mut worst_f) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let t = polar(prec, rng.random_range(0.01..0.5), rng.random_range(0.0..TAU));
        let p =
            ProjPoint::from_f64(prec, (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)), (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))?;
        let lam = ExtendedComplex::from_polar(
            &ExtendedFloat::from_f64(prec, rng.random_range(-30.0..30.0)).exp(),
            &ExtendedFloat::from_f64(prec, rng.random_range(0.0..TAU)),
        );
        let g = escape_rate(&fam, &t, &p, 64, prec)?;
        let gs = escape_rate(&fam, &t, &p.scale(&lam)?, 64, prec)?;
        let gf = escape_rate(&fam, &t, &fam.evaluate(&t, &p, prec)?, 64, prec)?;
        let tail = g.tail_bound.max_ref(&gs.tail_bound).clone();
        let hom = (&(&gs.value - &g.value) - &lam.log_abs()).abs();
        let fe = (&gf.value - &g.value.mul_i64(d)).abs();
        worst_h = worst_h.max(hom.to_f64() / (&tail.mul_i64(2) + &floor).to_f64());
        worst_f = worst_f.max(fe.to_f64() / g.tail_bound.mul_i64(d + 1).to_f64());
    }
    Ok((worst_h <= 1.0 && worst_f <= 1.0, format!("worst residual/bound: homogeneity {worst_h:.3e}, functional equation {worst_f:.3e}")))
}

fn criterion_3() -> Verdict {
    let prec = 256;
    let order = 300;
    let rot = golden_setup(FamilyKind::Rotation, SectionKind::A, prec)?;
    let prof = orbit_valuations(&rot.family, &rot.section.series(order, prec)?, 10)?;
    let rot_ok = prof.o.len() == 10 && prof.o.iter().all(|&o| o == 0);
    let quad = golden_setup(FamilyKind::Quadratic, SectionKind::A, prec)?;
    let prof2 = orbit_valuations(&quad.family, &quad.section.series(order, prec)?, 8)?;
    let expected: Vec<u64> = (1..=8).map(|n| 1u64 << (n - 1)).collect();
    let half = Rational::from((1, 2));
    let quad_ok = prof2.o == expected && prof2.eta_estimates.iter().all(|e| *e == half);
    Ok((rot_ok && quad_ok, format!("rotation o = {:?}; quadratic o = {:?}, eta = {}", prof.o, prof2.o, prof2.eta().cloned().unwrap_or_default())))
}

struct DipRun {
    reports: Vec<DipReport>,
}

fn run_dips(schedule: &str, theta: Option<ContinuedFraction>, prec: u32) -> Result<DipRun> {
    let sched = DipSchedule::parse(schedule)?;
    let theta = match theta {
        Some(t) => t,
        None => construct_theta(&sched, prec)?,
    };
    let setup = build_setup(&FamilyKind::Quadratic, &SectionKind::V, &theta, &PerturbationParams::default(), prec)?;
    let eta = setup.eta(8, 64, prec)?;
    let c_plus = setup.family.lemma22_constant(&ExtendedFloat::from_f64(prec, 0.5), 64, prec).c_plus.to_f64();
    let ctx = DipContext { family: &setup.family, section: setup.section.as_ref(), eta: &eta, depth: 64, prec };
    let mut reports = Vec::new();
    for (j, e) in sched.entries().iter().enumerate() {
        let pred = dip_predict(c_plus, setup.metric_constant(), e, setup.degree(), setup.index_shift);
        reports.push(find_dip_radius(&ctx, j + 1, e, &pred, 3.0)?);
    }
    Ok(DipRun { reports })
}

fn criterion_4() -> Verdict {
    let prec = 1536;
    let dip = &run_dips("3:60", None, prec)?.reports[0];
    let expected_delta = 60.0 / 8.0 - dip.prediction.c_corr;
    let in_range = dip.log_radius.is_some_and(|r| r > -240.0 && r < (0.25f64).ln());
    let holds = dip.measured_min.is_some_and(|m| m <= dip.m_ref - dip.prediction.delta + 3.0);
    let confirmed = dip.status == DipStatus::Confirmed && in_range && holds && (dip.prediction.delta - expected_delta).abs() < 1e-12;
    let control = &run_dips("3:60", Some(ContinuedFraction::golden()), prec)?.reports[0];
    let floor = control.rings.iter().map(|r| r.min).fold(f64::INFINITY, f64::min);
    let control_ok = control.status == DipStatus::NotFound && floor >= control.m_ref - 2.0;
    Ok((
        confirmed && control_ok,
        format!(
            "delta {:.4}, M_ref {:.4}, ln radius {:?}, measured {:?}; control {} with min {:.4} vs M_ref - 2 = {:.4}",
            dip.prediction.delta,
            dip.m_ref,
            dip.log_radius,
            dip.measured_min,
            control.status.as_str(),
            floor,
            control.m_ref - 2.0
        ),
    ))
}

fn criterion_5() -> Verdict {
    let run = run_dips("3:60,6:1500", None, 9000)?;
    let (a, b) = (&run.reports[0], &run.reports[1]);
    let both = a.status == DipStatus::Confirmed && b.status == DipStatus::Confirmed;
    let ordered = b.prediction.delta > a.prediction.delta;
    let drop = match (a.measured_min, b.measured_min) {
        (Some(x), Some(y)) => x - y,
        _ => f64::NAN,
    };
    Ok((
        both && ordered && drop >= 10.0,
        format!("deltas {:.3} < {:.3}, measured {:?} then {:?}, extra drop {drop:.3}", a.prediction.delta, b.prediction.delta, a.measured_min, b.measured_min),
    ))
}

fn criterion_6() -> Verdict {
    let square = |p: u32| -> Result<_> {
        let s = golden_setup(FamilyKind::Power, SectionKind::A, p)?;
        Ok(s.orbit_problem(AffinePoint::Finite(c(p, 0.5, 0.0)), AffinePoint::Finite(c(p, 0.0, 0.0)), 3, p))
    };
    let sums = condition41_partial_sums(square, 40, 128, 4096)?;
    let ratio = prop41_ratio_check(square, 40, 128, 4096)?;
    // oracle: phi^n(1/2) = 2^(-2^n), chordal gap to 0 is x / sqrt(1 + x^2)
    let oracle: f64 = (0..=40)
        .map(|n| {
            let lx = -(2f64.powi(n)) * LN_2;
            (lx - 0.5 * (2.0 * lx).exp().ln_1p()) / 3f64.powi(n)
        })
        .sum();
    let s40 = sums.sums[40].to_f64();
    let conv = (-2.25..=-2.15).contains(&s40) && (s40 - oracle).abs() < 1e-9 && ratio.min_power.to_f64() >= -0.85;

    let prec = 512;
    let sched = DipSchedule::parse("3:60")?;
    let theta = construct_theta(&sched, prec)?;
    let rot = |p: u32| -> Result<_> {
        let s = build_setup(&FamilyKind::Quadratic, &SectionKind::V, &theta, &PerturbationParams::default(), p)?;
        Ok(s.orbit_problem(s.marked_start(p)?, s.default_target(&PerturbationParams::default(), p), 2, p))
    };
    let div = condition41_partial_sums(rot, 3, prec, 8192)?;
    let setup = build_setup(&FamilyKind::Quadratic, &SectionKind::V, &theta, &PerturbationParams::default(), prec)?;
    let c_plus = setup.family.lemma22_constant(&ExtendedFloat::from_f64(prec, 0.5), 64, prec).c_plus.to_f64();
    let delta = dip_predict(c_plus, setup.metric_constant(), &sched.entries()[0], 2, setup.index_shift).delta;
    let s3 = div.sums.last().expect("sums up to n = 3").to_f64();
    Ok((
        conv && s3 <= -delta,
        format!("S_40 = {s40:.6} (oracle {oracle:.6}), min ratio {:.4}; S_3 = {s3:.4} vs -delta = {:.4}", ratio.min_power.to_f64(), -delta),
    ))
}

fn criterion_7() -> Verdict {
    let prec = 128;
    let lambda = ContinuedFraction::golden().lambda(prec);
    let zero = ExtendedComplex::zero(prec);
    let one = ExtendedComplex::one(prec);
    let phi = EvaluatedMap { degree: 1, p: vec![zero.clone(), lambda], q: vec![one, zero], prec };
    let h = c(prec, -1.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 50 {
        let x = random_sphere_point(&mut rng, prec);
        match iteration_identity_check(&phi, &h, rng.random_range(0..=5), &x) {
            Ok(r) => {
                worst = worst.max(r.to_f64());
                done += 1;
            }
            Err(DegenError::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((worst <= 1e-25, format!("worst residual {worst:.3e} over 50 points")))
}

fn criterion_8() -> Verdict {
    let prec = 256;
    let q = build_quadratic_critical_family(&ContinuedFraction::golden(), prec)?;
    let tol = ExtendedFloat::one(prec).mul_2exp(-128);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut crit = ExtendedFloat::zero(prec);
    let mut placement = ExtendedFloat::zero(prec);
    for _ in 0..20 {
        let t = polar(prec, rng.random_range(0.01..0.45), rng.random_range(0.0..TAU));
        // oracle: f' vanishes where z^2 - 2bz + ab = 0, a = 1 + t^2, b = 1 - t^2
        let one = ExtendedComplex::one(prec);
        let (a, b) = (&one + &t.square(), &one - &t.square());
        let root = (&b * &(&b - &a)).sqrt();
        let closed = [&b + &root, &b - &root];
        for s in [1i8, -1] {
            let z = q.critical_point_at(s, &t, prec);
            crit = crit.max_ref(&q.derivative_at(&t, &z, prec).abs()).clone();
            let near = closed.iter().map(|r| (&z - r).abs()).fold(ExtendedFloat::one(prec), |m, e| m.min_ref(&e).clone());
            placement = placement.max_ref(&near).clone();
        }
    }
    let mut rel = 0.0f64;
    for _ in 0..10 {
        let t = polar(prec, rng.random_range(0.05..0.45), rng.random_range(0.0..TAU));
        rel = rel.max(relation_check_quadratic(&q, &t, 64, prec)?.residual.to_f64());
    }
    Ok((
        crit <= tol && placement <= tol && rel <= 1e-20,
        format!("|f'(c)| <= {}, distance to closed form {}, relation residual {rel:.3e}", crit.to_decimal(3), placement.to_decimal(3)),
    ))
}

fn ring_max(setup: &FamilySetup, eta: &Rational, r: f64, prec: u32) -> Result<f64> {
    let mut m = f64::NEG_INFINITY;
    for k in 0..64 {
        let t = polar(prec, r, TAU * (k as f64 + 0.5) / 64.0);
        m = m.max(potential(&setup.family, setup.section.as_ref(), &t, eta, 48, prec)?.value.to_f64());
    }
    Ok(m)
}

fn criterion_9() -> Verdict {
    let prec = 128;
    let mut lines = Vec::new();
    let mut ok = true;
    for (kind, section) in [(FamilyKind::Rotation, SectionKind::A), (FamilyKind::Quadratic, SectionKind::A), (FamilyKind::Quadratic, SectionKind::V)] {
        let s = golden_setup(kind.clone(), section.clone(), prec)?;
        let eta = s.eta(8, 64, prec)?;
        let reference = ring_max(&s, &eta, 0.5, prec)?;
        let mut top = f64::NEG_INFINITY;
        for r in [0.4, 0.2, 0.1, 0.01] {
            top = top.max(ring_max(&s, &eta, r, prec)?);
        }
        ok &= top <= reference + 1.0;
        lines.push(format!("{kind}/{section}: {top:.4} vs {:.4}", reference + 1.0));
    }
    Ok((ok, lines.join("; ")))
}

fn square_map(prec: u32, c0: f64) -> EvaluatedMap {
    let x = |v: f64| c(prec, v, 0.0);
    EvaluatedMap { degree: 2, p: vec![x(c0), x(0.0), x(1.0)], q: vec![x(1.0), x(0.0), x(0.0)], prec }
}

fn criterion_10() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for (c0, tol) in [(0.0, 0.02), (-2.0, 0.03)] {
        let start = Instant::now();
        let m = square_map(128, c0);
        let a = lyapunov_map(&m, 100_000, 64, 2024)?;
        let b = lyapunov_map(&m, 100_000, 64, 2024)?;
        let secs = start.elapsed().as_secs_f64();
        let rel = (a.mean - LN_2).abs() / LN_2;
        ok &= rel <= tol && a == b && secs < 120.0;
        parts.push(format!("z^2{:+}: mean {:.5} ({:.2}% off), rerun identical {}, {secs:.1}s for both runs", c0, a.mean, 100.0 * rel, a == b));
    }
    Ok((ok, parts.join("; ")))
}

fn criterion_11() -> Verdict {
    let prec = 128;
    let s = golden_setup(FamilyKind::Rotation, SectionKind::A, prec)?;
    let eta = Rational::new();
    let mesh = Mesh::log_polar_square(0.1, 0.4, 0.0, 33);
    let d2 = mesh.delta().powi(2);
    let grid = PotentialGrid::evaluate(mesh, prec, |t| potential(&s.family, s.section.as_ref(), t, &eta, 48, prec))?;
    let st = laplacian_stencil(&grid)?;
    let min = st.iter().flatten().cloned().fold(f64::INFINITY, f64::min);
    let below = st.iter().flatten().filter(|&&v| v < -10.0 * d2).count();
    let control = laplacian_stencil(&PotentialGrid::from_function(mesh, prec, |x, y| x.hypot(y).ln()))?;
    let control_max = control.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = grid.max_tail_bound();
    let ok = tail <= d2 / 100.0 && min >= -10.0 * d2 && control_max <= 10.0 * d2;
    Ok((
        ok,
        format!(
            "tail {tail:.2e} (limit {:.2e}), min stencil {min:.4} vs floor {:.4} ({below} of {} nodes below), control {control_max:.2e}",
            d2 / 100.0,
            -10.0 * d2,
            st.len() * st[0].len()
        ),
    ))
}

fn criterion_12() -> Verdict {
    let report = run_check(None, Fault::None)?;
    let failed: Vec<&str> = report.rows.iter().filter(|r| !r.pass).map(|r| r.property).collect();
    Ok((report.all_passed(), format!("{} properties, failed: {failed:?}", report.rows.len())))
}

type Criterion = (u32, fn() -> Verdict, Duration);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, criterion_1, Duration::from_secs(1)),
        (2, criterion_2, Duration::from_secs(30)),
        (3, criterion_3, Duration::from_secs(60)),
        (4, criterion_4, Duration::from_secs(300)),
        (5, criterion_5, Duration::from_secs(1800)),
        (6, criterion_6, Duration::from_secs(10)),
        (7, criterion_7, Duration::from_secs(30)),
        (8, criterion_8, Duration::from_secs(60)),
        (9, criterion_9, Duration::from_secs(120)),
        (10, criterion_10, Duration::from_secs(120)),
        (11, criterion_11, Duration::from_secs(300)),
        (12, criterion_12, Duration::from_secs(600)),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failures = 0;
    for (id, run, limit) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok((p, d)) => (p && elapsed <= limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("criterion {id:>2}: {} ({:.1}s of {}s) {detail}", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64(), limit.as_secs());
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
