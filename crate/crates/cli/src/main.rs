use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use degen_cli::check::{run_check, Fault};
use degen_cli::config::{check_precision_cap, parse_complex, parse_rational, RadiiSpec, RunConfig};
use degen_cli::dip::{dip_predict, find_dip_radius, DipContext, DipReport};
use degen_cli::scan::{read_csv, run_scan, write_csv};
use degen_cli::setup::{build_setup, FamilyKind, FamilySetup, PerturbationParams, SectionKind};
use degen_cli::svg::render_scan;
use degen_core::bifurcation::lyapunov;
use degen_core::dynamics::orbit_valuations;
use degen_core::families::{closeness_table, condition41_partial_sums, construct_theta, prop41_ratio_check, ContinuedFraction, DipSchedule, ThetaFile};
use degen_core::geometry::AffinePoint;
use degen_core::numerics::{ExtendedComplex, ExtendedFloat};
use degen_core::DegenError;

#[derive(Parser)]
#[command(name = "degen", version, about = "Degeneration potentials of rational map families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the potential on a ladder of rings and write CSV.
    Scan(ScanArgs),
    /// Predict, locate and measure the scheduled dips.
    Dip(DipArgs),
    /// Orbit valuations and the height of the marked section.
    Eta(EtaArgs),
    /// Build a rotation number realizing a close-return schedule.
    Theta(ThetaArgs),
    /// Monte Carlo Lyapunov exponent of one family member.
    Lyapunov(LyapunovArgs),
    /// Weighted orbit-closeness sums and normalized minima.
    Cond41(Cond41Args),
    /// Run the invariant suites.
    Check(CheckArgs),
    /// Render a scan CSV as SVG.
    Plot(PlotArgs),
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// power | rotation | quadratic | unicritical:<d>
    #[arg(long, default_value = "quadratic")]
    family: FamilyKind,
    /// a | v | c+ | c- | custom:<z coeffs>/<w coeffs>
    #[arg(long, default_value = "a")]
    section: SectionKind,
    /// Perturbation point, `re,im`.
    #[arg(long, default_value = "-1,0", allow_hyphen_values = true)]
    h: String,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    t_exponent: u32,
    /// Close-return schedule `n:g,n:g`.
    #[arg(long)]
    schedule: Option<String>,
    /// Rotation number from a theta JSON file; overrides --schedule.
    #[arg(long)]
    theta_file: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    prec: u32,
}

impl FamilyArgs {
    fn perturbation(&self) -> anyhow::Result<PerturbationParams> {
        let h = parse_complex(&self.h)?.context("h must be finite")?;
        Ok(PerturbationParams { h, epsilon: self.eps, t_exponent: self.t_exponent })
    }

    fn schedule(&self) -> anyhow::Result<DipSchedule> {
        match (&self.theta_file, &self.schedule) {
            (Some(path), _) => Ok(ThetaFile::read(path)?.dip_schedule()?),
            (None, Some(s)) => Ok(DipSchedule::parse(s)?),
            (None, None) => Ok(DipSchedule::empty()),
        }
    }

    fn theta(&self, prec: u32) -> anyhow::Result<ContinuedFraction> {
        if let Some(path) = &self.theta_file {
            return Ok(ThetaFile::read(path)?.continued_fraction()?);
        }
        let s = self.schedule()?;
        if s.is_empty() {
            Ok(ContinuedFraction::golden())
        } else {
            Ok(construct_theta(&s, prec)?)
        }
    }

    fn setup(&self, prec: u32) -> anyhow::Result<FamilySetup> {
        check_precision_cap(prec)?;
        Ok(build_setup(&self.family, &self.section, &self.theta(prec)?, &self.perturbation()?, prec)?)
    }
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Geometric ladder `start:end:count`.
    #[arg(long, default_value = "0.4:0.01:8")]
    radii: String,
    #[arg(long, default_value_t = 8)]
    angles: usize,
    #[arg(long, default_value_t = 64)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Height override `p/q`; inferred from orbit valuations otherwise.
    #[arg(long)]
    eta: Option<String>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct DipArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 64)]
    depth: usize,
    #[arg(long, default_value_t = 3.0)]
    slack: f64,
    /// JSON report destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EtaArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    /// Series truncation order.
    #[arg(long, default_value_t = 300)]
    order: usize,
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long)]
    schedule: String,
    #[arg(long, default_value_t = 1024)]
    prec: u32,
    /// Number of closeness values kept in the file.
    #[arg(long, default_value_t = 32)]
    log_len: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LyapunovArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Parameter `re,im`.
    #[arg(long, default_value = "0.3,0", allow_hyphen_values = true)]
    t: String,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = degen_core::bifurcation::DEFAULT_BURN_IN)]
    burn_in: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Cond41Args {
    #[command(flatten)]
    family: FamilyArgs,
    /// Start point `re,im` or `inf`; the marked point at t = 0 by default.
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<String>,
    /// Target `re,im` or `inf`.
    #[arg(long = "target", allow_hyphen_values = true)]
    target: Option<String>,
    /// Weight base; the family degree by default.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, default_value_t = 40)]
    n_max: usize,
    #[arg(long, default_value_t = 1 << 16)]
    max_prec: u32,
}

#[derive(Args)]
struct CheckArgs {
    /// Run one suite only.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// 1 check failure, 2 degenerate parameter, 3 configuration, 4 precision budget.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<DegenError>() {
        Some(DegenError::Degenerate { .. } | DegenError::IndeterminateImage { .. }) => 2,
        Some(DegenError::PrecisionBudget { .. }) => 4,
        Some(DegenError::Precondition(_) | DegenError::Infeasible(_) | DegenError::TruncationTooLow { .. }) => 3,
        Some(_) => 1,
        None => 3,
    }
}

fn sink(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn affine_arg(s: &str, prec: u32) -> anyhow::Result<AffinePoint> {
    Ok(match parse_complex(s)? {
        Some((re, im)) => AffinePoint::Finite(ExtendedComplex::from_f64(prec, re, im)),
        None => AffinePoint::Infinity,
    })
}

fn scan(a: ScanArgs) -> anyhow::Result<u8> {
    let prec = a.family.prec;
    let mut config = RunConfig::new(a.family.family.clone(), a.family.section.clone(), RadiiSpec::parse(&a.radii, prec)?, prec);
    config.perturbation = a.family.perturbation()?;
    config.schedule = a.family.schedule()?;
    config.theta_file = a.family.theta_file.clone();
    config.angles = a.angles;
    config.depth = a.depth;
    config.seed = a.seed;
    config.eta = a.eta.as_deref().map(parse_rational).transpose()?;
    config.out = a.out;
    config.svg = a.svg;
    let out = run_scan(&config)?;
    eprintln!("eta = {}", out.eta);
    write_csv(&out.rows, sink(&config.out)?)?;
    if let Some(path) = &config.svg {
        std::fs::write(path, render_scan(&out.rows)?)?;
    }
    Ok(0)
}

fn dip(a: DipArgs) -> anyhow::Result<u8> {
    let prec = a.family.prec;
    let schedule = a.family.schedule()?;
    if schedule.is_empty() {
        bail!(DegenError::Precondition("dip needs --schedule or --theta-file".into()));
    }
    let setup = a.family.setup(prec)?;
    let eta = setup.eta(10, 64, prec)?;
    let c_plus = setup.family.lemma22_constant(&ExtendedFloat::from_f64(prec, 0.5), 64, prec).c_plus.to_f64();
    let ctx = DipContext { family: &setup.family, section: setup.section.as_ref(), eta: &eta, depth: a.depth, prec };
    let mut reports: Vec<DipReport> = Vec::new();
    for (j, entry) in schedule.entries().iter().enumerate() {
        let pred = dip_predict(c_plus, setup.metric_constant(), entry, setup.degree(), setup.index_shift);
        let rep = find_dip_radius(&ctx, j + 1, entry, &pred, a.slack)?;
        println!(
            "dip {}: n = {}, gap = {}, delta = {:.4}, M_ref = {:.4}, ln radius = {}, measured = {}, margin = {:.4}, {}",
            rep.j,
            rep.n,
            rep.gap,
            rep.prediction.delta,
            rep.m_ref,
            rep.log_radius.map_or("-".into(), |r| format!("{r:.4}")),
            rep.measured_min.map_or("-".into(), |m| format!("{m:.4}")),
            rep.margin,
            rep.status.as_str()
        );
        reports.push(rep);
    }
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string_pretty(&reports)?)?;
    }
    Ok(0)
}

fn eta(a: EtaArgs) -> anyhow::Result<u8> {
    let prec = a.family.prec;
    let setup = a.family.setup(prec)?;
    let series = setup.section.series(a.order, prec)?;
    let prof = orbit_valuations(&setup.family, &series, a.steps)?;
    println!("o_0 = {}", prof.o0);
    for (k, (o, e)) in prof.o.iter().zip(&prof.eta_estimates).enumerate() {
        println!("o_{} = {o}  o/d^n = {e}", k + 1);
    }
    match prof.eta() {
        Some(e) => println!("eta = {e}"),
        None => println!("eta = ?"),
    }
    Ok(0)
}

fn theta(a: ThetaArgs) -> anyhow::Result<u8> {
    check_precision_cap(a.prec)?;
    let schedule = DipSchedule::parse(&a.schedule)?;
    let cf = construct_theta(&schedule, a.prec)?;
    println!("theta = {cf}");
    for row in closeness_table(&cf, a.log_len, a.prec.min(4096)) {
        println!("n = {:>4}  -log|lambda^n - 1| = {:.6}{}", row.n, row.gap, if row.exact_hit { " (exact)" } else { "" });
    }
    if let Some(path) = &a.out {
        ThetaFile::new(&cf, &schedule, a.log_len, a.prec).write(path)?;
    }
    Ok(0)
}

fn lyapunov_cmd(a: LyapunovArgs) -> anyhow::Result<u8> {
    let prec = a.family.prec;
    let setup = a.family.setup(prec)?;
    let (re, im) = parse_complex(&a.t)?.context("t must be finite")?;
    let est = lyapunov(&setup.family, &ExtendedComplex::from_f64(prec, re, im), a.samples, a.burn_in, a.seed)?;
    println!("{}", serde_json::to_string(&est)?);
    Ok(0)
}

fn cond41(a: Cond41Args) -> anyhow::Result<u8> {
    let base = a.family.prec;
    check_precision_cap(a.max_prec)?;
    let probe = a.family.setup(base)?;
    let d = a.d.unwrap_or(probe.degree() as u32);
    let pert = a.family.perturbation()?;
    let build = |prec: u32| -> degen_core::Result<_> {
        let setup = build_setup(&a.family.family, &a.family.section, &probe.theta, &pert, prec)?;
        let start = match &a.a0 {
            Some(s) => affine_arg(s, prec).map_err(|e| DegenError::Precondition(e.to_string()))?,
            None => setup.marked_start(prec)?,
        };
        let target = match &a.target {
            Some(s) => affine_arg(s, prec).map_err(|e| DegenError::Precondition(e.to_string()))?,
            None => setup.default_target(&pert, prec),
        };
        Ok(setup.orbit_problem(start, target, d, prec))
    };
    let sums = condition41_partial_sums(build, a.n_max, base, a.max_prec)?;
    let ratio = prop41_ratio_check(build, a.n_max, base, a.max_prec)?;
    let first = sums.gaps.first_index;
    for (i, s) in sums.sums.iter().enumerate() {
        println!("S_{} = {}", first + i, s.to_decimal(12));
    }
    println!("min log gap / (d-1)^n = {} at n = {}", ratio.min_power.to_decimal(8), ratio.argmin_power);
    println!("min log gap / n = {} at n = {}", ratio.min_linear.to_decimal(8), ratio.argmin_linear);
    println!("precision = {} bits", ratio.precision);
    Ok(0)
}

fn check(a: CheckArgs) -> anyhow::Result<u8> {
    let fault = match a.inject_fault.as_deref() {
        None => Fault::None,
        Some("chordal") => Fault::Chordal,
        Some(other) => bail!(DegenError::Precondition(format!("unknown fault '{other}'"))),
    };
    let report = run_check(a.filter.as_deref(), fault)?;
    print!("{}", report.table());
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn plot(a: PlotArgs) -> anyhow::Result<u8> {
    let rows = read_csv(File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?)?;
    sink(&a.out)?.write_all(render_scan(&rows)?.as_bytes())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Scan(a) => scan(a),
        Command::Dip(a) => dip(a),
        Command::Eta(a) => eta(a),
        Command::Theta(a) => theta(a),
        Command::Lyapunov(a) => lyapunov_cmd(a),
        Command::Cond41(a) => cond41(a),
        Command::Check(a) => check(a),
        Command::Plot(a) => plot(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
