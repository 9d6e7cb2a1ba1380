//! Batch driver: verification campaigns, solver runs, change-of-variables
//! diagnostics, and geometry self-tests. Every artifact-producing run writes
//! a manifest referencing its outputs.
//!
//! Exit codes: 0 pass/complete, 1 fail (or barrier crossing / stability
//! abort), 2 usage or configuration error, 3 inconclusive verdict.

use clap::{Args, Parser, Subcommand};
use noncutoff_core::barrier::{
    build_ledger, build_match_supersolution, cont_match_check, mollified_initial_data,
    mollifier_torus_side,
};
use noncutoff_core::collision::convolve_power;
use noncutoff_core::config::{read_grid_density, write_grid_density, RunConfig};
use noncutoff_core::cov::{build_frame, frame_summary_json, holder_transfer_check};
use noncutoff_core::error::Error as CoreError;
use noncutoff_core::fields::Gaussian;
use noncutoff_core::geometry::{selftest, KineticPoint};
use noncutoff_core::model::{LowerBoundSpec, ModelParams};
use noncutoff_core::solver::{
    diagnostics_csv_header, diagnostics_csv_row, run as solver_run, Termination,
};
use noncutoff_core::vec3::Vec3;
use noncutoff_core::verifier::*;
use std::path::{Path, PathBuf};
use std::time::Instant;

const LEMMA_IDS: &[&str] = &[
    "annulus",
    "ball-tail",
    "interp",
    "barrier-ineq",
    "cone",
    "cancel1",
    "cancel2",
    "bar-bounded",
    "sphere",
    "convolution",
    "moment-interp",
    "kide",
];

#[derive(Parser)]
#[command(name = "noncutoff", version, about = "Non-cutoff Boltzmann collision toolkit")]
struct Cli {
    /// Worker thread cap (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one lemma-verification sweep and write its report
    Verify(VerifyArgs),
    /// Run the homogeneous solver and write trajectory artifacts
    Solve(SolveArgs),
    /// Change-of-variables diagnostics at a base point
    #[command(alias = "cov-diagnostics")]
    Cov(CovArgs),
    /// Geometry invariant battery
    Geometry(GeometryArgs),
    /// Barrier machinery: decay ledger and continuity match-check
    Barrier(BarrierArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Lemma id (see `verify --help` for the registered set)
    lemma: String,
    #[arg(long)]
    config: PathBuf,
    /// Re-run at doubled quadrature and record the drift
    #[arg(long)]
    refine: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CovArgs {
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long)]
    s: f64,
    #[arg(long, default_value_t = 1.0)]
    c_b: f64,
    #[arg(long, default_value_t = 1e-2)]
    theta_min: f64,
    /// |v0| of the base point (along the first axis)
    #[arg(long)]
    v0: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Hölder exponent for the transfer check
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

#[derive(Args)]
struct GeometryArgs {
    #[command(subcommand)]
    action: GeometryAction,
}

#[derive(Subcommand)]
enum GeometryAction {
    /// Run the invariant battery and print a JSON verdict
    Selftest {
        #[arg(long, default_value_t = 0.6)]
        s: f64,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct BarrierArgs {
    #[command(subcommand)]
    action: BarrierAction,
}

#[derive(Subcommand)]
enum BarrierAction {
    /// Build and print the decay ledger
    Ledger {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a stored trajectory against the matching supersolution
    MatchCheck {
        /// Trajectory directory or its diagnostics.csv
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let code = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Cov(args) => cmd_cov(args),
        Command::Geometry(args) => match args.action {
            GeometryAction::Selftest { s, pairs, seed } => cmd_geometry_selftest(s, pairs, seed),
        },
        Command::Barrier(args) => match args.action {
            BarrierAction::Ledger { config, out } => cmd_barrier_ledger(&config, out.as_deref()),
            BarrierAction::MatchCheck { traj, config } => cmd_match_check(&traj, &config),
        },
    };
    std::process::exit(match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    });
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        match core {
            CoreError::Parameter(_)
            | CoreError::Config(_)
            | CoreError::Input(_)
            | CoreError::Integrability(_)
            | CoreError::InfiniteNorm { .. }
            | CoreError::LowerBound(_) => 2,
            _ => 1,
        }
    } else {
        2
    }
}

#[derive(serde::Serialize)]
struct Manifest {
    command: String,
    seed: u64,
    version: String,
    wall_time_s: f64,
    outputs: Vec<String>,
    config: serde_json::Value,
    extra: serde_json::Value,
}

fn write_manifest(dir: &Path, manifest: &Manifest) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(manifest)?,
    )?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<i32> {
    if !LEMMA_IDS.contains(&args.lemma.as_str()) {
        eprintln!(
            "unknown lemma id `{}`; registered: {}",
            args.lemma,
            LEMMA_IDS.join(", ")
        );
        return Ok(2);
    }
    let t0 = Instant::now();
    let cfg = RunConfig::from_path(&args.config)?;
    let base_dir = args.config.parent().unwrap_or(Path::new("."));
    let params = cfg.model.build()?;
    let quad = cfg.quad.build()?;
    let sweep = cfg.sweep.build();
    let f = cfg.density.build(base_dir)?;
    let v = &cfg.verify;
    let refine = args.refine;

    let report = match args.lemma.as_str() {
        "annulus" => verify_annulus_bound(&f, &params, &sweep, &quad, refine)?,
        "ball-tail" => verify_ball_and_tail_bounds(&f, &params, &sweep, &quad, refine)?,
        "interp" => {
            let phi = Gaussian {
                alpha: v.gaussian_alpha,
            };
            verify_interpolation_bound(&f, &phi, &params, &sweep, &quad, refine)?
        }
        "barrier-ineq" => verify_barrier_inequality(&f, v.q0, v.q, &params, &quad, refine)?,
        "cone" => {
            let lower = LowerBoundSpec::new(v.lower_delta, v.lower_r, Vec3(v.lower_vm))?;
            verify_cone(&f, &lower, &params, &sweep, &quad)?
        }
        "cancel1" | "cancel2" => {
            let order = if args.lemma == "cancel1" {
                CancellationOrder::First
            } else {
                CancellationOrder::Second
            };
            let frame = if v.v0 > 2.0 {
                Some(build_frame(
                    KineticPoint::new(0.0, Vec3::zero(), Vec3::axis(0) * v.v0),
                    &params,
                ))
            } else {
                None
            };
            verify_cancellation(frame.as_ref(), &f, &params, &sweep, &quad, order, refine)?
        }
        "bar-bounded" => verify_bar_boundedness(&f, &params, &sweep, &quad, refine)?,
        "sphere" => {
            let phi = Gaussian {
                alpha: v.gaussian_alpha,
            };
            verify_sphere_estimate(&phi, &params, &sweep, &quad, refine)?
        }
        "convolution" => verify_convolution_lemma(&f, v.p, v.q_conv, &sweep, &quad, refine)?,
        "moment-interp" => {
            let q1 = v.q1;
            let field = move |z: KineticPoint<f64>| z.v.bracket().powf(-q1) * z.v[0].sin();
            verify_moment_interpolation(
                &field,
                v.alpha,
                v.beta,
                v.q1,
                v.q2,
                params.s,
                &sweep,
                v.interp_samples,
                refine,
            )?
        }
        "kide" => {
            let fc = f.clone();
            let qc = quad;
            let c_field = move |u: Vec3<f64>| {
                params.c_b * convolve_power(&fc, params.gamma, u, &qc).unwrap_or(f64::NAN)
            };
            verify_kide_assumptions(&f, &c_field, &params, &sweep, &quad, refine)?
        }
        _ => unreachable!(),
    };

    std::fs::create_dir_all(&args.out)?;
    let json_path = args.out.join(format!("report_{}.json", args.lemma));
    let csv_path = args.out.join(format!("sweep_{}.csv", args.lemma));
    std::fs::write(&json_path, serde_json::to_string_pretty(&report)?)?;
    std::fs::write(&csv_path, report.to_csv())?;
    write_manifest(
        &args.out,
        &Manifest {
            command: format!("verify {}", args.lemma),
            seed: cfg.sweep.seed,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_time_s: t0.elapsed().as_secs_f64(),
            outputs: vec![
                json_path.display().to_string(),
                csv_path.display().to_string(),
            ],
            config: serde_json::to_value(&cfg)?,
            extra: serde_json::json!({
                "verdict": report.verdict,
                "sup_ratio": report.sup_ratio,
                "refinement_drift": report.refinement_drift,
            }),
        },
    )?;
    println!(
        "{}: verdict {:?}, sup_ratio {:.6e}, drift {:?}",
        args.lemma, report.verdict, report.sup_ratio, report.refinement_drift
    );
    Ok(match report.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 3,
    })
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<i32> {
    let t0 = Instant::now();
    let cfg = RunConfig::from_path(&args.config)?;
    let base_dir = args.config.parent().unwrap_or(Path::new("."));
    let params = cfg.model.build()?;
    let solver_cfg = cfg.solver.build(&cfg.quad)?;
    let base_density = cfg.density.build(base_dir)?;
    let initial = match cfg.solver.initial.as_str() {
        "density" => base_density,
        "mollified" => mollified_initial_data(
            &base_density,
            cfg.solver.epsilon,
            solver_cfg.grid_l,
            solver_cfg.grid_n,
        )?,
        other => {
            return Err(
                CoreError::Config(format!("unknown initial mode `{other}`")).into(),
            )
        }
    };
    let ledger = match cfg.barrier.c0 {
        Some(c0) => Some(build_ledger(
            &initial,
            cfg.barrier.q_base,
            &cfg.barrier.q_targets,
            &params,
            c0,
            "config-supplied C0",
        )?),
        None => None,
    };
    let traj = solver_run(&initial, &solver_cfg, &params, ledger.as_ref())?;

    std::fs::create_dir_all(&args.out)?;
    let mut outputs = Vec::new();
    for (k, frame) in traj.frames.iter().enumerate() {
        let path = args.out.join(format!("frame_{k:04}.csv"));
        write_grid_density(&path, frame)?;
        outputs.push(path.display().to_string());
    }
    let diag_path = args.out.join("diagnostics.csv");
    let mut text = String::new();
    text.push_str(&diagnostics_csv_header(
        &cfg.solver.monitor_qs,
        ledger.is_some(),
    ));
    text.push('\n');
    for rec in &traj.diagnostics {
        text.push_str(&diagnostics_csv_row(rec));
        text.push('\n');
    }
    std::fs::write(&diag_path, text)?;
    outputs.push(diag_path.display().to_string());
    if let Some(ledger) = &ledger {
        let ledger_path = args.out.join("ledger.json");
        std::fs::write(&ledger_path, serde_json::to_string_pretty(ledger)?)?;
        outputs.push(ledger_path.display().to_string());
    }
    write_manifest(
        &args.out,
        &Manifest {
            command: "solve".into(),
            seed: cfg.sweep.seed,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_time_s: t0.elapsed().as_secs_f64(),
            outputs,
            config: serde_json::to_value(&cfg)?,
            extra: serde_json::json!({
                "termination": traj.termination,
                "steps": traj.times.len() - 1,
                "mollifier_torus_side": mollifier_torus_side(cfg.solver.epsilon),
            }),
        },
    )?;
    let (code, summary) = match &traj.termination {
        Termination::Completed => (0, "completed".to_string()),
        Termination::BarrierCrossing { q, time } => {
            (1, format!("barrier crossing at q={q}, t={time:.6}"))
        }
        Termination::Stability { step, min_value } => (
            1,
            format!("stability abort at step {step}, min value {min_value:.3e}"),
        ),
    };
    println!(
        "solve: {} frames, {}",
        traj.frames.len(),
        summary
    );
    Ok(code)
}

fn cmd_cov(args: CovArgs) -> anyhow::Result<i32> {
    let params = ModelParams::new(args.gamma, args.s, args.c_b, args.theta_min)?;
    let frame = build_frame(
        KineticPoint::new(0.0, Vec3::zero(), Vec3::axis(0) * args.v0),
        &params,
    );
    let mut summary = frame_summary_json(&frame, args.r);
    let beta = if args.beta > 0.0 {
        args.beta
    } else {
        0.5 * f64::min(1.0, 2.0 * args.s) * 0.8
    };
    let field = |z: KineticPoint<f64>| z.v[0] + 0.5 * z.v[1] * z.v[1];
    let transfer = holder_transfer_check(&frame, &field, beta, 1.0, 32, 17)?;
    summary["transfer"] = serde_json::json!({
        "beta": beta,
        "ratio_forward": transfer.ratio_forward,
        "ratio_backward": transfer.ratio_backward,
        "seminorm_straight": transfer.seminorm_straight.value,
        "seminorm_twisted": transfer.seminorm_twisted.value,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

fn cmd_geometry_selftest(s: f64, pairs: usize, seed: u64) -> anyhow::Result<i32> {
    let report = selftest(s, pairs, seed)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_barrier_ledger(config: &Path, out: Option<&Path>) -> anyhow::Result<i32> {
    let cfg = RunConfig::from_path(config)?;
    let base_dir = config.parent().unwrap_or(Path::new("."));
    let params = cfg.model.build()?;
    let f = cfg.density.build(base_dir)?;
    let quad = cfg.quad.build()?;
    let (c0, provenance) = match cfg.barrier.c0 {
        Some(c0) => (c0, "config-supplied C0".to_string()),
        None => {
            let rep =
                verify_barrier_inequality(&f, cfg.barrier.q_base, cfg.barrier.q_base, &params, &quad, false)?;
            (
                rep.sup_ratio.max(1e-6),
                format!("measured by barrier-ineq sweep (sup_ratio {:.6e})", rep.sup_ratio),
            )
        }
    };
    let ledger = build_ledger(
        &f,
        cfg.barrier.q_base,
        &cfg.barrier.q_targets,
        &params,
        c0,
        &provenance,
    )?;
    let text = serde_json::to_string_pretty(&ledger)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("ledger.json"), &text)?;
    }
    println!("{text}");
    Ok(0)
}

fn cmd_match_check(traj: &Path, config: &Path) -> anyhow::Result<i32> {
    let cfg = RunConfig::from_path(config)?;
    let params = cfg.model.build()?;
    let quad = cfg.quad.build()?;
    let dir = if traj.is_dir() {
        traj.to_path_buf()
    } else {
        traj.parent().unwrap_or(Path::new(".")).to_path_buf()
    };
    // load frames + times from diagnostics.csv ordering
    let diag_text = std::fs::read_to_string(dir.join("diagnostics.csv"))
        .map_err(|e| CoreError::Config(format!("cannot read diagnostics.csv: {e}")))?;
    let mut times = Vec::new();
    for (i, line) in diag_text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let t: f64 = line
            .split(',')
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| CoreError::Config("bad diagnostics.csv".into()))?;
        times.push(t);
    }
    let mut frames = Vec::new();
    for k in 0..times.len() {
        frames.push(read_grid_density(&dir.join(format!("frame_{k:04}.csv")))?);
    }
    let initial = &frames[0];
    // measured Λ for the supersolution: kide sweep on the initial frame
    let sweep = cfg.sweep.build();
    let fc = initial.clone();
    let qc = quad;
    let c_field = move |u: Vec3<f64>| {
        params.c_b * convolve_power(&fc, params.gamma, u, &qc).unwrap_or(f64::NAN)
    };
    let kide = verify_kide_assumptions(initial, &c_field, &params, &sweep, &quad, false)?;
    let lambda = kide.sup_ratio.max(1e-6);
    let sup_f = frames
        .iter()
        .map(|f| match &f.kind {
            noncutoff_core::model::DensityKind::Grid(g) => {
                g.values.iter().cloned().fold(0.0f64, f64::max)
            }
            _ => 0.0,
        })
        .fold(0.0f64, f64::max);
    let v0 = Vec3(cfg.barrier.v0);
    let ss = build_match_supersolution(initial, v0, cfg.barrier.eta, lambda, sup_f, &params, None)?;
    let probes = vec![
        v0,
        v0 + Vec3::axis(0) * (ss.delta * 0.5),
        v0 + Vec3::new(0.0, ss.delta * 0.4, -ss.delta * 0.3),
    ];
    let report = cont_match_check(&times, &frames, &probes, &ss)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.violation_time.is_none() { 0 } else { 1 })
}
