use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use rpr_core::io::{load_path, load_robot, path_to_json};
use rpr_core::modeplan::{
    plan_mode_change, verify_mode_change_with, CrossingKind, PlannerConfig, SearchBox, WorkspacePath,
    DEFAULT_SAMPLES_PER_SEGMENT,
};
use rpr_core::singularity::{
    classify_configuration_with, is_architecturally_singular, passage_safety, sample_conic_polyline,
    singularity_conic_seeded, Window,
};
use rpr_core::{inverse_kinematics, oracle_fk, solve_fk, JointVector, Pose, RobotGeometry, RunConfig};

#[derive(Parser)]
#[command(name = "rpr3", version, about = "Kinematics and singularity tools for 3-RPR planar parallel robots")]
struct Cli {
    /// Seed for sampling schedules (overrides RPR3_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Directed leg lengths for a pose.
    Ik {
        #[arg(long)]
        robot: PathBuf,
        /// x,y,phi
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pose)]
        pose: Pose,
        /// Signs of the directed lengths, e.g. -1,1,1.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        signs: Option<[f64; 3]>,
    },
    /// All assembly modes for the given leg lengths.
    Fk {
        #[arg(long)]
        robot: PathBuf,
        /// r1,r2,r3
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        joints: [f64; 3],
        /// Use the orientation-sweep oracle instead of the polynomial solver.
        #[arg(long)]
        oracle: bool,
        /// Oracle sweep size (overrides RPR3_ORACLE_GRID).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Forward kinematics by orientation sweep.
    OracleFk {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        joints: [f64; 3],
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Classify a configuration as regular, parallel or serial singular.
    Classify {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pose)]
        pose: Pose,
    },
    /// Singularity locus at a fixed orientation.
    Locus {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// x0,y0,x1,y1
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
        #[arg(long)]
        step: f64,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
    },
    /// Architectural singularity and passage safety of a design.
    DesignCheck {
        #[arg(long)]
        robot: PathBuf,
    },
    /// Plan a path to another assembly mode through serial passages.
    Plan {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pose)]
        start: Pose,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pose)]
        target: Option<Pose>,
        /// x0,y0,x1,y1[,phi0,phi1]
        #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_box)]
        search_box: Option<SearchBox>,
        /// nx,ny,nphi
        #[arg(long, value_parser = parse_res)]
        res: Option<[usize; 3]>,
        /// Path file to write; the path goes to standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a path: continuation, crossings and assembly-mode verdict.
    Verify {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long)]
        path: PathBuf,
        /// Samples per path segment.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn numbers(s: &str, allowed: &[usize]) -> std::result::Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("not a number: {p:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if !allowed.contains(&v.len()) {
        return Err(format!("expected {} comma-separated values, got {}", allowed.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" or "), v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_pose(s: &str) -> std::result::Result<Pose, String> {
    let v = numbers(s, &[3])?;
    Ok(Pose::new(v[0], v[1], v[2]))
}

fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let v = numbers(s, &[3])?;
    Ok([v[0], v[1], v[2]])
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let v = numbers(s, &[4])?;
    Window::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_box(s: &str) -> std::result::Result<SearchBox, String> {
    let v = numbers(s, &[4, 6])?;
    let (phi0, phi1) = if v.len() == 6 { (v[4], v[5]) } else { (0.0, std::f64::consts::TAU) };
    let b = SearchBox { x0: v[0], y0: v[1], x1: v[2], y1: v[3], phi0, phi1 };
    b.validate().map_err(|e| e.to_string())?;
    Ok(b)
}

fn parse_res(s: &str) -> std::result::Result<[usize; 3], String> {
    let v = numbers(s, &[3])?;
    if v.iter().any(|x| x.fract() != 0.0 || *x < 2.0) {
        return Err("expected integers >= 2".into());
    }
    Ok([v[0] as usize, v[1] as usize, v[2] as usize])
}

fn robot(path: &PathBuf) -> Result<RobotGeometry> {
    let loaded = load_robot(path)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    Ok(loaded.geometry)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = RunConfig::from_env()?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let tol = cfg.tolerances;
    match cli.command {
        Command::Ik { robot: r, pose, signs } => {
            let g = robot(&r)?;
            print_json(&inverse_kinematics(&g, &pose, signs))
        }
        Command::Fk { robot: r, joints, oracle, grid } => {
            let g = robot(&r)?;
            let j = JointVector::new(joints);
            let set = if oracle { oracle_fk(&g, &j, grid.unwrap_or(cfg.oracle_grid))? } else { solve_fk(&g, &j)? };
            print_json(&set)
        }
        Command::OracleFk { robot: r, joints, grid } => {
            let g = robot(&r)?;
            print_json(&oracle_fk(&g, &JointVector::new(joints), grid.unwrap_or(cfg.oracle_grid))?)
        }
        Command::Classify { robot: r, pose } => {
            let g = robot(&r)?;
            print_json(&classify_configuration_with(&g, &pose, &tol))
        }
        Command::Locus { robot: r, phi, window, step, out } => {
            let g = robot(&r)?;
            let conic = singularity_conic_seeded(&g, phi, cfg.seed)?;
            let lines = sample_conic_polyline(&conic, &window, step)?;
            match out {
                Format::Json => print_json(&json!({
                    "phi": conic.phi,
                    "coefficients": conic.coefficients,
                    "conic_class": conic.conic_class,
                    "serial_points": conic.serial_points,
                    "polylines": lines,
                })),
                Format::Csv => {
                    let mut s = String::from("x,y,polyline_id\n");
                    for (id, line) in lines.iter().enumerate() {
                        for p in line {
                            writeln!(s, "{},{},{id}", p.x, p.y)?;
                        }
                    }
                    emit(&s)
                }
            }
        }
        Command::DesignCheck { robot: r } => {
            let g = robot(&r)?;
            let arch = is_architecturally_singular(&g);
            let safety = passage_safety(&g);
            print_json(&json!({
                "architectural": arch.singular,
                "similarity": arch.similarity,
                "detail": arch.detail,
                "passage_safety": safety.safe,
                "angles": { "base": safety.base_angles, "platform": safety.platform_angles },
            }))
        }
        Command::Plan { robot: r, start, target, search_box, res, out } => {
            let g = robot(&r)?;
            let mut pc = PlannerConfig { tolerances: tol, search_box, ..Default::default() };
            if let Some(r) = res {
                pc.resolution = r;
            }
            let plan = plan_mode_change(&g, &start, target.as_ref(), &pc)?;
            let text = path_to_json(&plan.path);
            match out {
                Some(file) => {
                    std::fs::write(&file, format!("{text}\n")).with_context(|| format!("writing {}", file.display()))?;
                    print_json(&json!({
                        "out": file,
                        "target": plan.target,
                        "waypoints": plan.path.waypoints.len(),
                        "verdict": plan.certificate.verdict,
                        "passages": plan.certificate.count(CrossingKind::Passage),
                        "explored": plan.explored,
                    }))
                }
                None => emit(&format!("{text}\n")),
            }
        }
        Command::Verify { robot: r, path, samples, format } => {
            let g = robot(&r)?;
            let p: WorkspacePath = load_path(&path, samples.unwrap_or(DEFAULT_SAMPLES_PER_SEGMENT))?;
            let cert = verify_mode_change_with(&g, &p, &tol)?;
            if let Some(d) = &cert.diagnostic {
                eprintln!("note: {d}");
            }
            match format {
                Format::Json => print_json(&cert),
                Format::Csv => {
                    let tr = &cert.joint_path;
                    let mut s = String::from("t,measure,rho1,rho2,rho3\n");
                    for k in 0..tr.t.len() {
                        let m = tr.measure[k].map(|v| v.to_string()).unwrap_or_default();
                        writeln!(s, "{},{m},{},{},{}", tr.t[k], tr.rho1[k], tr.rho2[k], tr.rho3[k])?;
                    }
                    emit(&s)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
