mod io;

use std::env;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lamina::dynamics::{check_forward_invariance_s, omega_levels, separating_leaves_with, DEFAULT_OMEGA_CAP};
use lamina::entropy::{build_matrix, pair_basis, spectral_radius_report, sweep, sweep_csv};
use lamina::lamination::{
    backward_lift_with, check_forward_invariant, clean, excluded_region, good_region, LaminationDoc, LiftVariant,
    DEFAULT_DEPTH_CAP,
};
use lamina::major::{
    cubic_from_bisector, derive, distance, from_starting_points, quotient_graph, random_generic_major, validate,
    MajorDoc, StartSequence,
};
use lamina::render::{
    render_disk, render_entropy_plot, render_lift, render_major, render_torus, GeodesicStyle, Palette, RenderConfig,
};
use lamina::torus::RectDoc;
use lamina::{Angle, BigInt, PrimitiveMajor, RectangleSet};

use crate::io::{
    lamination_from_json, major_from_json, parse_angle, parse_classes, parse_sweep_csv, read_input,
    to_json, write_output,
};

/// Invariant laminations, primitive majors and core entropy.
#[derive(Parser, Debug)]
#[command(name = "lamina", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write a JSON reproducibility manifest here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Primitive majors: construction, validation, parameters, metric.
    #[command(subcommand)]
    Major(MajorCmd),
    /// Finite laminations: backward lifts, cleaning, invariance, good region.
    #[command(subcommand)]
    Lam(LamCmd),
    /// Core entropy log ρ(A_θ) of one angle.
    Entropy {
        #[arg(long, value_parser = parse_angle)]
        theta: Angle,
        /// Print basis, matrix and spectral data as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Core entropy of every reduced p/q with q ≤ max-den, as CSV.
    Sweep {
        #[arg(long)]
        max_den: u64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Non-escaping refinement Ω_n of the torus.
    Omega {
        #[arg(long, value_parser = parse_angle)]
        theta: Angle,
        #[arg(long)]
        level: usize,
        /// Emit the rectangles as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Separating leaves S_θ up to a lift depth.
    SepLeaves {
        #[arg(long, value_parser = parse_angle)]
        theta: Angle,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Variant::Literal)]
        variant: Variant,
        /// Also check forward invariance (exit 1 on violations).
        #[arg(long)]
        check: bool,
    },
    /// SVG output.
    #[command(subcommand)]
    Render(RenderCmd),
}

/// A major given inline (with --degree) or as a JSON file ("-" for stdin).
#[derive(Args, Debug, Clone)]
struct MajorInput {
    /// Classes as "a,b;c,d,e".
    #[arg(long, requires = "degree")]
    major: Option<String>,
    #[arg(long)]
    degree: Option<u32>,
    /// Major JSON file; stdin when neither this nor --major is given.
    #[arg(long, conflicts_with = "major")]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum MajorCmd {
    /// The unique major with the given starting points.
    FromStarts {
        #[arg(long)]
        degree: u32,
        #[arg(long, value_delimiter = ',', value_parser = parse_angle)]
        starts: Vec<Angle>,
        #[arg(long)]
        json: bool,
    },
    /// Check every primitive-major condition.
    Validate(MajorInput),
    /// Collapse the leaf with the largest start: a degree d−1 major.
    Derive(MajorInput),
    /// md(m, m′), or the quotient graph of one major.
    Metric {
        /// Classes as "a,b;c,d,e".
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 1024)]
        resolution: u32,
    },
    /// Cubic major from bisector length a ∈ (0, 1/3) and angle θ.
    Bisector {
        #[arg(long, value_parser = parse_angle)]
        a: Angle,
        #[arg(long, value_parser = parse_angle)]
        theta: Angle,
    },
    /// Seeded random generic majors, one JSON document per line.
    Random {
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Literal,
    EpsLimit,
}

impl From<Variant> for LiftVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Literal => LiftVariant::Literal,
            Variant::EpsLimit => LiftVariant::EpsLimit,
        }
    }
}

#[derive(Subcommand, Debug)]
enum LamCmd {
    /// Backward lift b_depth(m).
    Build {
        #[command(flatten)]
        major: MajorInput,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Variant::Literal)]
        variant: Variant,
    },
    /// Replace each linked cluster of leaves by its convex hull edges.
    Clean {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Forward invariance under z ↦ z^d (exit 1 when images are missing).
    Check {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Good region G (or the excluded region X) as torus rectangles.
    GoodRegion {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        excluded: bool,
    },
}

#[derive(Args, Debug)]
struct Style {
    #[arg(long, default_value_t = 600)]
    width: u32,
    #[arg(long, default_value_t = 600)]
    height: u32,
    #[arg(long, default_value_t = 1.0)]
    stroke: f64,
    #[arg(long, value_enum, default_value_t = GeoStyle::Hyperbolic)]
    geodesic: GeoStyle,
    #[arg(long)]
    grayscale: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GeoStyle {
    Hyperbolic,
    Chord,
}

impl Style {
    fn config(&self) -> RenderConfig {
        RenderConfig {
            width: self.width,
            height: self.height,
            stroke_width: self.stroke,
            palette: if self.grayscale { Palette::Grayscale } else { Palette::Classic },
            geodesic: match self.geodesic {
                GeoStyle::Hyperbolic => GeodesicStyle::Hyperbolic,
                GeoStyle::Chord => GeodesicStyle::StraightChord,
            },
            theta_max: 1.0,
        }
    }
}

#[derive(Subcommand, Debug)]
enum RenderCmd {
    /// A major, or a lamination (JSON, or the lift of --major to --depth).
    Disk {
        #[arg(long)]
        lamination: Option<PathBuf>,
        #[command(flatten)]
        major: MajorInput,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Variant::Literal)]
        variant: Variant,
        #[command(flatten)]
        style: Style,
    },
    /// Torus plot of rectangles: a JSON file, G/X of a major, or Ω_n.
    Torus {
        #[arg(long)]
        rects: Option<PathBuf>,
        #[arg(long, value_parser = parse_angle, requires = "level")]
        theta: Option<Angle>,
        #[arg(long)]
        level: Option<usize>,
        #[command(flatten)]
        major: MajorInput,
        #[arg(long)]
        excluded: bool,
        #[command(flatten)]
        style: Style,
    },
    /// Entropy against θ, from a sweep CSV or computed to --max-den.
    Plot {
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        max_den: Option<u64>,
        /// Restrict to θ ∈ [0, 1/2].
        #[arg(long)]
        half: bool,
        #[command(flatten)]
        style: Style,
    },
}

type CliResult<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn depth_cap() -> usize {
    env::var("LAMINA_DEPTH_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_DEPTH_CAP)
}

fn omega_cap() -> usize {
    env::var("LAMINA_DEPTH_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_OMEGA_CAP)
}

impl MajorInput {
    fn given(&self) -> bool {
        self.major.is_some() || self.input.is_some()
    }

    fn load(&self) -> CliResult<PrimitiveMajor> {
        match (&self.major, self.degree) {
            (Some(spec), Some(d)) => Ok(PrimitiveMajor::new(d, parse_classes(spec).map_err(|e| format!("--major: {e}"))?)),
            _ => major_from_json(&read_input(self.input.as_deref()).map_err(|e| format!("--input: {e}"))?),
        }
    }
}

fn major_json(m: &PrimitiveMajor) -> String {
    to_json(&MajorDoc::from(m))
}

fn lam_json(l: &lamina::FiniteLamination) -> String {
    to_json(&LaminationDoc::from(l))
}

#[derive(Serialize, Deserialize)]
struct RegionDoc {
    area: String,
    rects: Vec<RectDoc>,
}

fn region_doc(set: &RectangleSet) -> RegionDoc {
    RegionDoc { area: lamina::angle::format_ratio(&set.area()), rects: set.to_docs() }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    args: Vec<String>,
    seed: u64,
    depth_cap: usize,
    status: &'a str,
    elapsed_ms: u128,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    let status = if result.is_ok() { "ok" } else { "error" };
    if let Some(path) = &cli.manifest {
        let m = Manifest {
            tool: "lamina",
            version: env!("CARGO_PKG_VERSION"),
            args: env::args().skip(1).collect(),
            seed: cli.seed,
            depth_cap: depth_cap(),
            status,
            elapsed_ms: start.elapsed().as_millis(),
        };
        if let Err(e) = std::fs::write(path, to_json(&m)) {
            eprintln!("error: --manifest: {e}");
            return ExitCode::from(1);
        }
    }
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::Major(cmd) => run_major(cmd, cli.seed),
        Command::Lam(cmd) => run_lam(cmd),
        Command::Entropy { theta, json } => {
            let basis = pair_basis(theta).map_err(|e| format!("--theta: {e}"))?;
            let m = build_matrix(theta).map_err(err)?;
            let est = spectral_radius_report::<f64>(&m).map_err(err)?;
            let h = est.rho.ln();
            if *json {
                #[derive(Serialize)]
                struct Out {
                    theta: String,
                    basis: Vec<[String; 2]>,
                    matrix: Vec<Vec<u32>>,
                    rho: f64,
                    entropy: f64,
                    dimension: f64,
                    achieved_tolerance: f64,
                }
                let out = Out {
                    theta: theta.to_string(),
                    basis: basis.pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
                    matrix: m.to_dense(),
                    rho: est.rho,
                    entropy: h,
                    dimension: h / std::f64::consts::LN_2,
                    achieved_tolerance: est.achieved_tolerance,
                };
                print!("{}", to_json(&out));
            } else {
                println!("{h:.9}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { max_den, jobs, output } => {
            let rows = match jobs {
                Some(k) => rayon::ThreadPoolBuilder::new()
                    .num_threads(*k)
                    .build()
                    .map_err(|e| format!("--jobs: {e}"))?
                    .install(|| sweep(*max_den)),
                None => sweep(*max_den),
            }
            .map_err(|e| format!("--max-den: {e}"))?;
            write_output(output.as_ref(), &sweep_csv(&rows)).map_err(|e| format!("--output: {e}"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Omega { theta, level, json } => {
            let levels = omega_levels(theta, *level, omega_cap()).map_err(|e| format!("--level: {e}"))?;
            let top = levels.last().unwrap();
            if *json {
                print!("{}", to_json(&region_doc(&top.cells)));
            } else {
                let gap = lamina::dynamics::growth_gap::<BigInt>();
                println!("level {} cells {} area {}", top.level, top.cells.len(), lamina::angle::format_ratio(&top.cells.area()));
                for l in &levels {
                    println!("{} {} {}", l.level, l.cells.len(), l.separated_count(&gap));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SepLeaves { theta, depth, variant, check } => {
            let s = separating_leaves_with(theta, *depth, (*variant).into(), depth_cap()).map_err(|e| format!("--depth: {e}"))?;
            print!("{}", to_json(&s));
            if *check {
                let r = check_forward_invariance_s(theta, *depth).map_err(|e| format!("--depth: {e}"))?;
                eprintln!("checked {} leaves, {} violations", r.checked, r.violations.len());
                if !r.is_ok() {
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render(cmd) => run_render(cmd),
    }
}

fn run_major(cmd: &MajorCmd, seed: u64) -> CliResult<ExitCode> {
    match cmd {
        MajorCmd::FromStarts { degree, starts, json } => {
            let s = StartSequence::new(starts.clone(), *degree).map_err(|e| format!("--starts: {e}"))?;
            let m = from_starting_points(&s, *degree).map_err(err)?;
            if *json {
                print!("{}", major_json(&m));
            } else {
                for c in &m.classes {
                    println!("{}", c.angles.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        MajorCmd::Validate(input) => {
            let m = input.load()?;
            let v = validate(&m);
            if v.is_empty() {
                println!("valid");
                Ok(ExitCode::SUCCESS)
            } else {
                for x in &v {
                    println!("{x}");
                }
                Ok(ExitCode::from(1))
            }
        }
        MajorCmd::Derive(input) => {
            let m = input.load()?;
            print!("{}", major_json(&derive(&m).map_err(err)?));
            Ok(ExitCode::SUCCESS)
        }
        MajorCmd::Metric { a, b, degree, resolution } => {
            let ma = PrimitiveMajor::new(*degree, parse_classes(a).map_err(|e| format!("--a: {e}"))?);
            match b {
                None => {
                    let g = quotient_graph(&ma).map_err(|e| format!("--a: {e}"))?;
                    print!("{}", to_json(&g));
                }
                Some(b) => {
                    let mb = PrimitiveMajor::new(*degree, parse_classes(b).map_err(|e| format!("--b: {e}"))?);
                    let md = distance(&ma, &mb, *resolution).map_err(err)?;
                    println!(
                        "{} (error bound {})",
                        lamina::angle::format_ratio(&md.value),
                        lamina::angle::format_ratio(&md.error_bound)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        MajorCmd::Bisector { a, theta } => {
            let m = cubic_from_bisector(a.value(), theta).map_err(|e| format!("--a: {e}"))?;
            print!("{}", major_json(&m));
            Ok(ExitCode::SUCCESS)
        }
        MajorCmd::Random { degree, count } => {
            if *degree < 2 {
                return Err("--degree: must be at least 2".into());
            }
            for k in 0..*count {
                let m: PrimitiveMajor = random_generic_major(*degree, seed.wrapping_add(k));
                print!("{}", major_json(&m));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_lam(cmd: &LamCmd) -> CliResult<ExitCode> {
    match cmd {
        LamCmd::Build { major, depth, variant } => {
            let m = major.load()?;
            let b = backward_lift_with(&m, *depth, (*variant).into(), depth_cap()).map_err(|e| format!("--depth: {e}"))?;
            print!("{}", lam_json(&b.lamination()));
            Ok(ExitCode::SUCCESS)
        }
        LamCmd::Clean { input } => {
            let l = lamination_from_json(&read_input(input.as_deref()).map_err(|e| format!("--input: {e}"))?)?;
            print!("{}", lam_json(&clean(&l).map_err(err)?));
            Ok(ExitCode::SUCCESS)
        }
        LamCmd::Check { input } => {
            let l = lamination_from_json(&read_input(input.as_deref()).map_err(|e| format!("--input: {e}"))?)?;
            let r = check_forward_invariant(&l, l.degree);
            print!("{}", to_json(&r));
            Ok(if r.is_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        LamCmd::GoodRegion { input, excluded } => {
            let l = lamination_from_json(&read_input(input.as_deref()).map_err(|e| format!("--input: {e}"))?)?;
            let set = if *excluded { excluded_region(&l) } else { good_region(&l) }.map_err(err)?;
            print!("{}", to_json(&region_doc(&set)));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_render(cmd: &RenderCmd) -> CliResult<ExitCode> {
    let (svg, out) = match cmd {
        RenderCmd::Disk { lamination, major, depth, variant, style } => {
            let cfg = style.config();
            let svg = if let Some(path) = lamination {
                let l = lamination_from_json(&read_input(Some(path)).map_err(|e| format!("--lamination: {e}"))?)?;
                render_disk(&l, &cfg)
            } else {
                let m = major.load()?;
                match depth {
                    Some(d) => {
                        let b = backward_lift_with(&m, *d, (*variant).into(), depth_cap())
                            .map_err(|e| format!("--depth: {e}"))?;
                        render_lift(&m, &b.lamination(), &cfg)
                    }
                    None => render_major(&m, &cfg),
                }
            };
            (svg, &style.output)
        }
        RenderCmd::Torus { rects, theta, level, major, excluded, style } => {
            let cfg = style.config();
            let set: RectangleSet = if let Some(path) = rects {
                let text = read_input(Some(path)).map_err(|e| format!("--rects: {e}"))?;
                let docs: Vec<RectDoc> = match serde_json::from_str::<RegionDoc>(&text) {
                    Ok(r) => r.rects,
                    Err(_) => serde_json::from_str(&text).map_err(|e| format!("--rects: {e}"))?,
                };
                RectangleSet::from_docs(&docs).map_err(|e| format!("--rects: {e}"))?
            } else if let (Some(t), Some(n)) = (theta, level) {
                omega_levels(t, *n, omega_cap()).map_err(|e| format!("--level: {e}"))?.pop().unwrap().cells
            } else if major.given() {
                let m = major.load()?;
                let l = lamina::FiniteLamination::new(m.degree, m.leaves());
                if *excluded { excluded_region(&l) } else { good_region(&l) }.map_err(err)?
            } else {
                return Err("render torus needs --rects, --theta/--level or a major".into());
            };
            (render_torus::<BigInt>(&set, &[], &cfg), &style.output)
        }
        RenderCmd::Plot { csv, max_den, half, style } => {
            let rows = match (csv, max_den) {
                (Some(p), _) => parse_sweep_csv(&read_input(Some(p)).map_err(|e| format!("--csv: {e}"))?)
                    .map_err(|e| format!("--csv: {e}"))?,
                (None, Some(n)) => sweep(*n).map_err(|e| format!("--max-den: {e}"))?,
                (None, None) => return Err("render plot needs --csv or --max-den".into()),
            };
            let cfg = RenderConfig { theta_max: if *half { 0.5 } else { 1.0 }, ..style.config() };
            (render_entropy_plot(&rows, &cfg).map_err(err)?, &style.output)
        }
    };
    write_output(out.as_ref(), &svg).map_err(|e| format!("--output: {e}"))?;
    Ok(ExitCode::SUCCESS)
}
