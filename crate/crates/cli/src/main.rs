use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use epicube::degeneracy::{
    is_combinatorial_cube, turnbull_young_reduced, turnbull_young_scale, unit_cube, veronese_rank, ConfigTen,
    CubeConfig,
};
use epicube::exact::{run_certificate, CertificateConfig, CertificateSampling};
use epicube::harness::io::{read_correspondences, read_world_points, write_region, write_summary, write_sweep};
use epicube::harness::{noise_grid, run_noise_sweep, summarize, Algo, ExperimentConfig};
use epicube::projective::epipolar_residual;
use epicube::quadrics::{classify, quadric_through_points, region_grid, PlaneChart};
use epicube::{Error, HomPoint3, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "epicube", version, about = "Two-view epipolar geometry on combinatorial cubes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate F from a correspondence file and print it with its residual.
    Estimate {
        /// CSV with header x1,x2,x3,y1,y2,y3.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "cube8", value_parser = algo_parser())]
        algo: Algo,
    },
    /// Report the Veronese rank of world points and what it implies.
    VerifyDegeneracy {
        /// CSV with header p1,p2,p3,p4. Eight rows are read as cube vertices
        /// with labels 0,1,2,3,6,7,8,9; ten rows as those followed by f1, f2.
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the noise sweep and write one row per trial, level and algorithm.
    Simulate {
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest noise level as a fraction of the image diagonal.
        #[arg(long, default_value_t = 0.10)]
        noise_max: f64,
        /// Number of evenly spaced noise levels from 0 to --noise-max.
        #[arg(long, default_value_t = 11)]
        levels: usize,
        /// Sweep CSV; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional per-level summary CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Classify the quadric through a cube, f1 and every f2 on a plane grid.
    Region {
        #[arg(long, default_value_t = 50)]
        resolution: usize,
        /// Cube vertices (p1,p2,p3,p4, labels 0,1,2,3,6,7,8,9); unit cube when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// First focal point as x,y,z.
        #[arg(long, default_value = "5,1,2", value_parser = parse_point)]
        f1: HomPoint3,
        /// Height of the horizontal plane carrying f2.
        #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
        height: f64,
        /// Half width of the square chart.
        #[arg(long, default_value_t = 3.0)]
        half: f64,
        /// Region CSV; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the bracket identity on random rational cubes in exact arithmetic.
    ExactCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 25)]
        controls: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Sampling::Both)]
        sampling: Sampling,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sampling {
    NormalForm,
    Projective,
    Both,
}

impl From<Sampling> for CertificateSampling {
    fn from(s: Sampling) -> Self {
        match s {
            Sampling::NormalForm => CertificateSampling::NormalForm,
            Sampling::Projective => CertificateSampling::Projective,
            Sampling::Both => CertificateSampling::Both,
        }
    }
}

fn algo_parser() -> impl TypedValueParser<Value = Algo> {
    PossibleValuesParser::new(Algo::ALL.map(Algo::as_str)).map(|s| s.parse::<Algo>().expect("listed value"))
}

fn parse_point(s: &str) -> Result<HomPoint3, String> {
    let c: Vec<f64> =
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect::<Result<_, _>>()?;
    match c[..] {
        [x, y, z] if [x, y, z].iter().all(|v| v.is_finite()) => Ok(HomPoint3::affine(x, y, z)),
        _ => Err("expected three finite numbers x,y,z".into()),
    }
}

/// Failure of a subcommand, split by exit status.
enum Failure {
    Usage(String),
    Data(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Data(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::Data(Error::Io(format!("{}: {e}", path.display()))))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Data(Error::Io(format!("{}: {e}", p.display()))))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Estimate { input, algo } => estimate(&input, algo),
        Command::VerifyDegeneracy { input } => verify_degeneracy(&input),
        Command::Simulate { trials, seed, noise_max, levels, out, summary } => {
            simulate(trials, seed, noise_max, levels, out.as_deref(), summary.as_deref())
        }
        Command::Region { resolution, input, f1, height, half, out } => {
            region(resolution, input.as_deref(), &f1, height, half, out.as_deref())
        }
        Command::ExactCheck { trials, controls, seed, sampling } => exact_check(trials, controls, seed, sampling),
    }
}

fn estimate(input: &Path, algo: Algo) -> Result<(), Failure> {
    let (x, y) = read_correspondences(open(input)?)?;
    let f = algo.estimate(&x, &y)?;
    let residual = epipolar_residual(&f, &x, &y)?;
    let mut out = io::stdout().lock();
    for row in f.to_row_major().chunks(3) {
        writeln!(out, "{:e} {:e} {:e}", row[0], row[1], row[2])?;
    }
    writeln!(out, "residual {residual:e}")?;
    Ok(())
}

fn verify_degeneracy(input: &Path) -> Result<(), Failure> {
    let pts = read_world_points(open(input)?)?;
    let tol = Tolerances::default();
    let rank = veronese_rank(&pts, tol.rank);
    let mut out = io::stdout().lock();
    writeln!(out, "points {}", pts.len())?;
    writeln!(out, "veronese_rank {rank}")?;
    writeln!(out, "z_rank_bound {rank}")?;
    if pts.len() >= 8 {
        let defeated = if rank <= 7 { "yes" } else { "no" };
        writeln!(out, "eight_point_defeated {defeated}")?;
    }
    match pts.len() {
        8 => {
            let cube = CubeConfig::new(pts.try_into().expect("eight points"));
            let check = is_combinatorial_cube(&cube, tol.zero);
            let verdict = if check.is_cube { "yes" } else { "no" };
            writeln!(out, "combinatorial_cube {verdict}")?;
            if let Some(reason) = check.reason {
                writeln!(out, "reason {reason}")?;
            }
        }
        10 => {
            let cube = CubeConfig::new(pts[..8].try_into().expect("eight points"));
            let config = ConfigTen::new(&cube, pts[8], pts[9]);
            let inv = turnbull_young_reduced(&config);
            let rel = inv.abs() / turnbull_young_scale(&config);
            writeln!(out, "turnbull_young {inv:e}")?;
            writeln!(out, "turnbull_young_relative {rel:e}")?;
            let class = match quadric_through_points(&pts) {
                Ok(q) => classify(&q).kind.as_str(),
                Err(Error::NoQuadric) => "NONE",
                Err(Error::PencilOfQuadrics { .. }) => "NOT_UNIQUE",
                Err(e) => return Err(e.into()),
            };
            writeln!(out, "quadric {class}")?;
        }
        _ => {}
    }
    Ok(())
}

fn simulate(
    trials: usize,
    seed: u64,
    noise_max: f64,
    levels: usize,
    out: Option<&Path>,
    summary: Option<&Path>,
) -> Result<(), Failure> {
    if !(noise_max.is_finite() && noise_max >= 0.0) {
        return Err(Failure::Usage(format!("--noise-max {noise_max} must be finite and non-negative")));
    }
    let cfg = ExperimentConfig { trials, noise_levels: noise_grid(noise_max, levels), seed, ..Default::default() };
    let records = run_noise_sweep(&cfg)?;
    let mut w = sink(out)?;
    write_sweep(&mut w, &records)?;
    w.flush()?;
    if let Some(path) = summary {
        let mut w = sink(Some(path))?;
        write_summary(&mut w, &summarize(&records))?;
        w.flush()?;
    }
    Ok(())
}

fn region(
    resolution: usize,
    input: Option<&Path>,
    f1: &HomPoint3,
    height: f64,
    half: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if !(half.is_finite() && half > 0.0) || !height.is_finite() {
        return Err(Failure::Usage("--half must be positive and --height finite".into()));
    }
    let cube = match input {
        Some(path) => {
            let pts = read_world_points(open(path)?)?;
            let n = pts.len();
            let vertices: [HomPoint3; 8] = pts
                .try_into()
                .map_err(|_| Failure::Data(Error::Parse(format!("cube file needs 8 points, got {n}"))))?;
            CubeConfig::new(vertices)
        }
        None => unit_cube(),
    };
    let cells = region_grid(&cube, f1, &PlaneChart::horizontal(height, half), resolution)?;
    let mut w = sink(out)?;
    write_region(&mut w, &cells)?;
    w.flush()?;
    Ok(())
}

fn exact_check(trials: usize, controls: usize, seed: u64, sampling: Sampling) -> Result<(), Failure> {
    let cfg = CertificateConfig { trials, controls, seed, sampling: sampling.into(), ..Default::default() };
    let report = run_certificate(&cfg)?;
    let mut out = io::stdout().lock();
    writeln!(out, "trials {}", report.trials)?;
    writeln!(out, "projective_trials {}", report.projective_trials)?;
    writeln!(out, "invariant_zero {}", report.invariant_zero)?;
    for (rank, count) in &report.rank_histogram {
        writeln!(out, "veronese_rank {rank} {count}")?;
    }
    writeln!(out, "controls {}", report.controls)?;
    writeln!(out, "controls_nonzero {}", report.controls_nonzero)?;
    let passed = report.passed();
    writeln!(out, "certificate {}", if passed { "PASS" } else { "FAIL" })?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Check("certificate failed".into()))
    }
}
