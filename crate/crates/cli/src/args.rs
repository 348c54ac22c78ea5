use std::path::PathBuf;

use bosonbell::{Direction, InequalityKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bosonbell",
    version,
    about = "Spin correlations and Bell-type inequalities for vector boson pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (json by default, csv for `scan` and `figure`)
    #[arg(long, global = true)]
    pub format: Option<Format>,

    /// Significant digits in numeric output
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=17))]
    pub precision: u32,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// key = value file; keys are long flag names, command line wins
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint outcome table for one pair of directions
    Probs(ProbsArgs),
    /// Evaluate one inequality at fixed directions
    Ineq(IneqArgs),
    /// Inequality value along an x grid for several states
    Scan(ScanArgs),
    /// Reproduce the psi/xi curves for a preset configuration
    Figure(FigureArgs),
    /// Maximize an inequality over measurement directions
    Optimize(OptimizeArgs),
    /// Compton scaling factor of a cube detector
    Localize(LocalizeArgs),
}

/// A state given as `psi`, `xi` or a number `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSel {
    Psi,
    Xi,
    C(f64),
}

impl StateSel {
    pub fn c(self) -> f64 {
        match self {
            StateSel::Psi => bosonbell::states::C_PSI,
            StateSel::Xi => bosonbell::states::C_XI,
            StateSel::C(c) => c,
        }
    }

    pub fn column(self) -> String {
        match self {
            StateSel::Psi => "value_psi".into(),
            StateSel::Xi => "value_xi".into(),
            StateSel::C(c) => format!("value_c{c}"),
        }
    }

    pub fn label(self) -> String {
        match self {
            StateSel::Psi => "psi".into(),
            StateSel::Xi => "xi".into(),
            StateSel::C(c) => format!("c={c}"),
        }
    }
}

pub fn parse_state(s: &str) -> Result<StateSel, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "psi" => Ok(StateSel::Psi),
        "xi" => Ok(StateSel::Xi),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|c| c.is_finite())
            .map(StateSel::C)
            .ok_or_else(|| format!("expected psi, xi or a finite number, got `{s}`")),
    }
}

/// `theta,phi` in radians.
pub fn parse_direction(s: &str) -> Result<Direction, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [t, p] = parts.as_slice() else {
        return Err(format!("expected `theta,phi`, got `{s}`"));
    };
    let theta: f64 = t.parse().map_err(|_| format!("bad theta `{t}`"))?;
    let phi: f64 = p.parse().map_err(|_| format!("bad phi `{p}`"))?;
    Direction::new(theta, phi).map_err(|e| e.to_string())
}

pub fn parse_kind(s: &str) -> Result<InequalityKind, String> {
    s.parse::<InequalityKind>().map_err(|e| e.to_string())
}

fn parse_x(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("bad number `{s}`"))?;
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("x must be finite and >= 0, got {s}"))
    }
}

fn parse_c(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(c) if c.is_finite() => Ok(c),
        _ => Err(format!("bad c `{s}`")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// psi, xi or a number
    #[arg(long, allow_hyphen_values = true, value_parser = parse_state, conflicts_with = "c")]
    pub state: Option<StateSel>,

    /// Family parameter c of the scalar state
    #[arg(long, allow_hyphen_values = true, value_parser = parse_c)]
    pub c: Option<f64>,

    #[arg(long, default_value = "0", value_parser = parse_x)]
    pub x: f64,

    /// Flight direction of the particle, `theta,phi`
    #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_direction)]
    pub n: Direction,
}

impl StateArgs {
    pub fn selection(&self) -> StateSel {
        match (self.state, self.c) {
            (Some(s), _) => s,
            (None, Some(c)) => StateSel::C(c),
            (None, None) => StateSel::Psi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Closed,
    Trace,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Closed => "closed",
            Engine::Trace => "trace",
        }
    }
}

#[derive(Debug, Args)]
pub struct ProbsArgs {
    #[command(flatten)]
    pub state: StateArgs,

    #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_direction)]
    pub a: Direction,

    #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_direction)]
    pub b: Direction,

    /// closed or trace; repeat to evaluate both
    #[arg(long, value_enum)]
    pub engine: Vec<Engine>,

    /// Compare the engines and fail if they differ by more than 1e-10
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct IneqArgs {
    /// chsh, mermin or cglmp
    #[arg(value_parser = parse_kind)]
    pub kind: InequalityKind,

    /// psi, xi or a number c
    #[arg(long, default_value = "psi", allow_hyphen_values = true, value_parser = parse_state)]
    pub state: StateSel,

    #[arg(long, default_value = "0", value_parser = parse_x)]
    pub x: f64,

    #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_direction)]
    pub n: Direction,

    /// Take directions from a preset (1 to 5)
    #[arg(long, conflicts_with_all = ["a", "b", "c", "d"])]
    pub fig: Option<u8>,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_direction)]
    pub a: Option<Direction>,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_direction)]
    pub b: Option<Direction>,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_direction)]
    pub c: Option<Direction>,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_direction)]
    pub d: Option<Direction>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value = "0", value_parser = parse_x)]
    pub xmin: f64,

    #[arg(long, default_value = "5", value_parser = parse_x)]
    pub xmax: f64,

    #[arg(long, default_value = "0.01")]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Defaults to the kind of `--fig`
    #[arg(long, value_parser = parse_kind)]
    pub ineq: Option<InequalityKind>,

    /// Take directions from a preset (1 to 5)
    #[arg(long, conflicts_with = "dir")]
    pub fig: Option<u8>,

    /// Measurement directions in order a, b, c, d
    #[arg(long, allow_hyphen_values = true, value_parser = parse_direction)]
    pub dir: Vec<Direction>,

    /// States to scan; psi and xi when neither this nor `--c` is given
    #[arg(long, allow_hyphen_values = true, value_parser = parse_state)]
    pub state: Vec<StateSel>,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_c)]
    pub c: Vec<f64>,

    #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_direction)]
    pub n: Direction,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub id: u8,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_parser = parse_kind)]
    pub ineq: InequalityKind,

    #[command(flatten)]
    pub state: StateArgs,

    #[arg(long, default_value_t = 100)]
    pub restarts: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Particle {
    Muon,
    Electron,
    Custom,
}

#[derive(Debug, Args)]
pub struct LocalizeArgs {
    #[arg(long, value_enum, default_value = "muon")]
    pub particle: Particle,

    /// Reduced Compton wavelength in metres, required for `custom`
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Cube edge length in metres
    #[arg(long, allow_hyphen_values = true)]
    pub l: f64,

    /// Lorentz factor
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
}
