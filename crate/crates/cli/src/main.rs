//! `kleinpinch`: reproducible, file-emitting runs of the library's
//! computations.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 enumeration
//! budget exceeded, 4 invariant violation.

mod commands;
mod config;
mod verify;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kleinpinch::{SpherePoint, Window};

use config::{budget_from_env, parse_point, parse_window, RunConfig};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn io(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<kleinpinch::Error> for Failure {
    fn from(e: kleinpinch::Error) -> Self {
        use kleinpinch::Error::*;
        let code = match e {
            EnumerationBudget { .. } => 3,
            Io(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser, Debug)]
#[command(name = "kleinpinch", version, about = "Kleinian groups, Beltrami coefficients and pinching degenerations")]
struct Cli {
    /// Directory receiving output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Maximum word length.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    /// Largest family index.
    #[arg(long, global = true, default_value_t = 100)]
    nmax: u64,
    /// Plane window x_min,x_max,y_min,y_max.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<Window>,
    /// Raster side length in pixels or cells.
    #[arg(long, global = true, default_value_t = 512)]
    res: usize,
    /// Seed for every randomized sample set.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Use the literal printed sign of the noded map's angular part.
    #[arg(long = "paper-sign", global = true)]
    literal_sign: bool,
    /// Tolerance for trace-squared classification.
    #[arg(long, global = true, default_value_t = kleinpinch::moebius::CLASSIFY_TOL)]
    tau_cls: f64,
    /// Threshold on |μ| separating omega cells from lambda candidates.
    #[arg(long, global = true, default_value_t = kleinpinch::beltrami::DEFAULT_TAU_OMEGA)]
    tau_omega: f64,
    /// Largest allowed diameter of the last arc of a finite family.
    #[arg(long, global = true, default_value_t = 1e-2)]
    eps_tail: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// |μ(e^{iη})| over (0, 2π) and the discontinuity partition of μ.
    MuCurve {
        #[arg(long, default_value_t = 2048)]
        samples: usize,
    },
    /// Limit set of a group as CSV and PGM.
    Limitset {
        #[arg(long)]
        group: PathBuf,
        /// Draw the whole sphere instead of a plane window.
        #[arg(long)]
        stereo: bool,
    },
    /// Orbit of a point as CSV and PGM.
    Orbit {
        #[arg(long)]
        group: PathBuf,
        /// Base point x,y or inf.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,0")]
        point: SpherePoint,
        #[arg(long)]
        stereo: bool,
    },
    /// Trace, fixed-point and shrinkage tables of the degenerating family.
    Pinch {
        /// Arc length of the straight-segment model.
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        /// Normalization radius; defaults to twice the length.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Stage-by-stage quantities of the length-shrinking construction.
    Section4 {
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Runs the named property checks and reports measured against threshold.
    Verify {
        /// Multiplier applied to every upper-bound threshold.
        #[arg(long, default_value_t = 1.0)]
        threshold_scale: f64,
    },
    /// Checks an arc family against the noded-family conditions.
    NodedCheck {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::MuCurve { .. } => "mu-curve",
            Command::Limitset { .. } => "limitset",
            Command::Orbit { .. } => "orbit",
            Command::Pinch { .. } => "pinch",
            Command::Section4 { .. } => "section4",
            Command::Verify { .. } => "verify",
            Command::NodedCheck { .. } => "noded-check",
        }
    }

    fn inputs(&self) -> Vec<PathBuf> {
        match self {
            Command::Limitset { group, .. } | Command::Orbit { group, .. } => vec![group.clone()],
            Command::NodedCheck { family, group } => vec![family.clone(), group.clone()],
            _ => vec![],
        }
    }

    fn default_window(&self) -> Window {
        match self {
            Command::MuCurve { .. } => Window::square(3.0),
            _ => Window::square(4.0),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = RunConfig {
        command: cli.command.name(),
        inputs: cli.command.inputs(),
        out: cli.out.clone(),
        window: cli.window.unwrap_or_else(|| cli.command.default_window()),
        res: cli.res,
        depth: cli.depth,
        n_max: cli.nmax,
        tau_cls: cli.tau_cls,
        tau_omega: cli.tau_omega,
        eps_tail: cli.eps_tail,
        seed: cli.seed,
        budget: budget_from_env()?,
    };
    config.validate()?;
    match cli.command {
        Command::MuCurve { samples } => commands::mu_curve(&config, samples),
        Command::Limitset { group, stereo } => commands::limitset(&config, &group, stereo),
        Command::Orbit { group, point, stereo } => commands::orbit(&config, &group, point, stereo),
        Command::Pinch { length, radius } => commands::pinch(&config, length, radius.unwrap_or(2.0 * length)),
        Command::Section4 { length, radius } => commands::section4(&config, length, radius.unwrap_or(2.0 * length)),
        Command::Verify { threshold_scale } => verify::run(&config, cli.literal_sign, threshold_scale),
        Command::NodedCheck { family, group } => commands::noded_check(&config, &family, &group),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
