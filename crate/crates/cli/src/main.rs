//! Command-line front end: track validation and splitting, flat surfaces,
//! and the SL(2,Z) orbit experiments.
//!
//! Exit status: 0 success, 1 domain-level negative (invalid track, tie,
//! bad measure), 2 usage, parse or I/O error.

// with_field! instantiates generic bodies at f64, where clones are copies
#![allow(clippy::clone_on_copy)]

mod error;
mod flat_cmds;
mod io;
mod sl2z_cmds;
mod track_cmds;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lamina_core::flat::Vec2;
use lamina_core::sl2z::Rect;

use error::{CliError, CliResult};
use io::{magic, read, Sink};

#[derive(Parser, Debug)]
#[command(
    name = "lamina",
    version,
    about = "Train tracks, splitting sequences, flat surfaces and SL(2,Z) orbits"
)]
struct Cli {
    /// Exact arithmetic in the field of the input (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Double precision arithmetic.
    #[arg(long, global = true)]
    float: bool,
    /// Random seed; required by randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FlowArgs {
    /// Apply the matrix a,b,c,d (determinant one) first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    matrix: Option<Vec<String>>,
    /// Then apply diag(e^t, e^-t); needs --float.
    #[arg(long, allow_hyphen_values = true)]
    geodesic: Option<f64>,
    /// Then apply the horocycle [[1,0],[s,1]].
    #[arg(long, allow_hyphen_values = true)]
    horocycle: Option<String>,
}

impl FlowArgs {
    fn flow(&self) -> CliResult<flat_cmds::Flow> {
        Ok(flat_cmds::Flow {
            matrix: self.matrix.as_deref().map(entries::<4>).transpose()?,
            geodesic: self.geodesic,
            horocycle: self.horocycle.clone(),
        })
    }
}

/// Exactly `N` comma-separated values.
fn entries<const N: usize>(v: &[String]) -> CliResult<[String; N]> {
    v.to_vec()
        .try_into()
        .map_err(|_| CliError::usage(format!("expected {} comma-separated values, got {}", N, v.len())))
}

fn floats<const N: usize>(v: &[String]) -> CliResult<[f64; N]> {
    let e = entries::<N>(v)?;
    let mut out = [0.0; N];
    for (o, t) in out.iter_mut().zip(&e) {
        *o = t.trim().parse().map_err(|_| CliError::usage(format!("bad number '{}'", t)))?;
    }
    Ok(out)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a .ttk track against every structural invariant.
    Validate { track: String },
    /// Measure cone of a .ttk track, or cone points of a .fsf surface.
    Cones { file: String },
    /// Extreme rays of the transverse measure cone of a track.
    VertexCycles { track: String },
    /// Full split of a measured track, or one split with --branch.
    Split {
        track: String,
        measure: String,
        #[arg(long)]
        branch: Option<usize>,
        /// Write the child track here.
        #[arg(long)]
        child: Option<PathBuf>,
    },
    /// Drive the full splitting sequence of a measure and write an .ssl log.
    Drive {
        track: String,
        measure: String,
        #[arg(long)]
        steps: usize,
        /// Continue the log at --out if it exists.
        #[arg(long, requires = "out")]
        resume: bool,
    },
    /// Look for a period of the splitting sequence within a step budget.
    Periodicity {
        track: String,
        measure: String,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Saddle connections of length at most --length, as CSV.
    SaddleConnections {
        surface: String,
        #[arg(long)]
        length: String,
        #[command(flatten)]
        flow: FlowArgs,
    },
    /// Decide whether short saddle connections contain a circuit.
    KEpsilon {
        surface: String,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        flow: FlowArgs,
    },
    /// Horocycle average of the certified systole bound; CSV series and JSON summary.
    HorocycleAvg {
        surface: String,
        #[arg(long)]
        delta: f64,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        dt: f64,
        /// Rotate this direction x,y to horizontal first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<String>>,
        /// Rescale to area one.
        #[arg(long)]
        normalize: bool,
        /// Further deltas (at most --delta) to report fractions for.
        #[arg(long, value_delimiter = ',')]
        report: Vec<f64>,
    },
    /// SL(2,Z) orbit experiments.
    #[command(subcommand)]
    Sl2z(Sl2zCommand),
}

#[derive(Subcommand, Debug)]
enum Sl2zCommand {
    /// Orbit points of norm at most --radius as CSV (x, y, word).
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        depth: usize,
    },
    /// Smallest distance between orbit points, as JSON.
    Gap {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        depth: usize,
    },
    /// Are the coordinates of the point dependent over Q?
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Monte Carlo area check of a matrix on a box; needs --seed.
    Lebesgue {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        matrix: Vec<String>,
        /// x0,x1,y0,y1
        #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true)]
        rect: Option<Vec<String>>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
}

fn run(cli: Cli) -> CliResult {
    let sink = Sink::new(cli.out.clone());
    let float = cli.float && !cli.exact;
    match cli.command {
        Command::Validate { track } => track_cmds::validate(&track, &sink),
        Command::Cones { file } => {
            let text = read(&file)?;
            match magic(&text) {
                Some("ttk") => track_cmds::track_cones(&file, &sink),
                Some("fsf") => flat_cmds::surface_cones(&file, &text, float, &sink),
                _ => Err(CliError::parse(&file, "line 1: expected a 'ttk 1' or 'fsf 1' header")),
            }
        }
        Command::VertexCycles { track } => track_cmds::cycles(&track, &sink),
        Command::Split {
            track,
            measure,
            branch,
            child,
        } => track_cmds::split_cmd(&track, &measure, branch, float, child.as_deref(), &sink),
        Command::Drive {
            track,
            measure,
            steps,
            resume,
        } => {
            let at = cli.out.as_ref().map(|p| p.display().to_string());
            track_cmds::drive(&track, &measure, steps, float, if resume { at.as_deref() } else { None }, &sink)
        }
        Command::Periodicity { track, measure, steps } => track_cmds::periodicity(&track, &measure, steps, float, &sink),
        Command::SaddleConnections { surface, length, flow } => flat_cmds::connections(&surface, &length, &flow.flow()?, float, &sink),
        Command::KEpsilon { surface, eps, flow } => flat_cmds::k_epsilon(&surface, &eps, &flow.flow()?, float, &sink),
        Command::HorocycleAvg {
            surface,
            delta,
            t_max,
            dt,
            direction,
            normalize,
            report,
        } => {
            let args = flat_cmds::HorocycleArgs {
                delta,
                t_max,
                dt,
                direction: direction.as_deref().map(floats::<2>).transpose()?.map(|[x, y]| Vec2::new(x, y)),
                normalize,
                report,
            };
            let summary = flat_cmds::horocycle(&surface, &args, &sink)?;
            if sink.is_file() {
                print!("{}", summary);
            } else {
                eprint!("{}", summary);
            }
            Ok(())
        }
        Command::Sl2z(cmd) => match cmd {
            Sl2zCommand::Orbit { point, radius, depth } => {
                sl2z_cmds::orbit(&sl2z_cmds::Point::parse(&point)?, &radius, depth, float, &sink)
            }
            Sl2zCommand::Gap { point, radius, depth } => sl2z_cmds::gap(&sl2z_cmds::Point::parse(&point)?, &radius, depth, float, &sink),
            Sl2zCommand::Classify { point } => sl2z_cmds::classify(&sl2z_cmds::Point::parse(&point)?, float, &sink),
            Sl2zCommand::Lebesgue { matrix, rect, samples } => {
                let rect = match rect.as_deref().map(floats::<4>).transpose()? {
                    Some([x0, x1, y0, y1]) => Rect { x0, x1, y0, y1 },
                    None => Rect::unit(),
                };
                sl2z_cmds::lebesgue(&entries::<4>(&matrix)?, &rect, samples, cli.seed, &sink)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            e.code()
        }
    }
}
