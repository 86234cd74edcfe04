use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rigidlab::commands::{self, GeometryArg, Init, SPECTRUM_TOL};
use rigidlab::format::{ComplexJson, GraphJson, LambdaJson, MapJson};
use rigidlab::report::{emit, read_json, render, Format, Outcome};
use rigidlab::suites::Field;
use rigidlab::Error;
use rigidlab_core::harmonic::DescentOptions;
use rigidlab_core::indefinite::ParabolicConfig;
use rigidlab_core::LinkKind;

/// Finite checks behind fixed-point rigidity for lattices in SL3 and Sp4.
///
/// Exit status: 0 when every check passes, 1 when one fails, 2 on usage or
/// input errors.
#[derive(Parser)]
#[command(name = "rigidlab", version)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ReportArg {
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a link graph as JSON.
    Geometry {
        #[arg(long, value_enum)]
        kind: GeometryArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectrum of a link graph read from JSON.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        /// Allowed distance of λ₁ from its closed form.
        #[arg(long, default_value_t = SPECTRUM_TOL)]
        tol: f64,
        #[command(flatten)]
        report: ReportArg,
    },
    /// λ₁ of a link and the rigidity margin.
    Gap {
        /// sl3, sp4-special or sp4-nonspecial.
        #[arg(long, value_parser = parse_kind)]
        kind: LinkKind,
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Harmonic descent on a voltage complex.
    Harmonic {
        #[arg(long)]
        complex: PathBuf,
        /// Initial map as JSON.
        #[arg(long, conflicts_with = "seed", required_unless_present = "seed")]
        init: Option<PathBuf>,
        /// Seed for a random initial map.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DescentOptions::default().max_iter)]
        max_iter: usize,
        /// Stop once a sweep lowers the energy by less than this.
        #[arg(long, default_value_t = DescentOptions::default().tol)]
        tol: f64,
        /// Report divergence once a value drifts this far.
        #[arg(long, default_value_t = DescentOptions::default().divergence_radius)]
        divergence_radius: f64,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Link comparison, counting identity and gap bound for a map.
    Chain {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        lambda_table: PathBuf,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Random parabolic elements of an indefinite form.
    Parabolic {
        #[arg(long, value_enum, ignore_case = true)]
        field: Field,
        /// Witt index of the isotropic block.
        #[arg(long)]
        q: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n3: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Diameters of the simplices of the spherical apartment.
    Apartment {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        report: ReportArg,
    },
}

fn parse_kind(s: &str) -> Result<LinkKind, String> {
    LinkKind::from_name(s).ok_or_else(|| format!("expected one of sl3, sp4-special, sp4-nonspecial; got {s:?}"))
}

fn run(cli: Cli) -> Result<bool, Error> {
    let (outcome, path): (Outcome, Option<PathBuf>) = match cli.command {
        Command::Geometry { kind, q, out } => {
            let g = commands::geometry(kind, q)?;
            let mut text = serde_json::to_vec_pretty(&g).expect("graphs serialize");
            text.push(b'\n');
            emit(&text, out.as_deref())?;
            return Ok(true);
        }
        Command::Spectrum { graph, tol, report } => {
            let g = read_json::<GraphJson>(&graph)?.to_graph()?;
            (commands::spectrum(&g, tol)?, report.report)
        }
        Command::Gap { kind, q, report } => (commands::gap(kind, q)?, report.report),
        Command::Harmonic { complex, init, seed, max_iter, tol, divergence_radius, report } => {
            let c = read_json::<ComplexJson>(&complex)?.to_complex()?;
            let init = match (init, seed) {
                (Some(p), _) => Init::Map(read_json::<MapJson>(&p)?.to_map(&c)?),
                (None, Some(s)) => Init::Seed(s),
                (None, None) => return Err(Error::Input("either --init or --seed is required".into())),
            };
            let opts = DescentOptions { max_iter, tol, divergence_radius, ..DescentOptions::default() };
            (commands::harmonic(&c, init, &opts)?, report.report)
        }
        Command::Chain { complex, map, lambda_table, report } => {
            let c = read_json::<ComplexJson>(&complex)?.to_complex()?;
            let f = read_json::<MapJson>(&map)?.to_map(&c)?;
            let lambdas = read_json::<LambdaJson>(&lambda_table)?.to_table()?;
            (commands::chain(&c, &f, &lambdas)?, report.report)
        }
        Command::Parabolic { field, q, p, n3, trials, seed, report } => {
            (commands::parabolic(field, ParabolicConfig { q_iso: q, p, n3 }, trials, seed)?, report.report)
        }
        Command::Apartment { p, samples, seed, report } => (commands::apartment(p, samples, seed)?, report.report),
    };
    emit(&render(&outcome.report, cli.format)?, path.as_deref())?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("rigidlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
