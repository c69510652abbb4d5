mod commands;
mod report;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::Report;
use workspace::{CliResult, Failure, Format, Workspace, USAGE};

#[derive(Parser, Debug)]
#[command(name = "tmodel", version, about = "Exact computations with complexes of presheaves on finite spaces")]
struct Cli {
    /// Site document (points and opens).
    #[arg(long, global = true, value_name = "FILE")]
    site: Option<PathBuf>,
    /// Coefficient ring: Z, Q or Fp:<p>.
    #[arg(long, global = true, default_value = "Z")]
    ring: String,
    /// d-function document mapping point names to integers or "+inf"/"-inf".
    #[arg(long, global = true, value_name = "FILE")]
    d: Option<PathBuf>,
    /// Stratification document with a perversity per stratum.
    #[arg(long, global = true, value_name = "FILE")]
    strata: Option<PathBuf>,
    /// Homological degree (homology degree, truncation level or equivalence index).
    #[arg(long, global = true, allow_negative_numbers = true)]
    degree: Option<i64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 20)]
    instances: usize,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology presheaves and their stalks.
    Homology { complex: PathBuf },
    /// Presheaf, sheaf and stalkwise quasi-isomorphism verdicts for a chain map.
    Classify { map: PathBuf },
    /// Sheafification of every term.
    Sheafify { complex: PathBuf },
    /// Lifting against the generating cofibrations, compared with the levelwise criteria.
    Lift { map: PathBuf },
    /// Factor a map as a relative cell complex followed by an acyclic fibration.
    Factor { map: PathBuf },
    /// The truncation triangle X_{≥n} → X → X_{≤n-1}.
    Truncate { complex: PathBuf },
    /// Membership in D_{≥n} and D_{≤n}.
    Member { complex: PathBuf },
    /// Projection to the heart, (X_{≥0})_{≤0}.
    Heart { complex: PathBuf },
    /// Factor a map as an n-equivalence followed by a co-n-equivalence.
    Tfactor { map: PathBuf },
    /// Perverse t-structure membership.
    Perverse { complex: PathBuf },
    /// Total tensor product of two complexes.
    Tensor { left: PathBuf, right: PathBuf },
    /// Chain maps and homotopy classes of maps between two complexes.
    Maps { source: PathBuf, target: PathBuf },
    /// Seeded randomized checks of the model-structure axioms.
    Verify {
        /// pushout_product, monoid, two_of_three, lifting_agreement or all.
        suites: Vec<String>,
    },
}

fn open_workspace(cli: &Cli) -> CliResult<Workspace> {
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    Workspace::open(cli.site.clone(), &cli.ring, cli.seed, format)
}

fn run(cli: &Cli, ws: &Workspace) -> CliResult<Report> {
    let d = cli.d.as_deref();
    match &cli.command {
        Command::Homology { complex } => commands::homology_cmd(ws, complex, cli.degree),
        Command::Classify { map } => commands::classify_cmd(ws, map),
        Command::Sheafify { complex } => commands::sheafify_cmd(ws, complex),
        Command::Lift { map } => commands::lift_cmd(ws, map),
        Command::Factor { map } => commands::factor_cmd(ws, map),
        Command::Truncate { complex } => commands::truncate_cmd(ws, complex, d, cli.degree),
        Command::Member { complex } => commands::member_cmd(ws, complex, d, cli.degree),
        Command::Heart { complex } => commands::heart_cmd(ws, complex, d),
        Command::Tfactor { map } => commands::tfactor_cmd(ws, map, d, cli.degree),
        Command::Perverse { complex } => commands::perverse_cmd(ws, complex, cli.strata.as_deref()),
        Command::Tensor { left, right } => commands::tensor_cmd(ws, left, right),
        Command::Maps { source, target } => commands::maps_cmd(ws, source, target),
        Command::Verify { suites } => commands::verify_cmd(ws, suites, cli.instances),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match open_workspace(&cli).and_then(|ws| run(&cli, &ws).map(|r| (ws.format, r))) {
        Ok((format, report)) => {
            match format {
                Format::Text => print!("{}", report.text),
                Format::Structured => {
                    println!("{}", serde_json::to_string_pretty(&report.value).expect("values serialize"))
                }
            }
            ExitCode::from(report.code as u8)
        }
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}
