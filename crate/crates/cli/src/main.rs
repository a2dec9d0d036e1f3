use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sha2::{Digest, Sha256};

use cimellin::error::{Error, IoError};
use cimellin::io::parse_str;
use cimellin::report::{run, Command, Format, Options, Placement};

/// Environment variable overriding the default seed (the flag wins).
const SEED_ENV: &str = "CIMELLIN_SEED";

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlacementArg {
    Auto,
    Explicit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "cimellin", version, about = "Cayley matrices, Mellin Γ-products, Horn/GKZ data and transpose mirrors")]
struct Cli {
    /// matrix | mellin | horn | euler | ehrhart | hodge | spectra | gkz | mirror | verify-all
    command: String,
    /// JSON system file
    file: PathBuf,
    /// auxiliary placement: the file's explicit one or the automatic search
    #[arg(long, value_enum)]
    placement: Option<PlacementArg>,
    /// restrict per-block output to deformation q (1-based)
    #[arg(long)]
    q: Option<usize>,
    /// exponent vector J, comma separated
    #[arg(long = "J", value_delimiter = ',', allow_hyphen_values = true)]
    j: Option<Vec<i64>>,
    /// parameter vector ζ, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    zeta: Option<Vec<i64>>,
    /// seed for randomized checks
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

fn seed(cli: &Cli) -> Result<u64, IoError> {
    if let Some(s) = cli.seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| IoError::Usage(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn execute(cli: &Cli) -> Result<bool, Error> {
    let command: Command = cli.command.parse()?;
    let text = std::fs::read_to_string(&cli.file)
        .map_err(|source| IoError::Read { path: cli.file.display().to_string(), source })?;
    let hash = hex::encode(Sha256::digest(text.as_bytes()));
    let spec = parse_str(&text)?;
    let opts = Options {
        placement: cli.placement.map(|p| match p {
            PlacementArg::Auto => Placement::Auto,
            PlacementArg::Explicit => Placement::Explicit,
        }),
        q: cli.q,
        j: cli.j.clone(),
        zeta: cli.zeta.clone(),
        seed: seed(cli)?,
    };
    let report = run(command, &spec, &opts, &hash)?;
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Machine => Format::Machine,
    };
    print!("{}", report.render(format));
    Ok(report.ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
