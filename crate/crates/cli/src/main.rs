use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symcont::analysis::{AnalysisConfig, ModulusKind, OutputFormat};
use symcont::exactnum::QuadExt;
use symcont::Error;
use symcont_cli::report::Timing;
use symcont_cli::{analyze, moduli, parse_spec, zoo, Outcome};

/// Classify functions on exact subsets of the real line by continuity,
/// uniform continuity, symmetric continuity and uniform symmetric continuity.
#[derive(Parser)]
#[command(name = "symcont", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the function in a spec file under all four notions.
    Analyze { spec: PathBuf },
    /// Run the example catalog and compare against the expected verdicts.
    Zoo {
        /// Run a single catalog entry, e.g. ex-2.4.
        #[arg(long, conflicts_with = "all")]
        example: Option<String>,
        /// Run every catalog entry (the default).
        #[arg(long)]
        all: bool,
    },
    /// Print the oscillation modulus of the function in a spec file.
    Moduli {
        spec: PathBuf,
        #[arg(long, value_enum)]
        notion: ModulusArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModulusArg {
    Uc,
    Usc,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct Flags {
    /// Comma-separated, strictly decreasing positive scales, e.g. "1,1/2,1/4".
    #[arg(long, global = true, value_name = "LIST")]
    delta_schedule: Option<String>,
    /// Each interval piece is sampled at 2^K + 1 grid points [default: 10].
    #[arg(long, global = true, value_name = "K")]
    grid_exponent: Option<u32>,
    /// Cap on the number of pairs examined per sweep [default: 1000000].
    #[arg(long, global = true, value_name = "N")]
    max_pairs: Option<usize>,
    /// Cap on the number of points enumerated from a domain [default: 100000].
    #[arg(long, global = true, value_name = "N")]
    enum_limit: Option<usize>,
    /// Seed for randomly generated catalog functions [default: 0].
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Re-read every witness from its JSON form and check it from scratch.
    #[arg(long, global = true)]
    verify_witness: bool,
    /// Add wall-clock time to the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
}

impl Flags {
    fn apply(&self, mut cfg: AnalysisConfig) -> Result<AnalysisConfig, Error> {
        if let Some(list) = &self.delta_schedule {
            cfg.delta_schedule = list.split(',').map(|s| s.trim().parse::<QuadExt>()).collect::<Result<_, _>>()?;
        }
        if let Some(k) = self.grid_exponent {
            cfg.grid_exponent = k;
        }
        if let Some(n) = self.max_pairs {
            cfg.max_pairs = n;
        }
        if let Some(n) = self.enum_limit {
            cfg.enum_limit = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        match self.format {
            Some(FormatArg::Text) => cfg.output_format = OutputFormat::Text,
            Some(FormatArg::Json) => cfg.output_format = OutputFormat::Json,
            None => {}
        }
        cfg.validate_strict()?;
        Ok(cfg)
    }
}

fn read_spec(path: &PathBuf) -> Result<symcont_cli::AnalysisSpec, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let f = &cli.flags;
    match &cli.command {
        Command::Analyze { spec } => {
            let spec = read_spec(spec)?;
            let cfg = f.apply(spec.config.clone())?;
            analyze(&spec, &cfg, f.verify_witness)
        }
        Command::Moduli { spec, notion } => {
            let spec = read_spec(spec)?;
            let cfg = f.apply(spec.config.clone())?;
            let kind = match notion {
                ModulusArg::Uc => ModulusKind::Uc,
                ModulusArg::Usc => ModulusKind::Sym,
            };
            moduli(&spec, &cfg, kind)
        }
        Command::Zoo { example, all: _ } => {
            let cfg = f.apply(AnalysisConfig::default())?;
            zoo(&cfg, example.as_deref(), f.verify_witness)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match execute(&cli) {
        Ok(mut out) => {
            if cli.flags.timing {
                out.report.timing = Some(Timing { elapsed_ms: started.elapsed().as_millis() as u64 });
            }
            match out.report.config.output_format {
                OutputFormat::Json => print!("{}", out.report.to_json()),
                OutputFormat::Text => print!("{}", out.report.to_text()),
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
