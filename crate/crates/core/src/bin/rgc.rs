use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use secure_regen::cli::{
    cmd_encode, cmd_reconstruct, cmd_region, cmd_repair, cmd_verify, parse_seed, CliError,
    EncodeOptions, VerifyOptions,
};
use secure_regen::{CodeParams, FieldSpec, SystemParams};

#[derive(Parser)]
#[command(name = "rgc", version, about = "Secure exact-repair regenerating codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    t: usize,
    /// e.g. 2^16, GF(2^8), 7
    #[arg(long, default_value = "2^16")]
    field: FieldSpec,
}

impl CodeArgs {
    fn params(&self) -> Result<CodeParams, CliError> {
        Ok(CodeParams::new(self.n, self.ell, self.t, self.field)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Split a file into n share files.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Hex seed for the randomness; OS entropy if omitted.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Rebuild the file from at least n-1 share files.
    Reconstruct {
        #[arg(long)]
        shares: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate one node's share from the others.
    Repair {
        #[arg(long)]
        shares: PathBuf,
        #[arg(long)]
        failed: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check reconstruction, repair and secrecy; prints a JSON report.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Also enumerate every input over a small field.
        #[arg(long)]
        oracle: bool,
        /// Zero the randomness; secrecy must then fail.
        #[arg(long)]
        break_randomness: bool,
        #[arg(long)]
        seed: Option<String>,
    },
    /// Print rate points and outer bounds.
    Region {
        #[arg(long, required_unless_present = "preset", requires_all = ["k", "d", "ell"])]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, conflicts_with_all = ["n", "k", "d", "ell"])]
        preset: Option<Preset>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    #[value(name = "7661")]
    P7661,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn seed(s: &Option<String>) -> Result<Option<[u8; 32]>, CliError> {
    s.as_deref().map(parse_seed).transpose()
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Encode {
            code,
            input,
            out_dir,
            seed: s,
        } => {
            let summary = cmd_encode(&EncodeOptions {
                params: code.params()?,
                input,
                out_dir,
                seed: seed(&s)?,
            })?;
            println!("{}", json(&summary));
        }
        Command::Reconstruct { shares, out } => {
            let len = cmd_reconstruct(&shares, &out)?;
            eprintln!("wrote {len} bytes to {}", out.display());
        }
        Command::Repair {
            shares,
            failed,
            out,
        } => {
            let report = cmd_repair(&shares, failed, &out)?;
            println!("{}", json(&report));
        }
        Command::Verify {
            code,
            trials,
            oracle,
            break_randomness,
            seed: s,
        } => {
            let mut opts = VerifyOptions::new(code.params()?);
            opts.trials = trials;
            opts.oracle = oracle;
            opts.break_randomness = break_randomness;
            opts.seed = seed(&s)?;
            let report = cmd_verify(&opts)?;
            println!("{}", json(&report));
            if !report.passed {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Region {
            n,
            k,
            d,
            ell,
            preset,
            format,
        } => {
            let params = match preset {
                Some(Preset::P7661) => SystemParams::new(7, 6, 6, 1)?,
                None => SystemParams::new(
                    n.unwrap_or_default(),
                    k.unwrap_or_default(),
                    d.unwrap_or_default(),
                    ell.unwrap_or_default(),
                )?,
            };
            let export = cmd_region(params)?;
            match format {
                Format::Json => println!("{}", export.to_json()),
                Format::Csv => print!("{}", export.to_csv()),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
