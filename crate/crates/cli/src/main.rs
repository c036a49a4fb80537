use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use canon_core::canonical::Mode;
use canon_core::groups::GroupType;
use canon_core::json::to_pretty;
use canon_core::pipeline::{self, FieldChoice, PipelineError, RunConfig, SeedSpec};
use canon_core::scalars::FieldKind;

/// Canonical systems of basic invariants for finite reflection groups.
#[derive(Parser)]
#[command(name = "canon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a canonical system and print it.
    Build(GroupArgs),
    /// Re-check a system written by `build`.
    Verify {
        file: PathBuf,
    },
    /// Print the positive roots and the antiinvariant.
    Delta(GroupArgs),
    /// Compare the main construction with the brute-force solver.
    OracleCompare(GroupArgs),
    /// Time the main stages of a build.
    Bench(GroupArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Family: A, B, D, I2, H, F or E.
    #[arg(long = "type")]
    type_label: String,
    #[arg(long)]
    rank: Option<usize>,
    /// Dihedral order for I2.
    #[arg(long)]
    m: Option<u32>,
    /// power-sums, reynolds, or file:<path> (a JSON array of polynomials).
    #[arg(long, default_value = "power-sums")]
    seed: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Generic)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FieldArg::Auto)]
    field: FieldArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Check the result and fail when it is not canonical.
    #[arg(long)]
    verify: bool,
    /// Allow H4 and E6.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Generic,
    Refined,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Auto,
    #[value(name = "Q")]
    Q,
    #[value(name = "Qsqrt5")]
    Qsqrt5,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Summary,
}

impl GroupArgs {
    fn config(&self) -> Result<RunConfig, String> {
        let group = GroupType::parse(&self.type_label, self.rank, self.m).map_err(|e| e.to_string())?;
        let seed = match self.seed.as_str() {
            "power-sums" => SeedSpec::PowerSums,
            "reynolds" => SeedSpec::Reynolds,
            other => match other.strip_prefix("file:") {
                Some(path) => SeedSpec::File(PathBuf::from(path)),
                None => return Err(format!("unknown seed selector {other:?}")),
            },
        };
        Ok(RunConfig {
            group,
            seed,
            mode: match self.mode {
                ModeArg::Generic => Mode::Generic,
                ModeArg::Refined => Mode::Refined,
            },
            field: match self.field {
                FieldArg::Auto => FieldChoice::Auto,
                FieldArg::Q => FieldChoice::Fixed(FieldKind::Rational),
                FieldArg::Qsqrt5 => FieldChoice::Fixed(FieldKind::QuadSqrt5),
                FieldArg::Float => FieldChoice::Fixed(FieldKind::Float),
            },
            verify: self.verify,
            allow_large: self.allow_large,
        })
    }
}

/// Write to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("canon: {e}");
        }
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("canon: {msg}");
    ExitCode::FAILURE
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    let with_config = |args: &GroupArgs| args.config();
    match cli.command {
        Command::Build(args) => {
            let cfg = match with_config(&args) {
                Ok(c) => c,
                Err(e) => return Ok(fail(e)),
            };
            let out = pipeline::build(&cfg)?;
            match args.format {
                Format::Json => emit(&format!("{}\n", out.json)),
                Format::Latex => emit(&out.latex),
                Format::Summary => emit(&out.summary),
            }
            if out.verified == Some(false) {
                for f in &out.failures {
                    eprintln!("canon: {f}");
                }
                return Ok(fail("verification failed"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| PipelineError::Io {
                path: file.display().to_string(),
                message: e.to_string(),
            })?;
            let out = pipeline::verify_text(&text)?;
            emit(&format!("{}\n", to_pretty(&out)));
            if out.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                for f in &out.failures {
                    eprintln!("canon: {f}");
                }
                Ok(fail("verification failed"))
            }
        }
        Command::Delta(args) => {
            let cfg = match with_config(&args) {
                Ok(c) => c,
                Err(e) => return Ok(fail(e)),
            };
            emit(&format!("{}\n", to_pretty(&pipeline::delta(&cfg)?)));
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleCompare(args) => {
            let cfg = match with_config(&args) {
                Ok(c) => c,
                Err(e) => return Ok(fail(e)),
            };
            let out = pipeline::oracle_compare(&cfg)?;
            emit(&format!("{}\n", to_pretty(&out)));
            Ok(if out.passed() {
                ExitCode::SUCCESS
            } else {
                fail("oracle and main construction disagree")
            })
        }
        Command::Bench(args) => {
            let cfg = match with_config(&args) {
                Ok(c) => c,
                Err(e) => return Ok(fail(e)),
            };
            emit(&format!("{}\n", to_pretty(&pipeline::bench(&cfg)?)));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}
