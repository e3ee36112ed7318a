use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use opacity_cli::commands::{self, CampaignArgs, CheckMethod, Construction, TwoOutcomeArgs};
use opacity_cli::{CommandOutput, Exit};
use opacity_core::gen::DomainKind;
use opacity_core::PropertyKind;

/// Audit announcements: which properties hold for every selection they permit?
#[derive(Parser)]
#[command(name = "opacity-audit", version)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse files and report domain conditions.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Decide whether every possible selection satisfies a property.
    Check {
        announcement: PathBuf,
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long, value_enum, default_value = "pairwise")]
        method: MethodArg,
        /// Maximum selections to enumerate (default: $OPACITY_AUDIT_CAP or 2^20).
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Construct a manipulation of some possible selection of an opaque announcement.
    Witness { announcement: PathBuf },
    /// Write a known announcement.
    Build {
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        /// Number of outcomes (thm2).
        #[arg(long)]
        n: Option<usize>,
        /// Environment file (thm3).
        #[arg(long)]
        environment: Option<PathBuf>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// `both`, `x`, `y`, or a comma-separated `x`/`y`/`xy` choice per profile (thm3).
        #[arg(long)]
        rule: Option<String>,
        /// Directory for environment.json and announcement.json; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check random announcements: transparent ones are strategy-proof, opaque ones are not guaranteed.
    Campaign {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 3)]
        outcomes: usize,
        #[arg(long, default_value_t = 1)]
        individuals: usize,
        #[arg(long, value_enum, default_value = "full-strict")]
        domain: DomainArg,
        /// Environment file for `--domain explicit`.
        #[arg(long)]
        environment: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        opacity_rate: f64,
        /// Largest image size for opaque profiles (default: number of outcomes).
        #[arg(long)]
        max_image_size: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Sp,
    Wmm,
    Nonbossy,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Pairwise,
    Bruteforce,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Intro,
    Thm2,
    Thm3,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    FullStrict,
    FullWeak,
    Explicit,
}

fn run(cli: Cli) -> Result<CommandOutput, opacity_cli::InputError> {
    match cli.command {
        Command::Validate { files } => commands::validate(&files, cli.json),
        Command::Check {
            announcement,
            property,
            method,
            cap,
        } => {
            let property = match property {
                PropertyArg::Sp => PropertyKind::Sp,
                PropertyArg::Wmm => PropertyKind::Wmm,
                PropertyArg::Nonbossy => PropertyKind::NonBossy,
            };
            let method = match method {
                MethodArg::Pairwise => CheckMethod::Pairwise,
                MethodArg::Bruteforce => CheckMethod::BruteForce,
                MethodArg::Both => CheckMethod::Both,
            };
            let cap = commands::resolve_cap(cap)?;
            commands::check(&announcement, property, method, cap, cli.json)
        }
        Command::Witness { announcement } => commands::witness(&announcement),
        Command::Build {
            construction,
            n,
            environment,
            x,
            y,
            rule,
            out,
        } => {
            let construction = match construction {
                ConstructionArg::Intro => Construction::Intro,
                ConstructionArg::Thm2 => Construction::Thm2,
                ConstructionArg::Thm3 => Construction::Thm3,
            };
            let two = TwoOutcomeArgs {
                environment,
                x,
                y,
                rule,
            };
            commands::build(construction, n, &two, out.as_deref())
        }
        Command::Campaign {
            seed,
            trials,
            outcomes,
            individuals,
            domain,
            environment,
            opacity_rate,
            max_image_size,
        } => {
            let domain = match domain {
                DomainArg::FullStrict => DomainKind::FullStrict,
                DomainArg::FullWeak => DomainKind::FullWeak,
                DomainArg::Explicit => DomainKind::Explicit,
            };
            let args = CampaignArgs {
                seed,
                trials,
                outcomes,
                individuals,
                domain,
                environment,
                opacity_rate,
                max_image_size,
            };
            commands::campaign(&args, cli.json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Input as u8 } else { 0 });
        }
    };
    let output = run(cli).unwrap_or_else(|e| CommandOutput {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        exit: Exit::Input,
    });
    let _ = std::io::stdout().write_all(output.stdout.as_bytes());
    let _ = std::io::stderr().write_all(output.stderr.as_bytes());
    ExitCode::from(output.exit as u8)
}
