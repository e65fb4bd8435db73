use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wahlcheck::cli::{self, CliError, Format, Output, Source, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "wahlcheck", version, about = "Exact checks for rational blow-down constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormatArgs {
    /// Emit JSON instead of text.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit text (the default).
    #[arg(long)]
    text: bool,
}

impl FormatArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            Format::Text
        }
    }
}

#[derive(Args)]
struct SourceArgs {
    /// Construction file (JSON).
    #[arg(required_unless_present = "builtin")]
    file: Option<PathBuf>,
    /// Use a shipped construction instead of a file: main or second.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
}

impl SourceArgs {
    fn source(&self) -> Source {
        match (&self.file, &self.builtin) {
            (_, Some(name)) => Source::Builtin(name.clone()),
            (Some(p), None) => Source::File(p.clone()),
            (None, None) => unreachable!("clap requires one of them"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on a construction file.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Hirzebruch-Jung expansion of n/q, or of (p^2, pq-1) with --wahl.
    Hj {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Read the arguments as Wahl parameters p q.
        #[arg(long)]
        wahl: bool,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Chain of a Wahl singularity, or recognize a chain with --chain.
    Wahl {
        #[arg(required_unless_present = "chain", num_args = 2, value_names = ["P", "Q"])]
        params: Vec<String>,
        /// Comma-separated chain entries, b1 first.
        #[arg(long, conflicts_with = "params")]
        chain: Option<String>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Meridian exponents and the plumbing presentation of a chain.
    Exponents {
        /// Comma-separated chain entries, b1 first.
        chain: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// H1 certificate from the relations of a construction file.
    Pi1 {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Certificates for the built-in pencil of cubics.
    Pencil {
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Full report: constructions (shipped ones by default), replays, pencil.
    Report {
        files: Vec<PathBuf>,
        #[command(flatten)]
        format: FormatArgs,
    },
}

fn run(cmd: Command) -> Result<Output, CliError> {
    match cmd {
        Command::Verify { source, format } => cli::cmd_verify(&source.source(), format.format()),
        Command::Hj { a, b, wahl, format } => cli::cmd_hj(&a, &b, wahl, format.format()),
        Command::Wahl { params, chain, format } => {
            let pq = (params.len() == 2).then(|| (params[0].as_str(), params[1].as_str()));
            cli::cmd_wahl(pq, chain.as_deref(), format.format())
        }
        Command::Exponents { chain, format } => cli::cmd_exponents(&chain, format.format()),
        Command::Pi1 { source, format } => cli::cmd_pi1(&source.source(), format.format()),
        Command::Pencil { format } => cli::cmd_pencil(format.format()),
        Command::Report { files, format } => {
            let sources: Vec<Source> = files.into_iter().map(Source::File).collect();
            cli::cmd_report(&sources, format.format())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let newline = if out.text.ends_with('\n') { "" } else { "\n" };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = write!(stdout, "{}{newline}", out.text).and_then(|_| stdout.flush());
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
