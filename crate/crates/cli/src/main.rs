use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use subtori_cli::{read_input, run_command, Caps, Command, Flags, Format};
use subtori_core::ospres::JConvention;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum JArg {
    Min,
    Max,
}

/// Toric and subtorus arrangements: poset of layers, additive cohomology,
/// arithmetic matroid and the rational presentation.
#[derive(Debug, Parser)]
#[command(name = "subtori", version)]
struct Cli {
    /// poset | betti | e2 | matroid | presentation | positive-system | validate | conjecture-check
    command: String,
    /// Arrangement file (JSON).
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long = "j-convention", value_enum, default_value = "min")]
    j_convention: JArg,
    /// Degree cap for presentation and conjecture-check (default 2·rank).
    #[arg(long)]
    degree: Option<usize>,
    /// Number of random instances for validate.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "max-rank", default_value_t = 3)]
    max_rank: usize,
    #[arg(long = "max-atoms", default_value_t = 5)]
    max_atoms: usize,
    #[arg(long = "max-entry", default_value_t = 3)]
    max_entry: i64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let fail = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(1)
    };
    let command: Command = match cli.command.parse() {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let file = match &cli.file {
        Some(p) => match read_input(p) {
            Ok(f) => Some(f),
            Err(e) => return fail(e.to_string()),
        },
        None => None,
    };
    let flags = Flags {
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        },
        j_convention: match cli.j_convention {
            JArg::Min => JConvention::Min,
            JArg::Max => JConvention::Max,
        },
        degree: cli.degree,
        random: cli.random,
        seed: cli.seed,
        caps: Caps {
            max_rank: cli.max_rank,
            max_atoms: cli.max_atoms,
            max_entry: cli.max_entry,
        },
    };
    if flags.caps.max_rank == 0
        || flags.caps.max_rank > 6
        || flags.caps.max_entry < 1
        || flags.caps.max_atoms > 8
    {
        return fail(
            "caps need 1 <= --max-rank <= 6, --max-atoms <= 8 and --max-entry >= 1".into(),
        );
    }
    match run_command(command, file.as_ref(), &flags) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => fail(e.to_string()),
    }
}
