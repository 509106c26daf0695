use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::{CliError, Outcome};

const THREADS_VAR: &str = "SURGERY_OBSTRUCTION_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "surgery-obstruction",
    version,
    about = "Exact Dedekind sums, Casson-Walker invariants and the mod-3 surgery obstruction"
)]
struct Cli {
    /// Emit a single JSON document on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Fast,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormalizationArg {
    Walker,
    Paper,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dedekind sum s(q, p); p is the modulus.
    #[command(allow_negative_numbers = true)]
    Dedekind {
        q: i64,
        p: i64,
        #[arg(long, value_enum, default_value = "fast")]
        method: MethodArg,
    },
    /// Casson-Walker invariant of p/q surgery on a knot with the given a2.
    #[command(allow_negative_numbers = true)]
    Lambda {
        a2: i64,
        p: i64,
        q: i64,
        #[arg(long, value_enum)]
        normalization: NormalizationArg,
    },
    /// Mod-3 verdicts for one scenario under both normalizations.
    #[command(allow_negative_numbers = true)]
    Erratum { p: i64, q: i64, m: i64, ell: i64 },
    /// Admissible scenarios in a box of (m, ell), with verdicts.
    #[command(allow_negative_numbers = true)]
    Enumerate {
        p: i64,
        q: i64,
        /// Inclusive range a:b.
        #[arg(long, default_value = "-50:50", allow_hyphen_values = true)]
        m_range: String,
        /// Inclusive range a:b.
        #[arg(long, default_value = "1:50", allow_hyphen_values = true)]
        ell_range: String,
        #[arg(long, value_enum, default_value = "paper")]
        normalization: NormalizationArg,
    },
    /// Existence status of orientation-reversing surgeries for p/q.
    Status {
        p: i64,
        q: i64,
        #[arg(long, default_value_t = 50)]
        bound: i64,
    },
    /// Chirally cosmetic banding verdicts.
    Banding {
        /// Torus knot T(2,k).
        #[arg(long, group = "target")]
        torus: Option<i64>,
        /// JSON knot descriptor.
        #[arg(long, group = "target")]
        knot: Option<std::path::PathBuf>,
        /// Table of T(2,k) for odd 3 <= k <= K.
        #[arg(long, group = "target", value_name = "K")]
        table: Option<i64>,
        /// Factor turning a signature into a d-invariant, as n/d.
        #[arg(long, allow_hyphen_values = true)]
        d_scale: Option<String>,
    },
    /// How often 6p s(q,p) = q (mod 3) holds, by class of p.
    Survey {
        #[arg(long, default_value_t = 300)]
        p_max: i64,
    },
    /// Property sweeps over every module.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    use surgery_obstruction::{Method, Normalization};
    let norm = |n: NormalizationArg| match n {
        NormalizationArg::Walker => Normalization::WalkerP1,
        NormalizationArg::Paper => Normalization::PaperP2,
    };
    match cmd {
        Command::Dedekind { q, p, method } => {
            let method = match method {
                MethodArg::Direct => Some(Method::Direct),
                MethodArg::Fast => Some(Method::Fast),
                MethodArg::Both => None,
            };
            commands::dedekind(q, p, method)
        }
        Command::Lambda {
            a2,
            p,
            q,
            normalization,
        } => commands::lambda(a2, p, q, norm(normalization)),
        Command::Erratum { p, q, m, ell } => commands::erratum(p, q, m, ell),
        Command::Enumerate {
            p,
            q,
            m_range,
            ell_range,
            normalization,
        } => {
            let m_range = commands::parse_range(&m_range)?;
            let ell_range = commands::parse_range(&ell_range)?;
            commands::enumerate(p, q, m_range, ell_range, norm(normalization))
        }
        Command::Status { p, q, bound } => commands::status(p, q, bound),
        Command::Banding {
            torus,
            knot,
            table,
            d_scale,
        } => {
            let scale = d_scale
                .as_deref()
                .map(commands::parse_rational)
                .transpose()?;
            match (torus, knot, table) {
                (Some(k), _, _) => commands::banding_torus(k, scale),
                (_, Some(path), _) => commands::banding_file(&path, scale),
                (_, _, Some(k_max)) => commands::banding_table(k_max),
                _ => Err(CliError::parse(
                    "banding needs one of --torus, --knot, --table",
                )),
            }
        }
        Command::Survey { p_max } => commands::survey(p_max),
        Command::Selftest {
            level,
            inject_fault,
        } => {
            let level = match level {
                LevelArg::Quick => surgery_obstruction::selftest::Level::Quick,
                LevelArg::Full => surgery_obstruction::selftest::Level::Full,
            };
            commands::selftest(level, inject_fault)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::parse(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::io(e.to_string()))
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let wants_json = args.iter().any(|a| a == "--json");

    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            if wants_json {
                let rendered = e.render().to_string();
                let first = rendered.lines().next().unwrap_or_default();
                let err = CliError::parse(first.trim_start_matches("error: "));
                output::emit_error(&err, true);
            }
            return ExitCode::from(output::EXIT_PARSE);
        }
    };

    let result = configure_threads().and_then(|()| run(cli.command));
    let code = match &result {
        Ok(outcome) => {
            output::emit_ok(outcome, cli.json);
            0
        }
        Err(err) => {
            output::emit_error(err, cli.json);
            err.exit_code
        }
    };
    let _ = std::io::stdout().flush();
    if code == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(code)
    }
}
