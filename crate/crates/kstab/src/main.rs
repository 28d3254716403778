use clap::{Args, Parser, Subcommand, ValueEnum};
use kstab::git::{classify, Support, TorusAction};
use kstab::scenario::{run_file, verify_all, Report, ReportEntry};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact verification of K-stability computations: decomposition
/// schedules, beta/S-invariants, torus GIT tables, and quadric algebra,
/// replayed from scenario files against expected values.
#[derive(Parser)]
#[command(name = "kstab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single scenario file and print its report entry.
    Run {
        /// Scenario file (JSON).
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run every scenario in a directory and print the full report.
    VerifyAll {
        /// Directory of scenario files.
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Worker threads; results are identical for any value.
        #[arg(long, default_value_t = 4)]
        threads: usize,
        /// Also write the machine-readable report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-render a previously written machine-readable report.
    Report {
        /// Report file produced by `verify-all --out`.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Torus GIT helpers.
    #[command(subcommand)]
    Git(GitCommand),
}

#[derive(Subcommand)]
enum GitCommand {
    /// Classify one support under a diagonal torus action.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Weight vectors, one per coordinate: "0,0;1,1;1,-1;-1,1;-1,-1".
    #[arg(long)]
    weights: String,
    /// Names of the nonzero coordinates: "b,g,d,e".
    #[arg(long)]
    support: String,
    /// Coordinate names in order; defaults to x0,x1,...
    #[arg(long)]
    names: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run { file, format } => {
            let entry = run_file(&file).map_err(|e| e.to_string())?;
            let report = Report::from_entries(vec![entry]);
            print_report(&report, format);
            Ok(exit_of(&report))
        }
        Command::VerifyAll {
            dir,
            format,
            threads,
            out,
        } => {
            let report = verify_all(&dir, threads).map_err(|e| e.to_string())?;
            if let Some(path) = out {
                std::fs::write(&path, report.render_json())
                    .map_err(|e| format!("cannot write {}: {}", path.display(), e))?;
            }
            print_report(&report, format);
            Ok(exit_of(&report))
        }
        Command::Report { file, format } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {}", file.display(), e))?;
            let report: Report = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            // Re-derive ordering and counts instead of trusting the file.
            let entries: Vec<ReportEntry> = report.entries;
            let report = Report::from_entries(entries);
            print_report(&report, format);
            Ok(exit_of(&report))
        }
        Command::Git(GitCommand::Classify(args)) => {
            let weights: Vec<Vec<i64>> = args
                .weights
                .split(';')
                .map(|w| {
                    w.split(',')
                        .map(|x| x.trim().parse::<i64>().map_err(|e| e.to_string()))
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let rank = weights.first().map(|w| w.len()).unwrap_or(0);
            let names: Vec<String> = match args.names {
                Some(n) => n.split(',').map(|s| s.trim().to_string()).collect(),
                None => (0..weights.len()).map(|i| format!("x{}", i)).collect(),
            };
            let action =
                TorusAction::new(rank, names.clone(), weights).map_err(|e| e.to_string())?;
            let indices: Vec<usize> = args
                .support
                .split(',')
                .map(|s| {
                    action
                        .coord_index(s.trim())
                        .ok_or_else(|| format!("unknown coordinate `{}`", s.trim()))
                })
                .collect::<Result<_, _>>()?;
            let support =
                Support::new(indices, names.len()).map_err(|e| e.to_string())?;
            let class = classify(&action, &support).map_err(|e| e.to_string())?;
            println!("{}", class);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_report(report: &Report, format: Format) {
    match format {
        Format::Table => print!("{}", report.render_table()),
        Format::Json => println!("{}", report.render_json()),
    }
}

fn exit_of(report: &Report) -> ExitCode {
    ExitCode::from(report.exit_code() as u8)
}
