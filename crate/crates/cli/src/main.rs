use gbwt_cli::commands::{self, BuildOptions, CliError, Outcome, Query, UnfoldPaths};

use clap::{Parser, Subcommand};

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gbwt", version, about = "Haplotype path indexes over graphs")]
struct Cli {
    /// Write the run manifest here instead of next to the output.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from the paths of a graph file.
    Build {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = gbwt::DEFAULT_SAMPLE_RATE)]
        sample_rate: usize,
        /// Characters inserted per batch.
        #[arg(long, default_value_t = 100_000_000)]
        batch_size: usize,
        /// Also index the reverse of every path.
        #[arg(long)]
        bidirectional: bool,
        #[arg(long, default_value_t = 2)]
        threads: usize,
    },
    /// Merge indexes over disjoint node ranges.
    Merge {
        #[arg(short, long)]
        output: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Count, locate or extract.
    Query {
        #[command(subcommand)]
        query: QueryCommand,
    },
    /// Print index statistics.
    Stat { index: PathBuf },
    /// Restore haplotype paths in a pruned graph.
    Unfold {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pruned: PathBuf,
        #[arg(long)]
        index: PathBuf,
        /// Second index used to extend paths that end inside a component.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Prefix of the output files.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Translate an unfolded path back to original node ids.
    Restore {
        mapping: PathBuf,
        #[arg(required = true, allow_hyphen_values = true)]
        steps: Vec<String>,
    },
    /// Check an index against brute force over the paths it was built from.
    Verify { index: PathBuf, graph: PathBuf },
    /// Run a benchmark scenario.
    Bench {
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum QueryCommand {
    /// Number of occurrences of a path.
    Find {
        index: PathBuf,
        #[arg(allow_hyphen_values = true)]
        pattern: Vec<String>,
    },
    /// Sequence ids containing a path, one per occurrence.
    Locate {
        index: PathBuf,
        #[arg(allow_hyphen_values = true)]
        pattern: Vec<String>,
    },
    /// The path with the given sequence id.
    Extract { index: PathBuf, id: String },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Build {
            graph,
            output,
            sample_rate,
            batch_size,
            bidirectional,
            threads,
        } => commands::build(
            &graph,
            &output,
            &BuildOptions {
                sample_rate,
                batch_size,
                bidirectional,
                threads,
            },
        ),
        Command::Merge { output, inputs } => commands::merge(&inputs, &output),
        Command::Query { query } => match query {
            QueryCommand::Find { index, pattern } => commands::query(&index, &Query::Find(pattern)),
            QueryCommand::Locate { index, pattern } => {
                commands::query(&index, &Query::Locate(pattern))
            }
            QueryCommand::Extract { index, id } => commands::query(&index, &Query::Extract(id)),
        },
        Command::Stat { index } => commands::stat(&index),
        Command::Unfold {
            graph,
            pruned,
            index,
            reference,
            output,
        } => commands::unfold(&UnfoldPaths {
            graph: &graph,
            pruned: &pruned,
            index: &index,
            reference: reference.as_deref(),
            output: &output,
        }),
        Command::Restore { mapping, steps } => commands::restore(&mapping, &steps),
        Command::Verify { index, graph } => commands::verify(&index, &graph),
        Command::Bench { scenario, seed } => commands::bench_command(&scenario, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let manifest_override = cli.manifest.clone();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            let text = outcome.manifest.finish();
            match manifest_override.or(outcome.manifest_path) {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: cannot write {}: {}", path.display(), e);
                        return ExitCode::from(1);
                    }
                }
                None => {
                    let _ = std::io::stderr().write_all(text.as_bytes());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::VerificationFailed(report) = &e {
                print!("{}", report);
                eprintln!("error: verification failed");
            } else {
                eprintln!("error: {}", e);
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
