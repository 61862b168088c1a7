use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mltt_core::driver::{batch_exit, run_source, Exit, Options, DEFAULT_FUEL};
use mltt_core::harness::{diff_run, property_run, GenConfig};
use mltt_core::Backend;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Typed,
    Untyped,
}

/// Runs queries against the kernel.
///
/// Exit status: 0 accept, 1 reject, 2 out of fuel, 3 parse or scope error.
/// A file with several queries exits with the worst status among them.
#[derive(Debug, Parser)]
#[command(name = "mltt", version)]
struct Cli {
    /// Query file; reads standard input when absent or `-`.
    file: Option<PathBuf>,

    /// Query text, instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,

    /// Conversion checker.
    #[arg(long, value_enum, default_value = "typed")]
    algo: Algo,

    /// Fuel budget per query.
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,

    /// Write one line per rule application to standard error.
    #[arg(long)]
    trace: bool,

    /// Check each entry point's typing preconditions before running it.
    #[arg(long)]
    debug_assert_preconditions: bool,

    /// Run the differential harness on N generated queries instead.
    #[arg(long, value_name = "N", conflicts_with_all = ["file", "expr", "suite"])]
    diff: Option<usize>,

    /// Run a property suite instead.
    #[arg(long, value_name = "NAME", conflicts_with_all = ["file", "expr"])]
    suite: Option<String>,

    /// Samples for --suite.
    #[arg(long, default_value_t = 100)]
    samples: usize,

    /// Generator seed for --diff and --suite.
    #[arg(long)]
    seed: Option<u64>,
}

fn exit(e: Exit) -> ExitCode {
    ExitCode::from(e.code() as u8)
}

fn harness(cli: &Cli) -> Option<ExitCode> {
    let cfg = cli.seed.map(GenConfig::with_seed).unwrap_or_default();
    if let Some(n) = cli.diff {
        let report = diff_run(n, &cfg);
        print!("{}", report.serialize());
        for d in &report.disagreements {
            eprintln!("disagreement on stream {}: typed {}, untyped {}", d.stream, d.typed, d.untyped);
            eprintln!("  {}", d.query);
        }
        let clean = report.disagreements.is_empty();
        return Some(exit(if clean { Exit::Accept } else { Exit::Reject }));
    }
    let name = cli.suite.as_ref()?;
    Some(match property_run(name, cli.samples, &cfg) {
        Ok(report) => {
            println!("{report}");
            exit(if report.failures.is_empty() { Exit::Accept } else { Exit::Reject })
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(Exit::Input)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(code) = harness(&cli) {
        return code;
    }
    let (src, base) = match (&cli.expr, &cli.file) {
        (Some(e), _) => (Ok(e.clone()), None),
        (None, Some(p)) if p != Path::new("-") => {
            let base = p.parent().map(Path::to_path_buf);
            (std::fs::read_to_string(p), base)
        }
        _ => {
            let mut s = String::new();
            (std::io::stdin().read_to_string(&mut s).map(|_| s), None)
        }
    };
    let src = match src {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(Exit::Input);
        }
    };
    let opts = Options {
        backend: match cli.algo {
            Algo::Typed => Backend::Typed,
            Algo::Untyped => Backend::Untyped,
        },
        fuel: cli.fuel,
        trace: cli.trace,
        preconditions: cli.debug_assert_preconditions,
        base_dir: base,
    };
    match run_source(&src, &opts) {
        Ok(reports) => {
            for r in &reports {
                for line in &r.trace {
                    eprintln!("{line}");
                }
                println!("{}", r.output);
            }
            exit(batch_exit(&reports))
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(Exit::Input)
        }
    }
}
