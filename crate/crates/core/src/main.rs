use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conley_kernel::commands::{input_error, render_human, run_text, Outcome, Request, Settings, DEFAULT_BOUND};
use conley_kernel::verify::run_suite;
use conley_kernel::KernelError;

#[derive(Parser)]
#[command(name = "conley-kernel", version, about = "Exact Conley index computations on finite and rational box systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Search bound for semi-decisions.
    #[arg(long, global = true, env = "CONLEY_DEFAULT_BOUND", default_value_t = DEFAULT_BOUND)]
    bound: usize,

    /// Seed recorded in the report and used by verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "human")]
    json: bool,

    /// Emit a short human-readable summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
}

#[derive(Args)]
struct Doc {
    /// System document path, or `-` for stdin.
    document: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compactifiability and properness predicates for named subsets.
    Check {
        #[command(flatten)]
        doc: Doc,
        /// Subsets to check; all named subsets when omitted.
        #[arg(long = "set")]
        sets: Vec<String>,
    },
    /// Largest invariant subset of a named set.
    InvariantPart {
        #[command(flatten)]
        doc: Doc,
        #[arg(long)]
        set: String,
    },
    /// Whether a neighbourhood isolates the invariant part it contains.
    Isolating {
        #[command(flatten)]
        doc: Doc,
        #[arg(long)]
        set: String,
        #[arg(long)]
        nbhd: String,
    },
    /// Certify an index neighbourhood, or construct one from a compact neighbourhood.
    IndexNbhd {
        #[command(flatten)]
        doc: Doc,
        #[arg(long)]
        set: String,
        #[arg(long)]
        nbhd: String,
        /// Construct from `--nbhd`, optionally overriding the bound.
        #[arg(long, num_args = 0..=1)]
        search: Option<Option<usize>>,
    },
    /// Decide the relation between two subsets, with witnesses.
    Sim {
        #[command(flatten)]
        doc: Doc,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Check a triple, or find the least admissible one.
    Admissible {
        #[command(flatten)]
        doc: Doc,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Times `a b c`.
        #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
        triple: Option<Vec<String>>,
    },
    /// Conley index of a set relative to one or more neighbourhoods.
    Index {
        #[command(flatten)]
        doc: Doc,
        #[arg(long)]
        set: String,
        #[arg(long = "nbhd", required = true)]
        nbhds: Vec<String>,
        #[arg(long, num_args = 0..=1)]
        search: Option<Option<usize>>,
    },
    /// Equality of two morphisms in the Szymczak category.
    SzymczakEqual {
        #[command(flatten)]
        doc: Doc,
        first: String,
        second: String,
    },
    /// Shift equivalence of a morphism, or between two endomorphisms.
    ShiftEquiv {
        #[command(flatten)]
        doc: Doc,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: Option<String>,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn read_document(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
    }
}

fn with_search(search: Option<Option<usize>>, settings: &mut Settings) -> bool {
    if let Some(Some(n)) = search {
        settings.bound = n;
    }
    search.is_some()
}

fn execute(command: Command, mut settings: Settings) -> Outcome {
    let (doc, request) = match command {
        Command::Verify { suite, trials } => return run_suite(&suite, trials, settings.seed, settings.bound),
        Command::Check { doc, sets } => (doc, Request::Check { sets }),
        Command::InvariantPart { doc, set } => (doc, Request::InvariantPart { set }),
        Command::Isolating { doc, set, nbhd } => (doc, Request::Isolating { set, nbhd }),
        Command::IndexNbhd { doc, set, nbhd, search } => {
            let search = with_search(search, &mut settings);
            (doc, Request::IndexNbhd { set, nbhd, search })
        }
        Command::Sim { doc, from, to } => (doc, Request::Sim { from, to }),
        Command::Admissible { doc, from, to, triple } => {
            let triple = triple.map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]);
            (doc, Request::Admissible { from, to, triple })
        }
        Command::Index { doc, set, nbhds, search } => {
            let search = with_search(search, &mut settings);
            (doc, Request::Index { set, nbhds, search })
        }
        Command::SzymczakEqual { doc, first, second } => (doc, Request::SzymczakEqual { first, second }),
        Command::ShiftEquiv { doc, from, to } => (doc, Request::ShiftEquiv { from, to }),
    };
    match read_document(&doc.document) {
        Ok(text) => run_text(&text, &request, &settings),
        Err(e) => {
            let error = KernelError::InvalidInput(format!("cannot read {}: {e}", doc.document));
            input_error(request.name(), &settings, &error)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = Settings { bound: cli.bound, seed: cli.seed };
    let outcome = execute(cli.command, settings);
    if cli.human {
        print!("{}", render_human(&outcome.report));
    } else {
        println!("{}", serde_json::to_string_pretty(&outcome.report).expect("reports serialize"));
    }
    ExitCode::from(outcome.exit_code() as u8)
}
