//! Command-line front end for `hypercrn`.
//!
//! [`run`] takes the argument vector and two sinks: results go to `out`,
//! diagnostics to `err`. The return value is the process exit code.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercrn::{datasets, parse_network_with, ParseError, ParseOptions, ReactionNetwork};

mod commands;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hypercrn",
    version,
    about = "Reaction networks as weighted directed hypergraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Network file; `mm.crn`, `fig1b.crn` and `mapk.crn` are bundled.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Accept the empty complex (inflow and outflow reactions).
    #[arg(long)]
    pub open_system: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LoopArgs {
    /// Symmetric step condition instead of following reaction direction.
    #[arg(long)]
    pub undirected: bool,
    /// Longest loop, counted in reactions.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_length: Option<u64>,
    /// Visited-state budget for the search.
    #[arg(long, default_value_t = hypercrn::loops::DEFAULT_STATE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a network and print its canonical form.
    Parse(Input),
    /// Reactant, product, stoichiometric and adjacency matrices.
    Matrices(Input),
    /// Hypercycle basis and hypercyclomatic number.
    Cycles(Input),
    /// Conservation-law basis.
    Conservation(Input),
    /// Hyperspanning forest (first-fit).
    Forest(Input),
    /// Count or list closed loops.
    Loops {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        loops: LoopArgs,
        /// Print every loop.
        #[arg(long)]
        list: bool,
    },
    /// Loop-incidence centrality.
    Centrality {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        loops: LoopArgs,
        /// Rank reactions instead of species.
        #[arg(long)]
        reactions: bool,
    },
    /// Mass-action equations, evaluated when `--rates` is given.
    Ode {
        #[command(flatten)]
        input: Input,
        /// `name = value` file with every rate constant and concentration.
        #[arg(long)]
        rates: Option<PathBuf>,
    },
    /// Graphviz rendering of the species/reaction graph.
    ExportDot {
        #[command(flatten)]
        input: Input,
        /// Draw reactions outside the hyperspanning forest dashed.
        #[arg(long)]
        highlight_forest: bool,
    },
}

impl Command {
    fn input(&self) -> &Input {
        match self {
            Command::Parse(i)
            | Command::Matrices(i)
            | Command::Cycles(i)
            | Command::Conservation(i)
            | Command::Forest(i) => i,
            Command::Loops { input, .. }
            | Command::Centrality { input, .. }
            | Command::Ode { input, .. }
            | Command::ExportDot { input, .. } => input,
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Read a file, falling back to the bundled datasets by file name.
pub fn read_source(path: &Path) -> Result<String, Failure> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(text),
        Err(e) if e.kind() == io::ErrorKind::NotFound => path
            .to_str()
            .and_then(datasets::bundled)
            .map(|text| {
                log::debug!("using bundled {}", path.display());
                text.to_string()
            })
            .ok_or_else(|| Failure::usage(format!("{}: {e}", path.display()))),
        Err(e) => Err(Failure::usage(format!("{}: {e}", path.display()))),
    }
}

fn render_parse_error(path: &Path, text: &str, e: &ParseError) -> String {
    let mut msg = format!("{}:{}: {}", path.display(), e.span, e.kind);
    if let Some(line) = text.lines().nth(e.span.line.saturating_sub(1)) {
        let pad = " ".repeat(e.span.column.saturating_sub(1));
        let caret = "^".repeat(e.span.length.max(1));
        msg.push_str(&format!("\n  {line}\n  {pad}{caret}"));
    }
    msg
}

pub fn load_network(input: &Input) -> Result<ReactionNetwork, Failure> {
    let text = read_source(&input.input)?;
    let opts = ParseOptions {
        open_system: input.open_system,
    };
    parse_network_with(&text, opts).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: render_parse_error(&input.input, &text, &e),
    })
}

/// Parse `args` (including the program name) and execute the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = load_network(cli.command.input()).and_then(|net| commands::execute(&cli.command, &net));
    match result {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}
