use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use ciforge::graph::graph_of_interpretation;
use ciforge::io::{load_interpretation, load_tbox, render_tbox};
use ciforge::miner::soundness_violations;
use ciforge::mvf::mvf;
use ciforge::{
    build_base_with, check_base_complete, fixtures, parse_inclusion, Interpretation, Limits, MiningMode,
    MmscEngine, Reasoner,
};

#[derive(Parser)]
#[command(name = "ciforge", version, about = "Mine EL⊥ concept inclusion bases from finite interpretations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine a base and write it as a TBox file
    Mine {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "intents")]
        mode: MiningMode,
        #[arg(long)]
        output: PathBuf,
        /// Largest attribute set accepted by naive mining
        #[arg(long)]
        max_attrs: Option<usize>,
        /// Largest product graph built for one element set
        #[arg(long)]
        product_cap: Option<usize>,
        /// Print the mining report
        #[arg(long)]
        stats: bool,
    },
    /// Maximal vertex-walk factor of an element
    Mvf {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        vertex: String,
    },
    /// Model-based most specific concept of a set of elements
    Mmsc {
        #[command(flatten)]
        source: Source,
        /// Comma-separated element ids
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<String>,
        /// Fixed role depth instead of the adaptable one
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Decide whether a TBox entails a concept inclusion
    Entails {
        #[arg(long)]
        tbox: PathBuf,
        /// e.g. "A and some r.B SubClassOf C"
        #[arg(long)]
        ci: String,
    },
    /// Check a TBox for soundness in an interpretation and completeness up to a role depth and size
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        tbox: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        size_cap: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Interpretation JSON file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in example: fig3, fig4i, fig4ii, fig5 or fig7
    #[arg(long)]
    fixture: Option<String>,
}

impl Source {
    fn load(&self) -> Result<Interpretation> {
        match (&self.input, &self.fixture) {
            (Some(path), _) => Ok(load_interpretation(path)?),
            (_, Some(name)) => Ok(fixtures::builtin_fixture(name)?),
            _ => unreachable!("clap enforces one source"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// `Ok(false)` reports a failed check.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Mine {
            source,
            mode,
            output,
            max_attrs,
            product_cap,
            stats,
        } => {
            let i = source.load()?;
            let mut limits = Limits::default();
            if let Some(n) = max_attrs {
                limits.naive_attribute_cap = n;
            }
            if let Some(n) = product_cap {
                limits.product_cap = n;
            }
            let (tbox, report) = build_base_with(&i, mode, limits)?;
            let header = report.summary_lines();
            std::fs::write(&output, render_tbox(&tbox, &header))
                .with_context(|| format!("writing {}", output.display()))?;
            if stats {
                for line in &header {
                    println!("{line}");
                }
            }
        }
        Command::Mvf { source, vertex } => {
            let i = source.load()?;
            let g = graph_of_interpretation(&i);
            println!("{}", mvf(&g, g.find_vertex(&vertex)?));
        }
        Command::Mmsc { source, elements, depth } => {
            let i = source.load()?;
            let xs = i.element_set(&elements)?;
            let engine = MmscEngine::new(&i);
            let report = engine.adaptable_depth(&xs)?;
            let c = match depth {
                Some(d) => engine.mmsc_at_depth(&xs, d)?,
                None => engine.mmsc_adaptive(&xs)?,
            };
            println!("{c}");
            println!("{report}");
        }
        Command::Entails { tbox, ci } => {
            let t = load_tbox(&tbox)?;
            let ci = parse_inclusion(&ci).context("parsing --ci")?;
            println!("{}", Reasoner::new(&t).entails(&ci));
        }
        Command::Check {
            source,
            tbox,
            depth,
            size_cap,
        } => {
            let i = source.load()?;
            let t = load_tbox(&tbox)?;
            let unsound = soundness_violations(&i, &t);
            println!("sound: {}", unsound.is_empty());
            for ci in unsound.iter().take(10) {
                println!("  fails in the interpretation: {ci}");
            }
            let report = check_base_complete(&i, &t, depth, size_cap)?;
            println!("complete: {}", report.is_complete());
            println!("concepts enumerated: {}", report.concepts);
            println!("concepts checked pairwise: {}", report.pairwise_checked);
            println!("missing entailments: {}", report.failure_count);
            for ci in report.failures.iter().take(10) {
                println!("  not entailed: {ci}");
            }
            return Ok(unsound.is_empty() && report.is_complete());
        }
    }
    Ok(true)
}
