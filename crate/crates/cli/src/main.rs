use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use divdiv::biharmonic::CaseOptions;
use divdiv::mesh_from_spec;

mod commands;
mod config;
mod output;

use config::StudyConfig;

#[derive(Parser)]
#[command(name = "divdiv", version, about = "Div-div conforming elements and mixed biharmonic solves")]
struct Cli {
    /// Worker threads (1 gives bit-identical reruns; default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the element reference card.
    DescribeElement {
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Random triangles for the conditioning statistics.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check the polynomial and finite element complexes; exits nonzero on failure.
    VerifyComplexes {
        /// A single value or an inclusive range such as `3..5`.
        #[arg(long, default_value = "3")]
        k: String,
        /// Defaults to both l = k and l = k - 1.
        #[arg(long)]
        l: Option<usize>,
        /// At most 64 triangles.
        #[arg(long, default_value = "square:2")]
        mesh: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Solve the manufactured clamped plate problem and print error tables.
    Solve {
        /// `square:n` or a mesh file; repeat for a sequence.
        #[arg(long, required = true)]
        mesh: Vec<String>,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        hybrid: bool,
        /// Also solve the mixed system and report the deviation (with --hybrid).
        #[arg(long, requires = "hybrid")]
        compare: bool,
        #[arg(long)]
        postprocess: bool,
        /// Write the saddle-point matrix (and `.rhs`) in coordinate format.
        #[arg(long)]
        dump_system: Option<PathBuf>,
        /// Write errors.csv and rates.csv here instead of printing them.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a convergence study from a `key = value` config file.
    Study {
        config: Option<PathBuf>,
        /// Override a config entry, e.g. `--set levels=4,8,16`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn parse_range(s: &str) -> Result<Vec<usize>> {
    let parse = |x: &str| -> Result<usize> {
        x.trim().parse().with_context(|| format!("bad value `{x}` in `{s}`"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range `{s}`");
    }
    Ok((lo..=hi).collect())
}

fn init_threads(n: Option<usize>) -> Result<()> {
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::DescribeElement { l, k, samples, seed } => {
            init_threads(cli.threads)?;
            print!("{}", commands::describe_element(l, k, samples, seed)?);
            Ok(true)
        }
        Command::VerifyComplexes { k, l, mesh, seed } => {
            init_threads(cli.threads)?;
            let ks = parse_range(&k)?;
            let mesh = mesh_from_spec(&mesh)?;
            let (text, ok) = commands::verify_complexes(&ks, l, &mesh, seed)?;
            print!("{text}");
            Ok(ok)
        }
        Command::Solve {
            mesh,
            l,
            k,
            hybrid,
            compare,
            postprocess,
            dump_system,
            output,
        } => {
            init_threads(cli.threads)?;
            let args = commands::SolveArgs {
                meshes: mesh,
                opts: CaseOptions {
                    l,
                    k,
                    hybrid,
                    postprocess,
                    compare_hybrid: compare,
                },
                dump_system,
                output,
            };
            let (text, ok) = commands::solve(&args)?;
            print!("{text}");
            Ok(ok)
        }
        Command::Study { config, overrides } => {
            let mut cfg = match &config {
                Some(p) => StudyConfig::parse(
                    &std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
                )?,
                None => StudyConfig::default(),
            };
            for o in &overrides {
                cfg.apply(o).with_context(|| format!("override `{o}`"))?;
            }
            if let Some(t) = cli.threads {
                cfg.threads = t;
            }
            cfg.validate()?;
            init_threads(Some(cfg.threads))?;
            let (text, ok) = commands::study(&cfg)?;
            print!("{text}");
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
