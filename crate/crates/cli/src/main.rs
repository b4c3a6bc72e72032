//! `dq`: command-line front end for building and checking star products.

mod config;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use deformq::cochain::{Bivector, BivectorJson, Cochain, CochainTermJson};
use deformq::exactmath::Poly;
use deformq::hochschild::{block_matrix, delta, delta_transpose, BlockOp};
use deformq::sample::rng;
use deformq::starprod::{
    assoc_residual, build_star, cocycle_decompose, random_triples, solve_star, star_mul,
    BiderivationSeries, StarJson, StarProduct,
};

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "dq",
    version,
    about = "Exact star products on polynomial algebras"
)]
struct Cli {
    /// Largest total derivative order any graded block may reach.
    #[arg(long, global = true, default_value_t = 8)]
    max_grade: u32,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Star products built from a Poisson bivector.
    #[command(subcommand)]
    Star(StarCommand),
    /// The Hochschild coboundary and its transpose.
    #[command(subcommand)]
    Hochschild(HochschildCommand),
    /// Dump the graded block of the pseudoinverse.
    Pinv {
        /// Arity of the source cochains.
        #[arg(long, default_value_t = 3)]
        arity: usize,
        /// Total derivative order of the block.
        #[arg(long)]
        grade: u32,
        /// Number of variables.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Bivector JSON `{"n": .., "alpha": {"i,j": "<poly>"}}`.
    #[arg(long)]
    input: PathBuf,
    /// Highest power of t to solve for.
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Largest polynomial degree allowed in the biderivation coefficients.
    #[arg(long, default_value_t = 4)]
    degree_bound: u32,
}

#[derive(Subcommand, Debug)]
enum StarCommand {
    /// Solve for the biderivations and write the assembled product.
    Expand {
        #[command(flatten)]
        solve: SolveArgs,
        /// Write the result here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Star product of two polynomials.
    Mul {
        #[command(flatten)]
        solve: SolveArgs,
        /// Left factor, e.g. `x1^2 + 1/2*x2`.
        #[arg(long)]
        f: String,
        /// Right factor.
        #[arg(long)]
        g: String,
    },
    /// Check associativity of a stored product, order by order.
    CheckAssoc {
        /// Star product JSON as written by `star expand`.
        #[arg(long)]
        input: PathBuf,
        /// Check orders up to this one (default: the stored order).
        #[arg(long)]
        order: Option<usize>,
        /// Random polynomial triples evaluated per order.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Solve for the biderivations only.
    Solve {
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Split a 2-cocycle into a bivector and a coboundary.
    Decompose {
        /// Cochain JSON (list of `{"indices": .., "coeff": ..}`).
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum HochschildCommand {
    /// Apply the coboundary to a cochain.
    Delta {
        /// Cochain JSON, a list of `{"indices": [[..], ..], "coeff": "<poly>"}` terms.
        #[arg(long)]
        input: PathBuf,
    },
    /// Apply the transpose of the coboundary to a cochain.
    Deltat {
        /// Cochain JSON, a list of `{"indices": [[..], ..], "coeff": "<poly>"}` terms.
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(fail) = e.downcast_ref::<AssocFailure>() {
                print!("{}", fail.report);
            }
            eprintln!("error: {e:#}");
            if let Some(deformq::Error::Infeasible { residual, .. }) = e.downcast_ref() {
                eprintln!("residual: {}", residual.pretty());
            }
            ExitCode::from(config::exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    let cfg = RunConfig::new(cli.max_grade, cli.seed, cli.format)?;
    match cli.command {
        Command::Star(cmd) => run_star(cmd, &cfg),
        Command::Hochschild(cmd) => {
            let (input, transpose) = match cmd {
                HochschildCommand::Delta { input } => (input, false),
                HochschildCommand::Deltat { input } => (input, true),
            };
            let c = read_cochain(&input)?;
            let image = if transpose {
                delta_transpose(&c)
            } else {
                delta(&c)
            };
            Ok(render::cochain(&image, cfg.format))
        }
        Command::Pinv { arity, grade, dim } => {
            if arity < 2 || dim == 0 {
                anyhow::bail!(deformq::Error::Invalid(
                    "pinv needs arity >= 2 and dim >= 1".into()
                ));
            }
            let block = block_matrix(BlockOp::DeltaPlus, arity, grade, dim, &cfg.limits)?;
            Ok(render::block(&block, cfg.format))
        }
    }
}

fn run_star(cmd: StarCommand, cfg: &RunConfig) -> Result<String> {
    match cmd {
        StarCommand::Expand { solve, output } => {
            let (pi, star) = solve_from(&solve, cfg)?;
            let text = render::star(&star, Some(&pi), cfg.format);
            match output {
                Some(path) => {
                    fs::write(&path, &text)
                        .with_context(|| format!("writing {}", path.display()))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        StarCommand::Mul { solve, f, g } => {
            let (_, star) = solve_from(&solve, cfg)?;
            let dim = star.dim();
            let f = Poly::parse(&f, dim)?;
            let g = Poly::parse(&g, dim)?;
            Ok(render::series(&star_mul(&f, &g, &star)?, cfg.format))
        }
        StarCommand::CheckAssoc {
            input,
            order,
            trials,
        } => {
            let j: StarJson = serde_json::from_str(&read(&input)?)?;
            let star = StarProduct::from_json(&j)?;
            let order = order.unwrap_or(star.order());
            if order > star.order() {
                anyhow::bail!(deformq::Error::Invalid(format!(
                    "product is stored through order {}, asked for {order}",
                    star.order()
                )));
            }
            let triples = random_triples(&mut rng(cfg.seed), star.dim(), trials);
            let report = assoc_residual(&star, order, &triples)?;
            let text = render::assoc(&report, trials, cfg.format);
            match report.first_failure() {
                None => Ok(text),
                Some(k) => Err(AssocFailure {
                    order: k,
                    report: text,
                }
                .into()),
            }
        }
        StarCommand::Solve { solve } => {
            let alpha = read_alpha(&solve.input)?;
            let (pi, _) = solve_star(&alpha, solve.order, solve.degree_bound, &cfg.limits)?;
            Ok(render::biderivations(&pi, cfg.format))
        }
        StarCommand::Decompose { input } => {
            let upsilon = read_cochain(&input)?;
            let (pi, lambda) = cocycle_decompose(&upsilon, &cfg.limits)?;
            Ok(render::decomposition(&pi, &lambda, cfg.format))
        }
    }
}

fn solve_from(solve: &SolveArgs, cfg: &RunConfig) -> Result<(BiderivationSeries, StarProduct)> {
    let alpha = read_alpha(&solve.input)?;
    if solve.order == 0 {
        let pi = BiderivationSeries::from_terms(alpha.dim(), vec![])?;
        let star = build_star(&pi, 0, &cfg.limits)?;
        return Ok((pi, star));
    }
    Ok(solve_star(
        &alpha,
        solve.order,
        solve.degree_bound,
        &cfg.limits,
    )?)
}

/// Associativity fails at some order; the report still goes to stdout.
#[derive(Debug, thiserror::Error)]
#[error("associativity fails at order {order}")]
struct AssocFailure {
    order: usize,
    report: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_alpha(path: &Path) -> Result<Bivector> {
    let j: BivectorJson = serde_json::from_str(&read(path)?).map_err(deformq::Error::from)?;
    Ok(Bivector::from_json(&j)?)
}

fn read_cochain(path: &Path) -> Result<Cochain> {
    let terms: Vec<CochainTermJson> =
        serde_json::from_str(&read(path)?).map_err(deformq::Error::from)?;
    Ok(Cochain::from_json_terms(&terms, None)?)
}
