//! Command-line surface for `two-children-core`.
//!
//! Every subcommand prints plain text or CSV. Exit codes: 0 on success, 1
//! when a computation rejects its inputs, 2 on malformed arguments.

pub mod figures;
pub mod format;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use two_children::extremal::{feasible_set_s, limit_upper, p_bounds, solve_k3_manifold};
use two_children::montecarlo::{enumerate_exact, Replication, Simulation};
use two_children::prob_core::{
    joint_table_model_a, joint_table_model_b, make_popularity, prob_other_boy_model_a,
    prob_other_boy_model_b, Model, PopularityVector,
};

use crate::figures::{fig1_csv, fig2_csv, fig3_csv, Grid};
use crate::format::{fmt_list, fmt_sig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] two_children::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    A,
    B,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::A => Model::A,
            ModelArg::B => Model::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact probability that the other child is a boy
    Prob,
    /// 3x3 joint table over {boy, girl n1, other girl} for both children
    Table,
    /// Range of p over configurations with K names and fixed r1
    Bounds,
    /// Upper end of that range as K grows without bound
    Slimit,
    /// Values of r1 admitting a configuration with p = 1/2
    Feasible,
    /// The K = 3 configuration with p = 1/2 for a given r1
    Manifold,
    /// Monte Carlo estimate of the conditional probability
    Simulate,
    /// Every outcome with its exact probability
    Enumerate,
    /// CSV: exact and simulated p on uniform-tail configurations
    Fig1,
    /// CSV: fixed-r1 lower and upper bounds of p
    Fig2,
    /// CSV: the K = 3 equal-genders curve
    Fig3,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "two-children",
    version,
    about = "Name variant of the two-children problem"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Naming model
    #[arg(long, value_enum, default_value = "b", global = true)]
    pub model: ModelArg,

    /// Popularities r1,...,rK (decimals or fractions such as 1/3)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    pub r: Option<Vec<String>>,

    /// Uniform configuration (1/K, ..., 1/K) with this many names
    #[arg(long, global = true)]
    pub uniform: Option<usize>,

    /// Popularity of name n1
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub r1: Option<String>,

    /// Number of names; with --r1 selects the uniform-tail configuration
    #[arg(long = "k", global = true)]
    pub k: Option<usize>,

    /// Name counts for the figure subcommands, e.g. 2,3,10
    #[arg(long, value_delimiter = ',', global = true)]
    pub ks: Option<Vec<usize>>,

    /// r1 sweep as start:stop:step, endpoints inclusive
    #[arg(long, global = true)]
    pub grid: Option<String>,

    /// Replications per estimate
    #[arg(long, default_value_t = 10_000, global = true)]
    pub n: u64,

    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,

    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Accept zero popularities
    #[arg(long, global = true)]
    pub allow_zero: bool,

    /// Count raw families rather than conditioned ones in --n
    #[arg(long, global = true)]
    pub raw_families: bool,
}

/// Parses a decimal or a fraction `a/b`.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((num, den)) => num
            .trim()
            .parse::<f64>()
            .and_then(|n| den.trim().parse::<f64>().map(|d| n / d)),
        None => s.parse::<f64>(),
    };
    match parsed {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(usage(format!("invalid number '{s}'"))),
    }
}

impl RunConfig {
    fn command_name(&self) -> String {
        format!("{:?}", self.command).to_lowercase()
    }

    fn r1(&self) -> Result<f64, CliError> {
        match &self.r1 {
            Some(s) => parse_real(s),
            None => Err(usage(format!("{} requires --r1", self.command_name()))),
        }
    }

    fn k(&self) -> Result<usize, CliError> {
        self.k
            .ok_or_else(|| usage(format!("{} requires --k", self.command_name())))
    }

    fn popularity(&self) -> Result<PopularityVector, CliError> {
        if let Some(list) = &self.r {
            let values = list
                .iter()
                .map(|s| parse_real(s))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(make_popularity(&values, self.allow_zero)?);
        }
        if let Some(k) = self.uniform {
            return Ok(PopularityVector::uniform(k)?);
        }
        if let (Some(_), Some(k)) = (&self.r1, self.k) {
            return Ok(PopularityVector::uniform_tail(k, self.r1()?)?);
        }
        Err(usage(
            "a configuration is required: --r LIST, --uniform K, or --r1 X --k K",
        ))
    }

    fn grid(&self, default: Grid) -> Result<Grid, CliError> {
        match &self.grid {
            None => Ok(default),
            Some(s) => {
                let parts: Vec<&str> = s.split(':').collect();
                let [start, stop, step] = parts[..] else {
                    return Err(usage(format!("--grid expects start:stop:step, got '{s}'")));
                };
                Grid::new(parse_real(start)?, parse_real(stop)?, parse_real(step)?).map_err(usage)
            }
        }
    }

    fn ks(&self, default: &[usize]) -> Vec<usize> {
        self.ks.clone().unwrap_or_else(|| default.to_vec())
    }

    fn simulation(&self) -> Simulation {
        let replication = if self.raw_families {
            Replication::RawFamilies
        } else {
            Replication::Conditioned
        };
        Simulation::new(self.model.into()).replication(replication)
    }
}

/// Executes one subcommand, writing its output to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let model: Model = config.model.into();
    match config.command {
        Command::Prob => {
            let p = match model {
                Model::A => {
                    let r1 = match &config.r1 {
                        Some(_) => config.r1()?,
                        None => config.popularity()?.r1(),
                    };
                    prob_other_boy_model_a(r1)?
                }
                Model::B => prob_other_boy_model_b(&config.popularity()?),
            };
            writeln!(out, "{}", fmt_sig(p))?;
        }
        Command::Table => {
            let table = match model {
                Model::A => {
                    let r1 = match &config.r1 {
                        Some(_) => config.r1()?,
                        None => config.popularity()?.r1(),
                    };
                    joint_table_model_a(r1)?
                }
                Model::B => joint_table_model_b(&config.popularity()?),
            };
            writeln!(out, "{table}")?;
        }
        Command::Bounds => {
            let (k, r1) = (config.k()?, config.r1()?);
            let b = p_bounds(k, r1)?;
            writeln!(out, "K = {k}, r1 = {}", fmt_sig(r1))?;
            writeln!(out, "range = {}", format::fmt_interval(&b.interval))?;
            writeln!(
                out,
                "upper bound attained at r = ({})",
                fmt_list(b.argmax_config.values())
            )?;
            writeln!(out, "lower bound {}", b.liminf_config_description)?;
        }
        Command::Slimit => {
            writeln!(out, "{}", fmt_sig(limit_upper(config.r1()?)?))?;
        }
        Command::Feasible => {
            let s = feasible_set_s(config.k()?)?;
            writeln!(out, "{}", format::fmt_interval(&s))?;
        }
        Command::Manifold => {
            let r1 = config.r1()?;
            let (r2, r3) = solve_k3_manifold(r1)?;
            writeln!(out, "r1 = {}", fmt_sig(r1))?;
            writeln!(out, "r2 = {}", fmt_sig(r2))?;
            writeln!(out, "r3 = {}", fmt_sig(r3))?;
        }
        Command::Simulate => {
            let r = config.popularity()?;
            let est = config.simulation().run(&r, config.n, config.seed)?;
            writeln!(out, "p_hat = {}", fmt_sig(est.p_hat))?;
            writeln!(out, "std_err = {}", fmt_sig(est.std_err))?;
            writeln!(out, "n_total = {}", est.n_total)?;
            writeln!(out, "n_conditioned = {}", est.n_conditioned)?;
            writeln!(out, "seed = {}", est.seed)?;
        }
        Command::Enumerate => {
            let dist = enumerate_exact(model, &config.popularity()?)?;
            writeln!(out, "elder,younger,weight")?;
            for (o, w) in &dist.outcomes {
                writeln!(out, "{},{},{}", o.elder, o.younger, fmt_sig(*w))?;
            }
        }
        Command::Fig1 => {
            let grid = config.grid(Grid::new(0.01, 0.99, 0.01).map_err(usage)?)?;
            let ks = config.ks(&[2, 3, 10]);
            fig1_csv(out, &grid, &ks, &config.simulation(), config.n, config.seed)?;
        }
        Command::Fig2 => {
            let grid = config.grid(Grid::new(0.01, 0.99, 0.01).map_err(usage)?)?;
            fig2_csv(out, &grid, &config.ks(&[4]))?;
        }
        Command::Fig3 => {
            let grid = config.grid(Grid::new(1.0 / 3.0, 0.499, 0.001).map_err(usage)?)?;
            fig3_csv(out, &grid)?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let text = if code == 2 {
                // one-line diagnostic
                rendered.lines().next().unwrap_or_default().to_string() + "\n"
            } else {
                rendered
            };
            let _ = if code == 2 {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };

    let result = match &config.out {
        Some(path) => File::create(path).map_err(CliError::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            run(&config, &mut w)?;
            w.flush()?;
            Ok(())
        }),
        None => run(&config, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
