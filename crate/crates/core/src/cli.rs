//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::curvature::max_sectional_estimate;
use crate::error::Error;
use crate::known_bounds::compare_report;
use crate::lie::MetricSpec;
use crate::report::{BoundTable, CompareReport, Format, Report};
use crate::volume::{orbifold_bound_with, symmetry_order_bound, BoundOptions, BracketConvention, RadiusChoice};
use crate::wang::{wang_report, C2_MIN_RESTARTS, DEFAULT_ROOT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Number of top candidates refined by ascent in the curvature search.
pub const DEFAULT_RESTARTS: usize = 8;

#[derive(Debug, Clone, Parser)]
#[command(name = "orbivol", version, about = "Volume lower bounds for hyperbolic orbifolds")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for all random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Random samples for curvature estimation.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,

    /// Root-finding tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_ROOT_TOL)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Reading of the bracket in the exponents: floor, round_half_up or exact.
    #[arg(long, global = true, default_value = "floor")]
    pub convention: BracketConvention,

    /// Embedded-ball radius: published or uniform.
    #[arg(long, global = true, value_enum, default_value_t = RadiusArg::Published)]
    pub radius: RadiusArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RadiusArg {
    Published,
    Uniform,
}

impl From<RadiusArg> for RadiusChoice {
    fn from(r: RadiusArg) -> Self {
        match r {
            RadiusArg::Published => RadiusChoice::Published,
            RadiusArg::Uniform => RadiusChoice::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MetricArg {
    Canonical,
    Scaled,
}

impl From<MetricArg> for MetricSpec {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Canonical => MetricSpec::Canonical,
            MetricArg::Scaled => MetricSpec::Scaled,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Volume bound for one dimension.
    Bound {
        #[arg(long)]
        n: usize,
    },
    /// Volume bounds over a range of dimensions.
    Table {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Sampled maximum of the sectional curvature against its upper bound.
    Curvature {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Wang's constants and the resulting radius.
    Wang {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MetricArg::Scaled)]
        metric: MetricArg,
        #[arg(long, default_value_t = C2_MIN_RESTARTS)]
        restarts: usize,
    },
    /// The bound next to other known volume bounds.
    Compare {
        #[arg(long)]
        n: usize,
    },
    /// Order bounds for symmetry groups of a closed manifold of the given volume.
    Symmetry {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        volume: f64,
    },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.samples < 1 {
            return Err(usage("--samples must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(usage("--tol must be positive"));
        }
        let (n, min) = match self.command {
            Command::Bound { n } | Command::Symmetry { n, .. } => (n, 3),
            Command::Table { n_min, n_max } => {
                if n_min > n_max {
                    return Err(usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
                }
                (n_min, 3)
            }
            Command::Curvature { n, .. } | Command::Wang { n, .. } | Command::Compare { n } => (n, 2),
        };
        if n < min {
            return Err(Error::InvalidDimension { n, min });
        }
        if let Command::Wang { restarts, .. } | Command::Curvature { restarts, .. } = self.command {
            if restarts < 1 {
                return Err(usage("--restarts must be at least 1"));
            }
        }
        Ok(())
    }

    fn options(&self) -> BoundOptions {
        BoundOptions { convention: self.convention, radius: self.radius.into() }
    }

    /// Produces the report text.
    pub fn execute(&self) -> Result<String, Error> {
        self.validate()?;
        let f = self.format;
        match self.command {
            Command::Bound { n } => orbifold_bound_with(n, self.options())?.render(f),
            Command::Table { n_min, n_max } => {
                let opts = self.options();
                let rows = (n_min..=n_max)
                    .into_par_iter()
                    .map(|n| orbifold_bound_with(n, opts))
                    .collect::<Result<Vec<_>, _>>()?;
                BoundTable { convention: opts.convention, radius: opts.radius, rows }.render(f)
            }
            Command::Curvature { n, restarts } => max_sectional_estimate(n, self.samples, self.seed, restarts)?.render(f),
            Command::Wang { n, metric, restarts } => wang_report(n, metric.into(), self.seed, restarts, self.tol)?.render(f),
            Command::Compare { n } => CompareReport { n, rows: compare_report(n)? }.render(f),
            Command::Symmetry { n, volume } => symmetry_order_bound(n, volume)?.render(f),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Runs a parsed configuration and writes its output; returns the exit code.
pub fn run(config: &RunConfig) -> i32 {
    let text = match config.execute() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &config.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_USAGE
        }
    }
}

/// Parses arguments (including the program name) and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
