use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "shiftaut", version, about = "Marker schemes, boundary actions and lattice reductions for full-shift automorphisms")]
pub struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Record wall-clock runtime in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the overlap conditions of a scheme file.
    Verify { scheme: PathBuf },
    /// Apply a compiled scheme to a two-sided configuration literal.
    Apply {
        scheme: PathBuf,
        #[arg(long)]
        config: String,
        /// Apply the inverse scheme instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Apply the boundary action of a scheme to a one-sided literal.
    Act {
        scheme: PathBuf,
        #[arg(long)]
        omega: String,
    },
    /// Distances of g_k images of C_m samples to the base point.
    Proximality {
        #[arg(long, value_parser = parse_range)]
        k: (usize, usize),
        #[arg(long, value_parser = parse_range)]
        m: (usize, usize),
        #[command(flatten)]
        sample: Sampling,
    },
    /// Minimality maps pushing a source transversal toward a target.
    Minimality {
        /// Largest k; every k in 1..=N is run.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Collapse a finite measure on transversals toward a point mass.
    Collapse {
        #[arg(long)]
        measure: PathBuf,
        /// Target diameter 2^-N.
        #[arg(long)]
        budget: u32,
    },
    /// Search reduced words in two generators for relations.
    Freeness {
        /// Product of factors such as `prox:2*prox:3`, `shift:1`, `perm:0-1` or a scheme path.
        #[arg(long)]
        g: Option<String>,
        /// Second generator, same syntax; omit both for the default pair
        #[arg(long)]
        h: Option<String>,
        /// Longest reduced word searched
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        /// Node budget of each exhaustive comparison.
        #[arg(long, default_value_t = 1 << 22)]
        budget: u64,
    },
    /// Lattice computations in Z^d.
    Zd {
        #[command(subcommand)]
        command: ZdCommand,
    },
    /// Composite reports.
    Report {
        #[command(subcommand)]
        command: ReportCommand,
    },
}

#[derive(Debug, Args)]
pub struct Sampling {
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    /// Prefix depth of enumerated sample points.
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Extra random sample points per C_m.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum ZdCommand {
    /// Minimum sup norm of a nonzero vector of U_k.
    Norm {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: i64,
        /// Coefficient bound of the enumeration.
        #[arg(long, default_value_t = 6)]
        bound: i64,
    },
    /// Largest radius on which cosets of U_k separate points.
    Threshold {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 8)]
        rho_max: usize,
    },
    /// The 1-D code induced on U_k-periodic points.
    Phik {
        descriptor: PathBuf,
        #[arg(long)]
        k: i64,
    },
    /// Decide whether an automaton is a shift through the 1-D reduction.
    Reduce {
        descriptor: PathBuf,
        /// Fixed k; chosen adaptively when absent.
        #[arg(long)]
        k: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReportCommand {
    /// Minimality, proximality, collapse, kernel and faithfulness sections.
    Boundary {
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        m_max: usize,
        #[arg(long, default_value_t = 8)]
        budget: u32,
    },
}

/// Inclusive range `A..B`, or a single value.
fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| format!("bad range start in `{s}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range end in `{s}`"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok((a, b))
}
