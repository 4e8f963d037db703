use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fractalperc",
    version,
    about = "Bond percolation on fractal graph families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph in the JSON exchange format.
    Generate(GenerateArgs),
    /// Run a Monte Carlo experiment and write CSV.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Run a verification suite; exits 1 if any check fails.
    #[command(subcommand)]
    Verify(Verify),
    /// Exact quantities of the diamond crossing recursion.
    #[command(subcommand)]
    Solve(Solve),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Diamond,
    Tri,
    Gasket,
    GasketQuotient,
    Hexacarpet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Terminals {
    #[default]
    Corner,
    Side,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[arg(long, value_enum, default_value = "diamond")]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    /// Diamond branch count.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Diamond path length.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Name recorded in `dual_of` for hexacarpet output.
    #[arg(long)]
    pub dual_of: Option<String>,
    /// Output file, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Overridden by FRACTALPERC_SEED when that is set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Subcommand)]
pub enum Simulate {
    /// Per-sample bottleneck thresholds (thresholds.csv).
    Crossing {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, value_enum, default_value = "corner")]
        terminals: Terminals,
        #[arg(long, default_value = "thresholds.csv")]
        out: String,
    },
    /// Crossing probability curve (theta.csv).
    Theta {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, value_enum, default_value = "corner")]
        terminals: Terminals,
        /// Density grid `start:end:steps`.
        #[arg(long = "p", default_value = "0:1:101")]
        p_grid: String,
        #[arg(long, default_value = "theta.csv")]
        out: String,
    },
    /// Per-level threshold medians of D_l(m, n) against the exact medians.
    PcDiamond {
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Largest level.
        #[arg(long, default_value_t = 6)]
        level: u32,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, default_value = "pc_diamond.csv")]
        out: String,
    },
    /// Collapse-map coupling between the gasket and T (coupling.csv).
    Coupling {
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, value_enum, default_value = "corner")]
        terminals: Terminals,
        #[arg(long = "p", default_value = "0.05:0.5:10")]
        p_grid: String,
        #[arg(long, default_value = "coupling.csv")]
        out: String,
    },
    /// Mean open-cluster size of one vertex (cluster.csv).
    Cluster {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, default_value_t = 0)]
        origin: usize,
        #[arg(long = "p", default_value = "0:1:11")]
        p_grid: String,
        #[arg(long, default_value = "cluster.csv")]
        out: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Embedding of D_{k-1}(2,2) into T_k, checked by isomorphism.
    Embedding {
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Primal/dual crossing complementarity: exhaustive on T_1, sampled on
    /// T_level over a 101-point grid.
    Duality {
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Hexacarpet isoperimetric bound on random connected regions.
    Isoperimetry {
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `printed`, `derived` or a number.
        #[arg(long, default_value = "printed")]
        exponent: String,
        /// Also check every connected region up to this size.
        #[arg(long, default_value_t = 0)]
        exhaustive: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value = "isoperimetry.csv")]
        out: String,
    },
    /// Strict monotonicity of p_c(m, n) over a grid.
    PcTable {
        /// Range `lo:hi`.
        #[arg(long, default_value = "2:6")]
        m: String,
        #[arg(long, default_value = "2:6")]
        n: String,
        #[arg(long, default_value = "pc_table.csv")]
        out: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Solve {
    /// Critical point of f_{m,n}.
    Pc {
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Orbit `l, f^l(p)` (fixed_point_trace.csv).
    Trace {
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        levels: u32,
        #[arg(long, default_value = "fixed_point_trace.csv")]
        out: String,
    },
}
