use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "powersum",
    version,
    about = "Solve and audit X + Y = c^z over a fixed set of bases"
)]
pub struct Cli {
    /// Directory holding cached results.
    #[arg(
        long,
        global = true,
        env = "POWERSUM_CACHE",
        default_value = ".powersum-cache"
    )]
    pub cache_dir: PathBuf,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct InstanceArgs {
    /// JSON file with fields c, d, and optionally z_max, r, s.
    #[arg(long, conflicts_with_all = ["c", "d"])]
    pub instance: Option<PathBuf>,

    #[arg(short = 'c')]
    pub c: Option<u64>,

    /// Comma-separated bases.
    #[arg(short = 'd', value_delimiter = ',')]
    pub d: Vec<u64>,

    /// Largest exponent of c searched.
    #[arg(long)]
    pub z_max: Option<u32>,

    #[arg(long)]
    pub r: Option<u64>,

    #[arg(long)]
    pub s: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Strategy {
    Auto,
    Enumerate,
    Dlog,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All solutions up to the depth, one record each.
    Solve(InstanceArgs),
    /// Lattices U and U', the counts p and q, and the group M.
    Invariants {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: Strategy,
    },
    /// Squarefree decompositions, key numbers and ideal-pair groups.
    Classify(InstanceArgs),
    /// Orbit seeds per ideal pair and the solutions they predict.
    Orbits {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Largest power of the pair tried for a seed.
        #[arg(long, default_value_t = powersum::orbits::DEFAULT_J_MAX)]
        j_max: u32,
    },
    /// Check one bound on an instance or a family of instances.
    Verify {
        #[command(subcommand)]
        claim: Claim,
    },
    /// Members of the parametric families with their listed solutions.
    Families {
        /// Families to list (F1, F2, F3, F4+, F4-, F5, G, F2/4, G/4); all by default.
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
        #[arg(long, default_value_t = 6)]
        k_max: u64,
        #[arg(long, default_value_t = 6)]
        m_max: u32,
        #[arg(long, default_value_t = 8)]
        r_max: u32,
        #[arg(long, default_value_t = 8)]
        g_max: u32,
        /// Also confirm each entry by search to twice its largest depth.
        #[arg(long)]
        search: bool,
    },
    /// The sporadic double solutions.
    Anomalous {
        #[arg(long)]
        search: bool,
    },
    /// Build a double solution from a^q b + 1 = c^r and a^s + b = c^t.
    PairTransform {
        /// a b c q r s t; without them the stock examples are run.
        #[arg(num_args = 7)]
        params: Vec<u64>,
        #[arg(long)]
        search: bool,
    },
    /// Primality of (2^{p^{t+1}} - 1)/(2^{p^t} - 1).
    ScanMq {
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        p: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        t_max: u32,
        /// Quotients with more digits are reported as skipped.
        #[arg(long, default_value_t = 1000)]
        digit_limit: u64,
        /// Lift the digit limit and add the 1031-digit case p = 59, t = 1.
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Claim {
    /// p*q = 2^(n-1).
    Pq(InstanceArgs),
    /// N <= 2^(n-1) + 1.
    Theorem1(InstanceArgs),
    /// N <= pq + 1, with equality only through a case pair.
    PqBound(InstanceArgs),
    /// N <= 2 for two bases outside the exceptional triples.
    Theorem2(InstanceArgs),
    /// At most one ideal pair carries two solutions.
    Lemma1(InstanceArgs),
    /// r*X + s*Y = c^z has at most 2^n + 1 solutions.
    Lemma3(InstanceArgs),
    /// r*a^x + s*b^y = c^z has at most 4 solutions.
    Corollary1 {
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 1)]
        s: u64,
        #[arg(short = 'a')]
        a: u64,
        #[arg(short = 'b')]
        b: u64,
        #[arg(short = 'c')]
        c: u64,
        #[arg(long, default_value_t = 40)]
        x_max: u32,
        #[arg(long, default_value_t = 40)]
        y_max: u32,
        #[arg(long, default_value_t = 12)]
        z_max: u32,
    },
    /// Count of A + B = c^z with AB built from the primes given.
    Corollary2 {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(short = 'c')]
        c: u64,
        #[arg(long, default_value_t = 10)]
        z_max: u32,
    },
    /// Every instance-level check over a grid of instances.
    Sweep {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        d_max: u64,
        #[arg(long, default_value_t = 99)]
        c_max: u64,
        #[arg(long, default_value_t = 10)]
        z_max: u32,
        /// Emit a record for every instance, not only the notable ones.
        #[arg(long)]
        all: bool,
    },
}
