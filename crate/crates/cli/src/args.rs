use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Full,
    Solubility,
    NotAllDivisible,
}

#[derive(Debug, Parser)]
#[command(name = "stab", version, about = "Local solubility, densities and counts of conics s x^2 + t y^2 = z^2")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Worker threads for exact counting (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for Monte-Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cache directory (defaults to $STAB_CACHE_DIR when set).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local Hilbert symbol (a, b) at a place.
    Symbol {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// A prime, or `inf`.
        #[arg(long)]
        place: String,
    },
    /// Whether s x^2 + t y^2 = z^2 has a rational point, or a point over a field.
    Solvable {
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        /// Field fixture file.
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// A small rational point, or a certificate that none exists.
    Point {
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
    },
    /// Local density mu_p with a certified enclosure.
    Density {
        #[arg(long)]
        p: u64,
        /// Residue depth m of the oracle (default: deepen until the width is at most 1e-3).
        #[arg(long)]
        oracle_depth: Option<u32>,
    },
    /// Proportion of group elements with an odd-length orbit.
    GroupDelta {
        /// One permutation per line in cycle notation.
        #[arg(long)]
        generators: PathBuf,
        /// Degree of the action (default: largest point mentioned).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Number-field analysis.
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
    /// Pairs in a sign quadrant with trivial symbol at every prime of a set.
    Count(CountArgs),
    /// Pairs whose conic has no point over a field.
    StableCount {
        #[arg(long)]
        bound: u64,
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Leading constant and predicted count.
    Predict {
        #[command(flatten)]
        like: CountArgs,
        #[command(flatten)]
        constant: ConstantArgs,
    },
    /// Empirical counts against predictions along a ladder of bounds.
    Compare {
        /// Comma-separated bounds.
        #[arg(long, value_delimiter = ',')]
        ladder: Vec<u64>,
        #[command(flatten)]
        like: CountArgs,
        #[command(flatten)]
        constant: ConstantArgs,
    },
    /// Sieve harness.
    Sieve {
        #[command(subcommand)]
        command: SieveCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum FieldCommand {
    /// Discriminant, signature, delta, exceptional primes and stability class.
    Analyze {
        #[arg(long)]
        fixture: PathBuf,
        /// Prime bound for Frobenius statistics and the exceptional-set scan.
        #[arg(long, default_value_t = 10_000)]
        scan: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CountArgs {
    #[arg(long, default_value_t = 1000)]
    pub bound: u64,
    #[arg(long, allow_hyphen_values = true, default_value = "++")]
    pub signs: String,
    /// all | complement:2,3 | list:5,7 | progression:a,q | field:FIXTURE
    #[arg(long, default_value = "all")]
    pub primes: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantArgs {
    /// Euler-product cutoff.
    #[arg(long, default_value_t = 1_000_000)]
    pub zmax: u64,
    /// Extrapolate the partial products in 1/log z.
    #[arg(long)]
    pub extrapolate: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = Family::Full)]
    pub family: Family,
    /// Dimension for the full and divisibility families.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Prime set of the solubility family.
    #[arg(long, default_value = "all")]
    pub primes: String,
}

#[derive(Debug, Subcommand)]
pub enum SieveCommand {
    /// Exact omega(l) from residues modulo l^m.
    Omega {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Large-sieve upper bound (2B)^n / L(B^(1/2m)).
    Lsbound {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Pairs in [1, B]^2 whose gcd has a prime factor above z.
    Gls {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        z: u64,
    },
    /// Exact counts against the bound shape over ladders of B and z.
    Report {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096")]
        ladder: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "3,5,11,23")]
        zs: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}
