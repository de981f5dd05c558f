use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bigonal", version, about = "Verify lattice, quartic, tower and Prym invariants")]
pub struct Cli {
    /// Seed for every randomized step; defaults to the instance seed, then 0.
    #[arg(long, global = true, env = "BIGONAL_SEED")]
    pub seed: Option<u64>,
    /// Tolerance override `key=value`; repeat or separate with commas.
    #[arg(long = "tol", global = true, env = "BIGONAL_TOL", value_delimiter = ',')]
    pub tol: Vec<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, env = "BIGONAL_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads for independent instances (0 = all cores).
    #[arg(long, global = true, env = "BIGONAL_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice invariants, complements, gluing and involutions.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Bitangents, genericity and tangent pairs of plane quartics.
    #[command(subcommand)]
    Quartic(QuarticCmd),
    /// Tower slices, the bigonal dual and monodromy.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Homology, deck involution and Prym polarization type.
    Prym(PrymArgs),
    /// Generate random instances and run every check on each.
    Suite(SuiteArgs),
    /// Print random instance records as a JSON array.
    Generate(SuiteArgs),
}

#[derive(Debug, Args, Clone)]
pub struct LatticeSource {
    /// Named lattice (`I17_2`, `K3`, `U + E8(-1)`, …).
    #[arg(long, conflicts_with = "gram")]
    pub fixture: Option<String>,
    /// Gram matrix file.
    #[arg(long)]
    pub gram: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct EmbeddingSource {
    /// Named embedding (`I17_2-in-K3`, `I17_2-in-K3-alt`).
    #[arg(long, conflicts_with_all = ["gram", "basis"])]
    pub fixture: Option<String>,
    /// Gram matrix file of the ambient lattice.
    #[arg(long, requires = "basis")]
    pub gram: Option<PathBuf>,
    /// Basis rows of the sublattice in ambient coordinates.
    #[arg(long, requires = "gram")]
    pub basis: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Signature, 2-rank and parity of an even 2-elementary lattice.
    Triple(LatticeSource),
    /// Orthogonal complement of a primitive sublattice.
    Complement(EmbeddingSource),
    /// Involution acting as +1 on the sublattice and −1 on its complement.
    Involution(EmbeddingSource),
    /// Glue map between discriminant groups and its anti-isometry check.
    Glue(EmbeddingSource),
    /// Extend isometries of a sublattice and its complement to the ambient lattice.
    Extend {
        #[command(flatten)]
        from: EmbeddingSource,
        /// Target embedding fixture (defaults to the source).
        #[arg(long)]
        to: Option<String>,
        /// Matrix of φ on sublattice coordinates (default identity).
        #[arg(long)]
        phi: Option<PathBuf>,
        /// Matrix of ψ on complement coordinates (default identity).
        #[arg(long)]
        psi: Option<PathBuf>,
    },
    /// Compare two even 2-elementary indefinite lattices by their invariants.
    NikulinEqual {
        /// Two named lattices, or one together with `--gram`.
        #[arg(long)]
        fixture: Vec<String>,
        #[arg(long)]
        gram: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuarticCmd {
    /// Certified bitangent lines of a plane quartic.
    Bitangents { file: PathBuf },
    /// The three genericity conditions for `B0` and `Δ0 = Q² − λB0`.
    Genericity { file: PathBuf },
    /// Build `Δ0` and certify its tangency with `B0`; random `B0`, `Q` without a file.
    MakePair {
        file: Option<PathBuf>,
        /// Override `λ` (integer or `p/q`).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Fit a conic through points.
    ConicCheck { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TowerCmd {
    /// Restrict to the line: branch data and genus ledger.
    Slice { file: PathBuf },
    /// The bigonal dual model and its pencil identity.
    Dualize { file: PathBuf },
    /// Branch-set swap between the tower and its dual.
    VerifyStep2 { file: PathBuf },
    /// Sign consistency and the dual as the role-swapped tower.
    VerifyStep3 { file: PathBuf },
    /// Fiber monodromy of the tower and of its dual.
    Monodromy { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct PrymArgs {
    /// Instance record (JSON) or cover presentation (text).
    pub file: PathBuf,
    /// Read the file as a cover presentation.
    #[arg(long)]
    pub cover: bool,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Number of instances.
    #[arg(long, default_value_t = 10)]
    pub count: u64,
}
