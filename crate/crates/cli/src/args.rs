use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "omr", version, about = "Homomorphic BSGS MatMul, accelerator cost models and design space exploration")]
pub struct Cli {
    /// Worker threads for parallel sections (1 gives single-threaded timings).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Allow ring dimensions above 8192 (slow).
    #[arg(long, global = true)]
    pub full: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt a vector, multiply it by a plaintext matrix and report counts and timings.
    Matmul(MatmulArgs),
    /// Rank accelerator configurations under a resource budget.
    Dse(DseArgs),
    /// Run the oracle suites and print a pass/fail matrix.
    Verify(VerifyArgs),
    /// Time the individual homomorphic operators.
    Bench(BenchArgs),
    /// Generate a secret key and the rotation keys a MatMul needs.
    Keygen(KeygenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamsArg {
    /// Parameter file, or one of the built-in presets `desk` and `sophomr`.
    #[arg(long, default_value = "desk")]
    pub params: String,
}

#[derive(Debug, Args)]
pub struct MatmulArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    /// Matrix file (text rows or OMMX binary). A random matrix is used when absent.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Vector file, one row of `k` values. Random when absent.
    #[arg(long)]
    pub vector: Option<PathBuf>,
    /// Rows of the random matrix.
    #[arg(long, default_value_t = 8)]
    pub rows: usize,
    /// Columns of the random matrix; defaults to the parameter file's `k`.
    #[arg(long)]
    pub cols: Option<usize>,
    /// Giant-step count; defaults to the parameter file's split.
    #[arg(long)]
    pub giant: Option<usize>,
    /// Baby-step count; defaults to the parameter file's split.
    #[arg(long)]
    pub baby: Option<usize>,
    /// Simulated PCmul cores working on each giant step.
    #[arg(long, default_value_t = 1)]
    pub cores: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of MatMuls to run.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Key directory written by `omr keygen`. Fresh keys are generated when absent.
    #[arg(long)]
    pub key: Option<PathBuf>,
    /// Also run the single-step reference evaluation.
    #[arg(long)]
    pub naive: bool,
    /// Zero every timing so that reports are reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct DseArgs {
    /// Parameter file or preset supplying the BSGS split and limb size.
    #[arg(long, default_value = "sophomr")]
    pub params: String,
    /// Operator cost fixture; the bundled calibration when absent.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    /// FPGA budget file; the Alveo U55C when absent.
    #[arg(long)]
    pub budget: Option<PathBuf>,
    /// Override the DSP total of the budget.
    #[arg(long)]
    pub dsp: Option<u64>,
    /// Rows of the ranking to print (0 prints all).
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Allow PC values above 16.
    #[arg(long)]
    pub wide_pc: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Ntt,
    Homomorphism,
    Bsgs,
    Costmodel,
    Dse,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    /// Timed iterations per operator, after one warm-up call.
    #[arg(long, default_value_t = 10)]
    pub repeat: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    /// Directory receiving `secret.key` and one `rot_<shift>.key` per shift.
    #[arg(long)]
    pub out: PathBuf,
    /// Rotation shifts; defaults to 1 and the baby-step count.
    #[arg(long, value_delimiter = ',')]
    pub shifts: Vec<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}
