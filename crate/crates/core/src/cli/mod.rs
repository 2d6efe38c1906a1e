//! Command-line front end.

mod config;
mod figures;
mod output;
mod runs;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{merge as merge_config, parse as parse_config};
pub use output::{fmt_f64, OUTPUT_DIR_ENV, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "cfduplex", version, about = "Counterfactual duplex and telexchange simulator")]
#[command(after_help = "Config files hold `key = value` lines using long flag names; flags override the file.\n\
Relative output paths resolve against $CFDUPLEX_OUTPUT_DIR when set.")]
pub struct Cli {
    /// Read `key = value` defaults from this file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps and sampling (0 = available parallelism).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Override the default output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Analytic,
    Cycle,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateKind {
    Qz,
    Cqz,
    Mqz,
    Dmqz,
    Dcqz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AoArg {
    Present,
    Absent,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Cqz,
    Duplex,
    Telex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizeArg {
    Separable,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig4,
    Fig7,
    Fig9,
    Fig10,
    Report,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one Zeno gate on a prepared input (JSON).
    #[command(after_help = "JSON fields: schema_version, command, parameters, herald_probability, closed_form, \
coherent_herald, channel_exposure, channel_residue, counterfactual, ledger, events, output_state.")]
    Gate(GateArgs),
    /// Run the duplex protocol for one message (JSON).
    #[command(after_help = "JSON fields: schema_version, command, parameters, result{status, decoded_bits, \
herald_probability, closed_form_herald, coherent_herald, ledger, erasure_cause, outcome_probability}; \
montecarlo mode reports the trial ensemble instead of result.")]
    Duplex(DuplexArgs),
    /// Run the telexchange protocol for one qubit pair (JSON).
    #[command(after_help = "JSON fields as for duplex, with announcement, output_states and fidelities. \
Amplitudes accept complex literals such as 0.6, 0.8i or 0.5+0.5i; an omitted β or δ is the real \
completion of α or γ.")]
    Telex(TelexArgs),
    /// Capacity of one channel configuration (CSV row).
    #[command(after_help = "CSV columns: schema_version, channel, n, m, k, alpha_sq, gamma_sq, lambda0, lambda1, \
zeta, capacity, p_star, reference_capacity, reference_p_star, diff_capacity, diff_p_star.\n\
Reference columns are filled where reference values exist.")]
    Capacity(CapacityArgs),
    /// Closed-form sweep over a parameter grid (CSV, one row per grid point).
    #[command(after_help = "CSV columns: schema_version, channel, n, m, k, alpha_sq, gamma_sq, lambda0, lambda1, \
lambda2, lambda3, lambda4, zeta, capacity, p_star.\n\
Grids accept lists (1,2,5), inclusive ranges (1..64), stepped ranges (1..64:3) and doubling ranges (2..1024*2).\n\
Rows are ordered by (n, m, k, alpha_sq, gamma_sq).")]
    Sweep(SweepArgs),
    /// Figure datasets and the reference-value discrepancy report.
    #[command(after_help = "Files written to --out-dir:\n\
  fig4.csv: n, m, lambda0, lambda1, capacity, p_star, reference_capacity, reference_p_star, diff_capacity, diff_p_star\n\
  fig7_grid.csv: n, k, lambda2, zeta_c, capacity\n\
  fig7_trajectory.csv: n, k_star, zeta_c, capacity\n\
  fig9.csv: n, m, k, alpha_sq, gamma_sq, delta1, lambda3, lambda4, zeta_q, reference_zeta_q, diff_zeta_q\n\
  fig10.csv: n, m_star, k_star, zeta_q, q, reference_m_star, reference_k_star, reference_q\n\
  discrepancy.csv / discrepancy.json: id, quantity, formula_value, reference_value, abs_diff, tolerance, comparison, within")]
    Figures(FiguresArgs),
}

#[derive(Debug, Args)]
pub struct GateArgs {
    #[arg(long, value_enum)]
    pub gate: GateKind,
    #[arg(long, value_enum, default_value = "h")]
    pub variant: Variant,
    /// Classical AO, or an electron prepared with weight `--alpha-sq` on level 0.
    #[arg(long, value_enum, default_value = "quantum")]
    pub ao: AoArg,
    #[arg(long, default_value_t = 0.5)]
    pub alpha_sq: f64,
    /// Dual-rail photon weight on path 0 (dmqz, dcqz).
    #[arg(long, default_value_t = 0.5)]
    pub gamma_sq: f64,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: RunMode,
}

#[derive(Debug, Args)]
pub struct DuplexArgs {
    #[arg(long)]
    pub b1: u8,
    #[arg(long)]
    pub b2: u8,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: RunMode,
    /// Seed for sampled measurements; omitted means the most likely outcome is reported.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct TelexArgs {
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: String,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: RunMode,
    /// Force the announcement bit instead of sampling it.
    #[arg(long)]
    pub mu: Option<u8>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha_sq: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma_sq: f64,
    /// Optimise the free cycle counts (duplex: K; telex: M and K).
    #[arg(long, value_enum)]
    pub optimize: Option<OptimizeArg>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value = "1")]
    pub m: String,
    #[arg(long, default_value = "1")]
    pub k: String,
    #[arg(long, default_value = "0.5")]
    pub alpha_sq: String,
    #[arg(long, default_value = "0.5")]
    pub gamma_sq: String,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub which: Figure,
    /// Largest N (fig4: 100, fig7: 512, fig10: 256 when omitted).
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Largest K in the fig7 grid.
    #[arg(long, default_value_t = 64)]
    pub k_max: u32,
    /// Points per axis in the fig9 grid.
    #[arg(long, default_value_t = 21)]
    pub steps: u32,
    /// Directory for the dataset files (default: $CFDUPLEX_OUTPUT_DIR or the working directory).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

/// Parses `args` (including the program name) after config merging and runs the command.
pub fn run_from<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match config::merge(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Io(_) => 3,
                _ => 1,
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))?;
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Gate(a) => runs::gate(a, cli.format, out),
        Command::Duplex(a) => runs::duplex(a, cli.format, out, cli.workers),
        Command::Telex(a) => runs::telex(a, cli.format, out, cli.workers),
        Command::Capacity(a) => runs::capacity(a, cli.format, out),
        Command::Sweep(a) => pool.install(|| runs::sweep(a, cli.format, out)),
        Command::Figures(a) => pool.install(|| figures::run(a)),
    }
}
