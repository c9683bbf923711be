//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "opcap",
    version,
    about = "Capacity bounds and inequality checks for channels built from group and subalgebra data"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Emit JSON instead of a plain table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Display entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    /// Write the output to a file instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Seed for every random choice (decimal or 0x-prefixed hex).
    #[arg(long, global = true, value_parser = parse_seed)]
    pub seed: Option<u64>,

    /// JSON file with default values for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|_| format!("invalid seed '{s}'"))
}

/// Selects a channel family and a density on its symbol algebra.
#[derive(Args, Debug, Default, Clone)]
pub struct ChannelArgs {
    /// schur, group-random-unitary, pauli, clifford, crossed-local,
    /// crossed-charge or nonunital.
    #[arg(long)]
    pub family: Option<String>,

    /// Group name: Zn, Dn (order n), S3, Q8, semidirect:d:l or file:PATH.
    #[arg(long)]
    pub group: Option<String>,

    /// Qudit dimension for the Pauli family.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Number of generator pairs for the Clifford family.
    #[arg(long)]
    pub k: Option<usize>,

    /// Crossed-product case (local or charge) when the family is `crossed`.
    #[arg(long)]
    pub case: Option<String>,

    /// uniform, point, random, random:SEED or comma-separated weights.
    #[arg(long)]
    pub f: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form capacity bounds for one channel.
    Bounds(BoundsArgs),
    /// Property-check suites; exits 1 if any check fails.
    Check(CheckArgs),
    /// Parameter sweeps written as CSV.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Irreducible-representation dimensions of a group.
    Irreps(IrrepsArgs),
    /// A single optimization run with its per-restart values.
    Optimize(OptimizeArgs),
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,

    /// Also maximize the coherent, reverse coherent and mutual information.
    #[arg(long)]
    pub numerics: bool,

    #[arg(long)]
    pub restarts: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Kraus,
    Conditions,
    Comparison,
    LemmaMu,
    Cbentropy,
    ChoiNorm,
    Cqe,
    All,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    #[command(flatten)]
    pub channel: ChannelArgs,

    /// Random samples per check.
    #[arg(long)]
    pub trials: Option<usize>,

    /// Schatten exponents, repeated or comma-separated; `inf` allowed.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<String>,

    #[arg(long)]
    pub restarts: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum SweepCommand {
    /// Lower and upper curves against t = τ(f ln f).
    Figure1(Figure1Args),
    /// Depolarizing channel bounds on q ∈ [1/(d+1), 1].
    Figure2(Figure2Args),
    /// Qubit dephasing capacity on q ∈ [0, 1].
    Dephasing(StepsArg),
    /// Closed-form bounds along the segment from the uniform density to f.
    Family(FamilySweepArgs),
}

#[derive(Args, Debug)]
pub struct StepsArg {
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Figure1Args {
    /// Input dimension m.
    #[arg(long)]
    pub m: Option<usize>,

    /// ln d_M of the fixed-point algebra, at most ln m.
    #[arg(long = "ln-dm")]
    pub ln_dm: Option<f64>,

    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Figure2Args {
    #[arg(long)]
    pub d: Option<usize>,

    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FamilySweepArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,

    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct IrrepsArgs {
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    Coherent,
    Reverse,
    Mutual,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,

    #[arg(long, value_enum)]
    pub objective: Option<Objective>,

    #[arg(long)]
    pub restarts: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse_in_both_bases() {
        assert_eq!(parse_seed("7").unwrap(), 7);
        assert_eq!(parse_seed("0x0C0A_9CA9").unwrap(), 0x0C0A_9CA9);
        assert!(parse_seed("seven").is_err());
    }

    #[test]
    fn grammar_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn p_values_split_on_commas() {
        let cli = Cli::try_parse_from(["opcap", "check", "comparison", "--p", "2,inf", "--p", "3"]).unwrap();
        match cli.command {
            Command::Check(c) => assert_eq!(c.p, ["2", "inf", "3"]),
            _ => panic!("wrong subcommand"),
        }
    }
}
