use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

/// Zero-sum invariants of finite abelian groups.
#[derive(Debug, Parser)]
#[command(name = "zerosum", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Results store path [default: $ZEROSUM_STORE or ./zerosum-results.ndjson].
    #[arg(long, global = true, value_name = "PATH")]
    pub store: Option<PathBuf>,
    /// Worker threads for searches [default: all cores].
    #[arg(long, global = true, value_name = "K")]
    pub workers: Option<usize>,
    /// Stop a search after this many nodes.
    #[arg(long, global = true, value_name = "N")]
    pub budget_nodes: Option<u64>,
    /// Stop a search after this many seconds.
    #[arg(long, global = true, value_name = "SECS")]
    pub budget_seconds: Option<f64>,
    /// Recompute even when the store holds an exhaustive result.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute D, s or g of a group by exhaustive search.
    Compute(ComputeArgs),
    /// Look for a zero-sum subsequence of a given length in a sequence file.
    Check(CheckArgs),
    /// Decide Property D0 for C_n^r with respect to c.
    #[command(name = "verify-d0")]
    VerifyD0(VerifyD0Args),
    /// Decide Property D for a group from its extremal sequences.
    #[command(name = "verify-d")]
    VerifyD(GroupArgs),
    /// Largest cap in F_3^r.
    Cap(CapArgs),
    /// Best proven bounds on an invariant, with the derivation.
    Bound(BoundArgs),
    /// Evaluate a lifting threshold on m.
    Threshold(ThresholdArgs),
    /// Compare an open conjecture with the proven bounds.
    Conjecture(ConjectureArgs),
    /// Build a length-mn zero-sum from D0 witnesses of C_m^r and C_n^r.
    #[command(name = "compose-d0")]
    ComposeD0(ComposeArgs),
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Invariant factors n_1,...,n_k with n_i | n_{i+1}.
    #[arg(long, value_name = "N1,..,NK", value_delimiter = ',', required = true)]
    pub group: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// D, s or g.
    pub invariant: String,
    #[command(flatten)]
    pub group: GroupArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Sequence file in the text format.
    pub file: PathBuf,
    /// Length of the zero-sum subsequence [default: exp(G)].
    #[arg(long, short = 'L', value_name = "L")]
    pub length: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyD0Args {
    /// The group C_n^r as `n,r` (`n` alone means r = 1).
    #[arg(long, value_name = "N,R", value_parser = parse_homocyclic)]
    pub group: (u64, usize),
    /// Length of T in the sequences g·T^(n−1).
    #[arg(long, value_name = "C")]
    pub c: u64,
    /// Write the search state here every `--checkpoint-every` nodes.
    #[arg(long, value_name = "PATH")]
    pub checkpoint: Option<PathBuf>,
    /// Continue from a saved search state.
    #[arg(long, value_name = "PATH")]
    pub resume: Option<PathBuf>,
    /// Nodes between checkpoints.
    #[arg(long, value_name = "N", default_value_t = 10_000_000)]
    pub checkpoint_every: u64,
    /// Depth of the shard roots handed to workers.
    #[arg(long, value_name = "D", default_value_t = 3)]
    pub shard_depth: usize,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Dimension r of the space F_3^r.
    #[arg(long, value_name = "R")]
    pub rank: usize,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// D, s or g.
    #[arg(long, default_value = "s")]
    pub invariant: String,
    /// The group C_n^r as `n,r`; entries may be arbitrarily large.
    #[arg(long, value_name = "N,R", conflicts_with = "factors", value_parser = parse_big_homocyclic)]
    pub group: Option<(BigUint, usize)>,
    /// Invariant factors of any group; entries may be arbitrarily large.
    #[arg(long, value_name = "N1,..,NK", value_delimiter = ',')]
    pub factors: Option<Vec<BigUint>>,
    /// Rule ids to switch off.
    #[arg(long, value_name = "RULE,..", value_delimiter = ',')]
    pub disable: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// `n,r,c` for the general threshold.
    #[arg(long, value_name = "N,R,C", conflicts_with = "app", value_parser = parse_theorem1)]
    pub theorem1: Option<(BigUint, usize, BigUint)>,
    /// One of the four application families (1-4).
    #[arg(long, value_name = "K")]
    pub app: Option<u8>,
    /// Exponent n of C_n^r.
    #[arg(long, value_name = "N", requires = "app")]
    pub n: Option<BigUint>,
    /// Rank, needed for application 3.
    #[arg(long, value_name = "R", requires = "app")]
    pub r: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    /// s(C_n^r) = (g(C_3^r)-1)(n-1)+1 for odd n.
    #[arg(long, conflicts_with = "c43", required_unless_present = "c43")]
    pub c42: bool,
    /// The range of s(C_{2^a n}^r).
    #[arg(long)]
    pub c43: bool,
    /// Odd n: the exponent for --c42, its odd factor for --c43.
    #[arg(long, value_name = "N")]
    pub n: BigUint,
    /// Rank r.
    #[arg(long, value_name = "R")]
    pub r: usize,
    /// g(C_3^r) [default: the proven value, if exact].
    #[arg(long, value_name = "G")]
    pub g: Option<BigUint>,
    /// The 2-power exponent a.
    #[arg(long, value_name = "A", required_if_eq("c43", "true"))]
    pub a: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Exponent of the factor C_m^r with Property D0.
    #[arg(long, value_name = "M")]
    pub m: u64,
    /// Exponent of the factor C_n^r with Property D0.
    #[arg(long, value_name = "N")]
    pub n: u64,
    #[arg(long, value_name = "R", default_value_t = 2)]
    pub r: usize,
    /// Number of terms of T when drawn at random.
    #[arg(long, value_name = "C", default_value_t = 4)]
    pub c: u64,
    /// Seed for the random instance.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// T as a sequence file over C_{mn}^r instead of a random draw.
    #[arg(long, value_name = "PATH")]
    pub terms: Option<PathBuf>,
    /// Coordinates of g_0 [default: random].
    #[arg(long, value_name = "X1,..,XR", value_delimiter = ',')]
    pub g0: Option<Vec<u64>>,
}

fn split_pair(s: &str) -> Result<(&str, Option<&str>), String> {
    let mut parts = s.split(',').map(str::trim);
    let first = parts
        .next()
        .filter(|p| !p.is_empty())
        .ok_or("empty group")?;
    let second = parts.next();
    if parts.next().is_some() {
        return Err(format!("expected `n,r`, got `{s}`"));
    }
    Ok((first, second))
}

fn parse_rank(r: Option<&str>) -> Result<usize, String> {
    r.map_or(Ok(1), |r| {
        r.parse().map_err(|_| format!("invalid rank `{r}`"))
    })
}

fn parse_homocyclic(s: &str) -> Result<(u64, usize), String> {
    let (n, r) = split_pair(s)?;
    let n = n.parse().map_err(|_| format!("invalid exponent `{n}`"))?;
    Ok((n, parse_rank(r)?))
}

fn parse_big_homocyclic(s: &str) -> Result<(BigUint, usize), String> {
    let (n, r) = split_pair(s)?;
    let n = n.parse().map_err(|_| format!("invalid exponent `{n}`"))?;
    Ok((n, parse_rank(r)?))
}

fn parse_theorem1(s: &str) -> Result<(BigUint, usize, BigUint), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, r, c] = parts[..] else {
        return Err(format!("expected `n,r,c`, got `{s}`"));
    };
    Ok((
        n.parse().map_err(|_| format!("invalid n `{n}`"))?,
        r.parse().map_err(|_| format!("invalid r `{r}`"))?,
        c.parse().map_err(|_| format!("invalid c `{c}`"))?,
    ))
}
