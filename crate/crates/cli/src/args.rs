//! Command-line surface. Any long flag may also be supplied through a
//! `--config` key=value file; explicit flags win.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "qld",
    version,
    about = "Workbench for list decoding block codes from corruption tables",
    after_help = "Each subcommand accepts --config FILE with key=value lines \
                  (bare lines toggle flags); explicit flags take precedence."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a message; optionally emit a planted or uniform table.
    Encode(EncodeArgs),
    /// Presence of a codeword (or encoded message) in a table.
    Presence(PresenceArgs),
    /// List-size bound evaluators.
    Bound(BoundArgs),
    /// Convert tables between a concatenation and its outer code.
    Reduce(ReduceArgs),
    /// Sampling list decoder for GRS codes over the full locator set.
    DecodeGrs(DecodeGrsArgs),
    /// Full concatenated-code decoding pipeline.
    DecodeConcat(DecodeConcatArgs),
    /// Constrained-interpolation oracle: build, decode, verify.
    Cip(CipArgs),
    /// Noisy-interpolation instance: generate and recover.
    Npip(NpipArgs),
    /// Weighted-lattice instance: build, solve, map back to messages.
    Bdvp(BdvpArgs),
    /// Run every library property check.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodeKindArg {
    Had,
    Grs,
    Concat,
}

/// Code selection shared by encode/presence/bound.
#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    /// Code family.
    #[arg(long, value_enum)]
    pub kind: CodeKindArg,
    /// Alphabet characteristic (prime).
    #[arg(long)]
    pub q: u64,
    /// Extension degree (GRS field F_{q^m}) or inner length (concat).
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Message length (had/grs; derived for concat).
    #[arg(long)]
    pub n: Option<usize>,
    /// Locator count for GRS (defaults to the full field).
    #[arg(long)]
    pub k: Option<usize>,
    /// Outer rate for concat, as NUM/DEN.
    #[arg(long)]
    pub theta: Option<String>,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Message symbols, space-separated integers.
    #[arg(long)]
    pub message: Option<String>,
    /// Emit only the symbol at this index.
    #[arg(long)]
    pub index: Option<u64>,
    /// Emit a table mixing the codeword with uniform noise at this weight.
    #[arg(long)]
    pub plant: Option<f64>,
    /// Emit the uniform table for this code.
    #[arg(long, default_value_t = false)]
    pub uniform: bool,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<String>,
    /// Also write the code descriptor here.
    #[arg(long)]
    pub code_out: Option<String>,
}

#[derive(Args, Debug)]
pub struct PresenceArgs {
    /// Table file.
    #[arg(long)]
    pub table: String,
    /// Codeword symbols, space-separated.
    #[arg(long)]
    pub codeword: Option<String>,
    /// Encode this message with the code flags instead.
    #[arg(long)]
    pub message: Option<String>,
    #[command(flatten)]
    pub code: CodeArgsOpt,
}

/// Optional variant of [`CodeArgs`] for commands where the code is only
/// needed on some paths.
#[derive(Args, Debug, Clone)]
pub struct CodeArgsOpt {
    #[arg(long, value_enum)]
    pub kind: Option<CodeKindArg>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub theta: Option<String>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(subcommand)]
    pub which: BoundCommand,
}

#[derive(Subcommand, Debug)]
pub enum BoundCommand {
    /// q-ary list-size cap for an (M, n, d)_q code at threshold eps.
    Johnson {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        block_len: u64,
        #[arg(long)]
        distance: u64,
        #[arg(long)]
        eps: f64,
    },
    /// Polynomial-list lower bound on the decodable presence.
    QlPoly {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        lambda: f64,
        /// List-cap coefficient; with --c and --n selects the finite form.
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        n: Option<u64>,
        /// Placement of lambda in the limiting radicand.
        #[arg(long, value_enum, default_value_t = PlacementArg::Factor)]
        placement: PlacementArg,
    },
    /// Exact count of messages at or above a presence threshold.
    Empirical {
        #[arg(long)]
        table: String,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        code: CodeArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    Divisor,
    Factor,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Peel the inner Hadamard layer (factored table in, outer table out).
    #[arg(long, default_value_t = false)]
    pub peel: bool,
    /// Lift an outer table into a factored table; needs --q and --m.
    #[arg(long, default_value_t = false)]
    pub lift: bool,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub output: String,
}

/// Oracle source shared by the decoders.
#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Read the table from a file.
    #[arg(long)]
    pub table: Option<String>,
    /// Plant this mixing weight on --message instead.
    #[arg(long)]
    pub plant: Option<f64>,
    /// Use the uniform table.
    #[arg(long, default_value_t = false)]
    pub uniform: bool,
    /// Message for --plant (also the default success target).
    #[arg(long)]
    pub message: Option<String>,
}

#[derive(Args, Debug)]
pub struct DecodeGrsArgs {
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Field characteristic.
    #[arg(long)]
    pub q: u64,
    /// Field extension degree.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Message length.
    #[arg(long)]
    pub n: usize,
    /// Bias above 1/q required for list membership.
    #[arg(long)]
    pub eps: f64,
    /// Per-symbol sampling bias.
    #[arg(long)]
    pub eps_inner: f64,
    /// Success-probability target in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per index (overrides the derived count).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Repeat with derived seeds and report the success frequency.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Worker threads for trials.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Message whose recovery counts as success (defaults to --message).
    #[arg(long)]
    pub expect: Option<String>,
    /// Decoded list output (single run only).
    #[arg(long)]
    pub list_out: Option<String>,
    /// Tabular report output.
    #[arg(long)]
    pub report_out: Option<String>,
}

#[derive(Args, Debug)]
pub struct DecodeConcatArgs {
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: usize,
    /// Outer rate as NUM/DEN.
    #[arg(long)]
    pub theta: String,
    #[arg(long)]
    pub eps: f64,
    /// Bias handed to the outer GRS decoder.
    #[arg(long)]
    pub eps_outer: f64,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the bias-condition validation.
    #[arg(long, default_value_t = false)]
    pub force: bool,
    /// Print the parameter conditions and exit without decoding.
    #[arg(long, default_value_t = false)]
    pub check_only: bool,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long)]
    pub list_out: Option<String>,
    #[arg(long)]
    pub report_out: Option<String>,
}

#[derive(Args, Debug)]
pub struct CipArgs {
    #[arg(long)]
    pub q: u64,
    /// Degree bound of the interpolation question.
    #[arg(long)]
    pub degree: usize,
    /// Required agreements beyond the distinguished point.
    #[arg(long)]
    pub agreement: usize,
    /// Point-set file, one "x y" pair per line.
    #[arg(long)]
    pub points: Option<String>,
    /// Generate a planted instance on this many abscissae instead.
    #[arg(long)]
    pub plant_locators: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per locator row (derived from --delta when omitted).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub table_out: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Auto,
    Decoder,
    Lattice,
}

#[derive(Args, Debug)]
pub struct NpipArgs {
    #[arg(long)]
    pub q: u64,
    /// Number of locators.
    #[arg(long)]
    pub n: usize,
    /// Candidate-set size per locator.
    #[arg(long)]
    pub m: usize,
    /// Degree bound of the hidden polynomial.
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    pub route: RouteArg,
    #[arg(long)]
    pub table_out: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct BdvpArgs {
    #[arg(long)]
    pub table: String,
    /// Field characteristic (defaults to the table alphabet).
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Message length.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: f64,
    /// Locator values, space-separated (defaults to 0..M-1).
    #[arg(long)]
    pub locators: Option<String>,
    /// Write the instance dump here.
    #[arg(long)]
    pub dump: Option<String>,
    /// Enumerate the lattice ball.
    #[arg(long, default_value_t = false)]
    pub solve: bool,
    /// Map solutions back to messages (implies --solve).
    #[arg(long, default_value_t = false)]
    pub map: bool,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0xC0DE)]
    pub seed: u64,
}
