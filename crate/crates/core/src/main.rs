use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use loopdetect::analysis::{
    default_path_lengths, figure1_table, latency_table, write_collision_csv, write_latency_csv,
    AnalysisError, DEFAULT_ID_BITS,
};
use loopdetect::simulator::distinct_ids;
use loopdetect::{
    build_rho, decode, encode, random_functional_graph, simulate, CycleStructure, FunctionalGraph,
    HopCount, IdSource, LoopHeader, NodeId, RetransmissionNonce, SimOutcome,
};

const EXIT_INCOMPLETE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "loopdetect",
    version,
    about = "Forwarding loop detection with a tortoise/hop-count header"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward one packet through a topology and print its trace as CSV.
    Simulate(SimulateArgs),
    /// Tabulate node-id collision probabilities as CSV.
    Collisions(CollisionArgs),
    /// Compare detection hop against a hop limit, as CSV.
    Latency(LatencyArgs),
    /// Encode or decode a wire header.
    Header {
        #[command(subcommand)]
        action: HeaderAction,
    },
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("topology").required(true).args(["lambda", "chain", "random"])))]
struct SimulateArgs {
    /// Tail length of a rho topology.
    #[arg(long, default_value_t = 0, conflicts_with_all = ["chain", "random"])]
    mu: usize,
    /// Cycle length of a rho topology.
    #[arg(long)]
    lambda: Option<usize>,
    /// Loop-free chain with this many nodes.
    #[arg(long)]
    chain: Option<usize>,
    /// Random functional graph with this many nodes.
    #[arg(long)]
    random: Option<usize>,
    /// Probability that a random graph node has no successor.
    #[arg(long, default_value_t = 0.0, requires = "random")]
    terminal_prob: f64,
    /// Start node index.
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Receive budget; defaults to 4 * (nodes + 1).
    #[arg(long)]
    max_hops: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CollisionArgs {
    /// Node id widths in bits.
    #[arg(long, value_delimiter = ',')]
    bits: Vec<u32>,
    /// Path lengths (number of routers).
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LatencyArgs {
    /// Tail lengths, paired with --lambda by position.
    #[arg(long, value_delimiter = ',', required = true)]
    mu: Vec<usize>,
    /// Cycle lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<usize>,
    #[arg(long, default_value_t = 255)]
    ttl: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum HeaderAction {
    /// Print the 14-byte header as 28 lowercase hex characters.
    Encode {
        #[arg(long, value_parser = parse_u64)]
        tortoise: u64,
        #[arg(long, value_parser = parse_u16)]
        hops: u16,
        #[arg(long, value_parser = parse_u32, default_value = "0")]
        nonce: u32,
    },
    /// Print the fields of a hex-encoded header.
    Decode { hex: String },
}

fn parse_with_radix(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(digits) => u64::from_str_radix(digits, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| e.to_string())
}

fn parse_u64(s: &str) -> Result<u64, String> {
    parse_with_radix(s)
}

fn parse_u16(s: &str) -> Result<u16, String> {
    u16::try_from(parse_with_radix(s)?).map_err(|e| e.to_string())
}

fn parse_u32(s: &str) -> Result<u32, String> {
    u32::try_from(parse_with_radix(s)?).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

fn output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_simulate(args: SimulateArgs) -> Result<u8, Failure> {
    let graph = if let Some(lambda) = args.lambda {
        if lambda == 0 {
            return Err(Failure::new(EXIT_USAGE, "--lambda must be at least 1"));
        }
        build_rho(args.mu, lambda, IdSource::Seeded(args.seed))
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?
    } else if let Some(n) = args.chain {
        if n == 0 {
            return Err(Failure::new(EXIT_USAGE, "--chain must be at least 1"));
        }
        FunctionalGraph::chain(distinct_ids(&mut ChaCha8Rng::seed_from_u64(args.seed), n))
    } else {
        let n = args.random.unwrap_or(0);
        if n == 0 {
            return Err(Failure::new(EXIT_USAGE, "--random must be at least 1"));
        }
        if !(0.0..=1.0).contains(&args.terminal_prob) {
            return Err(Failure::new(
                EXIT_USAGE,
                "--terminal-prob must be in [0, 1]",
            ));
        }
        random_functional_graph(n, args.terminal_prob, args.seed)
    };
    let max_hops = args.max_hops.unwrap_or_else(|| graph.default_max_hops());
    if max_hops == 0 {
        return Err(Failure::new(EXIT_USAGE, "--max-hops must be at least 1"));
    }
    let trace = simulate(&graph, args.start, max_hops)
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;

    let mut out = output(args.out.as_ref())?;
    writeln!(
        out,
        "# seed={} nodes={} start={} max_hops={}",
        args.seed,
        graph.len(),
        args.start,
        max_hops
    )?;
    trace.write_csv(&mut out)?;
    out.flush()?;
    Ok(match trace.outcome {
        SimOutcome::Detected { .. } | SimOutcome::Terminated { .. } => 0,
        SimOutcome::BudgetExhausted | SimOutcome::HopOverflow => EXIT_INCOMPLETE,
    })
}

fn run_collisions(args: CollisionArgs) -> Result<u8, Failure> {
    let bits = if args.bits.is_empty() {
        DEFAULT_ID_BITS.to_vec()
    } else {
        args.bits
    };
    let lengths = if args.lengths.is_empty() {
        default_path_lengths()
    } else {
        args.lengths
    };
    let rows =
        figure1_table(&bits, &lengths).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let mut out = output(args.out.as_ref())?;
    write_collision_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(0)
}

fn run_latency(args: LatencyArgs) -> Result<u8, Failure> {
    if args.mu.len() != args.lambda.len() {
        return Err(Failure::new(
            EXIT_USAGE,
            "--mu and --lambda need the same number of values",
        ));
    }
    let cases = args
        .mu
        .iter()
        .zip(&args.lambda)
        .map(|(&mu, &lambda)| CycleStructure::new(mu, lambda))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let rows = latency_table(&cases, args.ttl).map_err(|e| match e {
        AnalysisError::PredictorMismatch {
            observed: SimOutcome::BudgetExhausted | SimOutcome::HopOverflow,
            ..
        } => Failure::new(EXIT_INCOMPLETE, e.to_string()),
        AnalysisError::PredictorMismatch { .. } => Failure::new(EXIT_INVARIANT, e.to_string()),
        _ => Failure::new(EXIT_USAGE, e.to_string()),
    })?;
    let mut out = output(args.out.as_ref())?;
    write_latency_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(0)
}

fn run_header(action: HeaderAction) -> Result<u8, Failure> {
    let mut out = io::stdout().lock();
    match action {
        HeaderAction::Encode {
            tortoise,
            hops,
            nonce,
        } => {
            let header = LoopHeader {
                tortoise: NodeId(tortoise),
                hops: HopCount(hops),
            };
            writeln!(
                out,
                "{}",
                hex::encode(encode(&header, RetransmissionNonce(nonce)))
            )?;
        }
        HeaderAction::Decode { hex: text } => {
            let bytes =
                hex::decode(text.trim()).map_err(|e| Failure::new(EXIT_DATA, e.to_string()))?;
            let (header, nonce) =
                decode(&bytes).map_err(|e| Failure::new(EXIT_DATA, e.to_string()))?;
            writeln!(out, "tortoise=0x{:016x}", header.tortoise.get())?;
            writeln!(out, "hops=0x{:04x}", header.hops.get())?;
            writeln!(out, "nonce=0x{:08x}", nonce.0)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => run_simulate(args),
        Command::Collisions(args) => run_collisions(args),
        Command::Latency(args) => run_latency(args),
        Command::Header { action } => run_header(action),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("loopdetect: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
