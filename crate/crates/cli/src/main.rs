//! `rcsynth`: synthesis, verification, simulation, bounds and instance generation
//! for reversible NOT/CNOT/2-CNOT circuits.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid input or format,
//! 3 violated constraint (parity, parameters, capacity).

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rcsynth::bounds::{self, BoundReport};
use rcsynth::circuit::{count_gates, realized_mapping, simulate, DEFAULT_CAP};
use rcsynth::format::{parse_circuit, serialize_circuit, SpecFile};
use rcsynth::synth_basic::{synth_even_permutation, AncillaBudget, BasicOptions};
use rcsynth::synth_lupanov::{choose_params, synth_mapping, LupanovParams};
use rcsynth::{instances, BooleanMapping, Circuit, Error, GrowthFn};

#[derive(Parser, Debug)]
#[command(
    name = "rcsynth",
    version,
    about = "Reversible circuit synthesis toolkit"
)]
struct Cli {
    /// Largest number of inputs enumerated by exhaustive checks.
    #[arg(long, global = true, env = "RCSYNTH_CAP")]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print lower and upper bound formulas for each (n, q).
    Bounds(BoundsArgs),
    /// Synthesize a circuit from a permutation or mapping file.
    Synth(SynthArgs),
    /// Check a circuit against a permutation or mapping file on every input.
    Verify(VerifyArgs),
    /// Run a circuit on one input.
    Simulate(SimulateArgs),
    /// Write a seeded random permutation or mapping file.
    Rand(RandArgs),
    /// Gate counts of a circuit next to the bounds for its size.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Comma-separated input counts.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Comma-separated ancilla counts.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    q: Vec<usize>,
    #[arg(long, default_value = "log2")]
    phi: GrowthFn,
    #[arg(long)]
    csv: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Even permutations without ancillas.
    Basic,
    /// Arbitrary mappings with ancillas.
    Lupanov,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Ancilla {
    None,
    Linear,
}

#[derive(Args, Debug)]
struct SynthArgs {
    mode: Mode,
    /// Permutation file (basic) or permutation/mapping file (lupanov).
    input: PathBuf,
    /// Circuit file to write; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Block size (basic) or number of leading variables (lupanov).
    #[arg(long)]
    k: Option<usize>,
    /// Group size (lupanov), must equal n - 2k.
    #[arg(long)]
    s: Option<usize>,
    /// Ancilla budget for basic mode.
    #[arg(long, value_enum, default_value = "none")]
    ancilla: Ancilla,
    #[arg(long, default_value = "log2")]
    phi: GrowthFn,
    #[arg(long, default_value = "const:2")]
    psi: GrowthFn,
    /// Skip the exhaustive check of the result.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    circuit: PathBuf,
    spec: PathBuf,
    #[arg(long)]
    allow_generalized: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    circuit: PathBuf,
    /// Input word, decimal or `0b`-prefixed binary.
    input: String,
    #[arg(long)]
    allow_generalized: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    EvenPerm,
    Perm,
    Map,
}

#[derive(Args, Debug)]
struct RandArgs {
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    circuit: PathBuf,
    #[arg(long)]
    allow_generalized: bool,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn constraint(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structural(_) | Error::Parse { .. } | Error::Domain(_) => {
                Failure::input(e.to_string())
            }
            Error::Capacity(_) | Error::Parity(_) | Error::Parameter(_) => {
                Failure::constraint(e.to_string())
            }
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Synth(a) => cmd_synth(a, cap),
        Command::Verify(a) => cmd_verify(a, cap),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Rand(a) => cmd_rand(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path, allow_generalized: bool) -> Result<Circuit, Failure> {
    parse_circuit(&read(path)?, allow_generalized)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_spec(path: &Path) -> Result<SpecFile, Failure> {
    SpecFile::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn cmd_bounds(a: BoundsArgs) -> Outcome {
    let mut out = io::stdout().lock();
    if a.csv {
        writeln!(out, "{}", BoundReport::CSV_HEADER)?;
    }
    for (i, &n) in a.n.iter().enumerate() {
        for (j, &q) in a.q.iter().enumerate() {
            let report = BoundReport::new(n, q, a.phi)?;
            if a.csv {
                writeln!(out, "{}", report.csv_row())?;
            } else {
                if i + j > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "{report}")?;
            }
        }
    }
    Ok(0)
}

/// First input on which `circuit` differs from `f`, with both outputs.
fn first_mismatch(
    circuit: &Circuit,
    f: &BooleanMapping,
    cap: usize,
) -> Result<Option<(usize, usize, usize)>, Failure> {
    let got = realized_mapping(circuit, cap)?;
    Ok((0..f.images().len())
        .find(|&x| got.apply(x) != f.apply(x))
        .map(|x| (x, f.apply(x), got.apply(x))))
}

fn report_mismatch(
    out: &mut impl Write,
    n: usize,
    (x, want, got): (usize, usize, usize),
) -> io::Result<()> {
    writeln!(
        out,
        "mismatch at input {}: expected {}, got {}",
        binary(x, n),
        binary(want, n),
        binary(got, n)
    )
}

fn binary(x: usize, width: usize) -> String {
    format!("0b{:0width$b}", x, width = width.max(1))
}

fn cmd_synth(a: SynthArgs, cap: usize) -> Outcome {
    let spec = read_spec(&a.input)?;
    let n = spec.bits();
    let mut report = String::new();
    let circuit = match a.mode {
        Mode::Basic => {
            let SpecFile::Permutation(p) = &spec else {
                return Err(Failure::input("basic mode needs a permutation file"));
            };
            if a.s.is_some() {
                return Err(Failure::constraint("--s applies to lupanov mode only"));
            }
            let opts = BasicOptions {
                k: a.k,
                phi: a.phi,
                ancillas: match a.ancilla {
                    Ancilla::None => AncillaBudget::None,
                    Ancilla::Linear => AncillaBudget::Linear,
                },
            };
            let syn = synth_even_permutation(p, &opts)?;
            let worst = syn
                .blocks
                .iter()
                .map(|b| b.gates as f64 / b.budget)
                .fold(0.0, f64::max);
            report.push_str(&format!("{}\n", syn.report));
            report.push_str(&format!(
                "block_size {}\nblocks {}\n",
                syn.k,
                syn.blocks.len()
            ));
            report.push_str(&format!("worst_block_ratio {}\n", bounds::fmt_real(worst)));
            syn.circuit
        }
        Mode::Lupanov => {
            if a.ancilla != Ancilla::None {
                return Err(Failure::constraint("--ancilla applies to basic mode only"));
            }
            let params = lupanov_params(n, a.k, a.s, a.phi, a.psi)?;
            let syn = synth_mapping(&spec.mapping(), &params)?;
            report.push_str(&format!("{}\n", syn.report));
            syn.circuit
        }
    };
    if !a.no_verify {
        if let Some(m) = first_mismatch(&circuit, &spec.mapping(), cap)? {
            report_mismatch(&mut io::stderr(), n, m)?;
            return Ok(1);
        }
        report.push_str("verified\n");
    }
    let text = serialize_circuit(&circuit, false)?;
    match &a.output {
        Some(path) => {
            fs::write(path, text)?;
            print!("{report}");
        }
        None => {
            print!("{text}");
            eprint!("{report}");
        }
    }
    Ok(0)
}

fn lupanov_params(
    n: usize,
    k: Option<usize>,
    s: Option<usize>,
    phi: GrowthFn,
    psi: GrowthFn,
) -> Result<LupanovParams, Failure> {
    let mut params = match (k, s) {
        (Some(k), Some(s)) => LupanovParams::new(n, k, s)?,
        (Some(k), None) => LupanovParams::with_k(n, k)?,
        (None, Some(s)) => {
            if s >= n || !(n - s).is_multiple_of(2) {
                return Err(Failure::constraint(format!(
                    "no k satisfies s = n - 2k for n = {n}, s = {s}"
                )));
            }
            LupanovParams::new(n, (n - s) / 2, s)?
        }
        (None, None) if n >= 4 => return Ok(choose_params(n, phi, psi)?),
        (None, None) => LupanovParams::with_k(n, 1)?,
    };
    params.psi_waived = !params.meets_psi(psi);
    Ok(params)
}

fn cmd_verify(a: VerifyArgs, cap: usize) -> Outcome {
    let circuit = read_circuit(&a.circuit, a.allow_generalized)?;
    let spec = read_spec(&a.spec)?;
    let n = spec.bits();
    if n != circuit.inputs() {
        return Err(Failure::input(format!(
            "circuit has {} inputs but the specification has n = {n}",
            circuit.inputs()
        )));
    }
    match first_mismatch(&circuit, &spec.mapping(), cap)? {
        Some(m) => {
            report_mismatch(&mut io::stdout(), n, m)?;
            Ok(1)
        }
        None => {
            println!("ok: all {} inputs match", 1usize << n);
            Ok(0)
        }
    }
}

fn parse_word(s: &str) -> Result<u64, Failure> {
    let t = s.trim().replace('_', "");
    let parsed = match t.strip_prefix("0b").or_else(|| t.strip_prefix("0B")) {
        Some(bits) => u64::from_str_radix(bits, 2),
        None => t.parse::<u64>(),
    };
    parsed.map_err(|_| Failure::input(format!("`{s}` is not a decimal or 0b-binary word")))
}

fn cmd_simulate(a: SimulateArgs) -> Outcome {
    let circuit = read_circuit(&a.circuit, a.allow_generalized)?;
    let x = parse_word(&a.input)?;
    let n = circuit.inputs();
    if n < 64 && x >> n != 0 {
        return Err(Failure::input(format!(
            "input {} does not fit {n} input lines",
            a.input
        )));
    }
    let (y, state) = simulate(&circuit, x)?;
    println!("output {}", binary(y as usize, n));
    println!("state 0b{state}");
    Ok(0)
}

fn cmd_rand(a: RandArgs) -> Outcome {
    if a.n > rcsynth::format::MAX_TABLE_BITS {
        return Err(Failure::input(format!(
            "n = {} exceeds the supported {}",
            a.n,
            rcsynth::format::MAX_TABLE_BITS
        )));
    }
    let mut rng = instances::rng(a.seed);
    let (kind, spec) = match a.kind {
        Kind::EvenPerm => (
            "even-perm",
            SpecFile::Permutation(instances::random_even_permutation(a.n, &mut rng)),
        ),
        Kind::Perm => (
            "perm",
            SpecFile::Permutation(instances::random_permutation(a.n, &mut rng)),
        ),
        Kind::Map => (
            "map",
            SpecFile::Mapping(instances::random_mapping(a.n, &mut rng)),
        ),
    };
    let text = format!(
        "# rcsynth rand {kind} n={} seed={}\n{}",
        a.n,
        a.seed,
        spec.serialize()
    );
    match &a.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_stats(a: StatsArgs) -> Outcome {
    let circuit = read_circuit(&a.circuit, a.allow_generalized)?;
    let counts = count_gates(&circuit);
    let n = circuit.inputs();
    println!("lines {}", circuit.lines());
    println!("inputs {n}");
    println!("{counts}");
    if n >= 2 {
        println!(
            "shannon_lower {}",
            bounds::fmt_real(bounds::shannon_lower(n, circuit.ancillas())?)
        );
    }
    if let Ok(v) = bounds::simple_lower(n) {
        println!("simple_lower {}", bounds::fmt_real(v));
    }
    if let Ok(v) = bounds::basic_total_upper(n, 4) {
        println!("basic_total_upper k=4 {}", bounds::fmt_real(v));
    }
    Ok(0)
}
