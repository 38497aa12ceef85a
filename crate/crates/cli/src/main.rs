//! `qbaker`: build, export, iterate and verify quantum baker's maps.

mod export;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use export::{f17, Format};
use qubit_baker::analysis::{check_strict_localization, eigenphases, max_contiguous_cut_entropy, position_support, SUPPORT_TOL};
use qubit_baker::baker::{baker_by_columns, baker_composed, emit_circuit, iterate, BakerStepper};
use qubit_baker::classical::label_shift;
use qubit_baker::qfourier::{antiperiodic_dft, displacement_u, displacement_v, dot_state_transform, partial_transform};
use qubit_baker::verify::{self, VerifyConfig, DEFAULT_SEED};
use qubit_baker::{Dimensions, DotLabel, StateVector, UnitaryMatrix};

/// Largest qubit count for commands that build dense `D×D` matrices.
const DENSE_CAP: usize = 12;
/// Largest qubit count for commands that only touch state vectors.
const FAST_CAP: usize = 20;
/// Dense maps above this size are assembled column by column from the fast
/// path instead of through matrix products.
const COMPOSED_CAP: usize = 9;

#[derive(Parser)]
#[command(name = "qbaker", version, about = "Quantum baker's maps on a string of qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export a dense operator.
    Matrix(MatrixArgs),
    /// Export the dot state of a label.
    State(StateArgs),
    /// Iterate a baker's map and report per-step diagnostics as CSV.
    Evolve(EvolveArgs),
    /// Eigenphases and normalized spacings of an operator as CSV.
    Spectrum(MatrixArgs),
    /// Localization report of a dot state as JSON.
    Localize(LabelArgs),
    /// Gate list for B_n as JSON.
    Circuit(CircuitArgs),
    /// Run the self-verification suite; exits 1 on any failed check.
    Verify(VerifyArgs),
    /// Time the fast apply path against a dense matrix-vector product.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Partial Fourier transform G_n.
    #[value(name = "G")]
    G,
    /// Baker's map B_n.
    #[value(name = "B")]
    B,
    /// Position displacement U.
    #[value(name = "U")]
    U,
    /// Momentum displacement V.
    #[value(name = "V")]
    V,
    /// Full antiperiodic DFT.
    #[value(name = "F")]
    F,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, value_enum)]
    target: Target,
    /// Qubit count.
    #[arg(long = "N")]
    qubits: usize,
    /// Dot position (required for G and B).
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LabelArgs {
    /// Dot label such as "01.1" (momentum bits, dot, position bits).
    #[arg(long)]
    label: String,
    /// Optional consistency check on the label's qubit count.
    #[arg(long = "N")]
    qubits: Option<usize>,
    /// Optional consistency check on the label's dot position.
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    label: LabelArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapChoice {
    #[value(name = "B1")]
    First,
    #[value(name = "BN")]
    Last,
}

#[derive(Args)]
struct EvolveArgs {
    /// Qubit count; taken from the label or state file when omitted, else 3.
    #[arg(long = "N")]
    qubits: Option<usize>,
    /// Map index n of B_n.
    #[arg(long = "n", conflicts_with = "map")]
    n: Option<usize>,
    /// Shorthand for n = 1 or n = N.
    #[arg(long, value_enum)]
    map: Option<MapChoice>,
    /// Start from the dot state of this label.
    #[arg(long, group = "input")]
    label: Option<String>,
    /// Start from amplitudes in a file written by `qbaker state`.
    #[arg(long, group = "input")]
    state_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    state_format: Format,
    /// Start from a seeded random product state (the default input).
    #[arg(long, group = "input")]
    random_product: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    /// A step's label is reported when Re⟨predicted|ψ⟩ ≥ 1 − tol.
    #[arg(long, default_value_t = 1e-10)]
    match_tol: f64,
    /// Accepted |‖ψ‖ − 1| for an input state file.
    #[arg(long, default_value_t = 1e-8)]
    norm_tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CircuitArgs {
    #[arg(long = "N")]
    qubits: usize,
    #[arg(long = "n")]
    n: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest qubit count any check may use.
    #[arg(long = "max-N", default_value_t = 20)]
    max_qubits: usize,
    /// Add this amount to one partial-transform entry (fault injection).
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Qubit counts to time, comma separated.
    #[arg(long = "N", value_delimiter = ',', default_values_t = [4, 8, 12])]
    qubits: Vec<usize>,
    #[arg(long = "n", default_value_t = 1)]
    n: usize,
    /// Timing repetitions; the best time is reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Outcome {
    Success,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Matrix(a) => {
            let m = build_matrix(&a)?;
            let mut out = sink(a.output.as_deref())?;
            export::write_matrix(&m, a.format, &mut out)?;
            out.flush()?;
        }
        Command::State(a) => {
            let label = parse_label(&a.label)?;
            let mut out = sink(a.label.output.as_deref())?;
            export::write_state(dot_state_transform(&label).amps(), a.format, &mut out)?;
            out.flush()?;
        }
        Command::Evolve(a) => evolve(&a)?,
        Command::Spectrum(a) => {
            let report = eigenphases(&build_matrix(&a)?)?;
            let mut out = sink(a.output.as_deref())?;
            export::write_spectrum(&report, &mut out)?;
            out.flush()?;
        }
        Command::Localize(a) => {
            let report = check_strict_localization(&parse_label(&a)?);
            let mut out = sink(a.output.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            out.flush()?;
        }
        Command::Circuit(a) => {
            ensure!(a.qubits <= FAST_CAP, "N = {} exceeds the cap of {FAST_CAP}", a.qubits);
            let gl = emit_circuit(Dimensions::new(a.qubits)?, a.n)?;
            let mut out = sink(a.output.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &export::circuit_json(&gl))?;
            writeln!(out)?;
            out.flush()?;
        }
        Command::Verify(a) => return verify_cmd(&a),
        Command::Bench(a) => bench(&a)?,
    }
    Ok(Outcome::Success)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_label(a: &LabelArgs) -> Result<DotLabel> {
    let label: DotLabel = a.label.parse().with_context(|| format!("label {:?}", a.label))?;
    if let Some(q) = a.qubits {
        ensure!(label.qubits() == q, "label {:?} has {} qubits, not {q}", a.label, label.qubits());
    }
    if let Some(n) = a.n {
        ensure!(label.n() == n, "label {:?} has dot position {}, not {n}", a.label, label.n());
    }
    Ok(label)
}

fn build_matrix(a: &MatrixArgs) -> Result<UnitaryMatrix> {
    ensure!(a.qubits <= DENSE_CAP, "N = {} exceeds the dense cap of {DENSE_CAP}", a.qubits);
    let dims = Dimensions::new(a.qubits)?;
    let n = || a.n.context("--n is required for this target");
    Ok(match a.target {
        Target::G => partial_transform(dims, n()?)?,
        Target::B if a.qubits > COMPOSED_CAP => baker_by_columns(dims, n()?)?,
        Target::B => baker_composed(dims, n()?)?,
        Target::U => displacement_u(dims),
        Target::V => displacement_v(dims),
        Target::F => antiperiodic_dft(dims.dim())?,
    })
}

fn evolve(a: &EvolveArgs) -> Result<()> {
    let label = a
        .label
        .as_deref()
        .map(|s| s.parse::<DotLabel>().with_context(|| format!("label {s:?}")))
        .transpose()?;
    let state = if let Some(label) = &label {
        dot_state_transform(label)
    } else if let Some(path) = &a.state_file {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let amps = export::read_state(BufReader::new(file), a.state_format)?;
        StateVector::with_tolerance(amps, a.norm_tol).with_context(|| format!("state file {}", path.display()))?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        StateVector::random_product(Dimensions::new(a.qubits.unwrap_or(3))?, &mut rng)
    };
    let qubits = state.qubits();
    if let Some(q) = a.qubits {
        ensure!(q == qubits, "input has {qubits} qubits but --N is {q}");
    }
    ensure!(qubits <= FAST_CAP, "N = {qubits} exceeds the cap of {FAST_CAP}");
    let n = match (a.n, a.map) {
        (Some(n), _) => n,
        (None, Some(MapChoice::First)) => 1,
        (None, Some(MapChoice::Last)) => qubits,
        (None, None) => label.as_ref().map_or(1, |l| l.n().max(1)),
    };
    ensure!((1..=qubits).contains(&n), "map index n = {n} must lie in 1..={qubits}");

    let mut out = sink(a.output.as_deref())?;
    writeln!(out, "step,norm,support,max_entropy,label")?;
    let mut tracked = label;
    let mut observe = |step: usize, s: &StateVector| -> Result<()> {
        if step > 0 {
            tracked = match tracked.take() {
                Some(l) if l.n() == n => {
                    let next = label_shift(&l)?;
                    let overlap = dot_state_transform(&next).inner(s)?;
                    (overlap.re >= 1.0 - a.match_tol).then_some(next)
                }
                _ => None,
            };
        }
        let support = position_support(s, SUPPORT_TOL).len();
        let entropy = max_contiguous_cut_entropy(s)?;
        let shown = tracked.as_ref().map(ToString::to_string).unwrap_or_default();
        writeln!(out, "{step},{},{support},{},{shown}", f17(s.norm()), f17(entropy))?;
        Ok(())
    };
    let mut failure = None;
    iterate(&state, n, a.steps, |step, s| {
        if failure.is_none() {
            failure = observe(step, s).err();
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    out.flush()?;
    Ok(())
}

fn verify_cmd(a: &VerifyArgs) -> Result<Outcome> {
    let cfg = VerifyConfig {
        max_qubits: a.max_qubits,
        seed: a.seed,
        perturb: a.perturb,
    };
    let report = verify::run(&cfg);
    for c in &report.checks {
        let status = match (c.skipped, c.passed) {
            (true, _) => "SKIP",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        eprintln!("[{status}] {:>2} {} (value {:.3e}, threshold {:.1e})", c.criterion, c.name, c.value, c.threshold);
    }
    let mut out = sink(a.output.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(if report.passed {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}

fn best_seconds(reps: usize, mut f: impl FnMut()) -> f64 {
    (0..reps.max(1))
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn bench(a: &BenchArgs) -> Result<()> {
    let mut out = sink(a.output.as_deref())?;
    writeln!(out, "N,dense_time,fast_time,speedup,correctness")?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for &q in &a.qubits {
        if q > FAST_CAP {
            bail!("N = {q} exceeds the cap of {FAST_CAP}");
        }
        let dims = Dimensions::new(q)?;
        let state = StateVector::random(dims, &mut rng);
        let mut stepper = BakerStepper::new(dims, a.n)?;
        let mut fast = state.amps().to_vec();
        let fast_time = best_seconds(a.reps, || {
            fast.copy_from_slice(state.amps());
            stepper.step(&mut fast);
        });
        if q <= DENSE_CAP {
            let dense = baker_by_columns(dims, a.n)?;
            let mut reference = Vec::new();
            let dense_time = best_seconds(a.reps, || reference = dense.matvec(state.amps()));
            let diff = reference
                .iter()
                .zip(&fast)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            let speedup = dense_time / fast_time.max(f64::MIN_POSITIVE);
            writeln!(out, "{q},{},{},{},{}", f17(dense_time), f17(fast_time), f17(speedup), f17(diff))?;
        } else {
            writeln!(out, "{q},,{},,", f17(fast_time))?;
        }
        out.flush()?;
    }
    Ok(())
}
