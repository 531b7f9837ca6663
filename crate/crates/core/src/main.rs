//! `mrfft`: plan inspection, transforms, verification and accelerator
//! simulation from the command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 invalid input or precondition,
//! 4 verification failure, 5 I/O failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mrfft::accel::{self, AccelConfig};
use mrfft::exec::{self, relative_linf_error};
use mrfft::plan::{FactorPolicy, FftPlan, PlanKind};
use mrfft::verify::{self, Fault, VerifyOptions};
use mrfft::{vecfile, Error};

const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_IO: u8 = 5;

/// Environment variable overriding the default end-to-end tolerance.
const TOL_ENV: &str = "MRFFT_TOLERANCE";

#[derive(Parser)]
#[command(name = "mrfft", version, about = "Regular mixed-radix FFT factorization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the plan document for a transform length.
    Plan(PlanArgs),
    /// Transform a complex vector file.
    Fft(FftArgs),
    /// Run the identity and oracle suites.
    Verify(VerifyArgs),
    /// Simulate the banked accelerator on a pure-radix plan.
    Sim(SimArgs),
}

#[derive(Args)]
struct Factoring {
    /// Plan kind: dit, dif or difw.
    #[arg(long, default_value = "dit")]
    kind: PlanKind,
    /// Explicit radices, most significant first (e.g. 4,2).
    #[arg(long, value_delimiter = ',')]
    radices: Option<Vec<usize>>,
}

impl Factoring {
    fn plan(&self, n: usize) -> mrfft::Result<FftPlan> {
        let policy = match &self.radices {
            Some(r) => FactorPolicy::User(r.clone()),
            None => FactorPolicy::GreedyAscPrimes,
        };
        FftPlan::for_length(n, self.kind, &policy)
    }
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    factoring: Factoring,
}

#[derive(Args)]
struct FftArgs {
    /// Input vector file, `-` for stdin.
    #[arg(long, short, default_value = "-")]
    input: PathBuf,
    /// Output vector file, `-` for stdout.
    #[arg(long, short, default_value = "-")]
    output: PathBuf,
    #[command(flatten)]
    factoring: Factoring,
    /// Compare against the direct DFT and report the relative error on stderr.
    #[arg(long)]
    verify: bool,
    /// Relative L∞ tolerance for --verify.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 64)]
    max_n: usize,
    #[arg(long, value_delimiter = ',', default_value = "dit,dif,difw")]
    kinds: Vec<PlanKind>,
    #[arg(long, default_value_t = 0x5EED)]
    seed: u64,
    /// Relative L∞ tolerance for end-to-end transforms.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Corrupt one twiddle of KIND:STAGE to exercise the harness.
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    n: usize,
    /// Butterfly radix and bank count.
    #[arg(long)]
    r: usize,
    #[arg(long, default_value = "dit")]
    kind: PlanKind,
    /// Bank mapping: digit-sum or mod.
    #[arg(long, default_value = "digit-sum")]
    mapping: String,
    /// Processing-unit pipeline depth in clocks.
    #[arg(long, default_value_t = 0)]
    cp: usize,
    /// Issue reads and writes in separate clocks.
    #[arg(long)]
    no_overlap: bool,
    /// Write the JSON-lines trace here (`-` for stdout, after the summary).
    #[arg(long)]
    trace: Option<PathBuf>,
}

enum Failure {
    Precondition(String),
    Verification(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

fn io_err(what: &str, e: io::Error) -> Failure {
    Failure::Io(format!("{what}: {e}"))
}

fn default_tolerance() -> Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::Precondition(format!("{TOL_ENV}=`{v}` is not a number"))),
        Err(_) => Ok(verify::TRANSFORM_TOL),
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| io_err("reading stdin", e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| io_err(&path.display().to_string(), e))
    }
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    match io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(io_err("writing stdout", e)),
        _ => Ok(()),
    }
}

fn write_output(path: &PathBuf, text: &str) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        emit(text)
    } else {
        fs::write(path, text).map_err(|e| io_err(&path.display().to_string(), e))
    }
}

fn cmd_plan(args: PlanArgs) -> Result<(), Failure> {
    let plan = args.factoring.plan(args.n)?;
    emit(&format!("{}\n", plan.to_json()))
}

fn cmd_fft(args: FftArgs) -> Result<(), Failure> {
    let text = read_input(&args.input)?;
    let mut data = vecfile::parse(&text)?;
    let plan = args.factoring.plan(data.len())?;
    let original = args.verify.then(|| data.clone());
    exec::execute(&plan, &mut data)?;
    write_output(&args.output, &vecfile::format(&data))?;
    if let Some(x) = original {
        let tol = match args.tol {
            Some(t) => t,
            None => default_tolerance()?,
        };
        let want = exec::dft_oracle(&x)?;
        let err = relative_linf_error(&data, &want);
        eprintln!("max relative error: {err:.3e} (tolerance {tol:.0e})");
        if err.is_nan() || err > tol {
            return Err(Failure::Verification(format!(
                "relative error {err:.3e} exceeds {tol:.0e}"
            )));
        }
    }
    Ok(())
}

fn parse_fault(arg: &str) -> Result<Fault, Failure> {
    let (kind, stage) = arg
        .split_once(':')
        .ok_or_else(|| Failure::Precondition(format!("fault `{arg}` is not KIND:STAGE")))?;
    Ok(Fault {
        kind: kind.parse()?,
        stage: stage
            .parse()
            .map_err(|_| Failure::Precondition(format!("bad fault stage `{stage}`")))?,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let opts = VerifyOptions {
        max_n: args.max_n,
        kinds: args.kinds,
        seed: args.seed,
        transform_tol: match args.tol {
            Some(t) => t,
            None => default_tolerance()?,
        },
        trials: args.trials,
        fault: args.inject_fault.as_deref().map(parse_fault).transpose()?,
        ..VerifyOptions::default()
    };
    let report = verify::run(&opts);
    emit(&report.to_text())?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification("one or more checks failed".into()))
    }
}

fn cmd_sim(args: SimArgs) -> Result<(), Failure> {
    let cfg = AccelConfig::new(args.r, args.cp)?.with_overlap(!args.no_overlap);
    let mapping = accel::mapping_by_name(&args.mapping, args.r)?;
    let mut radices = Vec::new();
    let mut rest = args.n;
    while rest > 1 && rest.is_multiple_of(args.r) {
        radices.push(args.r);
        rest /= args.r;
    }
    if rest != 1 || radices.is_empty() {
        return Err(Failure::Precondition(format!(
            "N = {} is not a positive power of R = {}",
            args.n, args.r
        )));
    }
    let plan = FftPlan::for_length(args.n, args.kind, &FactorPolicy::User(radices))?;
    let (trace, report) = accel::simulate(&plan, &cfg, mapping.as_ref())?;
    trace.validate(args.n, args.r)?;
    emit(&report.to_text())?;
    if let Some(path) = &args.trace {
        write_output(path, &trace.to_jsonl())?;
    }
    Ok(())
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
        Command::Plan(a) => cmd_plan(a),
        Command::Fft(a) => cmd_fft(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sim(a) => cmd_sim(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Precondition(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_PRECONDITION)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Io(m)) => {
            eprintln!("i/o error: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}
