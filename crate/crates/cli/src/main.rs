//! `permest`: exact permanents, estimates with additive guarantees, sample
//! spaces and linear-optics queries from the command line.
//!
//! Exit codes: 0 ok, 1 failed audit or internal error, 2 parse or usage
//! error, 3 size or capacity limit, 4 domain error.

mod report;

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permest::estimate::{
    estimate_derandomized, estimate_derandomized_multi, estimate_exhaustive, estimate_exhaustive_multi,
    estimate_random, estimate_random_multi, log_gengly_prefactor, permanent_upper_bound,
};
use permest::exact::{permanent_glynn_exact, permanent_naive, permanent_ryser};
use permest::optics::{
    amplitude_estimate, amplitude_exact, bunching_bound, saturating_outcome, saturating_unitary, AmplitudeMode,
    AmplitudeResult, OccupationPattern,
};
use permest::smallbias::{
    build_binary_space, build_complex_space, exhaustive_binary_space, exhaustive_complex_space, measure_bias,
    measure_complex_bias, parse_descriptor,
};
use permest::{ComplexMatrix, Estimate, MultiplicitySpec, SampleSpace};
use report::{Format, Report};

#[derive(Parser)]
#[command(name = "permest", version, about = "Exact and estimated matrix permanents")]
struct Cli {
    /// Output as key=value lines or a single JSON object.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact permanent.
    Exact {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, value_enum, default_value_t = Method::Glynn)]
        method: Method,
    },
    /// Estimate with an additive error guarantee.
    Estimate(EstimateArgs),
    /// Upper bound on the permanent's modulus.
    Bound {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Build or audit a sample space.
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Linear-optics amplitudes, probabilities and bounds.
    #[command(subcommand)]
    Optics(OpticsCommand),
}

#[derive(Args)]
struct MatrixInput {
    /// Matrix file, or `-` for stdin.
    #[arg(long)]
    matrix: PathBuf,
    /// Column multiplicities; the matrix file then holds the base matrix.
    #[arg(long, value_delimiter = ',')]
    mult: Option<Vec<usize>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Naive,
    Ryser,
    Glynn,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Random,
    Derandomized,
    Exhaustive,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: MatrixInput,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = Mode::Random)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Space descriptor text, or a file holding one.
    #[arg(long)]
    space: Option<String>,
    /// Build complex spaces by construction even when enumeration is small.
    #[arg(long)]
    force_construction: bool,
}

#[derive(Subcommand)]
enum SpaceCommand {
    /// Construct a space and print its descriptor.
    Build {
        /// Binary space over n coordinates.
        #[arg(long, conflicts_with = "moduli", required_unless_present = "moduli")]
        n: Option<usize>,
        /// Space over the product of cyclic groups with these orders.
        #[arg(long, value_delimiter = ',')]
        moduli: Option<Vec<u32>>,
        #[arg(long, required_unless_present = "exhaustive")]
        epsilon: Option<f64>,
        /// The uniform space over the whole domain.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        force_construction: bool,
        /// Also write the descriptor to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the bias of a space and compare it with the declared bound.
    Audit {
        /// Space descriptor text, or a file holding one.
        #[arg(long)]
        space: String,
    },
}

#[derive(Args)]
struct OpticsInput {
    /// Interferometer matrix file.
    #[arg(long)]
    unitary: PathBuf,
    /// Output occupation pattern, e.g. `2,0,1`.
    #[arg(long, value_delimiter = ',')]
    output: Vec<usize>,
    /// Input pattern; defaults to one photon in each of the first n modes.
    #[arg(long, value_delimiter = ',')]
    input: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = OpticsMode::Exact)]
    mode: OpticsMode,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    force_construction: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OpticsMode {
    Exact,
    Random,
    Derandomized,
}

#[derive(Subcommand)]
enum OpticsCommand {
    /// Transition probability.
    Prob(OpticsInput),
    /// Transition amplitude.
    Amp(OpticsInput),
    /// Largest probability of an output pattern over all interferometers.
    Bound {
        #[arg(long, value_delimiter = ',')]
        pattern: Vec<usize>,
    },
    /// An interferometer and outcome attaining the bound for a pattern.
    Saturate {
        #[arg(long, value_delimiter = ',')]
        pattern: Vec<usize>,
        /// Write the interferometer matrix here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Lib(permest::Error),
    Io(PathBuf, io::Error),
    Usage(String),
}

impl From<permest::Error> for CliError {
    fn from(e: permest::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use permest::Error as E;
        match self {
            CliError::Lib(E::Parse { .. } | E::Descriptor(_) | E::Dimension(_)) => 2,
            CliError::Lib(E::SizeLimit { .. } | E::Capacity(_)) => 3,
            CliError::Lib(E::Domain(_) | E::InvalidArgument(_)) => 4,
            CliError::Lib(E::NoConvergence { .. }) => 1,
            CliError::Io(..) | CliError::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)
    } else {
        File::open(path).and_then(|mut f| f.read_to_string(&mut text))
    };
    res.map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    Ok(text)
}

fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    Ok(permest::matrix::parse_matrix(&read_text(path)?)?)
}

fn read_spec(input: &MatrixInput) -> CliResult<MultiplicitySpec> {
    let base = read_matrix(&input.matrix)?;
    Ok(match &input.mult {
        Some(m) => MultiplicitySpec::new(base, m.clone())?,
        None => MultiplicitySpec::trivial(base)?,
    })
}

fn is_trivial(spec: &MultiplicitySpec) -> bool {
    spec.mults().iter().all(|&s| s == 1)
}

// A descriptor given inline or through a file.
fn load_space(arg: &str) -> CliResult<Box<dyn SampleSpace>> {
    let path = Path::new(arg);
    let text = if !arg.contains('=') && path.is_file() { read_text(path)? } else { arg.to_string() };
    Ok(parse_descriptor(text.trim())?)
}

fn require_epsilon(eps: Option<f64>) -> CliResult<f64> {
    eps.ok_or_else(|| CliError::Usage("--epsilon is required for this mode".into()))
}

fn pattern(counts: &[usize]) -> CliResult<OccupationPattern> {
    if counts.is_empty() {
        return Err(CliError::Usage("pattern must list at least one mode".into()));
    }
    Ok(OccupationPattern::new(counts.to_vec()))
}

fn cmd_exact(input: &MatrixInput, method: Method, r: &mut Report) -> CliResult<()> {
    let a = read_spec(input)?.expand();
    let (value, name) = match method {
        Method::Naive => (permanent_naive(&a)?, "naive"),
        Method::Ryser => (permanent_ryser(&a)?, "ryser"),
        Method::Glynn => (permanent_glynn_exact(&a)?, "glynn"),
    };
    r.complex("permanent", value).text("method", name).int("n", a.rows() as u64);
    Ok(())
}

fn report_estimate(e: &Estimate, r: &mut Report) {
    let g = e.guarantee();
    r.complex("value", e.value)
        .float("bound_term", e.bound_term)
        .float("epsilon", e.epsilon)
        .float("guarantee", g.additive_error_bound)
        .float("confidence", g.confidence)
        .int("samples", e.samples_used)
        .text("mode", e.mode.name());
}

fn cmd_estimate(args: &EstimateArgs, r: &mut Report) -> CliResult<()> {
    let spec = read_spec(&args.input)?;
    let trivial = is_trivial(&spec);
    let est = match args.mode {
        Mode::Random => {
            let eps = require_epsilon(args.epsilon)?;
            let e = if trivial {
                estimate_random(&spec.expand(), eps, args.delta, args.seed)?
            } else {
                estimate_random_multi(&spec, eps, args.delta, args.seed)?
            };
            report_estimate(&e, r);
            r.float("delta", args.delta).int("seed", args.seed);
            return Ok(());
        }
        Mode::Exhaustive if trivial => estimate_exhaustive(&spec.expand())?,
        Mode::Exhaustive => estimate_exhaustive_multi(&spec)?,
        Mode::Derandomized => {
            // reject before paying for a space construction
            spec.base().require_nonnegative_real()?;
            let space: Box<dyn SampleSpace> = match &args.space {
                Some(d) => load_space(d)?,
                None if trivial => Box::new(build_binary_space(spec.n(), require_epsilon(args.epsilon)?)?),
                None => {
                    let eps = require_epsilon(args.epsilon)?;
                    Box::new(build_complex_space(&spec.moduli(), eps, args.force_construction)?)
                }
            };
            let binary_fit = space.moduli().len() == spec.n() && space.moduli().iter().all(|&m| m == 2);
            let e = if trivial && binary_fit {
                estimate_derandomized(&spec.expand(), space.as_ref())?
            } else {
                estimate_derandomized_multi(&spec, space.as_ref())?
            };
            report_estimate(&e, r);
            r.text("space", space.descriptor()).int("seed_bits", space.seed_bits() as u64);
            return Ok(());
        }
    };
    report_estimate(&est, r);
    Ok(())
}

fn cmd_bound(input: &MatrixInput, r: &mut Report) -> CliResult<()> {
    let spec = read_spec(input)?;
    r.float("bound", permanent_upper_bound(&spec)?)
        .float("norm", spec.base().norm()?)
        .float("prefactor", log_gengly_prefactor(spec.mults()).exp())
        .int("n", spec.n() as u64);
    Ok(())
}

fn report_space(space: &dyn SampleSpace, r: &mut Report) {
    r.text("descriptor", space.descriptor())
        .int("seed_bits", space.seed_bits() as u64)
        .int("support", space.support_size())
        .float("declared_epsilon", space.declared_epsilon());
}

fn cmd_space(cmd: &SpaceCommand, r: &mut Report) -> CliResult<bool> {
    match cmd {
        SpaceCommand::Build { n, moduli, epsilon, exhaustive, force_construction, out } => {
            let space: Box<dyn SampleSpace> = match (n, moduli, exhaustive) {
                (Some(n), _, true) => Box::new(exhaustive_binary_space(*n)?),
                (Some(n), _, false) => Box::new(build_binary_space(*n, require_epsilon(*epsilon)?)?),
                (None, Some(m), true) => Box::new(exhaustive_complex_space(m)?),
                (None, Some(m), false) => {
                    Box::new(build_complex_space(m, require_epsilon(*epsilon)?, *force_construction)?)
                }
                (None, None, _) => return Err(CliError::Usage("give --n or --moduli".into())),
            };
            if let Some(path) = out {
                std::fs::write(path, format!("{}\n", space.descriptor()))
                    .map_err(|e| CliError::Io(path.clone(), e))?;
            }
            report_space(space.as_ref(), r);
            Ok(true)
        }
        SpaceCommand::Audit { space } => {
            let space = load_space(space)?;
            let bias = if space.moduli().iter().all(|&m| m == 2) {
                measure_bias(space.as_ref())?
            } else {
                measure_complex_bias(space.as_ref())?
            };
            let pass = bias <= space.declared_epsilon() + 1e-12;
            report_space(space.as_ref(), r);
            r.float("measured_bias", bias).text("result", if pass { "PASS" } else { "FAIL" });
            Ok(pass)
        }
    }
}

fn optics_result(args: &OpticsInput) -> CliResult<AmplitudeResult> {
    let u = read_matrix(&args.unitary)?;
    let out = pattern(&args.output)?;
    let n = out.total();
    let input = match &args.input {
        Some(c) => pattern(c)?,
        None => OccupationPattern::standard(u.rows(), n)?,
    };
    if args.mode == OpticsMode::Exact {
        return Ok(amplitude_exact(&u, &out, &input)?);
    }
    if Some(&input) != OccupationPattern::standard(u.rows(), n).ok().as_ref() {
        return Err(CliError::Lib(permest::Error::InvalidArgument(
            "estimation modes take one photon in each of the first n modes".into(),
        )));
    }
    let eps = require_epsilon(args.epsilon)?;
    let mode = match args.mode {
        OpticsMode::Random => AmplitudeMode::Random { delta: args.delta, seed: args.seed },
        _ => AmplitudeMode::Derandomized { force_construction: args.force_construction },
    };
    Ok(amplitude_estimate(&u, &out, eps, mode)?)
}

fn cmd_optics(cmd: &OpticsCommand, r: &mut Report) -> CliResult<()> {
    match cmd {
        OpticsCommand::Prob(args) => {
            let res = optics_result(args)?;
            r.float("probability", res.probability).float("error_bound", res.prob_error_bound);
            r.float("confidence", res.confidence).int("samples", res.samples_used);
        }
        OpticsCommand::Amp(args) => {
            let res = optics_result(args)?;
            r.complex("amplitude", res.amplitude).float("error_bound", res.amp_error_bound);
            r.float("confidence", res.confidence).int("samples", res.samples_used);
        }
        OpticsCommand::Bound { pattern: p } => {
            r.float("bound", bunching_bound(&pattern(p)?));
        }
        OpticsCommand::Saturate { pattern: p, out } => {
            let p = pattern(p)?;
            let u = saturating_unitary(&p)?;
            let outcome = saturating_outcome(&p)?;
            let prob = amplitude_exact(&u, &outcome, &OccupationPattern::standard(u.rows(), p.total())?)?.probability;
            if let Some(path) = out {
                std::fs::write(path, u.to_text()).map_err(|e| CliError::Io(path.clone(), e))?;
            }
            r.int("modes", u.rows() as u64)
                .counts("outcome", outcome.counts())
                .float("probability", prob)
                .float("bound", bunching_bound(&p));
        }
    }
    Ok(())
}

fn run(cli: &Cli, r: &mut Report) -> CliResult<bool> {
    match &cli.command {
        Command::Exact { input, method } => cmd_exact(input, *method, r)?,
        Command::Estimate(args) => cmd_estimate(args, r)?,
        Command::Bound { input } => cmd_bound(input, r)?,
        Command::Space(cmd) => return cmd_space(cmd, r),
        Command::Optics(cmd) => cmd_optics(cmd, r)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = Report::new();
    match run(&cli, &mut report) {
        Ok(pass) => {
            if cli.timing {
                report.float("wall_time_s", start.elapsed().as_secs_f64());
            }
            // a closed pipe is not worth a panic
            let _ = io::stdout().write_all(report.render(cli.format).as_bytes());
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("permest: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
