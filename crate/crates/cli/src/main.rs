use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrtw::algebra::identity::Mode;
use qrtw::algebra::rational::{format_rational, parse_rational};
use qrtw::algebra::{Rational, RationalFunction, Ring};
use qrtw::expr::{Document, Script, Value};
use qrtw::maps::{check_commuting_square, iterate_orbit, Arithmetic, RationalMap, DEFAULT_BITCAP};
use qrtw::qrt::{build_qrt, validate_biquadratic};
use qrtw::registry::{example_spec, instantiate, list_examples, ParameterAssignment};
use qrtw::verify::{run_suite, ModePolicy};
use qrtw::Error;

#[derive(Parser)]
#[command(name = "qrtw", version, about = "Exact checks for integrable maps and their QRT reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the example catalogue.
    List,
    /// Run the full check suite of an example and emit a JSON report.
    Verify(VerifyArgs),
    /// Build the QRT map of a biquadratic invariant read from a file.
    Qrt(QrtArgs),
    /// Iterate a stored map from a rational start point and emit CSV.
    Orbit(OrbitArgs),
    /// Check `pi∘phi ≡ psi∘pi` for maps read from files.
    ReduceCheck(ReduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Randomized,
}

#[derive(Args)]
struct ModeOpts {
    /// Identity-testing mode for ambient checks.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Trials per randomized check.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, env = "QRTW_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    example: String,
    /// Parameter values such as `a=1,k=-3/2`; repeatable.
    #[arg(long = "param", short = 'p')]
    params: Vec<String>,
    #[command(flatten)]
    mode: ModeOpts,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Record per-check wall times; the report is then not reproducible.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct QrtArgs {
    /// Expression file defining the invariant.
    #[arg(long)]
    invariant: PathBuf,
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
    /// Definition to use; defaults to `h`, else the last scalar definition.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct OrbitArgs {
    example: String,
    /// Stored self-map; defaults to the first reduced map.
    #[arg(long)]
    map: Option<String>,
    /// Comma-separated rationals, one per phase variable.
    #[arg(long)]
    start: String,
    #[arg(long)]
    steps: usize,
    /// Values for every parameter, such as `a=1,k=2`; repeatable.
    #[arg(long = "param", short = 'p')]
    params: Vec<String>,
    /// Iterate in floating point instead of exact rationals.
    #[arg(long)]
    float: bool,
    /// Relative drift of the invariants tolerated in float mode.
    #[arg(long, default_value_t = qrtw::maps::DEFAULT_TOL)]
    tol: f64,
    /// Largest numerator or denominator bit length in exact mode.
    #[arg(long, default_value_t = DEFAULT_BITCAP)]
    bitcap: u64,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// File whose last tuple definition is the ambient self-map; a scalar
    /// definition serves as a one-component map.
    #[arg(long)]
    phi: PathBuf,
    /// File holding the reduced self-map.
    #[arg(long)]
    psi: PathBuf,
    /// File holding the projection.
    #[arg(long)]
    pi: PathBuf,
    #[command(flatten)]
    mode: ModeOpts,
}

enum Failure {
    Usage(String),
    Singular(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_singular() {
            Failure::Singular(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => list(),
        Command::Verify(a) => verify(a),
        Command::Qrt(a) => qrt(a),
        Command::Orbit(a) => orbit(a),
        Command::ReduceCheck(a) => reduce_check(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Singular(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn list() -> CliResult {
    for e in list_examples() {
        println!("{:<16} {}d  {}", e.name, e.ambient_dim, e.summary);
    }
    Ok(true)
}

fn parse_params(items: &[String]) -> Result<ParameterAssignment, Failure> {
    let mut out = ParameterAssignment::symbolic();
    for item in items {
        let p: ParameterAssignment = item.parse()?;
        for (k, v) in p.iter() {
            out.set(k, v.clone());
        }
    }
    Ok(out)
}

fn ambient_mode(opts: &ModeOpts, dim: usize) -> Option<Mode> {
    match opts.mode {
        Some(ModeArg::Exact) => Some(Mode::Exact),
        Some(ModeArg::Randomized) => Some(Mode::randomized(opts.trials, opts.seed)),
        None if dim >= 6 => Some(Mode::randomized(opts.trials, opts.seed)),
        None => None,
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> CliResult {
    let params = parse_params(&a.params)?;
    let spec = example_spec(&a.example)?;
    let policy = ModePolicy {
        ambient: ambient_mode(&a.mode, spec.ambient_dim),
        timings: a.timings,
        ..ModePolicy::default()
    };
    let report = run_suite(&a.example, &params, &policy)?;
    emit(a.output.as_deref(), &(report.to_json() + "\n"))?;
    let failed = report.failures().count();
    eprintln!(
        "{}: {} of {} checks passed",
        report.example,
        report.checks.len() - failed,
        report.checks.len()
    );
    for c in report.failures() {
        eprintln!("  failed {} {}", c.check_id, c.target);
    }
    Ok(report.passed())
}

fn load(path: &Path) -> Result<Document, Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Script::parse(&src)
        .and_then(|s| s.evaluate())
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn qrt(a: QrtArgs) -> CliResult {
    let doc = load(&a.invariant)?;
    let name = match a.name {
        Some(n) => n,
        None if doc.defs.contains_key("h") => "h".to_string(),
        None => doc
            .defs
            .iter()
            .rev()
            .find(|(_, d)| matches!(d.value, Value::Scalar(_)))
            .map(|(n, _)| n.clone())
            .ok_or_else(|| Failure::Usage("no scalar definition in the invariant file".into()))?,
    };
    let h = validate_biquadratic(doc.scalar(&name)?, &a.u, &a.v)?;
    print!("{}", build_qrt(&h)?);
    Ok(true)
}

fn orbit(a: OrbitArgs) -> CliResult {
    let params = parse_params(&a.params)?;
    let bundle = instantiate(&a.example, &params)?;
    let map_name = a.map.unwrap_or_else(|| bundle.spec().reduced.maps[0].to_string());
    let m = bundle.map(&map_name)?;
    let ring = m.domain().clone();
    let phase: Vec<Rational> = a
        .start
        .split(',')
        .map(|s| parse_rational(s.trim()))
        .collect::<qrtw::Result<_>>()?;
    if phase.len() != ring.phase_count() {
        return Err(Failure::Usage(format!(
            "`{map_name}` acts on {} variables, --start gives {}",
            ring.phase_count(),
            phase.len()
        )));
    }
    let mut start = phase;
    for p in &ring.names()[ring.phase_count()..] {
        let v = params
            .get(p)
            .ok_or_else(|| Failure::Usage(format!("parameter `{p}` needs a value for orbits")))?;
        start.push(v.clone());
    }
    let spec = bundle.spec();
    let mut h: Vec<(String, RationalFunction)> = Vec::new();
    for name in spec.invariants.iter().chain(std::iter::once(&spec.reduced.h)) {
        let f = bundle.scalar(name)?;
        if f.ring().same(&ring) {
            h.push((name.to_string(), f.clone()));
        }
    }
    let arithmetic = if a.float {
        Arithmetic::Float { tol: a.tol }
    } else {
        Arithmetic::Exact { bitcap: a.bitcap }
    };
    let rec = iterate_orbit(&m, &start, a.steps, &h, arithmetic)?;
    emit(a.output.as_deref(), &rec.to_csv())?;
    for s in &rec.flagged {
        eprintln!("invariant drift beyond {} at step {s}", a.tol);
    }
    Ok(rec.flagged.is_empty())
}

/// The last tuple definition, or the last scalar one as a one-component map.
fn last_map(doc: &Document, path: &Path) -> Result<(String, Ring, Vec<RationalFunction>), Failure> {
    let pick = |tuples: bool| {
        doc.defs
            .iter()
            .rev()
            .find(|(_, d)| matches!(d.value, Value::Tuple(_)) == tuples)
    };
    let (name, def) = pick(true)
        .or_else(|| pick(false))
        .ok_or_else(|| Failure::Usage(format!("{}: no definitions", path.display())))?;
    let comps = match &def.value {
        Value::Tuple(v) => v.clone(),
        Value::Scalar(f) => vec![f.clone()],
    };
    Ok((name.clone(), def.ring.clone(), comps))
}

fn load_endo(path: &Path) -> Result<RationalMap, Failure> {
    let (name, ring, comps) = last_map(&load(path)?, path)?;
    RationalMap::endo(&name, &ring, comps).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn reduce_check(a: ReduceArgs) -> CliResult {
    let phi = load_endo(&a.phi)?;
    let psi = load_endo(&a.psi)?;
    let (name, _, comps) = last_map(&load(&a.pi)?, &a.pi)?;
    let comps = comps
        .iter()
        .map(|c| c.embed(phi.domain()))
        .collect::<qrtw::Result<Vec<_>>>()?;
    let pi = RationalMap::new(&name, phi.domain(), psi.domain(), comps)?;
    let mode = ambient_mode(&a.mode, 0).unwrap_or(Mode::Exact);
    let out = check_commuting_square(&phi, &psi, &pi, mode)?;
    if out.holds() {
        println!("pass: pi∘phi ≡ psi∘pi ({})", describe(mode));
        return Ok(true);
    }
    println!("fail: pi∘phi ≢ psi∘pi ({})", describe(mode));
    if let Some(w) = &out.witness {
        let point: Vec<String> = w
            .witness
            .point
            .iter()
            .map(|(n, v)| format!("{n}={}", format_rational(v)))
            .collect();
        println!("  component {} of {}", w.component, psi.domain().name(w.component));
        println!("  point {}", point.join(","));
        println!("  lhs {}", format_rational(&w.witness.lhs));
        println!("  rhs {}", format_rational(&w.witness.rhs));
    }
    Ok(false)
}

fn describe(mode: Mode) -> String {
    match mode {
        Mode::Exact => "exact".into(),
        Mode::Randomized { trials, seed } => format!("randomized, {trials} trials, seed {seed}"),
    }
}
