use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use qutrit_bloch::bloch_param::matrix_to_pairs;
use qutrit_bloch::ensembles::{self, Measure};
use qutrit_bloch::gellmann;
use qutrit_bloch::mub::four_mubs;
use qutrit_bloch::positivity::{self, POSITIVITY_TOL};
use qutrit_bloch::sections::{scan, SectionKind, SectionSpec, ThetaPolicy};
use qutrit_bloch::unital::{edge_lengths, polytope_check, polytope_edges, polytope_vertices, UnitalMap};
use qutrit_bloch::{BlochParams, StateDocument};

const DEFAULT_SEED: u64 = 0xB10C;
const CONVERSION_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "qutrit-bloch", version, about = "Qutrit states in four-dimensional Bloch coordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between density matrices and weights/angles.
    #[command(subcommand)]
    State(StateCommand),
    /// Physicality, purity, rank and characteristic coefficients of a state.
    Check(CheckArgs),
    /// Grid scan of a one-, two- or three-dimensional section as CSV.
    Scan(ScanArgs),
    /// The four mutually unbiased bases generated from one phase pair.
    Mub(MubArgs),
    /// Diagonal unital channels.
    #[command(subcommand)]
    Unital(UnitalCommand),
    /// Random states as CSV.
    Sample(SampleArgs),
    /// Evaluate a probability density.
    Density(DensityArgs),
}

#[derive(Args)]
struct Io {
    /// JSON input file; standard input when omitted or `-`.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum StateCommand {
    /// Matrix document to a document with weights and angles added.
    ToBloch {
        #[command(flatten)]
        io: Io,
        /// Tolerance for the Hermiticity, trace and pairing checks.
        #[arg(long, default_value_t = CONVERSION_TOL)]
        tol: f64,
    },
    /// Weights and angles to a document with the matrix added.
    FromBloch {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    io: Io,
    /// Positivity tolerance.
    #[arg(long, default_value_t = POSITIVITY_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Section {
    One,
    Two,
    Three,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaMode {
    /// Maximize a3 over the angles at each point.
    Max,
    /// Hold the angles given by --angles fixed.
    Fixed,
    /// One-sections only: scan the angle as a second axis.
    Sweep,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    section: Section,
    /// Weight axes (1-based), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    axes: Vec<usize>,
    #[arg(long, default_value_t = 41)]
    resolution: usize,
    #[arg(long, value_enum, default_value = "max")]
    theta: ThetaMode,
    /// Angles for --theta fixed, one per axis.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Vec<f64>,
    /// Grid steps per angle for --theta max.
    #[arg(long, default_value_t = 48)]
    grid_steps: usize,
    /// Skip the coordinate-ascent polish for --theta max.
    #[arg(long)]
    no_refine: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MubArgs {
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MapArgs {
    /// Multipliers l1..l4, comma separated. Alternatively pass a JSON map
    /// `{"lambda": [...], "phi": [...]}` with --input.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Vec<f64>,
    /// Phases f1..f4; zero when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    phi: Vec<f64>,
    #[command(flatten)]
    io: Io,
    /// Tolerance on the smallest Choi eigenvalue.
    #[arg(long, default_value_t = POSITIVITY_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum UnitalCommand {
    /// Complete positivity of a map.
    Check(MapArgs),
    /// Choi matrix of a map with its eigenvalues.
    Choi(MapArgs),
    /// Vertices and edges of the zero-phase polytope.
    Vertices {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Ensemble {
    Hs,
    Bures,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    ensemble: Ensemble,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Hs,
    Bures,
    HsGm,
    BuresGm,
    QubitHs,
    QubitBures,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// Evaluation point, comma separated: `r,z1,z2,z3,t1,t2,t3,t4` for hs and
    /// bures, `g1..g8` for the Gell-Mann forms, `r` for the qubit forms.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    at: Vec<f64>,
    /// Report the Bures density with the sign of the determinant instead of
    /// rejecting points with a non-positive determinant.
    #[arg(long)]
    signed: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    /// Bad input; exit code 2.
    Invalid(String),
    /// Anything else; exit code 1.
    Internal(String),
}

impl From<qutrit_bloch::Error> for Failure {
    fn from(e: qutrit_bloch::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Invalid(format!("malformed JSON: {e}"))
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read_input(path: &Option<PathBuf>) -> Outcome<String> {
    let mut s = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            s = fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Internal(format!("reading stdin: {e}")))?;
        }
    }
    Ok(s)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Outcome<()> {
    let res = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::Internal(format!("writing output: {e}")))
}

fn write_json(path: &Option<PathBuf>, v: &impl serde::Serialize) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    write_output(path, &text)
}

fn thread_pool(threads: Option<usize>) -> Outcome<rayon::ThreadPool> {
    if threads == Some(0) {
        return Err(Failure::Invalid("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Internal(e.to_string()))
}

/// Reads a state document, or bare `{"n": [...], "theta": [...]}`.
fn parse_state(text: &str, tol: f64) -> Outcome<(qutrit_bloch::ComplexMatrix, BlochParams)> {
    let v: Value = serde_json::from_str(text)?;
    let doc = if v.get("matrix").is_some() || v.get("bloch").is_some() {
        serde_json::from_value::<StateDocument>(v)?
    } else {
        StateDocument { matrix: None, bloch: Some(serde_json::from_value::<BlochParams>(v)?) }
    };
    Ok(doc.resolve(tol)?)
}

fn run_state(cmd: StateCommand) -> Outcome<()> {
    match cmd {
        StateCommand::ToBloch { io, tol } => {
            let text = read_input(&io.input)?;
            let doc: StateDocument = serde_json::from_str(&text)?;
            let Some(m) = doc.matrix else {
                return Err(Failure::Invalid("to-bloch needs a \"matrix\" field".into()));
            };
            let rho = qutrit_bloch::bloch_param::pairs_to_matrix(&m)?;
            write_json(&io.output, &StateDocument::from_matrix(&rho, tol)?)
        }
        StateCommand::FromBloch { io } => {
            let (_, p) = parse_state(&read_input(&io.input)?, CONVERSION_TOL)?;
            write_json(&io.output, &StateDocument::from_params(&p))
        }
    }
}

fn run_check(args: CheckArgs) -> Outcome<()> {
    let (rho, p) = parse_state(&read_input(&args.io.input)?, CONVERSION_TOL)?;
    let physical = positivity::is_physical(&p, args.tol);
    let eigs = rho.herm_eigvals(CONVERSION_TOL)?;
    let coeffs = positivity::char_coeffs(&rho).ok();
    let rank = positivity::rank_classify(&p, args.tol).ok();
    let out = json!({
        "physical": physical,
        "rank": rank.map(|r| r.rank),
        "region": rank.map(|r| r.region),
        "rank_consistent": rank.map(|r| r.consistent),
        "purity": p.purity(),
        "radius": p.radius(),
        "eigenvalues": eigs,
        "char_coeffs": coeffs,
        "bloch": p,
    });
    write_json(&args.io.output, &out)
}

fn run_scan(args: ScanArgs) -> Outcome<()> {
    let kind = match args.section {
        Section::One => SectionKind::One,
        Section::Two => SectionKind::Two,
        Section::Three => SectionKind::Three,
    };
    let theta_policy = match args.theta {
        ThetaMode::Max => ThetaPolicy::Maximize { grid_steps: args.grid_steps, refine: !args.no_refine },
        ThetaMode::Fixed => ThetaPolicy::Fixed(args.angles.clone()),
        ThetaMode::Sweep => ThetaPolicy::Sweep,
    };
    if !matches!(args.theta, ThetaMode::Fixed) && !args.angles.is_empty() {
        return Err(Failure::Invalid("--angles only applies to --theta fixed".into()));
    }
    let spec = SectionSpec { kind, axes: args.axes, resolution: args.resolution, theta_policy };
    spec.validate()?;
    let table = thread_pool(args.threads)?.install(|| scan(&spec))?;
    write_output(&args.output, &table.to_csv())
}

fn run_mub(args: MubArgs) -> Outcome<()> {
    if !args.delta.is_finite() || !args.gamma.is_finite() {
        return Err(Failure::Invalid("phases must be finite".into()));
    }
    let fam = four_mubs(args.delta, args.gamma);
    let mut v = serde_json::to_value(&fam).map_err(|e| Failure::Internal(e.to_string()))?;
    v["check"] = serde_json::to_value(fam.check()).map_err(|e| Failure::Internal(e.to_string()))?;
    write_json(&args.output, &v)
}

#[derive(Deserialize)]
struct MapDoc {
    lambda: [f64; 4],
    #[serde(default)]
    phi: [f64; 4],
}

fn parse_map(args: &MapArgs) -> Outcome<UnitalMap> {
    let four = |v: &[f64], name: &str| -> Outcome<[f64; 4]> {
        v.try_into().map_err(|_| Failure::Invalid(format!("--{name} needs 4 values, got {}", v.len())))
    };
    let map = if args.lambda.is_empty() {
        let doc: MapDoc = serde_json::from_str(&read_input(&args.io.input)?)?;
        UnitalMap::new(doc.lambda, doc.phi)
    } else {
        let phi = if args.phi.is_empty() { [0.0; 4] } else { four(&args.phi, "phi")? };
        UnitalMap::new(four(&args.lambda, "lambda")?, phi)
    };
    if map.lambda.iter().chain(&map.phi).any(|x| !x.is_finite()) {
        return Err(Failure::Invalid("map parameters must be finite".into()));
    }
    Ok(map)
}

fn run_unital(cmd: UnitalCommand) -> Outcome<()> {
    match cmd {
        UnitalCommand::Check(args) => {
            let map = parse_map(&args)?;
            // The linear inequalities describe only the zero-phase maps.
            let polytope = map.phi.iter().all(|&f| f == 0.0).then(|| polytope_check(&map.lambda));
            let out = json!({
                "lambda": map.lambda,
                "phi": map.phi,
                "completely_positive": map.is_cp(args.tol),
                "choi_min_eigenvalue": map.choi_min_eigenvalue(),
                "polytope": polytope,
            });
            write_json(&args.io.output, &out)
        }
        UnitalCommand::Choi(args) => {
            let map = parse_map(&args)?;
            let c = map.choi_matrix();
            let h = (&c + &c.adjoint()).scale_real(0.5);
            let out = json!({
                "lambda": map.lambda,
                "phi": map.phi,
                "matrix": matrix_to_pairs(&c),
                "eigenvalues": h.herm_eigvals(1e-10)?,
            });
            write_json(&args.io.output, &out)
        }
        UnitalCommand::Vertices { output } => {
            let out = json!({
                "vertices": polytope_vertices(),
                "edges": polytope_edges(),
                "edge_lengths": edge_lengths(),
            });
            write_json(&output, &out)
        }
    }
}

fn run_sample(args: SampleArgs) -> Outcome<()> {
    let measure = match args.ensemble {
        Ensemble::Hs => Measure::Hs,
        Ensemble::Bures => Measure::Bures,
    };
    // One ChaCha stream per row keeps the output independent of the thread count.
    let rows: Vec<String> = thread_pool(args.threads)?.install(|| {
        (0..args.count)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
                rng.set_stream(i as u64);
                let s = ensembles::sample(&mut rng, measure);
                let mut line = format!("{},{}", args.seed, i);
                let fields = s.eigs.iter().chain(&s.bloch.n).chain(&s.bloch.theta).copied().chain([s.r, s.det, s.purity()]);
                for x in fields {
                    write!(line, ",{x:.16e}").unwrap();
                }
                line.push('\n');
                line
            })
            .collect()
    });
    let mut text = String::from("seed,index,eig1,eig2,eig3,n1,n2,n3,n4,theta1,theta2,theta3,theta4,r,det,purity\n");
    text.extend(rows);
    write_output(&args.output, &text)
}

fn run_density(args: DensityArgs) -> Outcome<()> {
    let need = |k: usize| -> Outcome<()> {
        if args.at.len() == k {
            Ok(())
        } else {
            Err(Failure::Invalid(format!("--at needs {k} values, got {}", args.at.len())))
        }
    };
    if args.at.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Invalid("--at values must be finite".into()));
    }
    let a = &args.at;
    let value = match args.which {
        Which::Hs | Which::Bures => {
            need(8)?;
            let (r, zeta, theta) = (a[0], [a[1], a[2], a[3]], [a[4], a[5], a[6], a[7]]);
            if !(0.0..=1.0).contains(&r) {
                return Err(Failure::Invalid("r must lie in [0, 1]".into()));
            }
            if matches!(args.which, Which::Hs) {
                ensembles::hs_density_bloch(r, zeta, theta)?
            } else {
                ensembles::bures_density_bloch(r, zeta, theta, args.signed)?
            }
        }
        Which::HsGm | Which::BuresGm => {
            need(8)?;
            let g: [f64; 8] = a[..].try_into().unwrap();
            if matches!(args.which, Which::HsGm) {
                gellmann::hs_density_gm(&g)?
            } else {
                gellmann::bures_density_gm(&g, args.signed)?
            }
        }
        Which::QubitHs | Which::QubitBures => {
            need(1)?;
            let r = a[0];
            if !(0.0..=1.0).contains(&r) || (matches!(args.which, Which::QubitBures) && r >= 1.0) {
                return Err(Failure::Invalid("r must lie in [0, 1], and below 1 for the Bures form".into()));
            }
            if matches!(args.which, Which::QubitHs) {
                ensembles::qubit_hs_density(r)
            } else {
                ensembles::qubit_bures_density(r)
            }
        }
    };
    let which = args.which.to_possible_value().map(|v| v.get_name().to_string());
    write_json(&args.output, &json!({ "which": which, "at": args.at, "signed": args.signed, "density": value }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::State(c) => run_state(c),
        Command::Check(a) => run_check(a),
        Command::Scan(a) => run_scan(a),
        Command::Mub(a) => run_mub(a),
        Command::Unital(c) => run_unital(c),
        Command::Sample(a) => run_sample(a),
        Command::Density(a) => run_density(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(1)
        }
    }
}
