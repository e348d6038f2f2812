//! Command-line front end for the library. Every consumer is a script or a
//! test harness, so output is line-oriented, optionally JSON, and identical
//! invocations (same inputs, flags, seed) produce byte-identical results.
//!
//! Exit codes are a stable contract: 0 ok, 2 parse error, 3 illegal move,
//! 4 precondition violation, 5 internal assertion, 6 budget exhausted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pachner_core::complex::ComplexError;
use pachner_core::constructions::{
    build_mold_cell_with_budget, build_plump_cell_with_budget, verify_mold, verify_plump,
    BuildError, DEFAULT_BUILD_BUDGET,
};
use pachner_core::equalizer::{
    equalize_boundary, equalize_closed, equalize_full, replay, EqualizeError, DEFAULT_SEED,
};
use pachner_core::fvector::{
    d_vector, ds_residual_boundary, ds_residual_closed, residuals_zero, solve_virtual_plan,
    FVector, FvError,
};
use pachner_core::io::{self, IoError};
use pachner_core::moves::{
    apply_bistellar, check_shelling, enumerate_bistellar, enumerate_shellings,
    induced_boundary_move, star_subdivide_along_face, BistellarMove, MoveError, MoveLog,
    MoveOp, MoveRecord, ShellingMove,
};
use pachner_core::simplex::{Simplex, VertexId};
use pachner_core::verify::{pseudomanifold_report, verify_manifold};
use pachner_core::FacetComplex;

/// Environment variable overriding the default search budget.
const BUDGET_ENV: &str = "PACHNER_BUDGET";

#[derive(Parser)]
#[command(
    name = "pachner",
    version,
    about = "Exact simplicial-complex surgery: bistellar moves, shellings, \
             Dehn-Sommerville algebra and f-vector equalization",
    after_help = "Seeds default to the fixed constant 7 (never wall-clock). \
                  The cell-search budget defaults to 10000 moves and can be \
                  overridden with --budget or the PACHNER_BUDGET variable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the f-vector, Euler characteristic and Dehn-Sommerville status
    Fvec {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Pseudomanifold and combinatorial-manifold certificates
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the legal bistellar moves, canonically sorted
    Moves {
        path: PathBuf,
        /// Restrict to one move type
        #[arg(short = 'i', long = "type")]
        move_type: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply a bistellar move given as JSON and write the result
    Apply {
        path: PathBuf,
        /// e.g. '{"kind":"bistellar","sigma":[1,2,3],"tau":[5],"i":0}'
        #[arg(long = "move")]
        move_json: String,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write a one-record move log
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// List legal elementary shellings, or apply one with --sigma/--tau
    Shell {
        path: PathBuf,
        #[arg(long, requires = "tau")]
        sigma: Option<String>,
        #[arg(long, requires = "sigma")]
        tau: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Star-subdivide a facet along one of its codimension-1 faces
    Subdivide {
        path: PathBuf,
        #[arg(long)]
        facet: String,
        #[arg(long)]
        face: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Glue two copies of a bounded complex along their boundary
    Double {
        path: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the f-vector effect of bistellar moves
    Dvec {
        #[arg(short)]
        n: usize,
        #[arg(short = 'i', long = "type")]
        move_type: Option<usize>,
    },
    /// Solve the virtual-move plan between two f-vectors
    Solve {
        #[arg(short)]
        n: usize,
        /// Comma-separated counts f_0,...,f_n
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Build and certify a plump cell
    Plump {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and certify a mold cell (n in {2, 3})
    Mold {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Retriangulate two complexes until their f-vectors agree
    Equalize {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Equalize boundary f-vectors only (bounded inputs, n in {2,3})
        #[arg(long, conflicts_with = "full")]
        boundary: bool,
        /// Equalize both f and boundary f (bounded inputs, n in {2,3})
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Re-apply a JSONL move log with full legality checking
    Replay {
        path: PathBuf,
        log: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::new(2, e.to_string())
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        let code = match &e {
            ComplexError::NotPure(..)
            | ComplexError::DuplicateFacet(_)
            | ComplexError::BadVertexId
            | ComplexError::EmptyInput => 2,
            _ => 4,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<MoveError> for Failure {
    fn from(e: MoveError) -> Self {
        let code = match &e {
            MoveError::IllegalMove { .. }
            | MoveError::IllegalShelling { .. }
            | MoveError::EmptyResult
            | MoveError::NotAFacet(_)
            | MoveError::NotAFace(_)
            | MoveError::SharedFace(_) => 3,
            MoveError::ClosedInput => 4,
            MoveError::Complex(inner) => return Failure::from(inner.clone()),
        };
        Failure::new(code, e.to_string())
    }
}

impl From<FvError> for Failure {
    fn from(e: FvError) -> Self {
        let code = match &e {
            FvError::VerificationFailed(_) | FvError::NonIntegralCoefficient { .. } => 5,
            _ => 4,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        let code = match &e {
            BuildError::BudgetExhausted(_) => 6,
            BuildError::CertificationFailed(_) => 5,
            BuildError::UnsupportedDimension(_) | BuildError::UnknownFixture(_) => 4,
            BuildError::Move(inner) => return Failure::from(inner.clone()),
            BuildError::Complex(inner) => return Failure::from(inner.clone()),
        };
        Failure::new(code, e.to_string())
    }
}

impl From<EqualizeError> for Failure {
    fn from(e: EqualizeError) -> Self {
        match e {
            EqualizeError::Move(inner) => Failure::from(inner),
            EqualizeError::Complex(inner) => Failure::from(inner),
            EqualizeError::Fv(inner) => Failure::from(inner),
            EqualizeError::Build(inner) => Failure::from(inner),
            EqualizeError::Io(inner) => Failure::new(2, inner.to_string()),
            EqualizeError::InternalAssertFailed(_) | EqualizeError::ReplayMismatch { .. } => {
                Failure::new(5, e.to_string())
            }
            _ => Failure::new(4, e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(2, format!("json error: {e}"))
    }
}

fn parse_simplex(text: &str) -> Result<Simplex, Failure> {
    let ids: Result<Vec<VertexId>, _> = text
        .split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect();
    let ids = ids.map_err(|_| Failure::new(2, format!("bad simplex {text:?}")))?;
    Simplex::new(ids).ok_or_else(|| Failure::new(2, format!("bad simplex {text:?}")))
}

fn parse_counts(text: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Failure::new(2, format!("bad count {t:?}")))
        })
        .collect()
}

fn format_counts(counts: &[u64]) -> String {
    counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn budget(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_BUILD_BUDGET)
}

fn write_complex(path: &Path, c: &FacetComplex) -> Result<(), Failure> {
    io::write_complex_file(path, c)?;
    Ok(())
}

fn cmd_fvec(path: &Path, format: Format) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    let fv = c.f_vector();
    let chi = c.euler_characteristic();
    let boundary = c.boundary_complex();
    match format {
        Format::Text => {
            let mut line = format!("f = {fv}; chi = {chi}");
            match &boundary {
                Ok(b) if b.is_marker() => {
                    let ok = residuals_zero(&ds_residual_closed(&fv));
                    line.push_str(if ok { "; DS: closed-ok" } else { "; DS: closed-FAIL" });
                }
                Ok(b) => {
                    let bfv = b.f_vector();
                    line.push_str(&format!("; boundary f = {bfv}"));
                    let ok = ds_residual_boundary(&fv, &bfv)
                        .map(|r| residuals_zero(&r))
                        .unwrap_or(false);
                    line.push_str(if ok { "; DS(2): ok" } else { "; DS(2): FAIL" });
                }
                Err(e) => line.push_str(&format!("; boundary: {e}")),
            }
            println!("{line}");
        }
        Format::Json => {
            let boundary_counts = boundary
                .ok()
                .filter(|b| !b.is_marker())
                .map(|b| b.face_counts());
            let value = serde_json::json!({
                "f": c.face_counts(),
                "chi": chi,
                "boundary_f": boundary_counts,
            });
            println!("{value}");
        }
    }
    Ok(())
}

fn cmd_check(path: &Path, format: Format) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    let pseudo = pseudomanifold_report(&c);
    let manifold = verify_manifold(&c);
    match format {
        Format::Text => {
            println!("pseudomanifold: {} ({})", pseudo.status, pseudo.detail);
            println!(
                "manifold: {} ({}; exact = {})",
                manifold.status, manifold.detail, manifold.checked_dim_exact
            );
        }
        Format::Json => {
            let value = serde_json::json!({
                "pseudomanifold": pseudo,
                "manifold": manifold,
            });
            println!("{value}");
        }
    }
    Ok(())
}

fn cmd_moves(path: &Path, move_type: Option<usize>, format: Format) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    let moves = enumerate_bistellar(&c, move_type);
    match format {
        Format::Text => {
            for m in &moves {
                println!("i={} sigma={} tau={}", m.i, m.sigma, m.tau);
            }
            println!("{} legal moves", moves.len());
        }
        Format::Json => {
            for m in &moves {
                let mut value = serde_json::to_value(m)?;
                value["kind"] = "bistellar".into();
                println!("{value}");
            }
        }
    }
    Ok(())
}

fn cmd_apply(
    path: &Path,
    move_json: &str,
    output: &Path,
    log_path: Option<&Path>,
) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    let value: serde_json::Value = serde_json::from_str(move_json)?;
    if value.get("kind").and_then(|k| k.as_str()) != Some("bistellar") {
        return Err(Failure::new(2, "move JSON must have \"kind\":\"bistellar\""));
    }
    let m: BistellarMove = serde_json::from_value(value)?;
    let after = apply_bistellar(&c, &m)?;
    write_complex(output, &after)?;
    if let Some(log_path) = log_path {
        let mut log = MoveLog::new();
        log.push(MoveRecord::new(
            MoveOp::Bistellar { sigma: m.sigma.clone(), tau: m.tau.clone(), i: m.i },
            &c,
            &after,
        ));
        std::fs::write(log_path, log.to_jsonl()).map_err(|e| Failure::new(2, e.to_string()))?;
    }
    println!(
        "applied i={}: f {} -> {}",
        m.i,
        format_counts(&c.face_counts()),
        format_counts(&after.face_counts())
    );
    Ok(())
}

fn cmd_shell(
    path: &Path,
    sigma: Option<&str>,
    tau: Option<&str>,
    output: Option<&Path>,
    format: Format,
) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    match (sigma, tau) {
        (Some(sigma), Some(tau)) => {
            let m = ShellingMove::new(parse_simplex(sigma)?, parse_simplex(tau)?);
            check_shelling(&c, &m)?;
            let induced = induced_boundary_move(&c, &m)?;
            let after = pachner_core::moves::apply_shelling(&c, &m)?;
            if let Some(output) = output {
                write_complex(output, &after)?;
            }
            println!(
                "shelled {}: f {} -> {}; induced boundary move i={} sigma={} tau={}",
                m,
                format_counts(&c.face_counts()),
                format_counts(&after.face_counts()),
                induced.i,
                induced.sigma,
                induced.tau
            );
            Ok(())
        }
        _ => {
            let shellings = enumerate_shellings(&c)?;
            match format {
                Format::Text => {
                    for s in &shellings {
                        println!("i={} sigma={} tau={}", s.shelling_type(), s.sigma, s.tau);
                    }
                    println!("{} legal shellings", shellings.len());
                }
                Format::Json => {
                    for s in &shellings {
                        let mut value = serde_json::to_value(s)?;
                        value["kind"] = "shelling".into();
                        value["i"] = s.shelling_type().into();
                        println!("{value}");
                    }
                }
            }
            Ok(())
        }
    }
}

fn cmd_subdivide(path: &Path, facet: &str, face: &str, output: &Path) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    let facet = parse_simplex(facet)?;
    let face = parse_simplex(face)?;
    let after = star_subdivide_along_face(&c, &facet, &face)?;
    write_complex(output, &after)?;
    println!(
        "subdivided {facet} along {face}: f {} -> {}",
        format_counts(&c.face_counts()),
        format_counts(&after.face_counts())
    );
    Ok(())
}

fn cmd_double(path: &Path, output: &Path) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    let doubled = c.double()?;
    write_complex(output, &doubled)?;
    println!(
        "doubled: f {} -> {}",
        format_counts(&c.face_counts()),
        format_counts(&doubled.face_counts())
    );
    Ok(())
}

fn cmd_dvec(n: usize, move_type: Option<usize>) -> Result<(), Failure> {
    let types: Vec<usize> = match move_type {
        Some(i) => vec![i],
        None => (0..=n).collect(),
    };
    for i in types {
        let d = d_vector(n, i)?;
        let entries: Vec<String> = d.entries().iter().map(|e| e.to_string()).collect();
        println!("d({n},{i}) = {}", entries.join(","));
    }
    Ok(())
}

fn cmd_solve(n: usize, from: &str, to: &str) -> Result<(), Failure> {
    let from = parse_counts(from)?;
    let to = parse_counts(to)?;
    if from.len() != n + 1 || to.len() != n + 1 {
        return Err(Failure::new(2, format!("expected {} counts per vector", n + 1)));
    }
    let plan =
        solve_virtual_plan(&FVector::from_u64_counts(&from), &FVector::from_u64_counts(&to))?;
    println!("{plan}");
    Ok(())
}

fn cmd_plump(
    n: usize,
    seed: u64,
    budget_flag: Option<usize>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::new(4, "plump cells start at dimension 1"));
    }
    let cell = build_plump_cell_with_budget(n, seed, budget(budget_flag))?;
    let certificate = verify_plump(&cell);
    if let Some(output) = output {
        let mut text = serde_json::to_string_pretty(&cell)?;
        text.push('\n');
        std::fs::write(output, text).map_err(|e| Failure::new(2, e.to_string()))?;
    }
    println!(
        "plump cell n={n} seed={seed}: {} facets, {} prepared moves; certificate: {certificate}",
        cell.disk.facet_count(),
        cell.prepared_moves.len()
    );
    if !certificate.passed {
        return Err(Failure::new(5, "certificate failed"));
    }
    Ok(())
}

fn cmd_mold(
    n: usize,
    seed: u64,
    budget_flag: Option<usize>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let cell = build_mold_cell_with_budget(n, seed, budget(budget_flag))?;
    let certificate = verify_mold(&cell);
    if let Some(output) = output {
        let mut text = serde_json::to_string_pretty(&cell)?;
        text.push('\n');
        std::fs::write(output, text).map_err(|e| Failure::new(2, e.to_string()))?;
    }
    println!(
        "mold cell n={n} seed={seed}: {} facets, window of {} facets, {} prepared shellings; certificate: {certificate}",
        cell.disk.facet_count(),
        cell.window.disk.facet_count(),
        cell.prepared_shellings.len()
    );
    if !certificate.passed {
        return Err(Failure::new(5, "certificate failed"));
    }
    Ok(())
}

fn cmd_equalize(
    a: &Path,
    b: &Path,
    output: &Path,
    boundary: bool,
    full: bool,
    seed: u64,
) -> Result<(), Failure> {
    let c1 = io::read_complex_file(a)?;
    let c2 = io::read_complex_file(b)?;
    let result = if full {
        equalize_full(&c1, &c2, seed)?
    } else if boundary {
        equalize_boundary(&c1, &c2, seed)?
    } else {
        equalize_closed(&c1, &c2, seed)?
    };
    // Replay both logs against the inputs once more before writing anything.
    let r1 = replay(&c1, &result.log1)?;
    let r2 = replay(&c2, &result.log2)?;
    if r1 != result.c1_star || r2 != result.c2_star {
        return Err(Failure::new(5, "replay verification failed"));
    }
    result.write_to_dir(output)?;
    println!("mode = {}", result.report.mode);
    for plan in &result.report.plans {
        println!("plan[{}] = {} ({} moves)", plan.label, plan.plan, plan.moves);
    }
    println!(
        "final f = {} / {}",
        format_counts(&result.c1_star.face_counts()),
        format_counts(&result.c2_star.face_counts())
    );
    println!("outputs written to {}", output.display());
    Ok(())
}

fn cmd_replay(path: &Path, log: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let c = io::read_complex_file(path)?;
    let text = std::fs::read_to_string(log).map_err(|e| Failure::new(2, e.to_string()))?;
    let log = MoveLog::from_jsonl(&text)?;
    let result = replay(&c, &log)?;
    if let Some(output) = output {
        write_complex(output, &result)?;
    }
    println!(
        "replayed {} records: f = {}",
        log.len(),
        format_counts(&result.face_counts())
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Fvec { path, format } => cmd_fvec(&path, format),
        Command::Check { path, format } => cmd_check(&path, format),
        Command::Moves { path, move_type, format } => cmd_moves(&path, move_type, format),
        Command::Apply { path, move_json, output, log } => {
            cmd_apply(&path, &move_json, &output, log.as_deref())
        }
        Command::Shell { path, sigma, tau, output, format } => cmd_shell(
            &path,
            sigma.as_deref(),
            tau.as_deref(),
            output.as_deref(),
            format,
        ),
        Command::Subdivide { path, facet, face, output } => {
            cmd_subdivide(&path, &facet, &face, &output)
        }
        Command::Double { path, output } => cmd_double(&path, &output),
        Command::Dvec { n, move_type } => cmd_dvec(n, move_type),
        Command::Solve { n, from, to } => cmd_solve(n, &from, &to),
        Command::Plump { n, seed, budget, output } => {
            cmd_plump(n, seed, budget, output.as_deref())
        }
        Command::Mold { n, seed, budget, output } => {
            cmd_mold(n, seed, budget, output.as_deref())
        }
        Command::Equalize { a, b, output, boundary, full, seed } => {
            cmd_equalize(&a, &b, &output, boundary, full, seed)
        }
        Command::Replay { path, log, output } => cmd_replay(&path, &log, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
