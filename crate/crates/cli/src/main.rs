use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use waringlab::poly::json::{parse_poly, DecompositionFile};
use waringlab::poly::{residual, HomogeneousPoly, WaringDecomposition};
use waringlab::secant::{expected_secant_dim, table_csv, table_json, terracini_secant_dim, ParamVariety, TableKind};
use waringlab::vsp::sample_vsp;
use waringlab::waring::{
    decompose_binary, decompose_pentahedral, decompose_quintic, verify_canonical, BinaryOptions, PentahedralOptions,
    QuinticOptions, CERTIFICATE_RANK_TOL,
};
use waringlab::Error;

/// Waring decompositions, secant dimensions and VSP sampling.
///
/// Exit codes: 0 success, 1 usage or parse error, 2 degenerate or
/// non-generic input, 3 convergence failure.
#[derive(Parser)]
#[command(name = "waringlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a polynomial given in the polynomial JSON format.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
        algorithm: Algorithm,
        #[arg(long, env = "WARINGLAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Relative residual accepted by the algorithm.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the bound tables.
    Tables {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expected and sampled dimension of a secant variety.
    Secant {
        /// veronese:n:d, rnc:d, quadric:N, segre-veronese:n:m:a:b or grassmann:r:n
        #[arg(long)]
        variety: String,
        #[arg(long)]
        h: usize,
        #[arg(long, env = "WARINGLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Random h-term decomposition of a polynomial of canonical shape.
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        h: usize,
        #[arg(long, env = "WARINGLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Auto,
    Binary,
    Pentahedral,
    Quintic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Ver,
    Grassmann,
    SegreVeronese,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } | Error::UniquenessViolated { .. } | Error::Inaccurate { .. } => 3,
        Error::DegenerateInput(_)
        | Error::NonGenericCubic(_)
        | Error::ZeroPolynomial
        | Error::NoPentahedron { .. }
        | Error::CountMismatch { .. }
        | Error::NotZeroDimensional { .. }
        | Error::EmptyFiber { .. }
        | Error::NonTransverse { .. }
        | Error::DegenerateDraw { .. }
        | Error::EmptyMatrix => 2,
        _ => 1,
    }
}

fn read_poly(path: &PathBuf) -> Result<HomogeneousPoly, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_poly(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to standard output. Returns whether a file was
/// written.
fn emit(text: &str, out: &Option<PathBuf>) -> Result<bool, Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(true)
        }
        None => {
            println!("{text}");
            Ok(false)
        }
    }
}

/// Summary lines go to standard output when the JSON went to a file, and to
/// standard error otherwise.
fn report(lines: &[String], to_stdout: bool) {
    for line in lines {
        if to_stdout {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn decompose(f: &HomogeneousPoly, algorithm: Algorithm, seed: u64, tol: f64) -> Result<(WaringDecomposition, Vec<String>), Failure> {
    let algorithm = match algorithm {
        Algorithm::Auto => match (f.num_vars(), f.degree()) {
            (2, _) => Algorithm::Binary,
            (4, 3) => Algorithm::Pentahedral,
            (3, 5) => Algorithm::Quintic,
            (n, d) => {
                return Err(Failure::Usage(format!(
                    "no algorithm for degree {d} in {n} variables; supported: binary odd degree, cubic in 4 variables, quintic in 3 variables"
                )))
            }
        },
        a => a,
    };
    let mut notes = Vec::new();
    let dec = match algorithm {
        Algorithm::Binary => decompose_binary(
            f,
            &BinaryOptions {
                residual_tol: tol,
                ..Default::default()
            },
        )?,
        Algorithm::Pentahedral => {
            let (dec, witness) = decompose_pentahedral(
                f,
                seed,
                &PentahedralOptions {
                    residual_tol: tol,
                    ..Default::default()
                },
            )?;
            notes.push(format!(
                "witness: {} points / {} planes",
                witness.rank2_points.len(),
                witness.planes.len()
            ));
            dec
        }
        Algorithm::Quintic => decompose_quintic(
            f,
            seed,
            &QuinticOptions {
                residual_tol: tol,
                ..Default::default()
            },
        )?,
        Algorithm::Auto => unreachable!("resolved above"),
    };
    Ok((dec, notes))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose {
            input,
            algorithm,
            seed,
            tol,
            out,
        } => {
            let f = read_poly(&input)?;
            let (dec, mut notes) = decompose(&f, algorithm, seed, tol)?;
            let res = residual(&f, &dec)?;
            let certificate = match verify_canonical(&f, &dec, CERTIFICATE_RANK_TOL) {
                Ok(c) if c.passed => format!("certificate: passed (stacked rank {}/{})", c.stacked_rank, c.expected_rank),
                Ok(c) => format!("certificate: failed (stacked rank {}/{})", c.stacked_rank, c.expected_rank),
                Err(e) => format!("certificate: unavailable ({e})"),
            };
            notes.insert(0, format!("terms: {}", dec.len()));
            notes.insert(1, format!("residual: {res:e}"));
            notes.push(certificate);
            let to_file = emit(&DecompositionFile::new(&dec, res, seed).to_json(), &out)?;
            report(&notes, to_file);
        }
        Command::Tables { which, format, out } => {
            let kinds: Vec<TableKind> = match which {
                Which::Ver => vec![TableKind::Ver],
                Which::Grassmann => vec![TableKind::Grassmann],
                Which::SegreVeronese => vec![TableKind::SegreVeronese],
                Which::All => TableKind::ALL.to_vec(),
            };
            let text = match format {
                Format::Csv => kinds
                    .iter()
                    .map(|&k| table_csv(k))
                    .collect::<Result<Vec<_>, _>>()?
                    .join("\n"),
                Format::Json if kinds.len() == 1 => table_json(kinds[0])?,
                Format::Json => {
                    let docs = kinds
                        .iter()
                        .map(|&k| table_json(k))
                        .collect::<Result<Vec<_>, _>>()?;
                    format!("[\n{}\n]", docs.join(",\n"))
                }
            };
            emit(text.trim_end(), &out)?;
        }
        Command::Secant { variety, h, seed } => {
            let x: ParamVariety = variety.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            if h == 0 {
                return Err(Failure::Usage("--h must be at least 1".into()));
            }
            let expected = expected_secant_dim(x.dim() as u64, x.ambient_n()?, h as u64);
            let sampled = terracini_secant_dim(&x, h, seed)?;
            let verdict = if sampled < expected { "defective" } else { "not defective" };
            println!("expected {expected}, sampled {sampled}, {verdict}");
        }
        Command::Sample { input, h, seed, out } => {
            let f = read_poly(&input)?;
            let dec = sample_vsp(&f, h, seed)?;
            let res = residual(&f, &dec)?;
            let to_file = emit(&DecompositionFile::new(&dec, res, seed).to_json(), &out)?;
            report(&[format!("terms: {}", dec.len()), format!("residual: {res:e}")], to_file);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
