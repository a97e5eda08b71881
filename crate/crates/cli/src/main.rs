//! `qc` — grid quasi-copula toolbox.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage or I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quasicopula::axioms::{self, DEFAULT_TOL};
use quasicopula::extension::{self, BoundSide, SubQuasiCopula};
use quasicopula::grid::{GridFunction, Mesh, NBox};
use quasicopula::patchwork;
use quasicopula::qgf;
use quasicopula::report::CheckReport;
use quasicopula::{examples, Error};

#[derive(Parser)]
#[command(name = "qc", version, about = "Multivariate quasi-copula patchwork toolbox")]
struct Cli {
    /// Cap the number of worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the quasi-copula axioms of a QGF grid
    Check {
        file: PathBuf,
        /// Additionally require nonnegative volume on every mesh cell
        #[arg(long)]
        copula: bool,
        /// Absolute tolerance for all checks
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Signed volume of an axis-aligned box under a QGF grid
    Volume {
        file: PathBuf,
        /// Box endpoints a1,b1,a2,b2,...
        #[arg(long = "box", value_delimiter = ',', allow_negative_numbers = true)]
        bounds: Vec<f64>,
    },
    /// Combine prescribed upper-face quasi-copulas on the unit cube
    #[command(name = "stepI")]
    StepI {
        /// The n face files f1.qgf,...,fn.qgf (each of dimension n-1)
        #[arg(long, value_delimiter = ',', required = true)]
        faces: Vec<PathBuf>,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Patch constructions from a boundary directory
    Patch {
        /// Directory holding box.json and F1.qgf, F1p.qgf, ..., Fnp.qgf
        #[arg(long)]
        boundary: PathBuf,
        #[arg(long, value_enum)]
        emit: Emit,
        /// Combining quasi-copula for --emit P (default: the lower Step-I
        /// combination of the Sklar factors)
        #[arg(long)]
        q: Option<PathBuf>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Sklar-type factorization of a boundary's patch difference
    Sklar {
        #[arg(long)]
        boundary: PathBuf,
        /// Output directory for Q1..Qn.qgf and the normalized margins
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Extend a sub-quasi-copula to the whole cube
    Extend {
        domain: PathBuf,
        subqc: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Parts per gap interval in the output mesh
        #[arg(long, default_value_t = 8)]
        refine: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Reference grids and the 3-d counterexample reproduction
    Example {
        #[arg(value_enum)]
        kind: ExampleKind,
        /// Dimension for the reference generators
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Nodes per axis
        #[arg(long, default_value_t = 33)]
        grid: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Upper,
    Lower,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "G")]
    G,
    #[value(name = "P")]
    P,
    #[value(name = "bounds")]
    Bounds,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleKind {
    #[value(name = "W")]
    W,
    #[value(name = "M")]
    M,
    #[value(name = "Pi")]
    Pi,
    #[value(name = "old3d")]
    Old3d,
    Counterexample,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Failures of the data (violated axioms, incompatible boundaries,
/// degenerate volumes) exit 1; malformed files and misuse exit 2.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::AxiomViolation(_)
        | Error::BoundaryViolation(_)
        | Error::NonMonotoneMargin { .. }
        | Error::DegenerateVolume { .. }
        | Error::Internal(_) => 1,
        _ => 2,
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Check {
            file,
            copula,
            tol,
            json,
        } => check(&file, copula, tol, json),
        Command::Volume { file, bounds } => volume(&file, &bounds),
        Command::StepI {
            faces,
            mode,
            output,
        } => step_i(&faces, mode, &output),
        Command::Patch {
            boundary,
            emit,
            q,
            output,
        } => patch(&boundary, emit, q.as_deref(), &output),
        Command::Sklar { boundary, output } => sklar(&boundary, &output),
        Command::Extend {
            domain,
            subqc,
            mode,
            refine,
            output,
        } => extend(&domain, &subqc, mode, refine, &output),
        Command::Example {
            kind,
            n,
            grid,
            output,
        } => example(kind, n, grid, output.as_deref()),
    }
}

fn check(file: &Path, copula: bool, tol: f64, json: bool) -> Result<u8, Error> {
    let f = qgf::load_qgf(file)?;
    let report = if copula {
        axioms::is_copula(&f, tol)
    } else {
        axioms::is_quasi_copula(&f, tol)
    };
    if json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        let mut parts: Vec<(&str, CheckReport)> = vec![
            ("grounded", axioms::check_grounded(&f, tol)),
            ("neutral", axioms::check_neutral(&f, tol)),
            ("increasing", axioms::check_increasing(&f, tol)),
            ("1-lipschitz", axioms::check_lipschitz(&f, tol)),
        ];
        if copula {
            let mut cells = axioms::is_copula(&f, tol);
            cells.violations.retain(|v| {
                v.kind == quasicopula::ViolationKind::CellVolume
            });
            cells.total_violations = cells.violations.len();
            cells.passed = cells.violations.is_empty();
            parts.push(("cell volumes", cells));
        }
        for (name, part) in &parts {
            if part.passed {
                println!("{name}: ok");
            } else {
                match part.first() {
                    Some(v) => println!("{name}: {v} ({} total)", part.total_violations),
                    None => println!("{name}: FAIL"),
                }
            }
        }
        println!("result: {}", if report.passed { "PASS" } else { "FAIL" });
    }
    Ok(u8::from(!report.passed))
}

fn volume(file: &Path, bounds: &[f64]) -> Result<u8, Error> {
    let f = qgf::load_qgf(file)?;
    if bounds.len() != 2 * f.ndim() {
        return Err(Error::Precondition(format!(
            "--box needs {} numbers (a1,b1,...), got {}",
            2 * f.ndim(),
            bounds.len()
        )));
    }
    let a = bounds.iter().step_by(2).copied().collect();
    let b = bounds.iter().skip(1).step_by(2).copied().collect();
    let v = axioms::box_volume(&f, &NBox::new(a, b)?)?;
    println!("{v}");
    Ok(0)
}

fn step_i(faces: &[PathBuf], mode: Mode, output: &Path) -> Result<u8, Error> {
    let grids = faces
        .iter()
        .map(|p| qgf::load_qgf(p))
        .collect::<Result<Vec<_>, _>>()?;
    match mode {
        Mode::Upper => write_grid(&patchwork::step_i_upper(&grids, DEFAULT_TOL)?, output)?,
        Mode::Lower => write_grid(&patchwork::step_i_lower(&grids, DEFAULT_TOL)?, output)?,
        Mode::Both => {
            write_grid(
                &patchwork::step_i_upper(&grids, DEFAULT_TOL)?,
                &tagged(output, "upper"),
            )?;
            write_grid(
                &patchwork::step_i_lower(&grids, DEFAULT_TOL)?,
                &tagged(output, "lower"),
            )?;
        }
    }
    Ok(0)
}

fn patch(boundary: &Path, emit: Emit, q: Option<&Path>, output: &Path) -> Result<u8, Error> {
    let bs = qgf::load_boundary_dir(boundary)?;
    match emit {
        Emit::A => write_grid(&patchwork::additive_patch_a(&bs)?, output)?,
        Emit::B => write_grid(&patchwork::additive_patch_b(&bs)?, output)?,
        Emit::G => write_grid(&patchwork::patch_difference_g(&bs)?.g, output)?,
        Emit::P => {
            let pc = patchwork::patch_difference_g(&bs)?;
            let combining = match q {
                Some(path) => qgf::load_qgf(path)?,
                None => patchwork::sklar_factorize(&pc, DEFAULT_TOL)?.combined,
            };
            write_grid(&patchwork::conjectured_patch_p(&pc, &combining)?, output)?;
        }
        Emit::Bounds => {
            let (upper, lower) = patchwork::local_patch_bounds(&bs)?;
            write_grid(&upper, &tagged(output, "upper"))?;
            write_grid(&lower, &tagged(output, "lower"))?;
        }
    }
    Ok(0)
}

fn sklar(boundary: &Path, output: &Path) -> Result<u8, Error> {
    let bs = qgf::load_boundary_dir(boundary)?;
    let pc = patchwork::patch_difference_g(&bs)?;
    let sk = patchwork::sklar_factorize(&pc, DEFAULT_TOL)?;
    std::fs::create_dir_all(output)?;
    for (k, factor) in sk.factors.iter().enumerate() {
        write_grid(factor, &output.join(format!("Q{}.qgf", k + 1)))?;
    }
    for (k, margin) in sk.margins.iter().enumerate() {
        write_grid(margin, &output.join(format!("M{}.qgf", k + 1)))?;
    }
    Ok(0)
}

fn extend(
    domain_path: &Path,
    subqc: &Path,
    mode: Mode,
    refine: usize,
    output: &Path,
) -> Result<u8, Error> {
    let domain = qgf::load_domain(domain_path)?;
    let values = qgf::load_qgf(subqc)?;
    let sq = SubQuasiCopula::new(domain, values)?;
    match mode {
        Mode::Upper => write_grid(
            &extension::extend_sub_quasi_copula(&sq, BoundSide::Upper, refine)?,
            output,
        )?,
        Mode::Lower => write_grid(
            &extension::extend_sub_quasi_copula(&sq, BoundSide::Lower, refine)?,
            output,
        )?,
        Mode::Both => {
            let upper = extension::extend_sub_quasi_copula(&sq, BoundSide::Upper, refine)?;
            let lower = extension::extend_sub_quasi_copula(&sq, BoundSide::Lower, refine)?;
            if let Some(flat) = (0..upper.mesh().node_count())
                .find(|&i| lower.value_flat(i) > upper.value_flat(i) + DEFAULT_TOL)
            {
                return Err(Error::Internal(format!(
                    "extensions out of order at node {:?}",
                    upper.mesh().multi_index(flat)
                )));
            }
            write_grid(&upper, &tagged(output, "upper"))?;
            write_grid(&lower, &tagged(output, "lower"))?;
        }
    }
    Ok(0)
}

fn example(kind: ExampleKind, n: usize, grid: usize, output: Option<&Path>) -> Result<u8, Error> {
    if let ExampleKind::Counterexample = kind {
        let report = examples::reproduce_counterexample(grid)?;
        println!("{report}");
        return Ok(u8::from(!report.passed));
    }
    let f = match kind {
        ExampleKind::W => examples::make_frechet_w(Mesh::uniform(n, grid)?),
        ExampleKind::M => examples::make_frechet_m(Mesh::uniform(n, grid)?),
        ExampleKind::Pi => examples::make_product_pi(Mesh::uniform(n, grid)?),
        ExampleKind::Old3d => examples::make_example_old3d(Mesh::uniform(3, grid)?)?,
        ExampleKind::Counterexample => unreachable!(),
    };
    let output = output.ok_or_else(|| {
        Error::Precondition("-o <file.qgf> is required for the generators".into())
    })?;
    write_grid(&f, output)?;
    Ok(0)
}

fn write_grid(f: &GridFunction, path: &Path) -> Result<(), Error> {
    qgf::save_qgf(f, path)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `out.qgf` -> `out.upper.qgf` for two-file modes.
fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("qgf");
    path.with_file_name(format!("{stem}.{tag}.{ext}"))
}
