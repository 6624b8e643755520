use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use steklov_core::bounds::DEFAULT_DELTA;
use steklov_core::fem::{Coefficient, CoefficientField, ElementKind, DEFAULT_DEGREE};
use steklov_core::mesh::{generate, write_mesh, Domain};
use steklov_core::study::{default_levels, run_study, write_csv, StudyConfig, StudyTable};
use steklov_core::Error;

/// Corrected Crouzeix-Raviart eigenvalue bounds for the Steklov problem.
#[derive(Parser, Debug)]
#[command(name = "steklov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve and correct on a single refinement level.
    Solve(ProblemArgs),
    /// Refinement sweep with Richardson references and observed orders.
    Study(ProblemArgs),
    /// Pair the corrected values with a conforming P1 run: [lambda_c, lambda_P1].
    Bracket(ProblemArgs),
    /// Export a catalog mesh.
    Mesh(MeshArgs),
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// square, lshape, hexagon, cube or fichera.
    #[arg(long, value_parser = parse_domain)]
    domain: Domain,
    #[arg(long, default_value = "cr", value_parser = parse_element)]
    element: ElementKind,
    /// Refinement levels, `a..b` (inclusive) or a single level.
    #[arg(long, value_parser = parse_levels)]
    levels: Option<Levels>,
    /// Number of eigenvalues.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value = "const:1", value_parser = parse_coefficient)]
    alpha: Coefficient,
    #[arg(long, default_value = "const:1", value_parser = parse_coefficient)]
    beta: Coefficient,
    /// Lower bound of alpha used in the correction. Defaults to the bound
    /// derived from the descriptor over the domain's bounding box.
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    quad_degree: usize,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the eigensolver start block.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct MeshArgs {
    #[arg(long, value_parser = parse_domain)]
    domain: Domain,
    #[arg(long, default_value = "0", value_parser = parse_levels)]
    levels: Levels,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
struct Levels(Vec<u32>);

fn parse_domain(s: &str) -> Result<Domain, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_element(s: &str) -> Result<ElementKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_coefficient(s: &str) -> Result<Coefficient, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_levels(s: &str) -> Result<Levels, String> {
    let bad = || format!("invalid level range `{s}` (expected `a..b` or `n`)");
    let levels: Vec<u32> = match s.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?;
            (a..=b).collect()
        }
        None => vec![s.trim().parse().map_err(|_| bad())?],
    };
    if levels.is_empty() {
        return Err(bad());
    }
    Ok(Levels(levels))
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownDomain(_)
            | Error::InvalidCoefficient(_)
            | Error::InvalidArgument(_)
            | Error::UnsupportedQuadrature(_)
            | Error::CellCapExceeded { .. }
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `steklov --help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(args) => {
            let config = config(&args, args.element)?;
            if config.levels.len() != 1 {
                return Err(Failure::Usage("solve takes a single level".into()));
            }
            let table = finish(run_study(&config)?, args.out.as_ref())?;
            print_solve(&table);
            Ok(())
        }
        Command::Study(args) => {
            let config = config(&args, args.element)?;
            let table = finish(run_study(&config)?, args.out.as_ref())?;
            print_study(&table);
            Ok(())
        }
        Command::Bracket(args) => {
            if args.element == ElementKind::P1 {
                return Err(Failure::Usage(
                    "bracket pairs a cr or ecr run with p1".into(),
                ));
            }
            let lower = run_study(&config(&args, args.element)?)?;
            let upper = run_study(&config(&args, ElementKind::P1)?)?;
            if let Some(path) = &args.out {
                let mut file = BufWriter::new(File::create(path)?);
                write_csv(&lower, &mut file)?;
                let mut rest = Vec::new();
                write_csv(&upper, &mut rest)?;
                // one header for both tables
                let body = rest
                    .iter()
                    .position(|&b| b == b'\n')
                    .map_or(&rest[..0], |i| &rest[i + 1..]);
                file.write_all(body)?;
                file.flush()?;
            }
            print_bracket(&lower, &upper);
            for t in [&lower, &upper] {
                if let Some(f) = &t.failure {
                    return Err(Failure::Numerical(f.clone()));
                }
            }
            Ok(())
        }
        Command::Mesh(args) => {
            let Levels(levels) = &args.levels;
            if levels.len() != 1 {
                return Err(Failure::Usage("mesh takes a single level".into()));
            }
            let mesh = generate(args.domain, levels[0])?;
            match &args.out {
                Some(path) => write_mesh(&mesh, BufWriter::new(File::create(path)?))?,
                None => write_mesh(&mesh, io::stdout().lock())?,
            }
            eprintln!(
                "{} level {}: {} vertices, {} cells, h = {:.6e}",
                args.domain,
                levels[0],
                mesh.n_vertices(),
                mesh.n_cells(),
                mesh.diameter()
            );
            Ok(())
        }
    }
}

fn config(args: &ProblemArgs, element: ElementKind) -> Result<StudyConfig, Failure> {
    let bbox = args.domain.base_mesh().bounding_box();
    let alpha = CoefficientField::with_auto_bound(args.alpha.clone(), &bbox)?;
    let beta = CoefficientField::with_auto_bound(args.beta.clone(), &bbox)?;
    if args.k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    if element != ElementKind::P1 && !(args.delta > 1.0) {
        return Err(Failure::Usage(format!(
            "--delta must be > 1, got {}",
            args.delta
        )));
    }
    if let Some(a0) = args.alpha0 {
        if !(a0 > 0.0 && a0 <= alpha.lower_bound) {
            return Err(Failure::Usage(format!(
                "--alpha0 must lie in (0, {}], got {a0}",
                alpha.lower_bound
            )));
        }
    }
    let mut config = StudyConfig::new(args.domain, element);
    config.alpha = alpha;
    config.beta = beta;
    config.delta = args.delta;
    config.alpha0 = args.alpha0;
    config.levels = match &args.levels {
        Some(Levels(l)) => l.clone(),
        None => default_levels(args.domain),
    };
    config.k = args.k;
    config.quad_degree = args.quad_degree;
    config.seed = args.seed;
    Ok(config)
}

/// Writes the CSV if requested and turns a partial table into an error
/// after the completed levels have been saved and printed.
fn finish(table: StudyTable, out: Option<&PathBuf>) -> Result<StudyTable, Failure> {
    if let Some(path) = out {
        write_csv(&table, BufWriter::new(File::create(path)?))?;
    }
    if let Some(f) = &table.failure {
        print_study(&table);
        return Err(Failure::Numerical(f.clone()));
    }
    Ok(table)
}

fn header(t: &StudyTable) {
    println!(
        "{} {}  alpha = {}  beta = {}  delta = {}  alpha0 = {}",
        t.domain, t.element, t.alpha, t.beta, t.delta, t.alpha0
    );
}

fn print_solve(t: &StudyTable) {
    header(t);
    let level = &t.levels[0];
    println!(
        "level {}  h = {:.6e}  dofs = {}  t_solve = {:.3}s",
        level.level, level.h, level.n_dofs, level.t_solve_s
    );
    println!(
        "{:>3} {:>18} {:>12} {:>18} {:>18} {:>10}",
        "j", "lambda_h", "M", "lambda_c", "lambda_avg", "residual"
    );
    for (r, res) in t.rows.iter().zip(&level.residuals) {
        println!(
            "{:>3} {:>18.10} {:>12.4e} {:>18.10} {:>18.10} {:>10.2e}",
            r.j, r.lambda_h, r.m, r.lambda_c, r.lambda_avg, res
        );
    }
    println!("cluster sizes: {:?}", level.multiplicities);
}

fn print_study(t: &StudyTable) {
    header(t);
    println!(
        "{:>3} {:>5} {:>12} {:>9} {:>16} {:>11} {:>16} {:>7} {:>7} {:>9} {:>9}",
        "j",
        "level",
        "h",
        "dofs",
        "lambda_h",
        "M",
        "lambda_c",
        "ord_h",
        "ord_c",
        "t_solve",
        "t_corr"
    );
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:.3}")).unwrap_or_default();
    for r in &t.rows {
        println!(
            "{:>3} {:>5} {:>12.4e} {:>9} {:>16.10} {:>11.3e} {:>16.10} {:>7} {:>7} {:>9.3} {:>9.3}",
            r.j,
            r.level,
            r.h,
            r.n_dofs,
            r.lambda_h,
            r.m,
            r.lambda_c,
            fmt(r.order_h),
            fmt(r.order_c),
            r.t_solve_s,
            r.t_correct_s
        );
    }
    for j in 1..=t.k {
        if let Some(reference) = t.reference(j) {
            println!("j = {j}: Richardson reference {reference:.10}");
        }
    }
}

fn print_bracket(lower: &StudyTable, upper: &StudyTable) {
    println!(
        "{}  alpha = {}  beta = {}  delta = {}  alpha0 = {}",
        lower.domain, lower.alpha, lower.beta, lower.delta, lower.alpha0
    );
    println!(
        "{:>3} {:>5} {:>18} {:>18} {:>12} {:>4}",
        "j",
        "level",
        format!("lambda_c({})", lower.element),
        "lambda(p1)",
        "width",
        "ok"
    );
    for lo in &lower.rows {
        let Some(up) = upper
            .rows
            .iter()
            .find(|u| u.j == lo.j && u.level == lo.level)
        else {
            continue;
        };
        let ok = if lo.lambda_c <= up.lambda_h {
            "yes"
        } else {
            "no"
        };
        println!(
            "{:>3} {:>5} {:>18.10} {:>18.10} {:>12.4e} {:>4}",
            lo.j,
            lo.level,
            lo.lambda_c,
            up.lambda_h,
            up.lambda_h - lo.lambda_c,
            ok
        );
    }
}
