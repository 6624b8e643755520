//! Refinement studies: solve and correct on a sequence of uniform
//! refinements, estimate limits by Richardson extrapolation and report
//! observed convergence orders.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use crate::assembly::{assemble, build_dofmap};
use crate::bounds::{compute_m, CorrectionParams, CorrectionReport, DEFAULT_DELTA};
use crate::fem::{CoefficientField, ElementKind, DEFAULT_DEGREE};
use crate::gevp::{solve_smallest_with, SolveOptions, DEFAULT_TOL};
use crate::mesh::{generate, Domain};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 17] = [
    "domain",
    "element",
    "alpha",
    "beta",
    "delta",
    "level",
    "h",
    "n_dofs",
    "j",
    "lambda_h",
    "M",
    "lambda_c",
    "lambda_avg",
    "order_h",
    "order_c",
    "t_solve_s",
    "t_correct_s",
];

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub domain: Domain,
    pub element: ElementKind,
    pub alpha: CoefficientField,
    pub beta: CoefficientField,
    pub delta: f64,
    /// Defaults to the declared lower bound of `alpha`.
    pub alpha0: Option<f64>,
    pub levels: Vec<u32>,
    pub k: usize,
    pub quad_degree: usize,
    pub tol: f64,
    pub seed: Option<u64>,
}

impl StudyConfig {
    /// `alpha = beta = 1` over the default levels of `domain`.
    pub fn new(domain: Domain, element: ElementKind) -> Self {
        let one = CoefficientField::constant(1.0).expect("positive constant");
        Self {
            domain,
            element,
            alpha: one.clone(),
            beta: one,
            delta: DEFAULT_DELTA,
            alpha0: None,
            levels: default_levels(domain),
            k: 1,
            quad_degree: DEFAULT_DEGREE,
            tol: DEFAULT_TOL,
            seed: None,
        }
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0.unwrap_or(self.alpha.lower_bound)
    }

    pub fn correction_params(&self) -> CorrectionParams {
        CorrectionParams {
            delta: self.delta,
            alpha0: self.alpha0(),
            quad_degree: self.quad_degree,
        }
    }
}

/// Levels whose mesh sizes run from `h0/32` to `h0/512` in 2D, and levels
/// 1 to 4 in 3D.
pub fn default_levels(domain: Domain) -> Vec<u32> {
    match domain {
        Domain::Square => (5..=9).collect(),
        Domain::LShape | Domain::Hexagon => (4..=8).collect(),
        Domain::Cube | Domain::Fichera => (1..=4).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub level: u32,
    pub h: f64,
    pub n_dofs: usize,
    /// 1-based eigenvalue index.
    pub j: usize,
    pub lambda_h: f64,
    pub m: f64,
    pub lambda_c: f64,
    pub lambda_avg: f64,
    pub order_h: Option<f64>,
    pub order_c: Option<f64>,
    pub t_solve_s: f64,
    pub t_correct_s: f64,
}

/// Solver diagnostics of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSummary {
    pub level: u32,
    pub h: f64,
    pub n_dofs: usize,
    pub residuals: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub t_solve_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyTable {
    pub domain: Domain,
    pub element: ElementKind,
    pub alpha: String,
    pub beta: String,
    pub delta: f64,
    pub alpha0: f64,
    pub k: usize,
    /// Sorted by `(j, level)`.
    pub rows: Vec<StudyRow>,
    pub levels: Vec<LevelSummary>,
    /// Set when a level failed; rows then cover the levels before it.
    pub failure: Option<String>,
}

impl StudyTable {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }

    /// Rows of eigenvalue `j` (1-based) in level order.
    pub fn column(&self, j: usize) -> Vec<&StudyRow> {
        self.rows.iter().filter(|r| r.j == j).collect()
    }

    pub fn lambda_h(&self, j: usize) -> Vec<f64> {
        self.column(j).iter().map(|r| r.lambda_h).collect()
    }

    pub fn lambda_c(&self, j: usize) -> Vec<f64> {
        self.column(j).iter().map(|r| r.lambda_c).collect()
    }

    /// Richardson extrapolation of `lambda_h` from the two finest levels.
    pub fn reference(&self, j: usize) -> Option<f64> {
        let l = self.lambda_h(j);
        match l.len() {
            0 | 1 => None,
            n => Some(richardson(l[n - 2], l[n - 1])),
        }
    }
}

/// `(4 lambda_fine - lambda_coarse) / 3`
pub fn richardson(lambda_coarse: f64, lambda_fine: f64) -> f64 {
    (4.0 * lambda_fine - lambda_coarse) / 3.0
}

/// `log2(err_coarse / err_fine)`
pub fn convergence_order(err_coarse: f64, err_fine: f64) -> Result<f64> {
    if !(err_coarse > 0.0 && err_fine > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "errors must be positive, got {err_coarse} and {err_fine}"
        )));
    }
    Ok((err_coarse / err_fine).log2())
}

/// Order from three consecutive levels, using differences as error proxies.
pub fn observed_order(a: f64, b: f64, c: f64) -> Option<f64> {
    convergence_order((a - b).abs(), (b - c).abs()).ok()
}

pub fn run_study(config: &StudyConfig) -> Result<StudyTable> {
    if config.levels.is_empty() || config.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "levels must be nonempty and ascending".into(),
        ));
    }
    if config.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let params = config.correction_params();
    if config.element != ElementKind::P1 && !(params.delta > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be > 1, got {}",
            params.delta
        )));
    }

    let mut table = StudyTable {
        domain: config.domain,
        element: config.element,
        alpha: config.alpha.descriptor(),
        beta: config.beta.descriptor(),
        delta: config.delta,
        alpha0: params.alpha0,
        k: config.k,
        rows: Vec::new(),
        levels: Vec::new(),
        failure: None,
    };
    let mut per_level: Vec<Vec<StudyRow>> = Vec::new();
    for &level in &config.levels {
        match run_level(config, &params, level) {
            Ok((summary, rows)) => {
                table.levels.push(summary);
                per_level.push(rows);
            }
            Err(e) => {
                table.failure = Some(format!("level {level}: {e}"));
                break;
            }
        }
    }

    for j in 1..=config.k {
        let mut col: Vec<StudyRow> = per_level.iter().map(|rows| rows[j - 1].clone()).collect();
        for i in 2..col.len() {
            col[i].order_h =
                observed_order(col[i - 2].lambda_h, col[i - 1].lambda_h, col[i].lambda_h);
            col[i].order_c =
                observed_order(col[i - 2].lambda_c, col[i - 1].lambda_c, col[i].lambda_c);
        }
        table.rows.extend(col);
    }
    Ok(table)
}

fn run_level(
    config: &StudyConfig,
    params: &CorrectionParams,
    level: u32,
) -> Result<(LevelSummary, Vec<StudyRow>)> {
    let start = Instant::now();
    let mesh = generate(config.domain, level)?;
    let dofmap = build_dofmap(&mesh, config.element);
    let system = assemble(
        &mesh,
        &dofmap,
        &config.alpha,
        &config.beta,
        config.quad_degree,
    )?
    .with_origin(config.domain, level);
    let opts = SolveOptions {
        tol: config.tol,
        seed: config.seed,
        ..Default::default()
    };
    let solution = solve_smallest_with(&system, config.k, &opts)?;
    let t_solve = start.elapsed().as_secs_f64();
    let h = mesh.diameter();

    let mut rows = Vec::with_capacity(config.k);
    for (j, pair) in solution.pairs.iter().enumerate() {
        let start = Instant::now();
        let mass = compute_m(
            &mesh,
            &dofmap,
            &pair.vector,
            &config.alpha,
            &config.beta,
            params,
        )?;
        let report = CorrectionReport::new(pair.lambda, mass, params)?;
        let t_correct = start.elapsed().as_secs_f64();
        rows.push(StudyRow {
            level,
            h,
            n_dofs: dofmap.n_dofs,
            j: j + 1,
            lambda_h: report.lambda_h,
            m: report.m,
            lambda_c: report.lambda_c,
            lambda_avg: report.lambda_avg,
            order_h: None,
            order_c: None,
            t_solve_s: t_solve,
            t_correct_s: t_correct,
        });
    }
    let summary = LevelSummary {
        level,
        h,
        n_dofs: dofmap.n_dofs,
        multiplicities: solution.multiplicities(),
        residuals: solution.residuals,
        t_solve_s: t_solve,
    };
    Ok((summary, rows))
}

pub fn emit_csv(table: &StudyTable, path: impl AsRef<Path>) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_csv(table, file)
}

pub fn write_csv<W: Write>(table: &StudyTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let f = |x: f64| format!("{x:.16e}");
    let opt = |x: Option<f64>| x.map(f).unwrap_or_default();
    for r in &table.rows {
        w.write_record([
            table.domain.name().to_string(),
            table.element.name().to_string(),
            table.alpha.clone(),
            table.beta.clone(),
            f(table.delta),
            r.level.to_string(),
            f(r.h),
            r.n_dofs.to_string(),
            r.j.to_string(),
            f(r.lambda_h),
            f(r.m),
            f(r.lambda_c),
            f(r.lambda_avg),
            opt(r.order_h),
            opt(r.order_c),
            f(r.t_solve_s),
            f(r.t_correct_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}
