//! `bvp`: analyze, solve and perturb linear boundary-value problems described
//! in JSON.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bvp_core::continuity::{run_family_with, semicontinuity_check, two_sided_estimate_check};
use bvp_core::csv::{self, number};
use bvp_core::selftest::{run_selftest, DEFAULT_SEED};
use bvp_core::{charmat, io, solver, Error, Exponent, Grid, SolveOptions};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "bvp", version, about = "Linear ODE boundary-value problems with generic boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic matrix, rank and Fredholm numbers of a problem.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Solvability, solution and residuals of a problem.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Runs a parameter family over its schedule.
    Continuity {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Checks the assembled characteristic matrix against closed forms.
    Selftest {
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Args, Debug, Clone)]
struct Options {
    /// Number of RK4 steps (even).
    #[arg(long = "grid", default_value_t = 2000)]
    grid: usize,
    /// Singular values above this count toward the rank.
    #[arg(long = "rank-tol")]
    rank_tol: Option<f64>,
    /// Residual tolerance for reported solutions.
    #[arg(long = "tol-solve", default_value_t = 1e-6)]
    tol_solve: f64,
    /// Write the CSV here instead of after the summary on stdout.
    #[arg(long = "out")]
    out: Option<PathBuf>,
    /// Lebesgue exponent for reported norms: 1, 2 or inf.
    #[arg(long = "p")]
    p: Option<Exponent>,
}

impl Options {
    fn solve_options(&self) -> SolveOptions<f64> {
        SolveOptions {
            rank_tolerance: self.rank_tol,
            tol_solve: self.tol_solve,
            ..SolveOptions::default()
        }
    }
}

struct Output {
    summary: String,
    csv: Option<String>,
    ok: bool,
}

fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(out, "{key}: {value}").unwrap();
}

fn numbers(xs: &[f64]) -> String {
    xs.iter().map(|&x| number(x)).collect::<Vec<_>>().join(" ")
}

fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_else(|| "none".into())
}

fn analyze(file: &PathBuf, opts: &Options) -> Result<Output, Error> {
    let mut problem: bvp_core::BvProblem64 = io::read_problem(file)?;
    if let Some(p) = opts.p {
        problem.dims.p = p;
    }
    let grid = Grid::new(problem.interval, opts.grid)?;
    let m = charmat::characteristic_matrix(&problem, &grid, opts.rank_tol)?;
    let f = charmat::fredholm_numbers(&m, &problem.dims)?;
    let d = problem.dims;
    let mut s = String::new();
    line(&mut s, "command", "analyze");
    line(&mut s, "grid_steps", opts.grid);
    line(&mut s, "dims", format!("m={} r={} n={} l={} p={}", d.m, d.r, d.n, d.l, d.p));
    line(&mut s, "rank_tolerance", number(m.rank_tolerance()));
    line(&mut s, "rank", m.rank());
    line(&mut s, "index", f.index);
    line(&mut s, "dim_ker", f.dim_ker);
    line(&mut s, "dim_coker", f.dim_coker);
    line(&mut s, "invertible", charmat::is_invertible(&m, &d));
    line(&mut s, "singular_values", numbers(m.singular_values()));
    Ok(Output {
        summary: s,
        csv: Some(csv::characteristic_matrix(&m)),
        ok: true,
    })
}

fn solve(file: &PathBuf, opts: &Options) -> Result<Output, Error> {
    let mut problem: bvp_core::BvProblem64 = io::read_problem(file)?;
    if let Some(p) = opts.p {
        problem.dims.p = p;
    }
    let grid = Grid::new(problem.interval, opts.grid)?;
    let report = solver::solve_with(&problem, &grid, &opts.solve_options())?;
    let mut s = String::new();
    line(&mut s, "command", "solve");
    line(&mut s, "grid_steps", opts.grid);
    line(&mut s, "rank_tolerance", number(report.characteristic.rank_tolerance()));
    line(&mut s, "tol_solve", number(opts.tol_solve));
    line(&mut s, "p", problem.dims.p);
    line(&mut s, "status", report.status);
    line(&mut s, "index", report.fredholm.index);
    line(&mut s, "dim_ker", report.fredholm.dim_ker);
    line(&mut s, "dim_coker", report.fredholm.dim_coker);
    line(&mut s, "singular_values", numbers(report.characteristic.singular_values()));
    line(&mut s, "consistency_residual", number(report.consistency_residual));
    line(&mut s, "ode_residual", optional(report.ode_residual));
    line(&mut s, "boundary_residual", optional(report.boundary_residual));
    if report.solution.is_some() {
        line(&mut s, "within_tolerance", report.within_tolerance());
    }
    Ok(Output {
        summary: s,
        csv: report.solution.as_ref().map(csv::trajectory),
        ok: true,
    })
}

fn continuity(file: &PathBuf, opts: &Options) -> Result<Output, Error> {
    let mut family: bvp_core::ProblemFamily64 = io::read_family(file)?;
    if let Some(p) = opts.p {
        family.base.dims.p = p;
    }
    let grid = Grid::new(family.base.interval, opts.grid)?;
    let report = run_family_with(&family, &grid, &opts.solve_options())?;
    let c = &report.conditions;
    let mut s = String::new();
    line(&mut s, "command", "continuity");
    line(&mut s, "grid_steps", opts.grid);
    line(&mut s, "p", family.base.dims.p);
    line(&mut s, "schedule_length", report.entries.len());
    line(&mut s, "base_status", report.base_status);
    line(&mut s, "base_dim_ker", report.base_fredholm.dim_ker);
    line(&mut s, "base_dim_coker", report.base_fredholm.dim_coker);
    line(&mut s, "base_singular_values", numbers(&report.base_singular_values));
    line(&mut s, "condition_trivial_kernel", c.trivial_kernel);
    line(&mut s, "condition_coefficients_converge", c.coefficients_converge);
    line(&mut s, "condition_boundary_converges", c.boundary_converges);
    line(&mut s, "conditions_hold", c.all_hold());
    line(&mut s, "gamma_lower", optional(report.gamma_lower));
    line(&mut s, "gamma_upper", optional(report.gamma_upper));
    match two_sided_estimate_check(&report) {
        Ok(est) => {
            line(&mut s, "tail_spread", number(est.tail_spread));
            line(&mut s, "spread_change", number(est.spread_change));
            line(&mut s, "two_sided_estimate", if est.pass { "pass" } else { "fail" });
        }
        Err(e) => line(&mut s, "two_sided_estimate", format!("unavailable ({e})")),
    }
    let semi = semicontinuity_check(&report, &report.base_fredholm);
    line(
        &mut s,
        "semicontinuity",
        if semi.iter().all(|v| v.pass) { "pass" } else { "fail" },
    );
    let tail_unique = report
        .tail()
        .iter()
        .all(|e| e.status == bvp_core::SolveStatus::Unique);
    line(&mut s, "tail_unique", tail_unique);
    Ok(Output {
        summary: s,
        csv: Some(csv::continuity(&report)),
        ok: true,
    })
}

fn selftest(opts: &Options) -> Result<Output, Error> {
    let outcomes = run_selftest(DEFAULT_SEED, opts.grid)?;
    let mut s = String::new();
    line(&mut s, "command", "selftest");
    line(&mut s, "grid_steps", opts.grid);
    line(&mut s, "seed", DEFAULT_SEED);
    for o in &outcomes {
        writeln!(s, "{o}").unwrap();
    }
    let ok = outcomes.iter().all(|o| o.passed);
    line(&mut s, "result", if ok { "pass" } else { "fail" });
    Ok(Output {
        summary: s,
        csv: None,
        ok,
    })
}

fn emit(output: Output, out_path: Option<&PathBuf>) -> Result<(), Error> {
    let stdout_error = |e: std::io::Error| Error::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(output.summary.as_bytes()).map_err(stdout_error)?;
    if let Some(csv) = output.csv {
        match out_path {
            Some(path) => std::fs::write(path, csv).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?,
            None => {
                stdout.write_all(b"\n").map_err(stdout_error)?;
                stdout.write_all(csv.as_bytes()).map_err(stdout_error)?;
            }
        }
    }
    stdout.flush().map_err(stdout_error)
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
    let (result, out) = match &cli.command {
        Command::Analyze { file, opts } => (analyze(file, opts), opts.out.as_ref()),
        Command::Solve { file, opts } => (solve(file, opts), opts.out.as_ref()),
        Command::Continuity { file, opts } => (continuity(file, opts), opts.out.as_ref()),
        Command::Selftest { opts } => (selftest(opts), opts.out.as_ref()),
    };
    let result = result.and_then(|o| {
        let ok = o.ok;
        emit(o, out).map(|_| ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // a closed pipe downstream is not a failure of the computation
        Err(Error::Io { path, .. }) if path == "<stdout>" => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
