use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cdara::eval::{
    emit_surface, error_table, format_error_table, residual_check, verify_transforms,
    write_error_table_csv, write_surface, Example, Grid, SurfaceSource, TABLE_T_VALUES,
};
use cdara::solver::{solve, ProblemSpec, DEFAULT_ORDER};
use cdara::{Error, FracParams, Result};

#[derive(Parser)]
#[command(
    name = "cdara",
    version,
    about = "Conformable double ARA decomposition for coupled Burgers' systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Built-in problem (1 or 2)
    #[arg(long, conflicts_with = "spec")]
    example: Option<u32>,
    /// ProblemSpec JSON file
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Highest component index N
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print the series components
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Emit JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Error table along a line of fixed x
    Table {
        #[arg(long)]
        example: u32,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        t_steps: Option<usize>,
        /// Also write the table as CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV solution surface for one or more (p, q) pairs
    Surface {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Comma-separated p values
        #[arg(long, value_delimiter = ',', default_value = "1")]
        p: Vec<f64>,
        /// Comma-separated q values, paired with p (a single value is broadcast)
        #[arg(long, value_delimiter = ',', default_value = "1")]
        q: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        x_min: f64,
        #[arg(long, default_value_t = 3.0)]
        x_max: f64,
        #[arg(long, default_value_t = 30)]
        x_steps: usize,
        #[arg(long, default_value_t = 0.5)]
        t_min: f64,
        #[arg(long, default_value_t = 0.5)]
        t_max: f64,
        #[arg(long, default_value_t = 1)]
        t_steps: usize,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the transform table symbolically and numerically
    VerifyTransforms {
        #[arg(long, default_value = "transform_report.txt")]
        out: PathBuf,
    },
    /// Numeric PDE residual of the partial sum
    Residual {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long, default_value_t = 0.3)]
        t: f64,
    },
}

fn load_problem(args: &ProblemArgs) -> Result<(ProblemSpec, Option<Example>)> {
    match (&args.spec, args.example) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Ok((ProblemSpec::from_json(&text)?, None))
        }
        (None, Some(i)) => {
            let ex = Example::from_index(i)?;
            Ok((ex.spec(), Some(ex)))
        }
        (None, None) => Err(Error::InvalidProblem("pass --example or --spec".into())),
    }
}

fn pair_params(p: &[f64], q: &[f64]) -> Result<Vec<FracParams>> {
    let n = p.len().max(q.len());
    let pick = |v: &[f64], i: usize| {
        if v.len() == 1 {
            Some(v[0])
        } else {
            v.get(i).copied()
        }
    };
    (0..n)
        .map(|i| match (pick(p, i), pick(q, i)) {
            (Some(pi), Some(qi)) => FracParams::new(pi, qi),
            _ => Err(Error::InvalidProblem(format!(
                "--p has {} values and --q has {}; lengths must match or one must be 1",
                p.len(),
                q.len()
            ))),
        })
        .collect()
}

fn table_times(t_min: Option<f64>, t_max: Option<f64>, t_steps: Option<usize>) -> Vec<f64> {
    if t_min.is_none() && t_max.is_none() && t_steps.is_none() {
        return TABLE_T_VALUES.to_vec();
    }
    let grid = Grid {
        x_min: 0.0,
        x_max: 0.0,
        x_steps: 1,
        t_min: t_min.unwrap_or(0.1),
        t_max: t_max.unwrap_or(0.5),
        t_steps: t_steps.unwrap_or(9),
    };
    grid.ts()
}

fn write_stdout(text: &str) -> Result<()> {
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { problem, json } => {
            let (spec, _) = load_problem(&problem)?;
            let sol = solve(&spec, problem.order)?;
            if json {
                let doc = serde_json::json!({
                    "u": sol.u_components.as_slice(),
                    "v": sol.v_components.as_slice(),
                    "terminated_at": sol.terminated_at,
                });
                write_stdout(&format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            } else {
                let mut out = String::new();
                for (n, (u, v)) in sol
                    .u_components
                    .iter()
                    .zip(sol.v_components.iter())
                    .enumerate()
                {
                    out.push_str(&format!("u{n} = {u}\nv{n} = {v}\n"));
                }
                let (u, v) = sol.partial_sum(sol.order())?;
                out.push_str(&format!("sum u = {u}\nsum v = {v}\n"));
                match sol.terminated_at {
                    Some(n) => out.push_str(&format!("terminated at {n}\n")),
                    None => out.push_str("not terminated\n"),
                }
                write_stdout(&out)?;
            }
        }
        Command::Table {
            example,
            order,
            x,
            p,
            q,
            t_min,
            t_max,
            t_steps,
            out,
        } => {
            let ex = Example::from_index(example)?;
            let params = FracParams::new(p, q)?;
            let rows = error_table(ex, order, x, &table_times(t_min, t_max, t_steps), params)?;
            write_stdout(&format_error_table(&rows))?;
            if let Some(path) = out {
                let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
                write_error_table_csv(&rows, BufWriter::new(file))?;
            }
        }
        Command::Surface {
            problem,
            p,
            q,
            x_min,
            x_max,
            x_steps,
            t_min,
            t_max,
            t_steps,
            out,
        } => {
            let (spec, example) = load_problem(&problem)?;
            let source = match example {
                Some(ex) => SurfaceSource::Example(ex),
                None => SurfaceSource::Spec(spec),
            };
            let pairs = pair_params(&p, &q)?;
            let grid = Grid {
                x_min,
                x_max,
                x_steps,
                t_min,
                t_max,
                t_steps,
            };
            match out {
                Some(path) => emit_surface(&source, &pairs, &grid, problem.order, &path)?,
                None => write_surface(&source, &pairs, &grid, problem.order, io::stdout().lock())?,
            }
        }
        Command::VerifyTransforms { out } => {
            let report = verify_transforms(Path::new(&out))?;
            write_stdout(&report.render())?;
            if !report.all_passed() {
                return Err(Error::InvalidProblem("transform table check failed".into()));
            }
        }
        Command::Residual {
            problem,
            p,
            q,
            x,
            t,
        } => {
            let (spec, _) = load_problem(&problem)?;
            let params = FracParams::new(p, q)?;
            let sol = solve(&spec, problem.order)?;
            let r = residual_check(&spec, &sol, params, &[(x, t)])?;
            write_stdout(&format!("{}\n", cdara::format::fmt_g(r, 6)))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
