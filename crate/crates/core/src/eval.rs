//! Evaluation front end: exact reference solutions, error tables, PDE
//! residuals with numeric conformable derivatives, CSV surfaces and the
//! transform verification report.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::ara::{
    check_derivative_identity, check_mixed_identity, check_shift_identity, double_ara,
    numeric_double_ara_expr, DerivativeIdentity, MixedIdentity, QuadratureConfig, ShiftIdentity,
};
use crate::conformable::{conformable_dt_numeric, conformable_dx_numeric, FracParams};
use crate::error::{Error, Result};
use crate::expr::{Complex, Expression};
use crate::format::{fmt_g, fmt_plain};
use crate::solver::{partial_sum, solve, Geometry, ProblemSpec, SeriesSolution};

/// The nine sample times of the reference error tables.
pub const TABLE_T_VALUES: [f64; 9] = [0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];

/// Central-difference step for [`residual_check`]. The second derivative is
/// a nested difference, so rounding error scales like `ε/step²`.
pub const RESIDUAL_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    One,
    Two,
}

impl Example {
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            1 => Ok(Example::One),
            2 => Ok(Example::Two),
            _ => Err(Error::InvalidProblem(format!(
                "unknown example {i}; expected 1 or 2"
            ))),
        }
    }

    pub fn spec(self) -> ProblemSpec {
        match self {
            Example::One => ProblemSpec::example1(),
            Example::Two => ProblemSpec::example2(),
        }
    }

    /// Closed-form solution `(u, v)` in stretched coordinates.
    pub fn exact_stretched(self, big_x: f64, big_t: f64) -> (f64, f64) {
        let u = match self {
            Example::One => (-big_t).exp() * big_x.sin(),
            Example::Two => big_x * big_x * big_t.exp(),
        };
        (u, u)
    }
}

/// Exact `(u, v)` at a physical point for the given orders.
pub fn exact_oracle(
    example: Example,
    params: FracParams,
) -> impl Fn(f64, f64) -> Result<(f64, f64)> {
    move |x, t| {
        let (big_x, big_t) = params.to_stretched(x, t)?;
        Ok(example.exact_stretched(big_x, big_t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTableRow {
    pub t: f64,
    pub exact: f64,
    pub approx: f64,
    pub abs_error: f64,
}

/// Error of the order-`n` approximation `u_n` along a line of fixed `x`.
///
/// `u_n` is the partial sum through index `n` expanded in powers of the time
/// coordinate and truncated at degree `n`. For a series whose components are
/// homogeneous in `T` (Example 1) this is the plain partial sum; when the
/// decomposition terminates on a closed form (Example 2) it is the degree-`n`
/// time expansion of that closed form.
pub fn error_table(
    example: Example,
    order: usize,
    x: f64,
    t_values: &[f64],
    params: FracParams,
) -> Result<Vec<ErrorTableRow>> {
    let sol = solve(&example.spec(), order)?;
    let (u, _) = partial_sum(&sol, order)?;
    let approx_expr = u.truncate_t_degree(order as u32);
    let exact = exact_oracle(example, params);
    t_values
        .iter()
        .map(|&t| {
            let (big_x, big_t) = params.to_stretched(x, t)?;
            let exact_u = exact(x, t)?.0;
            let approx = approx_expr.evaluate(big_x, big_t)?;
            Ok(ErrorTableRow {
                t,
                exact: exact_u,
                approx,
                abs_error: (exact_u - approx).abs(),
            })
        })
        .collect()
}

pub fn format_error_table(rows: &[ErrorTableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>8}  {:>14}  {:>14}  {:>14}",
        "t", "exact", "approx", "abs_error"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:>8}  {:>14}  {:>14}  {:>14}",
            fmt_g(row.t, 6),
            fmt_g(row.exact, 6),
            fmt_g(row.approx, 6),
            fmt_g(row.abs_error, 6)
        );
    }
    out
}

pub fn write_error_table_csv<W: Write>(rows: &[ErrorTableRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["t", "exact", "approx", "abs_error"])?;
    for r in rows {
        w.write_record([
            fmt_plain(r.t),
            fmt_plain(r.exact),
            fmt_plain(r.approx),
            fmt_plain(r.abs_error),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<table>", e))?;
    Ok(())
}

/// Largest PDE residual of the stored partial sum at the sample points,
/// with every conformable derivative taken numerically in physical
/// coordinates.
pub fn residual_check(
    spec: &ProblemSpec,
    sol: &SeriesSolution,
    params: FracParams,
    points: &[(f64, f64)],
) -> Result<f64> {
    residual_check_with_step(spec, sol, params, points, RESIDUAL_STEP)
}

pub fn residual_check_with_step(
    spec: &ProblemSpec,
    sol: &SeriesSolution,
    params: FracParams,
    points: &[(f64, f64)],
    step: f64,
) -> Result<f64> {
    let (u_sum, v_sum) = partial_sum(sol, sol.order())?;
    for (name, e) in [("u", &u_sum), ("v", &v_sum)] {
        if !e.is_real() {
            return Err(Error::InvalidProblem(format!(
                "partial sum of {name} is not real"
            )));
        }
    }
    let (p, q) = (params.p(), params.q());
    let stretch = move |x: f64, t: f64| (x.powf(p) / p, t.powf(q) / q);
    let field = |e: &Expression| {
        let e = e.clone();
        move |x: f64, t: f64| {
            let (big_x, big_t) = stretch(x, t);
            e.eval_complex(big_x, big_t).re
        }
    };
    let u = field(&u_sum);
    let v = field(&v_sum);
    let uv = |x: f64, t: f64| u(x, t) * v(x, t);

    let mut worst = 0.0_f64;
    for &(x, t) in points {
        if x.is_nan() || t.is_nan() || x <= 2.0 * step || t <= step {
            return Err(Error::Domain(format!(
                "residual sample ({x}, {t}) too close to the boundary for step {step}"
            )));
        }
        let (big_x, big_t) = params.to_stretched(x, t)?;
        let dx =
            |h: &dyn Fn(f64, f64) -> f64, x: f64, t: f64| conformable_dx_numeric(h, x, t, p, step);
        let dt =
            |h: &dyn Fn(f64, f64) -> f64, x: f64, t: f64| conformable_dt_numeric(h, x, t, q, step);

        let diffusion = |w: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
            match spec.geometry {
                Geometry::Regular => {
                    let inner = |x: f64, t: f64| dx(w, x, t).unwrap_or(f64::NAN);
                    dx(&inner, x, t)
                }
                Geometry::SingularBessel => {
                    // (p/x^p) D^p ((x^p/p) D^p w)
                    let inner = |x: f64, t: f64| (x.powf(p) / p) * dx(w, x, t).unwrap_or(f64::NAN);
                    Ok(dx(&inner, x, t)? / big_x)
                }
            }
        };

        let coupling = dx(&uv, x, t)?;
        let ru = dt(&u, x, t)? - diffusion(&u)?
            + spec.lambda * u(x, t) * dx(&u, x, t)?
            + spec.alpha * coupling
            - spec.source_k.eval_complex(big_x, big_t).re;
        let rv = dt(&v, x, t)? - diffusion(&v)?
            + spec.lambda * v(x, t) * dx(&v, x, t)?
            + spec.beta * coupling
            - spec.source_l.eval_complex(big_x, big_t).re;
        worst = worst.max(ru.abs()).max(rv.abs());
    }
    Ok(worst)
}

/// Uniform evaluation grid in physical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub x_steps: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.x_steps == 0 || self.t_steps == 0 {
            return Err(Error::Domain(
                "grid needs at least one point per axis".into(),
            ));
        }
        if self.x_min > self.x_max || self.t_min > self.t_max {
            return Err(Error::Domain("grid bounds are reversed".into()));
        }
        if self.x_min < 0.0 || self.t_min < 0.0 {
            return Err(Error::Domain("grid bounds must be non-negative".into()));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.x_steps)
    }

    pub fn ts(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.t_steps)
    }
}

/// What a surface is computed from; presets carry a closed-form solution.
#[derive(Debug, Clone)]
pub enum SurfaceSource {
    Example(Example),
    Spec(ProblemSpec),
}

impl SurfaceSource {
    fn spec(&self) -> ProblemSpec {
        match self {
            SurfaceSource::Example(e) => e.spec(),
            SurfaceSource::Spec(s) => s.clone(),
        }
    }

    fn example(&self) -> Option<Example> {
        match self {
            SurfaceSource::Example(e) => Some(*e),
            SurfaceSource::Spec(_) => None,
        }
    }
}

pub const SURFACE_HEADER: [&str; 8] = [
    "x", "t", "p", "q", "u_approx", "u_exact", "v_approx", "v_exact",
];

/// Write the CSV surface for every requested `(p, q)` pair. Exact columns
/// are empty when no closed form is known.
pub fn write_surface<W: Write>(
    source: &SurfaceSource,
    pairs: &[FracParams],
    grid: &Grid,
    order: usize,
    out: W,
) -> Result<()> {
    grid.validate()?;
    if pairs.iter().any(|pq| pq.p() < 1.0 || pq.q() < 1.0)
        && (grid.x_min <= 0.0 || grid.t_min <= 0.0)
    {
        return Err(Error::Domain(
            "grid bounds must be positive when p < 1 or q < 1".into(),
        ));
    }
    let sol = solve(&source.spec(), order)?;
    let (u, v) = partial_sum(&sol, order)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SURFACE_HEADER)?;
    for params in pairs {
        for &t in &grid.ts() {
            for &x in &grid.xs() {
                let (big_x, big_t) = params.to_stretched(x, t)?;
                let ua = u.evaluate(big_x, big_t)?;
                let va = v.evaluate(big_x, big_t)?;
                let (ue, ve) = match source.example() {
                    Some(ex) => {
                        let (a, b) = ex.exact_stretched(big_x, big_t);
                        (fmt_plain(a), fmt_plain(b))
                    }
                    None => (String::new(), String::new()),
                };
                w.write_record([
                    fmt_plain(x),
                    fmt_plain(t),
                    fmt_plain(params.p()),
                    fmt_plain(params.q()),
                    fmt_plain(ua),
                    ue,
                    fmt_plain(va),
                    ve,
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("<surface>", e))?;
    Ok(())
}

pub fn emit_surface(
    source: &SurfaceSource,
    pairs: &[FracParams],
    grid: &Grid,
    order: usize,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_surface(source, pairs, grid, order, BufWriter::new(file))
}

// --- transform table -----------------------------------------------------------

/// Relative tolerance for symbolic image vs. quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
/// Tolerance for the panel-based identity checks.
pub const PANEL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum RowCheck {
    Quadrature { symbolic: Complex, numeric: Complex },
    Symbolic { residual: String },
    Panel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub image: String,
    pub check: RowCheck,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformReport {
    pub rows: Vec<ReportRow>,
    pub sample: (f64, f64),
    pub params: FracParams,
}

impl TransformReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "transform table check: quadrature at (r, s) = ({}, {}), p = {}, q = {}",
            fmt_g(self.sample.0, 6),
            fmt_g(self.sample.1, 6),
            fmt_g(self.params.p(), 6),
            fmt_g(self.params.q(), 6)
        );
        for row in &self.rows {
            let status = if row.passed { "PASS" } else { "FAIL" };
            let detail = match &row.check {
                RowCheck::Quadrature { symbolic, numeric } => format!(
                    "symbolic {} quadrature {}",
                    fmt_g(symbolic.re, 12),
                    fmt_g(numeric.re, 12)
                ),
                RowCheck::Symbolic { residual } => format!("symbolic residual {residual}"),
                RowCheck::Panel => "panel of 6 (r, s) points".to_string(),
            };
            let _ = writeln!(
                out,
                "[{status}] {:<18} {:<40} {detail}; residual {} (tol {})",
                row.label,
                row.image,
                fmt_g(row.residual, 3),
                fmt_g(row.tolerance, 1)
            );
        }
        let _ = writeln!(
            out,
            "{}",
            if self.all_passed() {
                "all rows passed"
            } else {
                "some rows FAILED"
            }
        );
        out
    }
}

/// The test function used for the operator rows.
pub fn report_test_function() -> Expression {
    Expression::xpow_n(2)
        .multiply(&Expression::exp_xt(0.0, 1.0))
        .add(&Expression::sin_x(1.0).multiply(&Expression::sin_t(1.0)))
}

pub fn transform_report(
    params: FracParams,
    sample: (f64, f64),
    cfg: QuadratureConfig,
) -> Result<TransformReport> {
    let (r, s) = (Complex::new(sample.0, 0.0), Complex::new(sample.1, 0.0));
    let mut rows = Vec::new();

    let elementary = [
        ("1", Expression::constant(1.0)),
        (
            "X^2 T^3",
            Expression::xpow_n(2).multiply(&Expression::tpow_m(3)),
        ),
        ("e^(X+T)", Expression::exp_xt(1.0, 1.0)),
        (
            "sin X sin T",
            Expression::sin_x(1.0).multiply(&Expression::sin_t(1.0)),
        ),
    ];
    for (label, e) in elementary {
        let image = double_ara(&e);
        let symbolic = image.eval(r, s);
        let numeric = numeric_double_ara_expr(&e, r, s, params, cfg)?;
        let residual = (symbolic - numeric).norm() / symbolic.norm();
        rows.push(ReportRow {
            label: label.into(),
            image: image.to_string(),
            check: RowCheck::Quadrature { symbolic, numeric },
            residual,
            tolerance: QUADRATURE_TOLERANCE,
            passed: residual < QUADRATURE_TOLERANCE,
        });
    }

    let h = report_test_function();
    let shifts = [
        ("X h", "-r d/dr(G/r)", ShiftIdentity::MulX),
        ("T h", "-s d/ds(G/s)", ShiftIdentity::MulT),
        ("X^2 h", "G_rr - 2G_r/r + 2G/r^2", ShiftIdentity::MulX2),
        ("T^2 h", "G_ss - 2G_s/s + 2G/s^2", ShiftIdentity::MulT2),
        (
            "X T h",
            "G_rs - G_r/s - G_s/r + G/(rs)",
            ShiftIdentity::MulXT,
        ),
    ];
    for (label, image, which) in shifts {
        let residual = check_shift_identity(&h, which);
        rows.push(ReportRow {
            label: label.into(),
            image: image.into(),
            check: RowCheck::Panel,
            residual,
            tolerance: PANEL_TOLERANCE,
            passed: residual < PANEL_TOLERANCE,
        });
    }

    let derivatives = [
        ("d/dX h", "rG - r G_t[h(0,T)]", DerivativeIdentity::DX),
        ("d/dT h", "sG - s G_x[h(X,0)]", DerivativeIdentity::DT),
        (
            "d2/dX2 h",
            "r^2 G - r^2 G_t[h(0,T)] - r G_t[h_X(0,T)]",
            DerivativeIdentity::DXX,
        ),
        (
            "d2/dT2 h",
            "s^2 G - s^2 G_x[h(X,0)] - s G_x[h_T(X,0)]",
            DerivativeIdentity::DTT,
        ),
    ];
    for (label, image, which) in derivatives {
        let diff = check_derivative_identity(&h, which)?;
        let residual = diff.eval(r, s).norm();
        rows.push(ReportRow {
            label: label.into(),
            image: image.into(),
            check: RowCheck::Symbolic {
                residual: diff.to_string(),
            },
            residual,
            tolerance: 0.0,
            passed: diff.is_zero(),
        });
    }

    let mixed = [
        (
            "X dh/dT",
            "-rs d/dr(G/r) + rs d/dr(G_x[h(X,0)]/r)",
            MixedIdentity::XDt,
        ),
        (
            "T dh/dX",
            "-rs d/ds(G/s) + rs d/ds(G_t[h(0,T)]/s)",
            MixedIdentity::TDx,
        ),
    ];
    for (label, image, which) in mixed {
        let residual = check_mixed_identity(&h, which)?;
        rows.push(ReportRow {
            label: label.into(),
            image: image.into(),
            check: RowCheck::Panel,
            residual,
            tolerance: PANEL_TOLERANCE,
            passed: residual < PANEL_TOLERANCE,
        });
    }

    Ok(TransformReport {
        rows,
        sample,
        params,
    })
}

/// Run the transform table and write the plain-text report.
pub fn verify_transforms(path: &Path) -> Result<TransformReport> {
    let report = transform_report(
        FracParams::integer(),
        (3.0, 3.0),
        QuadratureConfig::default(),
    )?;
    std::fs::write(path, report.render()).map_err(|e| Error::io(path, e))?;
    Ok(report)
}
