//! Decomposition solver for the coupled conformable Burgers' system
//!
//! ```text
//! u_T − L u + λ u u_X + α (uv)_X = k(X, T),   u(X, 0) = k₁(X)
//! v_T − L v + λ v v_X + β (uv)_X = l(X, T),   v(X, 0) = l₁(X)
//! ```
//!
//! with `L = ∂_XX` (regular) or the Bessel operator `L = ∂_XX + X⁻¹∂_X`.
//! The transform route `𝒢⁻¹[(1/s)·𝒢[f]]` equals `∫₀^T f dT'`, so each step
//! is an exact time antiderivative in the expression basis.

use serde::{Deserialize, Serialize};

use crate::adomian::{adomian_a, adomian_b, adomian_c, ComponentList};
use crate::error::{Error, Result};
use crate::expr::{Axis, Expression};

/// Default truncation order for tables and surfaces.
pub const DEFAULT_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Regular,
    SingularBessel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub geometry: Geometry,
    pub source_k: Expression,
    pub source_l: Expression,
    pub ic_k1: Expression,
    pub ic_l1: Expression,
}

impl ProblemSpec {
    /// Homogeneous regular system with λ = −2, α = β = 1 and `u(X,0) = v(X,0) = sin X`;
    /// exact solution `e^{−T} sin X`.
    pub fn example1() -> Self {
        Self {
            lambda: -2.0,
            alpha: 1.0,
            beta: 1.0,
            geometry: Geometry::Regular,
            source_k: Expression::zero(),
            source_l: Expression::zero(),
            ic_k1: Expression::sin_x(1.0),
            ic_l1: Expression::sin_x(1.0),
        }
    }

    /// Singular Bessel system with λ = −2, α = β = 1, source `X²e^T − 4e^T`
    /// and `u(X,0) = v(X,0) = X²`; exact solution `X² e^T`.
    pub fn example2() -> Self {
        let source = Expression::xpow_n(2)
            .multiply(&Expression::exp_xt(0.0, 1.0))
            .sub(&Expression::exp_xt(0.0, 1.0).scale(4.0));
        Self {
            lambda: -2.0,
            alpha: 1.0,
            beta: 1.0,
            geometry: Geometry::SingularBessel,
            source_k: source.clone(),
            source_l: source,
            ic_k1: Expression::xpow_n(2),
            ic_l1: Expression::xpow_n(2),
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "example1" | "1" => Some(Self::example1()),
            "example2" | "2" => Some(Self::example2()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda", self.lambda),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidProblem(format!("{name} = {v} is not finite")));
            }
        }
        for (name, ic) in [("ic_k1", &self.ic_k1), ("ic_l1", &self.ic_l1)] {
            if let Some(t) = ic
                .terms()
                .iter()
                .find(|t| t.tpow != 0 || t.texp.norm() > crate::expr::KEY_TOLERANCE)
            {
                return Err(Error::InvalidProblem(format!(
                    "{name} depends on T through {t}"
                )));
            }
        }
        Ok(())
    }
}

/// `X⁻¹ ∂_X (X ∂_X w)`; exact only when the inner derivative supplies an X factor.
pub fn bessel(w: &Expression) -> Result<Expression> {
    Expression::xpow_n(1)
        .multiply(&w.differentiate(Axis::X))
        .differentiate(Axis::X)
        .divide_by_x()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    pub u_components: ComponentList,
    pub v_components: ComponentList,
    pub terminated_at: Option<usize>,
    pub spec: ProblemSpec,
}

impl SeriesSolution {
    /// Highest stored component index.
    pub fn order(&self) -> usize {
        self.u_components.len() - 1
    }

    pub fn partial_sum(&self, n: usize) -> Result<(Expression, Expression)> {
        partial_sum(self, n)
    }
}

pub fn init_components(spec: &ProblemSpec) -> (Expression, Expression) {
    (
        spec.ic_k1.add(&spec.source_k.integrate_t()),
        spec.ic_l1.add(&spec.source_l.integrate_t()),
    )
}

/// `−λ·N_n − coupling·∂_X C_n`.
fn nonlinear_part(
    convection: &Expression,
    coupling_term: &Expression,
    lambda: f64,
    coupling: f64,
) -> Expression {
    convection
        .scale(-lambda)
        .sub(&coupling_term.differentiate(Axis::X).scale(coupling))
}

fn next_pair(
    spec: &ProblemSpec,
    u: &ComponentList,
    v: &ComponentList,
    n: usize,
    lu: Expression,
    lv: Expression,
) -> Result<(Expression, Expression)> {
    let a = adomian_a(u, n)?;
    let b = adomian_b(v, n)?;
    let c = adomian_c(u, v, n)?;
    let fu = lu.add(&nonlinear_part(&a, &c, spec.lambda, spec.alpha));
    let fv = lv.add(&nonlinear_part(&b, &c, spec.lambda, spec.beta));
    Ok((fu.integrate_t(), fv.integrate_t()))
}

/// `u_{n+1} = ∫₀^T (∂_XX u_n − λA_n − α∂_X C_n) dT'`, and likewise for `v`.
pub fn step_regular(
    spec: &ProblemSpec,
    u: &ComponentList,
    v: &ComponentList,
    n: usize,
) -> Result<(Expression, Expression)> {
    let lu = u.get(n)?.differentiate(Axis::X).differentiate(Axis::X);
    let lv = v.get(n)?.differentiate(Axis::X).differentiate(Axis::X);
    next_pair(spec, u, v, n, lu, lv)
}

/// As [`step_regular`] with the Bessel operator in place of `∂_XX`.
pub fn step_singular(
    spec: &ProblemSpec,
    u: &ComponentList,
    v: &ComponentList,
    n: usize,
) -> Result<(Expression, Expression)> {
    let wrap = |e: Error| Error::SingularStep {
        step: n,
        source: Box::new(e),
    };
    let lu = bessel(u.get(n)?).map_err(wrap)?;
    let lv = bessel(v.get(n)?).map_err(wrap)?;
    next_pair(spec, u, v, n, lu, lv)
}

pub fn step(
    spec: &ProblemSpec,
    u: &ComponentList,
    v: &ComponentList,
    n: usize,
) -> Result<(Expression, Expression)> {
    match spec.geometry {
        Geometry::Regular => step_regular(spec, u, v, n),
        Geometry::SingularBessel => step_singular(spec, u, v, n),
    }
}

/// Components `0..=order`. `terminated_at` is the first `n ≥ 1` from which
/// every stored pair is zero, provided at least two consecutive zero pairs
/// were generated.
pub fn solve(spec: &ProblemSpec, order: usize) -> Result<SeriesSolution> {
    spec.validate()?;
    let (u0, v0) = init_components(spec);
    let mut u = ComponentList::new(u0);
    let mut v = ComponentList::new(v0);
    for n in 0..order {
        let (un, vn) = step(spec, &u, &v, n)?;
        u.push(un);
        v.push(vn);
    }
    let mut tail_start = None;
    for n in (1..=order).rev() {
        if u[n].is_zero() && v[n].is_zero() {
            tail_start = Some(n);
        } else {
            break;
        }
    }
    let terminated_at = tail_start.filter(|&n| order > n);
    Ok(SeriesSolution {
        u_components: u,
        v_components: v,
        terminated_at,
        spec: spec.clone(),
    })
}

/// Exact PDE residuals `(R_u, R_v)` of a candidate pair, derivatives taken in
/// the expression basis.
pub fn symbolic_residual(
    spec: &ProblemSpec,
    u: &Expression,
    v: &Expression,
) -> Result<(Expression, Expression)> {
    let diffusion = |w: &Expression| -> Result<Expression> {
        match spec.geometry {
            Geometry::Regular => Ok(w.differentiate(Axis::X).differentiate(Axis::X)),
            Geometry::SingularBessel => bessel(w),
        }
    };
    let coupling = u.multiply(v).differentiate(Axis::X);
    let ru = u
        .differentiate(Axis::T)
        .sub(&diffusion(u)?)
        .add(&u.multiply(&u.differentiate(Axis::X)).scale(spec.lambda))
        .add(&coupling.scale(spec.alpha))
        .sub(&spec.source_k);
    let rv = v
        .differentiate(Axis::T)
        .sub(&diffusion(v)?)
        .add(&v.multiply(&v.differentiate(Axis::X)).scale(spec.lambda))
        .add(&coupling.scale(spec.beta))
        .sub(&spec.source_l);
    Ok((ru, rv))
}

/// `(Σ_{k≤n} u_k, Σ_{k≤n} v_k)`.
pub fn partial_sum(sol: &SeriesSolution, n: usize) -> Result<(Expression, Expression)> {
    let sum = |list: &ComponentList| -> Result<Expression> {
        list.get(n)?;
        Ok(list
            .iter()
            .take(n + 1)
            .fold(Expression::zero(), |acc, e| acc.add(e)))
    };
    Ok((sum(&sol.u_components)?, sum(&sol.v_components)?))
}
