//! Numerical evaluation of the defining double integral
//!
//! ```text
//! G(r, s) = r s ∫∫ e^{−r x^p/p − s t^q/q} h(x, t) x^{p−1} t^{q−1} dx dt
//! ```
//!
//! With `u = x^p/p`, `v = t^q/q` the Jacobian cancels and the integral is
//! Laguerre-weighted in each variable. Each axis is rescaled by
//! `Re(r) − γ` so the growth `e^{γu}` of the field is absorbed exactly.

use crate::conformable::FracParams;
use crate::error::{Error, Result};
use crate::expr::{Complex, Expression};

/// Gauss–Laguerre rule for `∫₀^∞ e^{−w} f(w) dw`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Nodes by Newton iteration on `L_n` with the usual asymptotic starting
    /// guesses; weights from `L_{n−1}` at the converged node.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Laguerre rule needs at least one node");
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let mut z = 0.0_f64;
        for i in 0..n {
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => z + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
                }
            };
            let mut deriv = 0.0;
            let mut prev = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0_f64, 0.0_f64);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j as f64 + 1.0 - z) * p2 - j as f64 * p3) / (j as f64 + 1.0);
                }
                deriv = (nf * p1 - nf * p2) / z;
                prev = p2;
                let z1 = z;
                z = z1 - p1 / deriv;
                if (z - z1).abs() <= 3e-14 * z.abs() {
                    break;
                }
            }
            nodes[i] = z;
            weights[i] = -1.0 / (deriv * nf * prev);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> Complex>(&self, f: F) -> Complex {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    node_count: usize,
    abscissa_margin: f64,
}

impl QuadratureConfig {
    pub fn new(node_count: usize, abscissa_margin: f64) -> Result<Self> {
        if node_count < 8 {
            return Err(Error::Domain(format!("node_count {node_count} < 8")));
        }
        if abscissa_margin.is_nan() || abscissa_margin <= 0.0 {
            return Err(Error::Domain(format!(
                "abscissa_margin {abscissa_margin} must be positive"
            )));
        }
        Ok(Self {
            node_count,
            abscissa_margin,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn abscissa_margin(&self) -> f64 {
        self.abscissa_margin
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            node_count: 64,
            abscissa_margin: 0.5,
        }
    }
}

/// Exponential growth rates `γ` (in X) and `τ` (in T) of a field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExponentialOrder {
    pub x: f64,
    pub t: f64,
}

/// Numerical double transform of a physical field `h(x, t)` at `(r, s)`.
pub fn numeric_double_ara<F>(
    h: F,
    r: Complex,
    s: Complex,
    params: FracParams,
    order: ExponentialOrder,
    cfg: QuadratureConfig,
) -> Result<Complex>
where
    F: Fn(f64, f64) -> f64,
{
    let (p, q) = (params.p(), params.q());
    let damping = move |x: f64, t: f64| (-order.x * x.powf(p) / p - order.t * t.powf(q) / q).exp();
    laguerre_double(
        |x, t| Complex::new(h(x, t) * damping(x, t), 0.0),
        r,
        s,
        params,
        order,
        cfg,
    )
}

/// `h` must already carry the factor `e^{−γX−τT}`.
fn laguerre_double<F>(
    h: F,
    r: Complex,
    s: Complex,
    params: FracParams,
    order: ExponentialOrder,
    cfg: QuadratureConfig,
) -> Result<Complex>
where
    F: Fn(f64, f64) -> Complex,
{
    let sigma_r = r.re - order.x;
    let sigma_s = s.re - order.t;
    if sigma_r < cfg.abscissa_margin || sigma_s < cfg.abscissa_margin {
        return Err(Error::Abscissa(format!(
            "Re(r) − γ = {sigma_r}, Re(s) − τ = {sigma_s}; need at least {}",
            cfg.abscissa_margin
        )));
    }
    let rule = GaussLaguerre::new(cfg.node_count);
    let (p, q) = (params.p(), params.q());
    // per-axis samples: physical coordinate and weight including the oscillatory part
    let axis = |sigma: f64, z: Complex, order: f64| -> Vec<(f64, Complex)> {
        rule.nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&w, &wt)| {
                let u = w / sigma;
                let physical = (order * u).powf(1.0 / order);
                (physical, Complex::new(0.0, -z.im * u).exp() * wt)
            })
            .collect()
    };
    let xs = axis(sigma_r, r, p);
    let ts = axis(sigma_s, s, q);
    let mut acc = Complex::default();
    for &(x, wx) in &xs {
        let mut inner = Complex::default();
        for &(t, wt) in &ts {
            inner += wt * h(x, t);
        }
        acc += wx * inner;
    }
    Ok(r * s / (sigma_r * sigma_s) * acc)
}

/// Quadrature of an expression, evaluated through the physical coordinates.
/// The growth `e^{γX+τT}` is removed from the exponents before evaluation so
/// the far Laguerre nodes cannot overflow.
pub fn numeric_double_ara_expr(
    e: &Expression,
    r: Complex,
    s: Complex,
    params: FracParams,
    cfg: QuadratureConfig,
) -> Result<Complex> {
    let (gx, gt) = e.exponential_orders();
    let order = ExponentialOrder { x: gx, t: gt };
    let damped = e.multiply(&Expression::exp_xt(-gx, -gt));
    let (p, q) = (params.p(), params.q());
    laguerre_double(
        |x, t| damped.eval_complex(x.powf(p) / p, t.powf(q) / q),
        r,
        s,
        params,
        order,
        cfg,
    )
}
