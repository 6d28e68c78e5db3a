//! Conformable ARA transforms on the expression basis.
//!
//! After the substitution `X = x^p/p`, `T = t^q/q` the double transform of a
//! basis term is a product of one-dimensional order-1 ARA images, so every
//! image here is exact and independent of the orders `p`, `q`:
//!
//! ```text
//! c·X^n·T^m·e^{μX+νT}  ↦  c·n!·m!·r·s / ((r−μ)^{n+1} (s−ν)^{m+1})
//! ```
//!
//! Inversion is the same table read backwards. Numeric quadrature of the
//! defining integral lives in [`quadrature`], and executable forms of the
//! shift, derivative and mixed identities in [`identities`].

pub mod identities;
pub mod quadrature;
pub mod rational;

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{canonical_merge, Complex, Expression, Keyed, MonomialTerm, KEY_TOLERANCE};
use crate::format::fmt_g;

pub use identities::{
    check_derivative_identity, check_mixed_identity, check_mixed_identity_at, check_shift_identity,
    check_shift_identity_at, default_panel, DerivativeIdentity, MixedIdentity, ShiftIdentity,
};
pub use quadrature::{
    numeric_double_ara, numeric_double_ara_expr, ExponentialOrder, GaussLaguerre, QuadratureConfig,
};
pub use rational::{LineFactor, RationalImage, RationalTerm};

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// One image term `coeff·n!·m!·r·s / ((r−xpole)^{n+1} (s−tpole)^{m+1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageTerm {
    pub coeff: Complex,
    pub xfact: u32,
    pub tfact: u32,
    pub xpole: Complex,
    pub tpole: Complex,
}

impl Keyed for ImageTerm {
    fn key(&self) -> (u32, u32, Complex, Complex) {
        (self.xfact, self.tfact, self.xpole, self.tpole)
    }
    fn coeff(&self) -> Complex {
        self.coeff
    }
    fn set_coeff(&mut self, c: Complex) {
        self.coeff = c;
    }
}

/// `z (z − a)^{−k}` and its first two derivatives in `z`.
pub(crate) fn pole_factor(z: Complex, a: Complex, k: u32) -> [Complex; 3] {
    let d = z - a;
    let kf = k as f64;
    let inv = d.powi(-(k as i32));
    let inv1 = inv / d;
    let inv2 = inv1 / d;
    [
        z * inv,
        inv - z * inv1 * kf,
        inv1 * (-2.0 * kf) + z * inv2 * (kf * (kf + 1.0)),
    ]
}

impl ImageTerm {
    pub fn eval(&self, r: Complex, s: Complex) -> Complex {
        self.partials(r, s).value
    }

    fn partials(&self, r: Complex, s: Complex) -> ImagePartials {
        let k = self.coeff * factorial(self.xfact) * factorial(self.tfact);
        let fr = pole_factor(r, self.xpole, self.xfact + 1);
        let fs = pole_factor(s, self.tpole, self.tfact + 1);
        ImagePartials {
            value: k * fr[0] * fs[0],
            dr: k * fr[1] * fs[0],
            ds: k * fr[0] * fs[1],
            drr: k * fr[2] * fs[0],
            dss: k * fr[0] * fs[2],
            drs: k * fr[1] * fs[1],
        }
    }
}

/// Value and partial derivatives of an image at one `(r, s)` point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ImagePartials {
    pub value: Complex,
    pub dr: Complex,
    pub ds: Complex,
    pub drr: Complex,
    pub dss: Complex,
    pub drs: Complex,
}

impl std::ops::AddAssign for ImagePartials {
    fn add_assign(&mut self, o: Self) {
        self.value += o.value;
        self.dr += o.dr;
        self.ds += o.ds;
        self.drr += o.drr;
        self.dss += o.dss;
        self.drs += o.drs;
    }
}

/// Exact double ARA image of an [`Expression`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ImageExpr {
    terms: Vec<ImageTerm>,
}

impl ImageExpr {
    pub fn canonicalize(terms: Vec<ImageTerm>) -> Self {
        Self {
            terms: canonical_merge(terms),
        }
    }

    pub fn terms(&self) -> &[ImageTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, r: Complex, s: Complex) -> Complex {
        self.terms.iter().map(|t| t.eval(r, s)).sum()
    }

    pub fn partials(&self, r: Complex, s: Complex) -> ImagePartials {
        let mut acc = ImagePartials::default();
        for t in &self.terms {
            acc += t.partials(r, s);
        }
        acc
    }

    pub fn add(&self, other: &ImageExpr) -> ImageExpr {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::canonicalize(terms)
    }

    pub fn scale(&self, c: impl Into<Complex>) -> ImageExpr {
        let c = c.into();
        Self::canonicalize(
            self.terms
                .iter()
                .map(|t| ImageTerm {
                    coeff: t.coeff * c,
                    ..*t
                })
                .collect(),
        )
    }
}

impl fmt::Display for ImageExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let c = t.coeff * factorial(t.xfact) * factorial(t.tfact);
                format!(
                    "{}·rs/({}·{})",
                    fmt_coeff(c),
                    fmt_pole("r", t.xpole, t.xfact + 1),
                    fmt_pole("s", t.tpole, t.tfact + 1)
                )
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) fn fmt_coeff(c: Complex) -> String {
    if c.im.abs() <= 1e-15 * c.norm().max(1.0) {
        fmt_g(c.re, 6)
    } else {
        format!(
            "({}{}{}i)",
            fmt_g(c.re, 6),
            if c.im < 0.0 { "-" } else { "+" },
            fmt_g(c.im.abs(), 6)
        )
    }
}

pub(crate) fn fmt_pole(var: &str, a: Complex, k: u32) -> String {
    let base = if a.norm() <= KEY_TOLERANCE {
        var.to_string()
    } else {
        format!("({var}-{})", fmt_coeff(a))
    };
    if k == 1 {
        base
    } else {
        format!("{base}^{k}")
    }
}

/// Term-wise exact image; linear and independent of `p`, `q`.
pub fn double_ara(e: &Expression) -> ImageExpr {
    ImageExpr::canonicalize(
        e.terms()
            .iter()
            .map(|t| ImageTerm {
                coeff: t.coeff,
                xfact: t.xpow,
                tfact: t.tpow,
                xpole: t.xexp,
                tpole: t.texp,
            })
            .collect(),
    )
}

/// Table inversion of [`double_ara`].
pub fn inverse_double_ara(g: &ImageExpr) -> Expression {
    Expression::from_finite(
        g.terms
            .iter()
            .map(|t| MonomialTerm::new(t.coeff, t.xfact, t.tfact, t.xpole, t.tpole))
            .collect(),
    )
}

/// One-variable image `Σ c·m!·z / (z−a)^{m+1}` in `r` or `s`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LineImage {
    /// `(coeff, m, pole)`
    terms: Vec<(Complex, u32, Complex)>,
}

impl LineImage {
    pub fn terms(&self) -> &[(Complex, u32, Complex)] {
        &self.terms
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.eval_with_derivative(z).0
    }

    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        self.terms.iter().fold(
            (Complex::default(), Complex::default()),
            |acc, &(c, m, a)| {
                let k = c * factorial(m);
                let f = pole_factor(z, a, m + 1);
                (acc.0 + k * f[0], acc.1 + k * f[1])
            },
        )
    }

    /// Embed as a two-variable rational image with the other factor equal to 1.
    pub(crate) fn to_rational(&self, axis: crate::expr::Axis) -> RationalImage {
        let terms = self
            .terms
            .iter()
            .map(|&(c, m, a)| {
                let f = LineFactor::pole(m + 1, a);
                match axis {
                    crate::expr::Axis::X => {
                        RationalTerm::new(c * factorial(m), f, LineFactor::Poly(0))
                    }
                    crate::expr::Axis::T => {
                        RationalTerm::new(c * factorial(m), LineFactor::Poly(0), f)
                    }
                }
            })
            .collect();
        RationalImage::canonicalize(terms)
    }
}

/// Single transform in `t`; `e` must not depend on `X`.
pub fn single_ara_t(e: &Expression) -> Result<LineImage> {
    let mut terms = Vec::with_capacity(e.len());
    for t in e.terms() {
        if t.xpow != 0 || t.xexp.norm() > KEY_TOLERANCE {
            return Err(Error::NotSeparable(format!("term {t} depends on X")));
        }
        terms.push((t.coeff, t.tpow, t.texp));
    }
    Ok(LineImage { terms })
}

/// Single transform in `x`; `e` must not depend on `T`.
pub fn single_ara_x(e: &Expression) -> Result<LineImage> {
    let mut terms = Vec::with_capacity(e.len());
    for t in e.terms() {
        if t.tpow != 0 || t.texp.norm() > KEY_TOLERANCE {
            return Err(Error::NotSeparable(format!("term {t} depends on T")));
        }
        terms.push((t.coeff, t.xpow, t.xexp));
    }
    Ok(LineImage { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Axis;

    fn c(v: f64) -> Complex {
        Complex::new(v, 0.0)
    }

    #[test]
    fn image_of_one_is_one() {
        let g = double_ara(&Expression::constant(1.0));
        for (r, s) in [(2.0, 3.0), (5.5, 1.5)] {
            assert!((g.eval(c(r), c(s)) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn image_of_monomials() {
        for n in 0..4 {
            for m in 0..4 {
                let e = Expression::xpow_n(n).multiply(&Expression::tpow_m(m));
                let g = double_ara(&e);
                let (r, s) = (2.5_f64, 3.5_f64);
                let expected = factorial(n) * factorial(m) / (r.powi(n as i32) * s.powi(m as i32));
                assert!((g.eval(c(r), c(s)).re - expected).abs() < 1e-14 * expected);
            }
        }
    }

    #[test]
    fn image_of_exponential() {
        let (lambda, beta) = (1.0, -0.5);
        let g = double_ara(&Expression::exp_xt(lambda, beta));
        let (r, s) = (3.0, 2.0);
        let expected = r * s / ((r - lambda) * (s - beta));
        assert!((g.eval(c(r), c(s)).re - expected).abs() < 1e-14);
    }

    #[test]
    fn image_of_sin_sin() {
        let e = Expression::sin_x(1.0).multiply(&Expression::sin_t(1.0));
        let g = double_ara(&e);
        assert_eq!(g.terms().len(), 4);
        let (r, s) = (3.0, 2.0);
        let expected = r * s / ((r * r + 1.0) * (s * s + 1.0));
        let v = g.eval(c(r), c(s));
        assert!((v.re - expected).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert_eq!(inverse_double_ara(&g), e);
    }

    #[test]
    fn inverse_of_one() {
        let g = double_ara(&Expression::constant(1.0));
        assert_eq!(inverse_double_ara(&g), Expression::constant(1.0));
    }

    #[test]
    fn single_transforms() {
        let a = 0.7;
        let img = single_ara_t(&Expression::exp_xt(0.0, a)).unwrap();
        let s = c(2.0);
        assert!((img.eval(s) - s / (s - a)).norm() < 1e-15);

        let img = single_ara_t(&Expression::tpow_m(3)).unwrap();
        assert!((img.eval(s) - 6.0 / s.powi(3)).norm() < 1e-15);

        let img = single_ara_t(&Expression::sin_t(1.0)).unwrap();
        assert!((img.eval(s) - s / (s * s + 1.0)).norm() < 1e-15);

        let img = single_ara_x(&Expression::xpow_n(2)).unwrap();
        assert!((img.eval(c(4.0)) - 2.0 / 16.0).norm() < 1e-15);
    }

    #[test]
    fn single_transform_rejects_mixed() {
        let e = Expression::xpow_n(1).multiply(&Expression::tpow_m(1));
        assert!(matches!(single_ara_t(&e), Err(Error::NotSeparable(_))));
        assert!(matches!(single_ara_x(&e), Err(Error::NotSeparable(_))));
        assert!(matches!(
            single_ara_t(&Expression::sin_x(1.0)),
            Err(Error::NotSeparable(_))
        ));
    }

    #[test]
    fn separable_product_factorizes() {
        let f = Expression::sin_x(2.0).add(&Expression::xpow_n(2));
        let g = Expression::exp_xt(0.0, -1.0).multiply(&Expression::tpow_m(1));
        let fx = single_ara_x(&f).unwrap();
        let gt = single_ara_t(&g).unwrap();
        let img = double_ara(&f.multiply(&g));
        for (r, s) in default_panel((0.0, 0.0)) {
            let lhs = img.eval(r, s);
            let rhs = fx.eval(r) * gt.eval(s);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn line_image_embeds_consistently() {
        let h = single_ara_t(&Expression::exp_xt(0.0, 2.0)).unwrap();
        let rat = h.to_rational(Axis::T);
        let (r, s) = (c(3.0), c(5.0));
        assert!((rat.eval(r, s) - h.eval(s)).norm() < 1e-15);
    }

    #[test]
    fn partial_derivatives_match_finite_differences() {
        let e = Expression::xpow_n(2)
            .multiply(&Expression::exp_xt(1.0, 0.5))
            .add(&Expression::sin_t(1.0).multiply(&Expression::xpow_n(1)));
        let g = double_ara(&e);
        let (r, s) = (c(3.1), c(2.7));
        let h = 1e-4;
        let p = g.partials(r, s);
        let fd_r = (g.eval(r + h, s) - g.eval(r - h, s)) / (2.0 * h);
        let fd_s = (g.eval(r, s + h) - g.eval(r, s - h)) / (2.0 * h);
        let fd_rr = (g.eval(r + h, s) - 2.0 * g.eval(r, s) + g.eval(r - h, s)) / (h * h);
        let fd_rs = (g.eval(r + h, s + h) - g.eval(r + h, s - h) - g.eval(r - h, s + h)
            + g.eval(r - h, s - h))
            / (4.0 * h * h);
        assert!((p.dr - fd_r).norm() < 1e-7);
        assert!((p.ds - fd_s).norm() < 1e-7);
        assert!((p.drr - fd_rr).norm() < 1e-5);
        assert!((p.drs - fd_rs).norm() < 1e-5);
    }

    #[test]
    fn display_is_readable() {
        let g = double_ara(&Expression::exp_xt(1.0, 1.0));
        assert_eq!(g.to_string(), "1·rs/((r-1)·(s-1))");
    }
}
