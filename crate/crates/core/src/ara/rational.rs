//! Rational images closed under multiplication by `r` and `s`.
//!
//! Multiplying an [`ImageExpr`](super::ImageExpr) by the transform variable
//! leaves the invertible form (`r · r/(r−μ)` carries a bare `r`), so the
//! derivative identities are checked in this wider algebra. Each variable
//! contributes one factor from
//!
//! * `Poly(k)`: `z^k`
//! * `Pole { order, at }`: `z / (z − at)^order`, `order ≥ 1`
//!
//! with `z·Pole{j, a} = Pole{j−1, a} + a·Pole{j, a}` and `Pole{0, a} = Poly(1)`.

use std::fmt;

use crate::expr::{canonical_merge, Axis, Complex, Keyed, KEY_TOLERANCE};

use super::{fmt_coeff, fmt_pole, pole_factor, ImageExpr};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineFactor {
    Poly(u32),
    Pole { order: u32, at: Complex },
}

impl LineFactor {
    /// Normalizing constructor: `z/(z−0)^1` is the constant 1.
    pub fn pole(order: u32, at: Complex) -> Self {
        if order == 0 {
            LineFactor::Poly(1)
        } else if order == 1 && at.norm() <= KEY_TOLERANCE {
            LineFactor::Poly(0)
        } else {
            LineFactor::Pole { order, at }
        }
    }

    fn code(&self) -> (u32, Complex) {
        match *self {
            LineFactor::Poly(k) => (2 * k, Complex::default()),
            LineFactor::Pole { order, at } => (2 * order + 1, at),
        }
    }

    pub fn eval(&self, z: Complex) -> Complex {
        match *self {
            LineFactor::Poly(k) => z.powu(k),
            LineFactor::Pole { order, at } => pole_factor(z, at, order)[0],
        }
    }

    /// `z · self` as a combination of factors.
    fn times_var(&self) -> Vec<(Complex, LineFactor)> {
        match *self {
            LineFactor::Poly(k) => vec![(Complex::new(1.0, 0.0), LineFactor::Poly(k + 1))],
            LineFactor::Pole { order, at } => {
                let mut out = vec![(Complex::new(1.0, 0.0), LineFactor::pole(order - 1, at))];
                if at.norm() > 0.0 {
                    out.push((at, LineFactor::Pole { order, at }));
                }
                out
            }
        }
    }

    fn describe(&self, var: &str) -> String {
        match *self {
            LineFactor::Poly(0) => "1".into(),
            LineFactor::Poly(1) => var.into(),
            LineFactor::Poly(k) => format!("{var}^{k}"),
            LineFactor::Pole { order, at } => format!("{var}/{}", fmt_pole(var, at, order)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalTerm {
    pub coeff: Complex,
    pub r: LineFactor,
    pub s: LineFactor,
}

impl RationalTerm {
    pub fn new(coeff: Complex, r: LineFactor, s: LineFactor) -> Self {
        Self { coeff, r, s }
    }
}

impl Keyed for RationalTerm {
    fn key(&self) -> (u32, u32, Complex, Complex) {
        let (cr, ar) = self.r.code();
        let (cs, as_) = self.s.code();
        (cr, cs, ar, as_)
    }
    fn coeff(&self) -> Complex {
        self.coeff
    }
    fn set_coeff(&mut self, c: Complex) {
        self.coeff = c;
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RationalImage {
    terms: Vec<RationalTerm>,
}

impl RationalImage {
    pub fn canonicalize(terms: Vec<RationalTerm>) -> Self {
        Self {
            terms: canonical_merge(terms),
        }
    }

    pub fn terms(&self) -> &[RationalTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, r: Complex, s: Complex) -> Complex {
        self.terms
            .iter()
            .map(|t| t.coeff * t.r.eval(r) * t.s.eval(s))
            .sum()
    }

    pub fn add(&self, other: &RationalImage) -> RationalImage {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::canonicalize(terms)
    }

    pub fn sub(&self, other: &RationalImage) -> RationalImage {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| RationalTerm {
            coeff: -t.coeff,
            ..*t
        }));
        Self::canonicalize(terms)
    }

    /// Multiply by `r` (axis X) or `s` (axis T).
    pub fn times_var(&self, axis: Axis) -> RationalImage {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            let factor = match axis {
                Axis::X => t.r,
                Axis::T => t.s,
            };
            for (c, f) in factor.times_var() {
                let (r, s) = match axis {
                    Axis::X => (f, t.s),
                    Axis::T => (t.r, f),
                };
                terms.push(RationalTerm::new(t.coeff * c, r, s));
            }
        }
        Self::canonicalize(terms)
    }
}

impl From<&ImageExpr> for RationalImage {
    fn from(g: &ImageExpr) -> Self {
        RationalImage::canonicalize(
            g.terms()
                .iter()
                .map(|t| {
                    RationalTerm::new(
                        t.coeff * super::factorial(t.xfact) * super::factorial(t.tfact),
                        LineFactor::pole(t.xfact + 1, t.xpole),
                        LineFactor::pole(t.tfact + 1, t.tpole),
                    )
                })
                .collect(),
        )
    }
}

impl fmt::Display for RationalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                format!(
                    "{}·{}·{}",
                    fmt_coeff(t.coeff),
                    t.r.describe("r"),
                    t.s.describe("s")
                )
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
