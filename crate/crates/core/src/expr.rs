//! Closed symbolic algebra over complex-exponential monomials
//! `c · X^n · T^m · e^{μX} · e^{νT}` in stretched coordinates.
//!
//! Trigonometric functions are carried as conjugate pairs of exponentials,
//! so products, derivatives and time antiderivatives never leave the basis.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_g;

pub type Complex = Complex64;

/// Coefficients below this fraction of the largest coefficient (floor 1) are dropped.
pub const PRUNE_RELATIVE: f64 = 1e-14;
/// Absolute tolerance for treating two exponents as the same key.
pub const KEY_TOLERANCE: f64 = 1e-12;
/// Allowed imaginary residue, relative to the summed term magnitudes.
pub const EVAL_TOLERANCE: f64 = 1e-10;
/// Relative tolerance used when matching conjugate partners in [`Expression::is_real`].
pub const REALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    T,
}

/// One basis term `coeff · X^xpow · T^tpow · e^{xexp·X} · e^{texp·T}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialTerm {
    pub coeff: Complex,
    pub xpow: u32,
    pub tpow: u32,
    pub xexp: Complex,
    pub texp: Complex,
}

impl MonomialTerm {
    pub fn new(coeff: Complex, xpow: u32, tpow: u32, xexp: Complex, texp: Complex) -> Self {
        Self {
            coeff,
            xpow,
            tpow,
            xexp,
            texp,
        }
    }

    pub fn real(coeff: f64, xpow: u32, tpow: u32) -> Self {
        Self::new(
            coeff.into(),
            xpow,
            tpow,
            Complex::default(),
            Complex::default(),
        )
    }

    fn is_finite(&self) -> bool {
        self.coeff.is_finite() && self.xexp.is_finite() && self.texp.is_finite()
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex {
        let phase = (self.xexp * x + self.texp * t).exp();
        self.coeff * x.powi(self.xpow as i32) * t.powi(self.tpow as i32) * phase
    }
}

impl fmt::Display for MonomialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", fmt_complex(self.coeff))?;
        write_powers(f, self.xpow, self.tpow)?;
        if self.xexp.norm() > KEY_TOLERANCE {
            write!(f, "·exp(({})X)", fmt_complex(self.xexp))?;
        }
        if self.texp.norm() > KEY_TOLERANCE {
            write!(f, "·exp(({})T)", fmt_complex(self.texp))?;
        }
        Ok(())
    }
}

/// Anything carrying a basis key `(n, m, μ, ν)` and a complex coefficient.
/// Expressions and transform images share one canonicalization routine.
pub(crate) trait Keyed: Copy {
    fn key(&self) -> (u32, u32, Complex, Complex);
    fn coeff(&self) -> Complex;
    fn set_coeff(&mut self, c: Complex);
}

impl Keyed for MonomialTerm {
    fn key(&self) -> (u32, u32, Complex, Complex) {
        (self.xpow, self.tpow, self.xexp, self.texp)
    }
    fn coeff(&self) -> Complex {
        self.coeff
    }
    fn set_coeff(&mut self, c: Complex) {
        self.coeff = c;
    }
}

fn close(a: Complex, b: Complex) -> bool {
    (a.re - b.re).abs() <= KEY_TOLERANCE && (a.im - b.im).abs() <= KEY_TOLERANCE
}

pub(crate) fn key_cmp(
    a: &(u32, u32, Complex, Complex),
    b: &(u32, u32, Complex, Complex),
) -> Ordering {
    a.0.cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.re.total_cmp(&b.2.re))
        .then(a.2.im.total_cmp(&b.2.im))
        .then(a.3.re.total_cmp(&b.3.re))
        .then(a.3.im.total_cmp(&b.3.im))
}

pub(crate) fn keys_match(
    a: &(u32, u32, Complex, Complex),
    b: &(u32, u32, Complex, Complex),
) -> bool {
    a.0 == b.0 && a.1 == b.1 && close(a.2, b.2) && close(a.3, b.3)
}

/// Merge like keys, prune negligible coefficients and sort deterministically.
pub(crate) fn canonical_merge<T: Keyed>(mut items: Vec<T>) -> Vec<T> {
    items.sort_by(|a, b| key_cmp(&a.key(), &b.key()));
    let mut merged: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        let key = item.key();
        // sorted by (n, m) first, so candidates sit in the trailing block
        let found = merged
            .iter_mut()
            .rev()
            .take_while(|m| {
                let k = m.key();
                k.0 == key.0 && k.1 == key.1
            })
            .find(|m| keys_match(&m.key(), &key));
        match found {
            Some(existing) => {
                let c = existing.coeff() + item.coeff();
                existing.set_coeff(c);
            }
            None => merged.push(item),
        }
    }
    let largest = merged
        .iter()
        .map(|t| t.coeff().norm())
        .fold(0.0_f64, f64::max);
    let threshold = PRUNE_RELATIVE * largest.max(1.0);
    merged.retain(|t| t.coeff().norm() >= threshold && t.coeff() != Complex::default());
    merged.sort_by(|a, b| key_cmp(&a.key(), &b.key()));
    merged
}

/// A canonical finite sum of [`MonomialTerm`]s.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TermRecord>", into = "Vec<TermRecord>")]
pub struct Expression {
    terms: Vec<MonomialTerm>,
}

impl Expression {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Canonicalize an arbitrary list of terms.
    pub fn canonicalize(terms: Vec<MonomialTerm>) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidTerm(format!("non-finite value in {bad}")));
        }
        Ok(Self::from_finite(terms))
    }

    /// Terms produced by the algebra itself are finite by construction.
    pub(crate) fn from_finite(terms: Vec<MonomialTerm>) -> Self {
        Self {
            terms: canonical_merge(terms),
        }
    }

    pub fn terms(&self) -> &[MonomialTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    // --- constructors -----------------------------------------------------

    pub fn constant(c: f64) -> Self {
        Self::from_finite(vec![MonomialTerm::real(c, 0, 0)])
    }

    pub fn xpow_n(n: u32) -> Self {
        Self::from_finite(vec![MonomialTerm::real(1.0, n, 0)])
    }

    pub fn tpow_m(m: u32) -> Self {
        Self::from_finite(vec![MonomialTerm::real(1.0, 0, m)])
    }

    /// `e^{λX + βT}`.
    pub fn exp_xt(lambda: f64, beta: f64) -> Self {
        Self::from_finite(vec![MonomialTerm::new(
            Complex::new(1.0, 0.0),
            0,
            0,
            lambda.into(),
            beta.into(),
        )])
    }

    pub fn sin_x(lambda: f64) -> Self {
        Self::trig(Axis::X, lambda, true)
    }

    pub fn cos_x(lambda: f64) -> Self {
        Self::trig(Axis::X, lambda, false)
    }

    pub fn sin_t(beta: f64) -> Self {
        Self::trig(Axis::T, beta, true)
    }

    pub fn cos_t(beta: f64) -> Self {
        Self::trig(Axis::T, beta, false)
    }

    fn trig(axis: Axis, freq: f64, sine: bool) -> Self {
        // sin θ = (e^{iθ} − e^{−iθ})/(2i),  cos θ = (e^{iθ} + e^{−iθ})/2
        let (cp, cm) = if sine {
            (Complex::new(0.0, -0.5), Complex::new(0.0, 0.5))
        } else {
            (Complex::new(0.5, 0.0), Complex::new(0.5, 0.0))
        };
        let w = Complex::new(0.0, freq);
        let zero = Complex::default();
        let make = |c: Complex, e: Complex| match axis {
            Axis::X => MonomialTerm::new(c, 0, 0, e, zero),
            Axis::T => MonomialTerm::new(c, 0, 0, zero, e),
        };
        Self::from_finite(vec![make(cp, w), make(cm, -w)])
    }

    // --- algebra ------------------------------------------------------------

    pub fn add(&self, other: &Expression) -> Expression {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_finite(terms)
    }

    pub fn sub(&self, other: &Expression) -> Expression {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: impl Into<Complex>) -> Expression {
        let c = c.into();
        Self::from_finite(
            self.terms
                .iter()
                .map(|t| MonomialTerm {
                    coeff: t.coeff * c,
                    ..*t
                })
                .collect(),
        )
    }

    pub fn multiply(&self, other: &Expression) -> Expression {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(MonomialTerm {
                    coeff: a.coeff * b.coeff,
                    xpow: a.xpow + b.xpow,
                    tpow: a.tpow + b.tpow,
                    xexp: a.xexp + b.xexp,
                    texp: a.texp + b.texp,
                });
            }
        }
        Self::from_finite(terms)
    }

    /// Exact partial derivative. In stretched coordinates this is the
    /// conformable derivative of the corresponding order.
    pub fn differentiate(&self, axis: Axis) -> Expression {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            let (pow, exp) = match axis {
                Axis::X => (t.xpow, t.xexp),
                Axis::T => (t.tpow, t.texp),
            };
            if pow > 0 {
                let mut d = *t;
                d.coeff *= pow as f64;
                match axis {
                    Axis::X => d.xpow -= 1,
                    Axis::T => d.tpow -= 1,
                }
                terms.push(d);
            }
            if exp.norm() > 0.0 {
                terms.push(MonomialTerm {
                    coeff: t.coeff * exp,
                    ..*t
                });
            }
        }
        Self::from_finite(terms)
    }

    /// Antiderivative in `T` vanishing at `T = 0`.
    pub fn integrate_t(&self) -> Expression {
        let mut terms = Vec::new();
        for t in &self.terms {
            let m = t.tpow;
            if t.texp.norm() <= KEY_TOLERANCE {
                terms.push(MonomialTerm {
                    coeff: t.coeff / (m as f64 + 1.0),
                    tpow: m + 1,
                    texp: Complex::default(),
                    ..*t
                });
                continue;
            }
            // ∫ τ^m e^{ντ} dτ = e^{ντ} Σ_k (−1)^k m!/(m−k)! τ^{m−k} / ν^{k+1}
            let nu = t.texp;
            let mut falling = 1.0; // m!/(m−k)!
            let mut nu_pow = nu; // ν^{k+1}
            for k in 0..=m {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                terms.push(MonomialTerm {
                    coeff: t.coeff * sign * falling / nu_pow,
                    tpow: m - k,
                    ..*t
                });
                falling *= (m - k) as f64;
                nu_pow *= nu;
            }
            // subtract F(0) = (−1)^m m! / ν^{m+1}, which has no T dependence
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let fact: f64 = (1..=m).map(f64::from).product();
            terms.push(MonomialTerm {
                coeff: -t.coeff * sign * fact / nu.powu(m + 1),
                tpow: 0,
                texp: Complex::default(),
                ..*t
            });
        }
        Self::from_finite(terms)
    }

    /// Exact division by `X`; every term must carry at least one `X` factor.
    pub fn divide_by_x(&self) -> Result<Expression> {
        if let Some(t) = self.terms.iter().find(|t| t.xpow == 0) {
            return Err(Error::NonExactDivision(t.to_string()));
        }
        Ok(Self::from_finite(
            self.terms
                .iter()
                .map(|t| MonomialTerm {
                    xpow: t.xpow - 1,
                    ..*t
                })
                .collect(),
        ))
    }

    /// Restrict to `X = 0`, leaving a function of `T` only.
    pub fn at_x_zero(&self) -> Expression {
        Self::from_finite(
            self.terms
                .iter()
                .filter(|t| t.xpow == 0)
                .map(|t| MonomialTerm {
                    xexp: Complex::default(),
                    ..*t
                })
                .collect(),
        )
    }

    /// Restrict to `T = 0`, leaving a function of `X` only.
    pub fn at_t_zero(&self) -> Expression {
        Self::from_finite(
            self.terms
                .iter()
                .filter(|t| t.tpow == 0)
                .map(|t| MonomialTerm {
                    texp: Complex::default(),
                    ..*t
                })
                .collect(),
        )
    }

    /// Taylor-expand every `e^{νT}` factor and keep powers of `T` up to `degree`.
    pub fn truncate_t_degree(&self, degree: u32) -> Expression {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.tpow > degree {
                continue;
            }
            if t.texp.norm() <= KEY_TOLERANCE {
                terms.push(MonomialTerm {
                    texp: Complex::default(),
                    ..*t
                });
                continue;
            }
            let mut c = t.coeff;
            for k in 0..=(degree - t.tpow) {
                if k > 0 {
                    c = c * t.texp / k as f64;
                }
                terms.push(MonomialTerm {
                    coeff: c,
                    tpow: t.tpow + k,
                    texp: Complex::default(),
                    ..*t
                });
            }
        }
        Self::from_finite(terms)
    }

    /// Largest real part of the X and T exponents (0 for pure polynomials).
    pub fn exponential_orders(&self) -> (f64, f64) {
        self.terms.iter().fold((0.0_f64, 0.0_f64), |(gx, gt), t| {
            (gx.max(t.xexp.re), gt.max(t.texp.re))
        })
    }

    // --- evaluation -----------------------------------------------------------

    pub fn eval_complex(&self, x: f64, t: f64) -> Complex {
        self.terms.iter().map(|term| term.eval(x, t)).sum()
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Result<f64> {
        let mut sum = Complex::default();
        let mut magnitude = 0.0;
        for term in &self.terms {
            let v = term.eval(x, t);
            magnitude += v.norm();
            sum += v;
        }
        if sum.im.abs() > EVAL_TOLERANCE * magnitude {
            return Err(Error::NotReal {
                residue: sum.im.abs(),
                x,
                t,
            });
        }
        Ok(sum.re)
    }

    /// Every term has a conjugate partner with the conjugate coefficient.
    pub fn is_real(&self) -> bool {
        let scale = self
            .terms
            .iter()
            .map(|t| t.coeff.norm())
            .fold(1.0_f64, f64::max);
        let tol = REALITY_TOLERANCE * scale;
        self.terms.iter().all(|t| {
            let key = (t.xpow, t.tpow, t.xexp.conj(), t.texp.conj());
            self.terms
                .iter()
                .find(|o| keys_match(&o.key(), &key))
                .is_some_and(|o| (o.coeff - t.coeff.conj()).norm() <= tol)
        })
    }

    /// Structural comparison with a coefficient tolerance relative to the
    /// larger coefficient magnitude.
    pub fn approx_eq(&self, other: &Expression, rel_tol: f64) -> bool {
        let diff = self.sub(other);
        let scale = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| t.coeff.norm())
            .fold(1.0_f64, f64::max);
        diff.terms.iter().all(|t| t.coeff.norm() <= rel_tol * scale)
    }
}

impl fmt::Display for Expression {
    /// Renders conjugate pairs back as real sin/cos combinations.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut used = vec![false; self.terms.len()];
        let mut parts = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let oscillating = t.xexp.im.abs() > KEY_TOLERANCE || t.texp.im.abs() > KEY_TOLERANCE;
            let partner = if oscillating {
                let key = (t.xpow, t.tpow, t.xexp.conj(), t.texp.conj());
                self.terms
                    .iter()
                    .enumerate()
                    .find(|(j, o)| !used[*j] && keys_match(&o.key(), &key))
                    .map(|(j, o)| (j, *o))
            } else {
                None
            };
            match partner {
                Some((j, o))
                    if (o.coeff - t.coeff.conj()).norm() <= 1e-12 * t.coeff.norm().max(1.0) =>
                {
                    used[j] = true;
                    // c e^{iθ} + c̄ e^{−iθ} = 2Re(c) cos θ − 2Im(c) sin θ
                    let (t, c) = if t.xexp.im + t.texp.im >= 0.0 {
                        (t, t.coeff)
                    } else {
                        (&o, o.coeff)
                    };
                    let mut s = String::new();
                    let arg = fmt_linear(t.xexp.im, t.texp.im);
                    let mut trig = Vec::new();
                    if (2.0 * c.re).abs() > 1e-15 {
                        trig.push(format!("{}·cos({arg})", fmt_g(2.0 * c.re, 6)));
                    }
                    if (2.0 * c.im).abs() > 1e-15 {
                        trig.push(format!("{}·sin({arg})", fmt_g(-2.0 * c.im, 6)));
                    }
                    s.push('(');
                    s.push_str(&trig.join(" + "));
                    s.push(')');
                    s.push_str(&powers_string(t.xpow, t.tpow));
                    let growth = fmt_linear(t.xexp.re, t.texp.re);
                    if growth != "0" {
                        s.push_str(&format!("·exp({growth})"));
                    }
                    parts.push(s);
                }
                _ => {
                    let mut s = if t.coeff.im.abs() <= 1e-15 * t.coeff.norm().max(1.0) {
                        fmt_g(t.coeff.re, 6)
                    } else {
                        format!("({})", fmt_complex(t.coeff))
                    };
                    s.push_str(&powers_string(t.xpow, t.tpow));
                    if t.xexp.norm() > KEY_TOLERANCE || t.texp.norm() > KEY_TOLERANCE {
                        if oscillating {
                            s.push_str(&format!(
                                "·exp(({})X + ({})T)",
                                fmt_complex(t.xexp),
                                fmt_complex(t.texp)
                            ));
                        } else {
                            s.push_str(&format!("·exp({})", fmt_linear(t.xexp.re, t.texp.re)));
                        }
                    }
                    parts.push(s);
                }
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn fmt_complex(c: Complex) -> String {
    format!(
        "{}{}{}i",
        fmt_g(c.re, 6),
        if c.im < 0.0 { "-" } else { "+" },
        fmt_g(c.im.abs(), 6)
    )
}

fn fmt_linear(a: f64, b: f64) -> String {
    let mut parts = Vec::new();
    if a.abs() > KEY_TOLERANCE {
        parts.push(format!("{}X", fmt_g(a, 6)));
    }
    if b.abs() > KEY_TOLERANCE {
        parts.push(format!("{}T", fmt_g(b, 6)));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn powers_string(xpow: u32, tpow: u32) -> String {
    let mut s = String::new();
    match xpow {
        0 => {}
        1 => s.push_str("·X"),
        n => s.push_str(&format!("·X^{n}")),
    }
    match tpow {
        0 => {}
        1 => s.push_str("·T"),
        m => s.push_str(&format!("·T^{m}")),
    }
    s
}

fn write_powers(f: &mut fmt::Formatter<'_>, xpow: u32, tpow: u32) -> fmt::Result {
    write!(f, "{}", powers_string(xpow, tpow))
}

impl Add for &Expression {
    type Output = Expression;
    fn add(self, rhs: &Expression) -> Expression {
        Expression::add(self, rhs)
    }
}

impl Sub for &Expression {
    type Output = Expression;
    fn sub(self, rhs: &Expression) -> Expression {
        Expression::sub(self, rhs)
    }
}

impl Mul for &Expression {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        self.multiply(rhs)
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        self.scale(-1.0)
    }
}

/// JSON record for one term: `{"coeff": [re, im], "xpow": n, ...}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: [f64; 2],
    pub xpow: u32,
    pub tpow: u32,
    pub xexp: [f64; 2],
    pub texp: [f64; 2],
}

impl From<MonomialTerm> for TermRecord {
    fn from(t: MonomialTerm) -> Self {
        Self {
            coeff: [t.coeff.re, t.coeff.im],
            xpow: t.xpow,
            tpow: t.tpow,
            xexp: [t.xexp.re, t.xexp.im],
            texp: [t.texp.re, t.texp.im],
        }
    }
}

impl From<TermRecord> for MonomialTerm {
    fn from(r: TermRecord) -> Self {
        let c = |a: [f64; 2]| Complex::new(a[0], a[1]);
        MonomialTerm::new(c(r.coeff), r.xpow, r.tpow, c(r.xexp), c(r.texp))
    }
}

impl TryFrom<Vec<TermRecord>> for Expression {
    type Error = Error;
    fn try_from(records: Vec<TermRecord>) -> Result<Self> {
        Expression::canonicalize(records.into_iter().map(MonomialTerm::from).collect())
    }
}

impl From<Expression> for Vec<TermRecord> {
    fn from(e: Expression) -> Self {
        e.terms.into_iter().map(TermRecord::from).collect()
    }
}
