//! Conformable fractional calculus helpers: the stretched-coordinate map
//! `(x, t) ↦ (x^p/p, t^q/q)` and finite-difference oracles for the
//! conformable derivative. The solver never differentiates numerically;
//! these exist to check it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Default increment for the limit quotient.
pub const DEFAULT_DELTA: f64 = 1e-6;

/// Conformable orders `p` (space) and `q` (time), both in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    p: f64,
    q: f64,
}

impl FracParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Domain(format!("order {name} = {v} outside (0, 1]")));
            }
        }
        Ok(Self { p, q })
    }

    pub fn integer() -> Self {
        Self { p: 1.0, q: 1.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn to_stretched(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        to_stretched(x, t, *self)
    }

    pub fn from_stretched(&self, big_x: f64, big_t: f64) -> Result<(f64, f64)> {
        from_stretched(big_x, big_t, *self)
    }
}

impl Default for FracParams {
    fn default() -> Self {
        Self::integer()
    }
}

pub fn to_stretched(x: f64, t: f64, params: FracParams) -> Result<(f64, f64)> {
    if x.is_nan() || t.is_nan() || x < 0.0 || t < 0.0 {
        return Err(Error::Domain(format!(
            "physical point ({x}, {t}) must be non-negative"
        )));
    }
    Ok((x.powf(params.p) / params.p, t.powf(params.q) / params.q))
}

pub fn from_stretched(big_x: f64, big_t: f64, params: FracParams) -> Result<(f64, f64)> {
    if big_x.is_nan() || big_t.is_nan() || big_x < 0.0 || big_t < 0.0 {
        return Err(Error::Domain(format!(
            "stretched point ({big_x}, {big_t}) must be non-negative"
        )));
    }
    Ok((
        (params.p * big_x).powf(1.0 / params.p),
        (params.q * big_t).powf(1.0 / params.q),
    ))
}

fn check_order(order: f64) -> Result<()> {
    if order > 0.0 && order <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("order {order} outside (0, 1]")))
    }
}

/// `x^{1−p} · (h(x+step) − h(x−step)) / (2 step)`.
pub fn conformable_dx_numeric<F>(h: F, x: f64, t: f64, p: f64, step: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    check_order(p)?;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "conformable derivative needs x > 0, got {x}"
        )));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let central = (h(x + step, t) - h(x - step, t)) / (2.0 * step);
    Ok(x.powf(1.0 - p) * central)
}

/// Same oracle along `t` with order `q`.
pub fn conformable_dt_numeric<F>(h: F, x: f64, t: f64, q: f64, step: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    conformable_dx_numeric(|a, b| h(b, a), t, x, q, step)
}

/// Forward quotient `[h(x + δ x^{1−p}) − h(x)] / δ` from the limit definition.
pub fn conformable_dx_limit<F>(h: F, x: f64, t: f64, p: f64, delta: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    check_order(p)?;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "conformable derivative needs x > 0, got {x}"
        )));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    Ok((h(x + delta * x.powf(1.0 - p), t) - h(x, t)) / delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_orders() {
        assert!(FracParams::new(0.0, 1.0).is_err());
        assert!(FracParams::new(1.0, 1.2).is_err());
        assert!(FracParams::new(f64::NAN, 0.5).is_err());
        assert!(FracParams::new(0.5, 1.0).is_ok());
    }

    #[test]
    fn stretched_examples() {
        let one = FracParams::integer();
        assert_eq!(to_stretched(1.0, 1.0, one).unwrap(), (1.0, 1.0));
        let half = FracParams::new(0.5, 0.5).unwrap();
        assert_eq!(to_stretched(1.0, 1.0, half).unwrap(), (2.0, 2.0));
        let mixed = FracParams::new(0.5, 1.0).unwrap();
        let (big_x, big_t) = to_stretched(2.0, 0.0, mixed).unwrap();
        assert!((big_x - 2.0 * 2.0_f64.sqrt()).abs() < 1e-15);
        assert!((big_x - 2.828427).abs() < 1e-6);
        assert_eq!(big_t, 0.0);
        assert_eq!(to_stretched(0.0, 0.0, half).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn stretched_domain_errors() {
        let one = FracParams::integer();
        assert!(matches!(
            to_stretched(-1.0, 0.0, one),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            to_stretched(1.0, -0.1, one),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            from_stretched(-1.0, 0.0, one),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn inverse_examples() {
        let one = FracParams::integer();
        assert_eq!(from_stretched(1.0, 1.0, one).unwrap(), (1.0, 1.0));
        let half = FracParams::new(0.5, 0.5).unwrap();
        let (x, t) = from_stretched(2.0, 2.0, half).unwrap();
        assert!((x - 1.0).abs() < 1e-15 && (t - 1.0).abs() < 1e-15);
        let params = FracParams::new(0.8, 0.9).unwrap();
        let (big_x, big_t) = to_stretched(1.7, 0.4, params).unwrap();
        let (x, t) = from_stretched(big_x, big_t, params).unwrap();
        assert!((x - 1.7).abs() < 1e-12 * 1.7);
        assert!((t - 0.4).abs() < 1e-12 * 0.4);
    }

    #[test]
    fn stretched_map_is_monotone() {
        let params = FracParams::new(0.6, 0.85).unwrap();
        let mut last = (-1.0, -1.0);
        for i in 0..50 {
            let v = 0.05 * i as f64;
            let cur = to_stretched(v, v, params).unwrap();
            assert!(cur.0 > last.0 && cur.1 > last.1);
            last = cur;
        }
    }

    #[test]
    fn numeric_derivative_examples() {
        let p = 0.5;
        // d^p/dx^p (x^p/p)^2 = 2 (x^p/p) = 4 at x = 1
        let h = |x: f64, _t: f64| (x.powf(p) / p).powi(2);
        let d = conformable_dx_numeric(h, 1.0, 0.0, p, DEFAULT_STEP).unwrap();
        assert!((d - 4.0).abs() < 1e-8);

        let d = conformable_dx_numeric(|x, _| x, 0.7, 0.0, 1.0, DEFAULT_STEP).unwrap();
        assert!((d - 1.0).abs() < 1e-10);

        let p = 0.7;
        let h = |x: f64, _t: f64| (x.powf(p) / p).sin();
        let d = conformable_dx_numeric(h, 1.0, 0.0, p, DEFAULT_STEP).unwrap();
        assert!((d - (1.0 / p).cos()).abs() < 1e-8);
    }

    #[test]
    fn numeric_derivative_requires_positive_x() {
        let err = conformable_dx_numeric(|x, _| x, 0.0, 0.0, 0.5, DEFAULT_STEP).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let err = conformable_dx_limit(|x, _| x, -1.0, 0.0, 0.5, DEFAULT_DELTA).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn order_one_is_ordinary_central_difference() {
        let h = |x: f64, t: f64| (x * 1.3).exp() * t;
        let (x, t, step) = (0.9, 0.4, 1e-3);
        let ordinary = (h(x + step, t) - h(x - step, t)) / (2.0 * step);
        assert_eq!(
            conformable_dx_numeric(h, x, t, 1.0, step).unwrap(),
            ordinary
        );
    }

    #[test]
    fn limit_quotient_examples() {
        for p in [0.3, 0.6, 1.0] {
            let h = move |x: f64, _t: f64| x.powf(p) / p;
            let d = conformable_dx_limit(h, 1.4, 0.0, p, 1e-7).unwrap();
            assert!((d - 1.0).abs() < 1e-5, "p = {p}: {d}");
        }
        let d = conformable_dx_limit(|x, _| x * x, 1.0, 0.0, 1.0, 1e-7).unwrap();
        assert!((d - 2.0).abs() < 1e-6);
    }

    #[test]
    fn limit_quotient_converges_at_first_order() {
        let p = 0.7;
        let h = move |x: f64, _t: f64| (x.powf(p) / p).sin();
        let x = 1.2;
        let reference = conformable_dx_numeric(h, x, 0.0, p, DEFAULT_STEP).unwrap();
        let mut prev: Option<f64> = None;
        for k in 0..5 {
            let delta = 1e-3 / 2f64.powi(k);
            let err = (conformable_dx_limit(h, x, 0.0, p, delta).unwrap() - reference).abs();
            if let Some(prev) = prev {
                let ratio = err / prev;
                assert!((ratio - 0.5).abs() < 0.1, "ratio {ratio} at delta {delta}");
            }
            prev = Some(err);
        }
    }

    #[test]
    fn time_oracle_matches_space_oracle_by_symmetry() {
        let q = 0.8;
        let h = move |_x: f64, t: f64| (t.powf(q) / q).exp();
        let d = conformable_dt_numeric(h, 0.0, 0.5, q, DEFAULT_STEP).unwrap();
        assert!((d - h(0.0, 0.5)).abs() < 1e-8);
    }
}
