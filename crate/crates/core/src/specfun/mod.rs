//! Special functions needed by the quantization conditions: Airy `Ai`,
//! Bessel `J` of real order and the real-valued Macdonald function `K_{iν}`
//! of purely imaginary order, each together with its argument derivative.
//!
//! Every evaluation carries an absolute error estimate so that callers can
//! decide whether a result is good enough to bracket a root with.

mod airy;
mod bessel_j;
mod bessel_k;

use serde::Serialize;

use crate::error::{domain, Error, Result};

pub(crate) use airy::ai_pair;
pub(crate) use bessel_j::j_pair;
pub(crate) use bessel_k::k_imag_pair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// A function value and its derivative sharing one error estimate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pair {
    pub value: f64,
    pub deriv: f64,
    pub err: f64,
    pub converged: bool,
}

impl Pair {
    fn pick(self, derivative: bool) -> Result<EvalResult> {
        if !self.converged {
            return Err(Error::Accuracy {
                achieved: self.err,
                requested: 0.0,
            });
        }
        Ok(EvalResult {
            value: if derivative { self.deriv } else { self.value },
            abs_error_estimate: self.err,
        })
    }
}

fn finite(what: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(what, format!("{v} is not finite")))
    }
}

/// `Ai(y)` or `Ai'(y)`.
pub fn airy_ai(y: f64, derivative: bool) -> Result<EvalResult> {
    finite("airy argument", y)?;
    ai_pair(y).pick(derivative)
}

/// `J_ν(x)` or `dJ_ν/dx` for `0 ≤ ν ≤ 50`, `x > 0`.
pub fn bessel_j(nu: f64, x: f64, derivative: bool) -> Result<EvalResult> {
    finite("bessel order", nu)?;
    finite("bessel argument", x)?;
    if !(0.0..=50.0).contains(&nu) {
        return Err(domain("bessel order", format!("{nu} not in [0, 50]")));
    }
    if x <= 0.0 {
        return Err(domain("bessel argument", format!("{x} is not positive")));
    }
    j_pair(nu, x).pick(derivative)
}

/// `K_{iν}(x)` or `∂K_{iν}/∂x`, real for real `ν` and `x > 0`. Even in `ν`.
pub fn bessel_k_imag(nu: f64, x: f64, derivative: bool) -> Result<EvalResult> {
    finite("imaginary order", nu)?;
    finite("bessel argument", x)?;
    if x <= 0.0 {
        return Err(domain("bessel argument", format!("{x} is not positive")));
    }
    k_imag_pair(nu, x).pick(derivative)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_errors() {
        assert!(matches!(
            airy_ai(f64::NAN, false),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            airy_ai(f64::INFINITY, true),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            bessel_j(-0.5, 1.0, false),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            bessel_j(50.5, 1.0, false),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            bessel_j(1.0, 0.0, false),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            bessel_k_imag(1.0, -2.0, false),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            bessel_k_imag(1.0, 0.0, true),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn error_estimates_are_finite_and_nonnegative() {
        for &(r, e) in &[
            airy_ai(-4.0, false).map(|r| (r.value, r.abs_error_estimate)),
            bessel_j(3.2, 17.0, true).map(|r| (r.value, r.abs_error_estimate)),
            bessel_k_imag(6.0, 1.5, false).map(|r| (r.value, r.abs_error_estimate)),
        ]
        .map(|r| r.unwrap())
        {
            assert!(r.is_finite());
            assert!(e.is_finite() && e >= 0.0);
        }
    }
}
