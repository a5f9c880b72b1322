//! Bessel function of the first kind, real order.
//!
//! The ascending series is used whenever its terms do not cancel badly
//! (the absolute term sum is `I_ν(x)`-sized); otherwise Schläfli's integral
//!
//! `J_ν(x) = π⁻¹∫₀^π cos(νθ − x sinθ) dθ − sin(νπ)/π ∫₀^∞ e^{−x sinh t − νt} dt`,
//!
//! which holds for every real order and loses only `O(1/|J|)` digits.

use std::f64::consts::PI;

use super::Pair;
use crate::quad::{integrate_vec, Tolerance};

pub(crate) fn j_pair(nu: f64, x: f64) -> Pair {
    if nu >= 0.0 {
        let (p, mass) = series(nu, x);
        if mass <= 100.0 || mass <= 1e4 * p.value.abs() {
            return p;
        }
    }
    schlafli(nu, x)
}

/// Series value plus the sum of absolute terms.
pub(crate) fn series(nu: f64, x: f64) -> (Pair, f64) {
    let half = 0.5 * x;
    let q = -half * half;
    let mut t = (nu * half.ln() - libm::lgamma(nu + 1.0)).exp();
    let mut sum = t;
    let mut dsum = t * nu / x;
    let mut mass = t.abs();
    let mut dmass = dsum.abs();
    let mut k = 1.0;
    while k < 500.0 {
        t *= q / (k * (k + nu));
        let dt = t * (2.0 * k + nu) / x;
        sum += t;
        dsum += dt;
        mass += t.abs();
        dmass += dt.abs();
        if k > half && t.abs() <= 1e-17 * sum.abs() && dt.abs() <= 1e-17 * dsum.abs() {
            break;
        }
        if t == 0.0 {
            break;
        }
        k += 1.0;
    }
    let p = Pair {
        value: sum,
        deriv: dsum,
        err: 4.0 * f64::EPSILON * (mass + dmass),
        converged: true,
    };
    (p, mass)
}

/// `sin(νπ)`, exactly zero at integers.
fn sin_pi(nu: f64) -> f64 {
    let r = nu - 2.0 * (nu / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

pub(crate) fn schlafli(nu: f64, x: f64) -> Pair {
    let tol = Tolerance::new(1e-14, 1e-13);
    let osc = integrate_vec(
        |th: f64| {
            let phase = nu * th - x * th.sin();
            [phase.cos(), th.sin() * phase.sin()]
        },
        0.0,
        PI,
        tol,
        800,
    );
    let mut value = osc.value[0] / PI;
    let mut deriv = osc.value[1] / PI;
    let mut err = osc.error / PI;
    let mut converged = osc.converged;
    let s = sin_pi(nu);
    if s != 0.0 {
        // x sinh t + ν t ≥ 45 at the cut, with room for the sinh t factor
        let mut t_end: f64 = 0.25;
        while x * t_end.sinh() + (nu - 1.0) * t_end < 45.0 {
            t_end *= 1.25;
        }
        let tail = integrate_vec(
            |t: f64| {
                let sh = t.sinh();
                let e = (-x * sh - nu * t).exp();
                [e, sh * e]
            },
            0.0,
            t_end,
            tol,
            400,
        );
        value -= s / PI * tail.value[0];
        deriv += s / PI * tail.value[1];
        err += tail.error / PI;
        converged &= tail.converged;
    }
    Pair {
        value,
        deriv,
        err: err + 8.0 * f64::EPSILON,
        converged,
    }
}
