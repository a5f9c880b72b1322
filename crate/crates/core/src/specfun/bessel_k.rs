//! Modified Bessel functions of the second kind from
//! `K_μ(x) = ∫₀^∞ e^{−x cosh t} cosh(μt) dt`.
//!
//! For purely imaginary order `μ = iν` the integrand becomes
//! `e^{−x cosh t} cos(νt)`. On the real axis this cancels down to
//! `K_{iν}(x) ~ e^{−πν/2}` when `x < ν`, so the path is moved to
//! `Im t = θ`, which by the conjugate symmetry of the integrand gives
//!
//! `K_{iν}(x) = ∫₀^∞ Re exp(−x cosh(t + iθ) + iν(t + iθ)) dt`.
//!
//! `θ` sits at the saddle `arcsin(ν/x)` when `ν < x` and just below `π/2`
//! otherwise, so the integrand magnitude matches the result's.

use std::f64::consts::FRAC_PI_2;

use super::Pair;
use crate::quad::{integrate_vec, Quadrature, Tolerance};

/// Contour height and the exponent `S` with `|K_{iν}(x)| ≲ e^{−S}`.
pub(crate) fn contour(nu: f64, x: f64) -> (f64, f64) {
    if nu == 0.0 {
        return (0.0, x);
    }
    let (theta_s, s) = if nu < x {
        let th = (nu / x).asin();
        (th, (x * x - nu * nu).sqrt() + nu * th)
    } else {
        (FRAC_PI_2, nu * FRAC_PI_2)
    };
    let delta = (1.0 / nu).min(0.5);
    (theta_s.min(FRAC_PI_2 - delta), s)
}

pub(crate) fn k_imag_pair(nu: f64, x: f64) -> Pair {
    let nu = nu.abs();
    let (theta, s) = contour(nu, x);
    let (sin_th, cos_th) = theta.sin_cos();
    let base = s - nu * theta;
    // exponent at the cut is 50 below the envelope
    let reach = (50.0 + base) / (x * cos_th);
    let t_end = reach.max(1.0).acosh().max(1.0);
    let q = integrate_vec(
        |t: f64| {
            let (ch, sh) = (t.cosh(), t.sinh());
            let amp = (base - x * cos_th * ch).exp();
            let (sp, cp) = (nu * t - x * sin_th * sh).sin_cos();
            [amp * cp, -amp * (ch * cos_th * cp - sh * sin_th * sp)]
        },
        0.0,
        t_end,
        Tolerance::new(1e-14, 1e-13),
        4000,
    );
    let scale = (-s).exp();
    Pair {
        value: scale * q.value[0],
        deriv: scale * q.value[1],
        err: scale * (q.error + 1e-15),
        converged: q.converged,
    }
}

/// `e^{ζ} [K_{1/3}(ζ), K_{2/3}(ζ)]` for the Airy connection formulas.
pub(crate) fn k_third_orders_scaled(zeta: f64) -> Quadrature<2> {
    let mut t_end: f64 = 1.0;
    while zeta * (t_end.cosh() - 1.0) - 2.0 * t_end / 3.0 < 45.0 {
        t_end *= 1.25;
    }
    integrate_vec(
        |t: f64| {
            let e = (-zeta * (t.cosh() - 1.0)).exp();
            [e * (t / 3.0).cosh(), e * (2.0 * t / 3.0).cosh()]
        },
        0.0,
        t_end,
        Tolerance::new(0.0, 1e-13),
        400,
    )
}
