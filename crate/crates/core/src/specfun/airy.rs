//! Airy function of the first kind.
//!
//! Regions:
//! - `|y| <= 2`: Maclaurin series about the origin.
//! - `y > 2`: `Ai(y) = π⁻¹ √(y/3) K_{1/3}(ζ)`, `Ai'(y) = -π⁻¹ (y/√3) K_{2/3}(ζ)`
//!   with `ζ = 2/3 y^{3/2}`, the `K` integrals having positive integrands.
//! - `-30 <= y < -2`: `J_{±1/3}`, `J_{±2/3}` connection formulas, evaluated
//!   through Schläfli's integral with the `±ν` pairs combined before integrating.
//! - `y < -30`: oscillatory asymptotic expansion.

use std::f64::consts::{FRAC_PI_4, PI};

use super::bessel_k::k_third_orders_scaled;
use super::Pair;
use crate::quad::{integrate_vec, Tolerance};

/// `Ai(0)` and `-Ai'(0)`.
pub(crate) const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004;
pub(crate) const MINUS_AIP0: f64 = 0.258_819_403_792_806_798_405_183_560_189;

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 30.0;

pub(crate) fn ai_pair(y: f64) -> Pair {
    if y.abs() <= SERIES_LIMIT {
        maclaurin(y)
    } else if y > 0.0 {
        positive(y)
    } else if y >= -ASYMPTOTIC_LIMIT {
        negative(y)
    } else {
        asymptotic_negative(y)
    }
}

pub(crate) fn maclaurin(y: f64) -> Pair {
    if y == 0.0 {
        return Pair {
            value: AI0,
            deriv: -MINUS_AIP0,
            err: f64::EPSILON,
            converged: true,
        };
    }
    let y3 = y * y * y;
    // f = Σ a_{3k} y^{3k}, g = Σ a_{3k+1} y^{3k+1} with a_{n+3} = a_n / ((n+2)(n+3))
    let mut tf = 1.0;
    let mut tg = y;
    let (mut f, mut g) = (tf, tg);
    let (mut df, mut dg) = (0.0, 1.0);
    let mut mass = 1.0 + y.abs();
    let mut k = 1.0;
    loop {
        tf *= y3 / ((3.0 * k - 1.0) * (3.0 * k));
        tg *= y3 / ((3.0 * k) * (3.0 * k + 1.0));
        f += tf;
        g += tg;
        let dtf = tf * 3.0 * k / y;
        let dtg = tg * (3.0 * k + 1.0) / y;
        df += dtf;
        dg += dtg;
        mass += tf.abs() + tg.abs() + dtf.abs() + dtg.abs();
        if tf.abs() + tg.abs() + dtf.abs() + dtg.abs() < 1e-18 * (f.abs() + g.abs()) || k > 60.0 {
            break;
        }
        k += 1.0;
    }
    Pair {
        value: AI0 * f - MINUS_AIP0 * g,
        deriv: AI0 * df - MINUS_AIP0 * dg,
        err: 4.0 * f64::EPSILON * mass,
        converged: true,
    }
}

fn positive(y: f64) -> Pair {
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let k = k_third_orders_scaled(zeta);
    let scale = (-zeta).exp() / PI;
    let value = scale * (y / 3.0).sqrt() * k.value[0];
    let deriv = -scale * y / 3f64.sqrt() * k.value[1];
    Pair {
        value,
        deriv,
        err: (value.abs() + deriv.abs()) * (k.error + 4.0 * f64::EPSILON),
        converged: k.converged,
    }
}

fn negative(y: f64) -> Pair {
    let r = -y;
    let zeta = 2.0 / 3.0 * r * r.sqrt();
    let tol = Tolerance::new(1e-14, 1e-13);
    let osc = integrate_vec(
        |th: f64| {
            let z = zeta * th.sin();
            [(th / 3.0).cos() * z.cos(), (2.0 * th / 3.0).sin() * z.sin()]
        },
        0.0,
        PI,
        tol,
        400,
    );
    // e^{-ζ sinh t} cosh(2t/3) < e^{-45} beyond here
    let mut t_end = (45.0 / zeta).asinh();
    for _ in 0..4 {
        t_end = ((45.0 + 2.0 * t_end / 3.0) / zeta).asinh();
    }
    let tail = integrate_vec(
        |t: f64| {
            let e = (-zeta * t.sinh()).exp();
            [e * (t / 3.0).sinh(), e * (2.0 * t / 3.0).cosh()]
        },
        0.0,
        t_end,
        tol,
        400,
    );
    let s3 = 3f64.sqrt() / PI;
    let value = r.sqrt() / 3.0 * (2.0 / PI * osc.value[0] + s3 * tail.value[0]);
    let deriv = r / 3.0 * (2.0 / PI * osc.value[1] - s3 * tail.value[1]);
    Pair {
        value,
        deriv,
        err: r * (osc.error + tail.error) + 8.0 * f64::EPSILON * r,
        converged: osc.converged && tail.converged,
    }
}

fn asymptotic_negative(y: f64) -> Pair {
    let r = -y;
    let zeta = 2.0 / 3.0 * r * r.sqrt();
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    // u_k, v_k of the standard expansion; truncated at the smallest term
    let mut u = 1.0;
    let (mut ue, mut uo, mut ve, mut vo) = (1.0, 0.0, 1.0, 0.0);
    let mut zpow = 1.0;
    let mut last = f64::INFINITY;
    let mut err = 0.0;
    for k in 1..40 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zpow /= zeta;
        let term = u.abs() * zpow;
        if term > last {
            break;
        }
        last = term;
        err = term;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * u * zpow;
            ve += sign * v * zpow;
        } else {
            uo += sign * u * zpow;
            vo += sign * v * zpow;
        }
        if term < 1e-17 {
            break;
        }
    }
    let amp = 1.0 / (PI.sqrt() * r.powf(0.25));
    let damp = r.powf(0.25) / PI.sqrt();
    Pair {
        value: amp * (c * ue + s * uo),
        deriv: damp * (s * ve - c * vo),
        err: (amp + damp) * (err + 4.0 * f64::EPSILON * zeta),
        converged: true,
    }
}
