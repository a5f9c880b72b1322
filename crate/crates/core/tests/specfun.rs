use proptest::prelude::*;
use twopiece::specfun::{airy_ai, bessel_j, bessel_k_imag};

type Func = dyn Fn(f64, bool) -> f64;

/// Fourth-order central difference of `f` at `x`.
fn d1(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// `(f, f', f'')` with `f''` differenced from the analytic derivative.
fn triple(f: &Func, x: f64, h: f64) -> (f64, f64, f64) {
    (f(x, false), f(x, true), d1(&|t| f(t, true), x, h))
}

fn airy(y: f64, d: bool) -> f64 {
    airy_ai(y, d).unwrap().value
}

/// Residual of `Ai'' = y Ai` relative to the largest term.
fn airy_residual(y: f64) -> f64 {
    let (f, _, f2) = triple(&airy, y, 1e-2);
    (f2 - y * f).abs() / f2.abs().max((y * f).abs()).max(1.0)
}

/// Residual of `x²ψ'' + xψ' + (x² ∓ ν²)ψ = 0` relative to its largest term.
/// `sign = −1` is Bessel's equation, `+1` the one solved by `K_{iν}`.
fn bessel_residual(f: &Func, nu: f64, x: f64, sign: f64, reduced: f64) -> f64 {
    let h = 0.01 * x.min(1.0) * (x / nu.max(x));
    let (v, d, d2) = triple(f, x, h);
    let terms = [x * x * d2, x * d, (reduced * x * x + sign * nu * nu) * v];
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    terms.iter().sum::<f64>().abs() / scale
}

fn derivative_mismatch(f: &Func, x: f64, h: f64, freq: f64) -> f64 {
    let fd = d1(&|t| f(t, false), x, h);
    let d = f(x, true);
    (fd - d).abs() / (d.abs() + freq * f(x, false).abs())
}

#[test]
fn airy_equation_on_a_grid() {
    for i in 0..=300 {
        let y = -10.0 + 15.0 * i as f64 / 300.0;
        let r = airy_residual(y);
        assert!(r <= 1e-7, "y = {y}: {r}");
    }
}

#[test]
fn bessel_equation_on_a_grid() {
    for &nu in &[0.0, 0.5, 1.0, 2.7, 8.0, 19.3, 35.0, 50.0] {
        for &x in &[0.3, 1.0, 3.0, 7.5, 20.0, 49.0, 73.0, 100.0] {
            let f = move |t: f64, d: bool| bessel_j(nu, t, d).unwrap().value;
            let r = bessel_residual(&f, nu, x, -1.0, 1.0);
            assert!(r <= 1e-7, "nu = {nu}, x = {x}: {r}");
        }
    }
}

#[test]
fn imaginary_order_equation_on_a_grid() {
    for &nu in &[0.0, 0.7, 2.5, 6.0, 12.0, 20.0] {
        for &x in &[0.5, 1.5, 3.87, 8.0, 15.0, 30.0, 60.0] {
            let f = move |t: f64, d: bool| bessel_k_imag(nu, t, d).unwrap().value;
            let r = bessel_residual(&f, nu, x, 1.0, -1.0);
            assert!(r <= 1e-7, "nu = {nu}, x = {x}: {r}");
        }
    }
}

#[test]
fn derivatives_match_differences() {
    for i in 0..=60 {
        let y = -10.0 + 15.0 * i as f64 / 60.0;
        let m = derivative_mismatch(&airy, y, 1e-3, y.abs().sqrt().max(1.0));
        assert!(m <= 1e-6, "Ai' at {y}: {m}");
    }
    for &(nu, x) in &[
        (0.0, 2.0),
        (1.5, 9.0),
        (12.0, 4.0),
        (40.0, 45.0),
        (50.0, 99.0),
    ] {
        let f = move |t: f64, d: bool| bessel_j(nu, t, d).unwrap().value;
        let freq = (nu / x).max(1.0);
        let m = derivative_mismatch(&f, x, 1e-3 * x.min(1.0) / freq, freq);
        assert!(m <= 1e-6, "J' nu = {nu}, x = {x}: {m}");
    }
    for &(nu, x) in &[
        (0.0, 1.0),
        (2.0, 3.87),
        (9.0, 2.0),
        (20.0, 25.0),
        (5.0, 60.0),
    ] {
        let f = move |t: f64, d: bool| bessel_k_imag(nu, t, d).unwrap().value;
        let freq = (nu / x).max(1.0);
        let m = derivative_mismatch(&f, x, 1e-3 * x.min(1.0) / freq, freq);
        assert!(m <= 1e-6, "K' nu = {nu}, x = {x}: {m}");
    }
}

#[test]
fn imaginary_order_decays_beyond_the_order() {
    for &nu in &[0.0, 1.0, 4.0, 10.0, 20.0] {
        let xs: Vec<f64> = (0..=200)
            .map(|i| nu + 0.05 + 0.3 * i as f64)
            .filter(|&x| x <= 60.0)
            .collect();
        let vals: Vec<f64> = xs
            .iter()
            .map(|&x| bessel_k_imag(nu, x, false).unwrap().value)
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0], "nu = {nu}");
        }
        for &x in &xs {
            assert!(bessel_k_imag(nu, x, true).unwrap().value < 0.0);
        }
    }
}

/// `Ai` and `Ai'` from the Maclaurin series alone.
fn airy_series(y: f64) -> (f64, f64) {
    let c1 = 0.355_028_053_887_817_2;
    let c2 = 0.258_819_403_792_806_8;
    let (mut f, mut g) = (1.0, y);
    let (mut sf, mut sg) = (1.0, y);
    let (mut df, mut dg) = (0.0, 1.0);
    for k in 1..60 {
        let k = k as f64;
        f *= y * y * y / ((3.0 * k - 1.0) * (3.0 * k));
        g *= y * y * y / ((3.0 * k) * (3.0 * k + 1.0));
        sf += f;
        sg += g;
        df += 3.0 * k * f / y;
        dg += (3.0 * k + 1.0) * g / y;
    }
    (c1 * sf - c2 * sg, c1 * df - c2 * dg)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn first_zero_of_airy_derivative() {
    let root = bisect(|y| airy_series(y).1, -1.5, -0.5);
    assert!((root + 1.018_793_0).abs() < 1e-7, "{root}");
    assert!(airy_ai(-1.018_793_0, true).unwrap().value.abs() < 1e-6);
    assert!((airy_ai(0.0, false).unwrap().value - 0.355_028_053_9).abs() < 1e-10);
    assert!(airy_ai(30.0, false).unwrap().value < 1e-12);
}

#[test]
fn first_zero_of_j0() {
    let j0_series = |x: f64| {
        let (mut t, mut s) = (1.0, 1.0);
        for k in 1..40 {
            t *= -(x * x) / (4.0 * (k * k) as f64);
            s += t;
        }
        s
    };
    let root = bisect(j0_series, 2.0, 3.0);
    assert!((root - 2.404_825_6).abs() < 1e-7);
    assert!(bessel_j(0.0, 2.404_825_6, false).unwrap().value.abs() < 1e-7);
    assert!((bessel_j(0.0, 1e-12, false).unwrap().value - 1.0).abs() < 1e-15);
    assert!(
        bessel_j(0.5, std::f64::consts::PI, false)
            .unwrap()
            .value
            .abs()
            < 1e-9
    );
}

/// Trapezoid rule on `∫₀^T e^{−x cosh t} cos(νt) dt`; no cancellation when `x > ν`.
fn k_by_trapezoid(nu: f64, x: f64) -> f64 {
    let (t_max, n) = (8.0, 16_000);
    let h = t_max / n as f64;
    let f = |t: f64| (-x * f64::cosh(t)).exp() * (nu * t).cos();
    h * (0.5 * f(0.0) + (1..n).map(|i| f(i as f64 * h)).sum::<f64>())
}

#[test]
fn imaginary_order_against_brute_force() {
    let ratio = bessel_k_imag(1.0, 10.0, false).unwrap().value
        / ((std::f64::consts::PI / 20.0).sqrt() * (-10.0f64).exp());
    // the leading asymptotic term overshoots by the (4ν² − 1)/8x correction with ν → i
    assert!((ratio - 0.942_1).abs() < 1e-3, "{ratio}");
    for &(nu, x) in &[(1.0, 10.0), (0.0, 2.0), (3.0, 7.0), (5.5, 30.0)] {
        let k = bessel_k_imag(nu, x, false).unwrap().value;
        let reference = k_by_trapezoid(nu, x);
        assert!(
            (k - reference).abs() <= 1e-10 * reference.abs(),
            "nu = {nu}, x = {x}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn airy_equation_sampled(y in -10.0f64..5.0) {
        prop_assert!(airy_residual(y) <= 1e-7);
    }

    #[test]
    fn bessel_equation_sampled(nu in 0.0f64..50.0, x in 0.2f64..100.0) {
        let f = move |t: f64, d: bool| bessel_j(nu, t, d).unwrap().value;
        prop_assert!(bessel_residual(&f, nu, x, -1.0, 1.0) <= 1e-7);
    }

    #[test]
    fn imaginary_order_equation_sampled(nu in 0.0f64..20.0, x in 0.3f64..60.0) {
        let f = move |t: f64, d: bool| bessel_k_imag(nu, t, d).unwrap().value;
        prop_assert!(bessel_residual(&f, nu, x, 1.0, -1.0) <= 1e-7);
    }

    #[test]
    fn imaginary_order_is_even_in_order(nu in 0.0f64..20.0, x in 0.3f64..60.0) {
        let a = bessel_k_imag(nu, x, false).unwrap().value;
        let b = bessel_k_imag(-nu, x, false).unwrap().value;
        prop_assert_eq!(a, b);
    }
}
