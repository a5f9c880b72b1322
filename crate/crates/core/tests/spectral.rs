use twopiece::oracle::{default_half_width, numerov_solve};
use twopiece::spectral::{
    normalize, position_moment, position_moments, third_derivative_jump, MomentValue,
};
use twopiece::wells::{solve_spectrum, Parity, WellKind, WellSpec};

fn benchmark_states() -> Vec<twopiece::wells::EigenState> {
    WellKind::ALL
        .iter()
        .flat_map(|&k| solve_spectrum(&WellSpec::benchmark(k), 2).unwrap())
        .collect()
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (f(a) + f(b) + inner)
}

#[test]
fn unit_norm_after_normalize() {
    for s in benchmark_states() {
        let n = normalize(&s).unwrap();
        let x = n.support;
        let check = 2.0 * simpson(|t| n.psi(t).powi(2), 0.0, x, 8_000);
        assert!(
            (check - 1.0).abs() < 1e-8,
            "{} n={}: {check}",
            s.well.kind,
            s.index
        );
        assert!(n.accuracy < 1e-10);
    }
}

#[test]
fn normalizing_twice_is_idempotent() {
    for s in benchmark_states() {
        let once = normalize(&s).unwrap();
        let twice = normalize(&once.state).unwrap();
        let rel = (twice.state.norm_const - once.state.norm_const).abs() / once.state.norm_const;
        assert!(rel < 1e-12, "{rel}");
    }
}

#[test]
fn norm_constant_matches_grid_solution() {
    let w = WellSpec::benchmark(WellKind::Triangular);
    let s = solve_spectrum(&w, 1).unwrap()[0];
    let n = normalize(&s).unwrap();
    let grid = numerov_solve(
        &w,
        Parity::Even,
        (s.energy - 0.1, s.energy + 0.1),
        1e-3,
        default_half_width(&w, s.energy),
    )
    .unwrap();
    // grid ψ(0) is unit-normalized too, so it fixes C through ψ(0) = C Ai(y0)
    let c_grid = grid.psi[0].abs() / s.eigenfunction(0.0).abs();
    assert!((c_grid - n.state.norm_const).abs() < 1e-3 * n.state.norm_const);
}

#[test]
fn p2_equals_energy_minus_mean_potential_and_kinetic_form() {
    for s in benchmark_states() {
        let n = normalize(&s).unwrap();
        let m = position_moment(&n, 1).unwrap();
        let p2 = m.value.finite().unwrap();
        let mean_v = 2.0
            * simpson(
                |t| s.well.potential(t) * n.psi(t).powi(2),
                0.0,
                n.support,
                8_000,
            );
        assert!((p2 - (s.energy - mean_v)).abs() < 1e-7 * p2);
        let kinetic = 2.0
            * simpson(
                |t| n.state.eigenfunction_derivative(t).powi(2),
                0.0,
                n.support,
                8_000,
            );
        assert!((p2 - kinetic).abs() < 1e-6 * p2, "{p2} vs {kinetic}");
    }
}

#[test]
fn moments_positive_and_third_finite() {
    for s in benchmark_states() {
        let n = normalize(&s).unwrap();
        let m = position_moments(&n).unwrap();
        assert!(m.p2 > 0.0 && m.p4 > 0.0);
        assert!(m.ev_terms.values().all(|v| v.is_finite()));
        assert!(matches!(m.p6_quadratic_form, MomentValue::Finite(v) if v > 0.0));
        // cutoff values approach the full integral from below
        for w in m.p6_cutoff_study.windows(2) {
            assert!(w[1].1 >= w[0].1);
        }
    }
}

#[test]
fn p4_is_mean_square_of_second_derivative() {
    for s in benchmark_states() {
        let n = normalize(&s).unwrap();
        let p4 = position_moment(&n, 2).unwrap().value.finite().unwrap();
        let h = 1e-3;
        let fd = 2.0
            * simpson(
                |t| {
                    let d2 = (n.psi(t + h) - 2.0 * n.psi(t) + n.psi(t - h)) / (h * h);
                    d2 * d2
                },
                0.0,
                n.support,
                40_000,
            );
        assert!((p4 - fd).abs() < 1e-3 * p4, "{p4} vs {fd}");
    }
}

#[test]
fn second_derivative_continuous_at_origin() {
    for s in benchmark_states() {
        let l = s.second_derivative(-1e-14);
        let r = s.second_derivative(1e-14);
        assert!((l - r).abs() <= 1e-10 * l.abs().max(1.0));
    }
}

#[test]
fn third_derivative_jump_matches_finite_differences() {
    for s in benchmark_states() {
        let n = normalize(&s).unwrap();
        let j = third_derivative_jump(&n);
        // one-sided second-order third-derivative stencil, Richardson-extrapolated
        let side = |sign: f64, h: f64| {
            let f = |k: f64| n.psi(sign * k * h);
            sign * (-5.0 * f(0.0) + 18.0 * f(1.0) - 24.0 * f(2.0) + 14.0 * f(3.0) - 3.0 * f(4.0))
                / (2.0 * h.powi(3))
        };
        let rich = |sign: f64| (4.0 * side(sign, 5e-3) - side(sign, 1e-2)) / 3.0;
        let fd_jump = rich(1.0) - rich(-1.0);
        match s.parity {
            Parity::Even => {
                assert!(
                    (fd_jump - j.predicted).abs() < 1e-4 * j.predicted.abs(),
                    "{fd_jump} vs {}",
                    j.predicted
                );
                assert!((j.jump - j.predicted).abs() < 1e-12 * j.predicted.abs());
            }
            Parity::Odd => {
                assert!(fd_jump.abs() < 1e-4 * j.right.abs(), "{fd_jump}");
                assert_eq!(j.jump, 0.0);
            }
        }
    }
}
