//! Normalization and position-representation moments.
//!
//! With `2m = ħ = 1` the momentum moments are quadratic forms in the
//! derivatives of `ψ`:
//!
//! * `⟨p²⟩ = ∫ ψ (E − V) ψ dx = ∫ (ψ')² dx`
//! * `⟨p⁴⟩ = ∫ (ψ'')² dx = ⟨(E − V)²⟩`, since `ψ'' = (V − E) ψ` pointwise
//! * `⟨p⁶⟩ = ∫ (ψ''')² dx` taken over `(−∞, 0) ∪ (0, ∞)`, with
//!   `ψ''' = V'ψ + (V − E)ψ'` on each open half-line
//!
//! The last form is the one a Fourier transform sees when `ψ'''` has only a
//! finite jump at the origin. The companion averages `⟨(E − V)^j⟩` are
//! reported alongside, since for `j = 3` they differ from the quadratic form
//! by boundary terms at the kink.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate_vec, Tolerance};
use crate::wells::{EigenState, Parity, WellKind};

/// Relative height below the peak at which `ψ` is treated as zero.
const SUPPORT_THRESHOLD: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedState {
    pub state: EigenState,
    /// Quadrature error estimate of `2∫₀^∞ ψ²` before rescaling.
    pub accuracy: f64,
    /// `X` such that `|ψ(x)| < 10⁻¹⁷ max|ψ|` for `x > X`.
    pub support: f64,
}

impl NormalizedState {
    pub fn psi(&self, x: f64) -> f64 {
        self.state.eigenfunction(x)
    }

    pub fn energy(&self) -> f64 {
        self.state.energy
    }

    pub fn parity(&self) -> Parity {
        self.state.parity
    }

    /// `(ψ, ψ')` for `x ≥ 0`.
    pub(crate) fn right_branch(&self, x: f64) -> (f64, f64) {
        self.state.right_branch(x)
    }
}

/// Sets `C` so that `2∫₀^∞ ψ² dx = 1`.
pub fn normalize(state: &EigenState) -> Result<NormalizedState> {
    let support = support_of(state);
    let q = integrate_vec(
        |x| {
            let f = state.right_branch(x).0;
            [f * f]
        },
        0.0,
        support,
        Tolerance::new(0.0, 1e-13),
        20_000,
    );
    let norm = 2.0 * q.value[0];
    let err = 2.0 * q.error;
    if !q.converged || !(norm > 0.0) || err > 1e-10 * norm {
        return Err(Error::Accuracy {
            achieved: err / norm.abs().max(f64::MIN_POSITIVE),
            requested: 1e-10,
        });
    }
    let mut s = *state;
    s.norm_const = state.norm_const / norm.sqrt();
    Ok(NormalizedState {
        state: s,
        accuracy: err / norm,
        support,
    })
}

fn support_of(state: &EigenState) -> f64 {
    let well = &state.well;
    let tp = well.turning_point(state.energy);
    let decay = match well.kind {
        WellKind::ConvExp => well.a.max(1.0 / (-state.energy).sqrt()),
        _ => well.a,
    };
    let step = 0.25 * decay;
    let mut peak = 0.0_f64;
    let samples = 64;
    for i in 0..=samples {
        let x = tp * i as f64 / samples as f64;
        peak = peak.max(state.right_branch(x).0.abs());
    }
    let mut x = tp;
    loop {
        x += step;
        let f = state.right_branch(x).0.abs();
        peak = peak.max(f);
        if f <= SUPPORT_THRESHOLD * peak {
            return x;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum MomentValue {
    Finite(f64),
    /// The symmetric cutoff study did not plateau; carries the smallest-cutoff value.
    NonConvergent(f64),
}

impl MomentValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            MomentValue::Finite(v) => Some(v),
            MomentValue::NonConvergent(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositionMoments {
    pub p2: f64,
    pub p4: f64,
    pub p6_quadratic_form: MomentValue,
    /// `j → ⟨(E − V)^j⟩`.
    pub ev_terms: BTreeMap<u8, f64>,
    /// `(ε, 2∫_ε^∞ (ψ''')² dx)` for shrinking `ε`.
    pub p6_cutoff_study: Vec<(f64, f64)>,
    pub abs_error: f64,
}

impl PositionMoments {
    pub fn get(&self, j: u8) -> Option<MomentValue> {
        match j {
            1 => Some(MomentValue::Finite(self.p2)),
            2 => Some(MomentValue::Finite(self.p4)),
            3 => Some(self.p6_quadratic_form),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionMomentEntry {
    pub j: u8,
    pub value: MomentValue,
    /// `⟨(E − V)^j⟩`.
    pub ev_term: f64,
}

pub const CUTOFF_EPSILONS: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-6];

/// `⟨p^{2j}⟩` for `j ∈ {1, 2, 3}`.
pub fn position_moment(state: &NormalizedState, j: u8) -> Result<PositionMomentEntry> {
    if !(1..=3).contains(&j) {
        return Err(crate::error::domain("j", format!("{j} not in 1..=3")));
    }
    let all = position_moments(state)?;
    Ok(PositionMomentEntry {
        j,
        value: all.get(j).expect("j checked above"),
        ev_term: all.ev_terms[&j],
    })
}

pub fn position_moments(state: &NormalizedState) -> Result<PositionMoments> {
    let s = &state.state;
    let well = s.well;
    let e = s.energy;
    let integrand = |x: f64| {
        let (f, df) = s.right_branch(x);
        let d = e - well.potential(x);
        let f2 = f * f;
        let third = well.slope_right(x) * f - d * df;
        [d * f2, d * d * f2, d * d * d * f2, third * third]
    };
    let tol = Tolerance::new(0.0, 1e-12);
    let q = integrate_vec(integrand, 0.0, state.support, tol, 20_000).ok()?;
    let [ev1, ev2, ev3, p6] = q.value.map(|v| 2.0 * v);

    let mut study = Vec::with_capacity(CUTOFF_EPSILONS.len());
    for &eps in &CUTOFF_EPSILONS {
        let inner = integrate_vec(|x| [integrand(x)[3]], 0.0, eps, tol, 2_000).ok()?;
        study.push((eps, p6 - 2.0 * inner.value[0]));
    }
    // a bounded integrand keeps the mean value of the ε-strips bounded as ε
    // shrinks, while a non-integrable one makes it blow up
    let density = |k: usize| (study[k].1 - study[k - 1].1).abs() / (study[k - 1].0 - study[k].0);
    let n = study.len();
    let plateau = density(n - 1) <= 2.0 * density(n - 2) + 1e-12 * p6.abs();
    let p6_value = if plateau && p6.is_finite() {
        MomentValue::Finite(p6)
    } else {
        MomentValue::NonConvergent(study[n - 1].1)
    };

    let ev_terms = BTreeMap::from([(1, ev1), (2, ev2), (3, ev3)]);
    Ok(PositionMoments {
        p2: ev1,
        p4: ev2,
        p6_quadratic_form: p6_value,
        ev_terms,
        p6_cutoff_study: study,
        abs_error: 2.0 * q.error,
    })
}

/// Behaviour of `ψ'''` across the kink of the potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThirdDerivativeJump {
    pub left: f64,
    pub right: f64,
    /// `ψ'''(0⁺) − ψ'''(0⁻)`.
    pub jump: f64,
    /// `2 V'(0⁺) ψ(0)`; zero for odd states.
    pub predicted: f64,
    /// `A` in `ψ ≈ A` (even) or `B` in `ψ ≈ B x` (odd) near the origin.
    pub near_origin: f64,
}

pub fn third_derivative_jump(state: &NormalizedState) -> ThirdDerivativeJump {
    let s = &state.state;
    let (f0, df0) = s.right_branch(0.0);
    let slope = s.well.slope_right(0.0);
    let right = slope * f0 + (s.well.potential(0.0) - s.energy) * df0;
    let (left, predicted, near_origin) = match s.parity {
        Parity::Even => (-right, 2.0 * slope * f0, f0),
        Parity::Odd => (right, 0.0, df0),
    };
    ThirdDerivativeJump {
        left,
        right,
        jump: right - left,
        predicted,
        near_origin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wells::{solve_spectrum, WellSpec};

    #[test]
    fn support_cuts_the_tail() {
        let s = solve_spectrum(&WellSpec::benchmark(WellKind::Triangular), 1).unwrap()[0];
        let n = normalize(&s).unwrap();
        assert!(n.psi(n.support).abs() < 1e-16);
        assert!(n.support > s.well.turning_point(s.energy));
    }

    #[test]
    fn even_jump_is_twice_the_kink_term() {
        let s = solve_spectrum(&WellSpec::benchmark(WellKind::DivExp), 2).unwrap();
        let even = third_derivative_jump(&normalize(&s[0]).unwrap());
        assert!((even.jump - even.predicted).abs() <= 1e-12 * even.predicted.abs());
        let odd = third_derivative_jump(&normalize(&s[1]).unwrap());
        assert_eq!(odd.jump, 0.0);
    }

    #[test]
    fn rejects_bad_order() {
        let s = solve_spectrum(&WellSpec::benchmark(WellKind::Triangular), 1).unwrap()[0];
        let n = normalize(&s).unwrap();
        assert!(position_moment(&n, 0).is_err());
        assert!(position_moment(&n, 4).is_err());
    }
}
