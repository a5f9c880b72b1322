//! Independent finite-difference eigensolver used to cross-check the
//! closed-form spectra of [`crate::wells`].
//!
//! The half-line problem on `[0, L]` is integrated with Numerov's method from
//! `x = L` inward, where the growing solution of the outward direction is the
//! decaying one. The energy is tuned by bisection until the parity boundary
//! condition at the origin holds: `ψ'(0) = 0` for even states, `ψ(0) = 0`
//! for odd ones.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::spectral::NormalizedState;
use crate::wells::{Parity, WellKind, WellSpec};

/// Numerov eigenfunction on the uniform half-grid `x_i = i h`, `0 ≤ x_i ≤ L`,
/// normalized so that `2 ∫₀^L ψ² dx = 1` (Simpson). The sign is fixed by
/// `ψ > 0` next to the outer boundary.
#[derive(Debug, Clone, Serialize)]
pub struct GridSolution {
    pub h: f64,
    pub x_grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub energy: f64,
    pub parity: Parity,
    /// `E(h/2) − E(h)`.
    pub halving_shift: f64,
    /// Normalized boundary mismatch at the returned energy.
    pub mismatch: f64,
}

impl GridSolution {
    pub fn half_width(&self) -> f64 {
        self.x_grid.last().copied().unwrap_or(0.0)
    }
}

/// Default truncation of the half-line for a state near `energy`.
///
/// Triangular: turning point + 12a. Convergent exponential: turning point +
/// max(12a, 20/k), since a shallow level decays only like `e^{−kx}`.
/// Divergent exponential: turning point + 4a.
pub fn default_half_width(well: &WellSpec, energy: f64) -> f64 {
    let tp = well.turning_point(energy);
    match well.kind {
        WellKind::Triangular => tp + 12.0 * well.a,
        WellKind::ConvExp => {
            let k = (-energy).max(1e-12).sqrt();
            tp + (12.0 * well.a).max(20.0 / k)
        }
        WellKind::DivExp => tp + 4.0 * well.a,
    }
}

/// Solve on `[0, l]` with step `h ≤ 10⁻³ a` for the single eigenvalue in
/// `bracket`. The result is checked against a solve with `h/2`.
pub fn numerov_solve(
    well: &WellSpec,
    parity: Parity,
    bracket: (f64, f64),
    h: f64,
    l: f64,
) -> Result<GridSolution> {
    if !(h > 0.0 && h <= 1e-3 * well.a * (1.0 + 1e-12)) {
        return Err(domain("h", format!("{h} must lie in (0, 1e-3·a]")));
    }
    let energy = shoot_energy(well, parity, bracket, h, l)?;
    let refined = shoot_energy(well, parity, bracket, 0.5 * h, l)?;
    let halving_shift = refined - energy;
    if halving_shift.abs() >= 1e-4 {
        return Err(Error::Accuracy {
            achieved: halving_shift.abs(),
            requested: 1e-4,
        });
    }
    let grid = Grid::new(well, h, l, energy);
    let mut psi = grid.integrate_inward();
    let mismatch = grid.mismatch_of(&psi, parity);
    let norm = 2.0 * simpson(&psi.iter().map(|v| v * v).collect::<Vec<_>>(), h);
    let scale = 1.0 / norm.sqrt();
    psi.iter_mut().for_each(|v| *v *= scale);
    let x_grid = (0..psi.len()).map(|i| i as f64 * h).collect();
    Ok(GridSolution {
        h,
        x_grid,
        psi,
        energy,
        parity,
        halving_shift,
        mismatch,
    })
}

/// Bisection on the boundary mismatch without the step-size precondition of
/// [`numerov_solve`]; useful for convergence studies at coarse `h`.
pub fn shoot_energy(
    well: &WellSpec,
    parity: Parity,
    bracket: (f64, f64),
    h: f64,
    l: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi && h > 0.0 && l > 4.0 * h) {
        return Err(domain(
            "bracket",
            format!("[{lo}, {hi}] with h = {h}, L = {l}"),
        ));
    }
    let m = |e| {
        let g = Grid::new(well, h, l, e);
        g.mismatch_of(&g.integrate_inward(), parity)
    };
    let mut m_lo = m(lo);
    let m_hi = m(hi);
    if m_lo.signum() == m_hi.signum() {
        return Err(Error::NoRoot {
            what: "boundary mismatch",
            lo,
            hi,
        });
    }
    let tol = 1e-13 * lo.abs().max(hi.abs()).max(1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let m_mid = m(mid);
        if m_mid == 0.0 {
            return Ok(mid);
        }
        if m_mid.signum() == m_lo.signum() {
            lo = mid;
            m_lo = m_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Oracle result for one closed-form state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleCheck {
    pub index: usize,
    pub parity: Parity,
    pub closed_form_energy: f64,
    pub oracle_energy: f64,
    pub abs_energy_diff: f64,
    /// `max |ψ_grid − ψ_closed|` over the oracle grid after sign alignment.
    pub max_norm_diff: f64,
    pub halving_shift: f64,
}

/// Step used by [`verify_spectrum`], the coarsest the solver accepts.
pub const ORACLE_STEP: f64 = 1e-3;

/// Re-solves every state of an ordered spectrum on a Numerov grid.
///
/// Each state gets the bracket between the midpoints to its neighbours, which
/// holds exactly one root of its parity since the spectrum interlaces.
pub fn verify_spectrum(states: &[NormalizedState]) -> Result<Vec<OracleCheck>> {
    let energies: Vec<f64> = states.iter().map(|s| s.energy()).collect();
    states
        .iter()
        .enumerate()
        .map(|(i, st)| {
            let well = st.state.well;
            let e = energies[i];
            let below = if i > 0 {
                Some(e - energies[i - 1])
            } else {
                None
            };
            let above = energies.get(i + 1).map(|n| n - e);
            let fallback = 0.1 * (e - well.min_potential()).abs().max(1.0);
            let lo_gap = below.or(above).unwrap_or(fallback);
            let hi_gap = above.or(below).unwrap_or(fallback);
            let lo = (e - 0.5 * lo_gap).max(well.min_potential() + 1e-12 * well.v0);
            let mut hi = e + 0.5 * hi_gap;
            if well.kind == WellKind::ConvExp {
                // stay inside the bound-state range
                hi = hi.min(0.5 * e);
            }
            let l = default_half_width(&well, e);
            let grid = numerov_solve(&well, st.parity(), (lo, hi), ORACLE_STEP * well.a, l)?;
            Ok(OracleCheck {
                index: st.state.index,
                parity: st.parity(),
                closed_form_energy: e,
                oracle_energy: grid.energy,
                abs_energy_diff: (grid.energy - e).abs(),
                max_norm_diff: max_norm_diff(&grid, st),
                halving_shift: grid.halving_shift,
            })
        })
        .collect()
}

fn max_norm_diff(grid: &GridSolution, state: &NormalizedState) -> f64 {
    let closed: Vec<f64> = grid.x_grid.iter().map(|&x| state.psi(x)).collect();
    let peak = closed.iter().enumerate().fold(0, |best, (i, v)| {
        if v.abs() > closed[best].abs() {
            i
        } else {
            best
        }
    });
    let sign = if closed[peak] * grid.psi[peak] < 0.0 {
        -1.0
    } else {
        1.0
    };
    closed
        .iter()
        .zip(&grid.psi)
        .map(|(c, g)| (g - sign * c).abs())
        .fold(0.0, f64::max)
}

struct Grid<'a> {
    well: &'a WellSpec,
    h: f64,
    n: usize,
    energy: f64,
}

impl<'a> Grid<'a> {
    fn new(well: &'a WellSpec, h: f64, l: f64, energy: f64) -> Self {
        // even number of intervals so Simpson applies
        let n = 2 * ((l / h / 2.0).ceil() as usize).max(2);
        Self { well, h, n, energy }
    }

    /// Numerov recursion from `ψ_N = 0`, `ψ_{N−1} = 1` down to `ψ_0`,
    /// rescaled whenever the magnitude threatens to overflow.
    fn integrate_inward(&self) -> Vec<f64> {
        let h2 = self.h * self.h / 12.0;
        let f = |i: usize| self.well.potential(i as f64 * self.h) - self.energy;
        let mut psi = vec![0.0; self.n + 1];
        psi[self.n - 1] = 1.0;
        let mut f_next = f(self.n);
        let mut f_cur = f(self.n - 1);
        for i in (1..self.n).rev() {
            let f_prev = f(i - 1);
            let num = 2.0 * psi[i] * (1.0 + 5.0 * h2 * f_cur) - psi[i + 1] * (1.0 - h2 * f_next);
            psi[i - 1] = num / (1.0 - h2 * f_prev);
            if psi[i - 1].abs() > 1e250 {
                psi[i - 1..].iter_mut().for_each(|v| *v *= 1e-250);
            }
            f_next = f_cur;
            f_cur = f_prev;
        }
        psi
    }

    fn mismatch_of(&self, psi: &[f64], parity: Parity) -> f64 {
        let d = (-25.0 * psi[0] + 48.0 * psi[1] - 36.0 * psi[2] + 16.0 * psi[3] - 3.0 * psi[4])
            / (12.0 * self.h)
            * self.well.a;
        let scale = psi[0].hypot(d);
        let raw = match parity {
            Parity::Even => d,
            Parity::Odd => psi[0],
        };
        if scale > 0.0 {
            raw / scale
        } else {
            raw
        }
    }
}

fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    debug_assert!(n % 2 == 0);
    let inner: f64 = (1..n)
        .map(|i| if i % 2 == 1 { 4.0 * y[i] } else { 2.0 * y[i] })
        .sum();
    (y[0] + y[n] + inner) * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let h = 0.1;
        let y: Vec<f64> = (0..=10).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson(&y, h) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn rejects_coarse_step_and_empty_bracket() {
        let w = WellSpec::benchmark(WellKind::Triangular);
        assert!(matches!(
            numerov_solve(&w, Parity::Even, (2.5, 3.5), 0.01, 12.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            shoot_energy(&w, Parity::Even, (3.5, 4.5), 0.01, 12.0),
            Err(Error::NoRoot { .. })
        ));
    }

    #[test]
    fn grid_has_even_interval_count() {
        let w = WellSpec::benchmark(WellKind::DivExp);
        let g = Grid::new(&w, 0.003, 1.0, 5.0);
        assert_eq!(g.n % 2, 0);
        assert!(g.n as f64 * 0.003 >= 1.0);
    }
}
