//! The three continuous two-piece symmetric wells, their closed-form
//! eigenfunction branches and the parity-resolved quantization conditions.
//!
//! Units: `2m = 1`, `ħ = 1`, so the Schrödinger equation reads
//! `ψ'' = (V(x) − E) ψ`.
//!
//! | well | `V(x)` | branch for `x ≥ 0` | even / odd condition |
//! |---|---|---|---|
//! | triangular | `V₀|x|/a` | `Ai(g x − E/g²)`, `g³ = V₀/a` | `Ai'(−E/g²) = 0` / `Ai(−E/g²) = 0` |
//! | convergent exp. | `−V₀ e^{−2|x|/a}` | `J_{ka}(qa e^{−x/a})`, `k = √−E` | `J'_{ka}(qa) = 0` / `J_{ka}(qa) = 0` |
//! | divergent exp. | `V₀(e^{2|x|/a} − 1)` | `K_{iκa}(qa e^{x/a})`, `κ = √(E+V₀)` | `K'_{iκa}(qa) = 0` / `K_{iκa}(qa) = 0` |
//!
//! with `q = √V₀`. In the two exponential wells the energy enters the
//! conditions through the Bessel order while the argument `qa` stays fixed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{ai_pair, j_pair, k_imag_pair, Pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WellKind {
    Triangular,
    ConvExp,
    DivExp,
}

impl WellKind {
    pub const ALL: [WellKind; 3] = [WellKind::Triangular, WellKind::ConvExp, WellKind::DivExp];

    pub fn name(self) -> &'static str {
        match self {
            WellKind::Triangular => "triangular",
            WellKind::ConvExp => "convexp",
            WellKind::DivExp => "divexp",
        }
    }
}

impl fmt::Display for WellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for WellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "triangular" => Ok(WellKind::Triangular),
            "convexp" => Ok(WellKind::ConvExp),
            "divexp" => Ok(WellKind::DivExp),
            other => Err(domain("well kind", format!("unknown well '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Well shape with depth/scale `v0 > 0` and width `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub kind: WellKind,
    pub v0: f64,
    pub a: f64,
}

impl WellSpec {
    pub fn new(kind: WellKind, v0: f64, a: f64) -> Result<Self> {
        if !(v0.is_finite() && v0 > 0.0) {
            return Err(domain("v0", format!("{v0} must be positive")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(domain("a", format!("{a} must be positive")));
        }
        Ok(Self { kind, v0, a })
    }

    /// The parameter set each well is usually shown with: triangular and
    /// divergent wells at `V₀ = 5`, the convergent well at `V₀ = 15`, all `a = 1`.
    pub fn benchmark(kind: WellKind) -> Self {
        let v0 = match kind {
            WellKind::ConvExp => 15.0,
            _ => 5.0,
        };
        Self { kind, v0, a: 1.0 }
    }

    pub fn potential(&self, x: f64) -> f64 {
        let u = x.abs() / self.a;
        match self.kind {
            WellKind::Triangular => self.v0 * u,
            WellKind::ConvExp => -self.v0 * (-2.0 * u).exp(),
            WellKind::DivExp => self.v0 * (2.0 * u).exp_m1(),
        }
    }

    /// `dV/dx` on the right half-line; at `x = 0` this is the right derivative.
    pub(crate) fn slope_right(&self, x: f64) -> f64 {
        let u = x / self.a;
        match self.kind {
            WellKind::Triangular => self.v0 / self.a,
            WellKind::ConvExp => 2.0 * self.v0 / self.a * (-2.0 * u).exp(),
            WellKind::DivExp => 2.0 * self.v0 / self.a * (2.0 * u).exp(),
        }
    }

    pub fn min_potential(&self) -> f64 {
        self.potential(0.0)
    }

    /// Admissible energy window `(lo, hi)` for the bound-state scan; both ends open.
    pub fn admissible(&self, e_max_scan: f64) -> (f64, f64) {
        match self.kind {
            WellKind::Triangular | WellKind::DivExp => (0.0, e_max_scan),
            WellKind::ConvExp => (-self.v0, 0.0),
        }
    }

    pub fn default_scan_ceiling(&self) -> f64 {
        40.0 * self.v0
    }

    /// Classical turning point `x ≥ 0` with `V(x) = E`.
    pub fn turning_point(&self, energy: f64) -> f64 {
        let (v0, a) = (self.v0, self.a);
        match self.kind {
            WellKind::Triangular => (a * energy / v0).max(0.0),
            WellKind::ConvExp => {
                if energy >= 0.0 {
                    f64::INFINITY
                } else {
                    (0.5 * a * (v0 / -energy).ln()).max(0.0)
                }
            }
            WellKind::DivExp => (0.5 * a * (energy / v0).ln_1p()).max(0.0),
        }
    }

    fn check_energy(&self, energy: f64) -> Result<()> {
        let ok = energy.is_finite()
            && match self.kind {
                WellKind::Triangular | WellKind::DivExp => energy > 0.0,
                WellKind::ConvExp => energy > -self.v0 && energy < 0.0,
            };
        if ok {
            Ok(())
        } else {
            Err(domain(
                "energy",
                format!(
                    "E = {energy} outside the admissible range of the {} well",
                    self.kind
                ),
            ))
        }
    }

    /// The special-function parameter the energy maps to: `y₀` (triangular)
    /// or the Bessel order `ν` (exponential wells).
    fn energy_parameter(&self, energy: f64) -> f64 {
        match self.kind {
            WellKind::Triangular => -energy / self.g().powi(2),
            WellKind::ConvExp => self.a * (-energy).sqrt(),
            WellKind::DivExp => self.a * (energy + self.v0).sqrt(),
        }
    }

    /// `g = (V₀/a)^{1/3}` of the Airy substitution.
    pub(crate) fn g(&self) -> f64 {
        (self.v0 / self.a).cbrt()
    }

    /// `qa = a √V₀`, the fixed Bessel argument at the origin.
    pub(crate) fn qa(&self) -> f64 {
        self.a * self.v0.sqrt()
    }

    fn condition_pair(&self, energy: f64) -> Pair {
        let s = self.energy_parameter(energy);
        match self.kind {
            WellKind::Triangular => ai_pair(s),
            WellKind::ConvExp => j_pair(s, self.qa()),
            WellKind::DivExp => k_imag_pair(s, self.qa()),
        }
    }
}

/// Left-hand side of the quantization condition of the given parity.
pub fn quantization_residual(well: &WellSpec, parity: Parity, energy: f64) -> Result<f64> {
    well.check_energy(energy)?;
    let p = well.condition_pair(energy);
    Ok(match parity {
        Parity::Even => p.deriv,
        Parity::Odd => p.value,
    })
}

/// The residual divided by `hypot(f, f')` of the function pair it is taken
/// from, which removes the `e^{−πν/2}` envelope of the divergent well.
pub fn scaled_residual(well: &WellSpec, parity: Parity, energy: f64) -> Result<f64> {
    well.check_energy(energy)?;
    let p = well.condition_pair(energy);
    let r = match parity {
        Parity::Even => p.deriv,
        Parity::Odd => p.value,
    };
    let scale = p.value.hypot(p.deriv);
    Ok(if scale > 0.0 { r / scale } else { r })
}

/// A bound state of one of the wells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenState {
    pub well: WellSpec,
    pub index: usize,
    pub parity: Parity,
    pub energy: f64,
    pub norm_const: f64,
}

impl EigenState {
    /// `(ψ, ψ')` on the right half-line, `x ≥ 0`, including `norm_const`.
    pub(crate) fn right_branch(&self, x: f64) -> (f64, f64) {
        let w = &self.well;
        let c = self.norm_const;
        match w.kind {
            WellKind::Triangular => {
                let g = w.g();
                let p = ai_pair(g * x - self.energy / (g * g));
                (c * p.value, c * g * p.deriv)
            }
            WellKind::ConvExp => {
                let nu = w.energy_parameter(self.energy);
                let arg = w.qa() * (-x / w.a).exp();
                if arg == 0.0 {
                    return (0.0, 0.0);
                }
                let p = j_pair(nu, arg);
                (c * p.value, -c * p.deriv * arg / w.a)
            }
            WellKind::DivExp => {
                let nu = w.energy_parameter(self.energy);
                let arg = w.qa() * (x / w.a).exp();
                // K_{iν}(z) < e^{-700} here
                if arg > 700.0 {
                    return (0.0, 0.0);
                }
                let p = k_imag_pair(nu, arg);
                (c * p.value, c * p.deriv * arg / w.a)
            }
        }
    }

    fn parity_sign(&self, x: f64) -> f64 {
        match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => {
                if x < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
        }
    }

    /// `ψ(x)`; the odd branch carries `sgn(x)` and vanishes at the origin.
    pub fn eigenfunction(&self, x: f64) -> f64 {
        if self.parity == Parity::Odd && x == 0.0 {
            return 0.0;
        }
        self.parity_sign(x) * self.right_branch(x.abs()).0
    }

    /// `ψ'(x)`; at `x = 0` the (continuous) right derivative.
    pub fn eigenfunction_derivative(&self, x: f64) -> f64 {
        let d = self.right_branch(x.abs()).1;
        match self.parity {
            Parity::Even if x < 0.0 => -d,
            _ => d,
        }
    }

    /// `ψ''(x) = (V − E) ψ`.
    pub fn second_derivative(&self, x: f64) -> f64 {
        (self.well.potential(x) - self.energy) * self.eigenfunction(x)
    }

    /// `ψ'''(x) = V'ψ + (V − E)ψ'` on either open half-line. At `x = 0` the
    /// right limit is returned; see [`crate::spectral::third_derivative_jump`].
    pub fn third_derivative(&self, x: f64) -> f64 {
        let xr = x.abs();
        let (f, df) = self.right_branch(xr);
        let right = self.well.slope_right(xr) * f + (self.well.potential(xr) - self.energy) * df;
        // ψ''' is odd for even ψ and even for odd ψ
        match self.parity {
            Parity::Even if x < 0.0 => -right,
            _ => right,
        }
    }

    /// Derived parameters of the closed form: `(name, value)` pairs.
    pub fn auxiliary(&self) -> Vec<(&'static str, f64)> {
        let w = &self.well;
        match w.kind {
            WellKind::Triangular => vec![("g", w.g()), ("y0", w.energy_parameter(self.energy))],
            WellKind::ConvExp => vec![
                ("k", (-self.energy).sqrt()),
                ("q", w.v0.sqrt()),
                ("order", w.energy_parameter(self.energy)),
            ],
            WellKind::DivExp => vec![
                ("kappa", (self.energy + w.v0).sqrt()),
                ("q", w.v0.sqrt()),
                ("order", w.energy_parameter(self.energy)),
            ],
        }
    }
}

/// Bracketing controls for [`solve_spectrum_with`].
#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    /// Upper end of the scan for the wells that confine at every energy.
    pub e_max_scan: Option<f64>,
    pub cells: usize,
    /// Bisection stops at this bracket width (absolute, scaled by `max(1, |E|)`).
    pub tolerance: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            e_max_scan: None,
            cells: 400,
            tolerance: 1e-12,
        }
    }
}

/// The lowest `max_states` bound states, ordered by energy, with `C = 1`
/// (see [`crate::spectral::normalize`]).
pub fn solve_spectrum(well: &WellSpec, max_states: usize) -> Result<Vec<EigenState>> {
    solve_spectrum_with(well, max_states, &ScanOptions::default())
}

pub fn solve_spectrum_with(
    well: &WellSpec,
    max_states: usize,
    opts: &ScanOptions,
) -> Result<Vec<EigenState>> {
    if max_states == 0 {
        return Err(domain("max_states", "must be at least 1"));
    }
    let ceiling = opts
        .e_max_scan
        .unwrap_or_else(|| well.default_scan_ceiling());
    if well.kind != WellKind::ConvExp && !(ceiling.is_finite() && ceiling > 0.0) {
        return Err(domain("e_max_scan", format!("{ceiling} must be positive")));
    }
    let mut cells = opts.cells.max(8);
    let mut last_err = None;
    for _attempt in 0..3 {
        match scan(well, max_states, cells, ceiling, opts.tolerance) {
            Ok(states) => return Ok(states),
            Err(e @ Error::ScanResolution { .. }) => {
                last_err = Some(e);
                cells *= 4;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn scan(
    well: &WellSpec,
    max_states: usize,
    cells: usize,
    ceiling: f64,
    tol: f64,
) -> Result<Vec<EigenState>> {
    let (lo, hi) = well.admissible(ceiling);
    let width = hi - lo;
    // open interval: keep clear of the excluded endpoints
    let nudge = 1e-9 * width;
    let grid = |i: usize| {
        let e = lo + width * i as f64 / cells as f64;
        e.clamp(lo + nudge, hi - nudge)
    };

    let residual = |parity, e| quantization_residual(well, parity, e);
    let mut roots: Vec<(f64, Parity)> = Vec::new();
    let mut prev = [
        residual(Parity::Even, grid(0))?,
        residual(Parity::Odd, grid(0))?,
    ];
    let mut e_prev = grid(0);
    for i in 1..=cells {
        let e = grid(i);
        for (slot, parity) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
            let r = residual(parity, e)?;
            if r == 0.0 {
                roots.push((e, parity));
            } else if prev[slot] != 0.0 && r.signum() != prev[slot].signum() {
                let root = refine(well, parity, e_prev, e, prev[slot], tol)?;
                roots.push((root, parity));
            }
            prev[slot] = r;
        }
        e_prev = e;
        if roots.len() >= max_states {
            break;
        }
    }

    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (n, &(e, parity)) in roots.iter().enumerate() {
        if parity != Parity::of_index(n) {
            // even and odd levels interlace; a missing partner means two
            // roots of one parity fell into a single cell
            return Err(Error::ScanResolution { energy: e });
        }
    }
    Ok(roots
        .into_iter()
        .take(max_states)
        .enumerate()
        .map(|(index, (energy, parity))| EigenState {
            well: *well,
            index,
            parity,
            energy,
            norm_const: 1.0,
        })
        .collect())
}

/// Bisection to the bracket tolerance followed by one secant-slope Newton step.
fn refine(
    well: &WellSpec,
    parity: Parity,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    tol: f64,
) -> Result<f64> {
    let f = |e| quantization_residual(well, parity, e);
    while (b - a) > tol * a.abs().max(b.abs()).max(1.0) {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let e = 0.5 * (a + b);
    let r = f(e)?;
    let h = 1e-7 * e.abs().max(1.0);
    if let (Ok(up), Ok(down)) = (f(e + h), f(e - h)) {
        let slope = (up - down) / (2.0 * h);
        if slope != 0.0 && slope.is_finite() {
            let polished = e - r / slope;
            if (polished - e).abs() <= 2.0 * (b - a).max(tol) {
                if let Ok(rp) = f(polished) {
                    if rp.abs() < r.abs() {
                        return Ok(polished);
                    }
                }
            }
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_values_at_origin() {
        assert_eq!(
            WellSpec::benchmark(WellKind::Triangular).potential(0.0),
            0.0
        );
        assert_eq!(WellSpec::benchmark(WellKind::ConvExp).potential(0.0), -15.0);
        assert_eq!(WellSpec::benchmark(WellKind::DivExp).potential(0.0), 0.0);
    }

    #[test]
    fn potential_is_even_and_continuous() {
        for kind in WellKind::ALL {
            let w = WellSpec::new(kind, 3.7, 0.8).unwrap();
            for &x in &[0.1, 0.73, 2.0, 5.5] {
                assert_eq!(w.potential(x), w.potential(-x));
            }
            assert!((w.potential(1e-12) - w.potential(0.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WellSpec::new(WellKind::Triangular, 0.0, 1.0).is_err());
        assert!(WellSpec::new(WellKind::DivExp, 1.0, -1.0).is_err());
        assert!("square".parse::<WellKind>().is_err());
        assert_eq!("DivExp".parse::<WellKind>().unwrap(), WellKind::DivExp);
    }

    #[test]
    fn residual_domain() {
        let conv = WellSpec::benchmark(WellKind::ConvExp);
        assert!(quantization_residual(&conv, Parity::Even, 0.5).is_err());
        assert!(quantization_residual(&conv, Parity::Even, -15.5).is_err());
        let tri = WellSpec::benchmark(WellKind::Triangular);
        assert!(quantization_residual(&tri, Parity::Odd, -1.0).is_err());
        assert!(solve_spectrum(&tri, 0).is_err());
    }

    #[test]
    fn residuals_vanish_at_quoted_energies() {
        let cases = [
            (WellKind::Triangular, Parity::Even, 2.9789),
            (WellKind::ConvExp, Parity::Odd, -1.0622),
            (WellKind::DivExp, Parity::Even, 6.4646),
        ];
        for (kind, parity, e) in cases {
            let w = WellSpec::benchmark(kind);
            let r = quantization_residual(&w, parity, e).unwrap();
            assert!(r.abs() < 1e-3, "{kind} {parity}: {r}");
        }
    }

    #[test]
    fn triangular_ground_state_value_at_origin() {
        let w = WellSpec::benchmark(WellKind::Triangular);
        let s = solve_spectrum(&w, 1).unwrap()[0];
        let g = 5f64.cbrt();
        let expected = ai_pair(-s.energy / (g * g)).value;
        assert_eq!(s.eigenfunction(0.0), expected);
    }

    #[test]
    fn odd_states_have_a_node_and_even_states_a_flat_top() {
        let w = WellSpec::benchmark(WellKind::DivExp);
        let states = solve_spectrum(&w, 2).unwrap();
        assert_eq!(states[1].eigenfunction(0.0), 0.0);
        let h = 1e-6;
        let s = states[0];
        let slope = (s.eigenfunction(h) - s.eigenfunction(-h)) / (2.0 * h);
        assert!(slope.abs() < 1e-9, "{slope}");
    }

    #[test]
    fn shallow_convergent_well_still_binds_its_ground_state() {
        // every symmetric 1-D well binds at least one even state
        let w = WellSpec::new(WellKind::ConvExp, 0.05, 1.0).unwrap();
        let states = solve_spectrum(&w, 5).unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].parity, Parity::Even);
        assert!(states[0].energy < 0.0 && states[0].energy > -0.05);
    }
}
