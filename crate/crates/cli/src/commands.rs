//! One function per subcommand. Each returns the files it wants written so
//! that output is assembled completely before anything touches the disk.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use twopiece::momentum::{
    default_tail_windows, distribution, log_grid, tail_analysis, tail_fit, MomentReport,
    MomentumSpace, TailFit, Verdict, GRID_DYNAMIC_RANGE, TAIL_GRID_POINTS, TAIL_WINDOW_RANGE,
};
use twopiece::oracle::{verify_spectrum, OracleCheck};
use twopiece::spectral::{normalize, position_moments, NormalizedState};
use twopiece::wells::{solve_spectrum, Parity, WellSpec};

use crate::config::{Command, Format, RunConfig};
use crate::CliError;

/// Rendered output: text for stdout or files to write.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout(String),
    Files(Vec<(PathBuf, String)>),
}

pub const VERDICT_RULE: &str =
    "Increments of the partial integrals between successive cutoffs are \
converted to densities per decade of P; r is the ratio of neighbouring densities scaled to one \
decade. The last two ratios decide: both < 0.5 is converged (value includes the power-law tail \
implied by the last two increments), both >= 1 is diverging, anything else is marginal. An \
increment inside its own quadrature error also counts as converged.";

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.command {
        Command::Solve => solve(cfg),
        Command::Figure => figure(cfg),
        Command::Moments => moments(cfg),
        Command::Tails => tails(cfg),
    }
}

/// Normalized states of one well, restricted to `--state` when given.
fn states_for(cfg: &RunConfig, well: &WellSpec) -> Result<Vec<NormalizedState>, CliError> {
    let all = solve_spectrum(well, cfg.max_states)?;
    let chosen: Vec<_> = match cfg.state {
        Some(n) => all.into_iter().filter(|s| s.index == n).collect(),
        None => all,
    };
    if chosen.is_empty() {
        let n = cfg.state.unwrap_or(0);
        return Err(CliError::Numerical(format!(
            "{} holds no bound state with index {n}",
            well.kind
        )));
    }
    chosen
        .iter()
        .map(|s| normalize(s).map_err(CliError::from))
        .collect()
}

fn emit(cfg: &RunConfig, text: String) -> Output {
    match &cfg.out {
        Some(path) => Output::Files(vec![(path.clone(), text)]),
        None => Output::Stdout(text),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Serialize)]
struct SolveRow {
    well: WellSpec,
    n: usize,
    parity: Parity,
    energy: f64,
    norm_const: f64,
    oracle: OracleCheck,
}

fn solve(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut rows = Vec::new();
    for well in &cfg.wells {
        // the oracle brackets need the neighbours, so always verify the full list
        let states: Vec<NormalizedState> = solve_spectrum(well, cfg.max_states)?
            .iter()
            .map(normalize)
            .collect::<Result<_, _>>()?;
        let checks = verify_spectrum(&states)?;
        for (st, oracle) in states.iter().zip(checks) {
            if cfg.state.is_some_and(|n| n != st.state.index) {
                continue;
            }
            rows.push(SolveRow {
                well: *well,
                n: st.state.index,
                parity: st.parity(),
                energy: st.energy(),
                norm_const: st.state.norm_const,
                oracle,
            });
        }
    }
    if rows.is_empty() {
        return Err(CliError::Numerical(
            "no bound state matches the request".into(),
        ));
    }
    let text = match cfg.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut s = String::from("well,v0,a,n,parity,E,C,oracle_E,abs_dE,oracle_max_dpsi\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{:.10},{:.10e},{:.10},{:.3e},{:.3e}",
                    r.well.kind,
                    r.well.v0,
                    r.well.a,
                    r.n,
                    r.parity,
                    r.energy,
                    r.norm_const,
                    r.oracle.oracle_energy,
                    r.oracle.abs_energy_diff,
                    r.oracle.max_norm_diff,
                );
            }
            s
        }
    };
    Ok(emit(cfg, text))
}

#[derive(Debug, Serialize)]
struct FigureState {
    n: usize,
    parity: Parity,
    energy: f64,
    norm_const: f64,
    csv: String,
    tail_fit: TailFit,
    moments: Vec<MomentReport>,
}

#[derive(Debug, Serialize)]
struct FigureSidecar {
    version: &'static str,
    well: WellSpec,
    p_grid: GridInfo,
    cutoffs: Vec<f64>,
    verdict_rule: &'static str,
    tail_windows: Vec<(f64, f64)>,
    states: Vec<FigureState>,
}

#[derive(Debug, Serialize)]
struct GridInfo {
    p_min: f64,
    p_max: f64,
    points: usize,
    spacing: &'static str,
}

fn figure(cfg: &RunConfig) -> Result<Output, CliError> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let p_grid = log_grid(cfg.pmax / GRID_DYNAMIC_RANGE, cfg.pmax, cfg.points);
    let p_limit = cfg
        .pmax
        .max(*cfg.cutoffs.last().expect("cutoffs validated"));
    let mut files = Vec::new();
    for well in &cfg.wells {
        let mut entries = Vec::new();
        for st in states_for(cfg, well)? {
            let space = MomentumSpace::new(&st, p_limit)?;
            let columns = (0..=3)
                .map(|j| space.distribution(&p_grid, j))
                .collect::<Result<Vec<_>, _>>()?;
            let mut csv = String::from("p,I,p2I,p4I,p6I\n");
            for (i, p) in p_grid.iter().enumerate() {
                let _ = writeln!(
                    csv,
                    "{p:e},{:e},{:e},{:e},{:e}",
                    columns[0].values[i],
                    columns[1].values[i],
                    columns[2].values[i],
                    columns[3].values[i],
                );
            }
            let name = format!("{}_n{}.csv", well.kind, st.state.index);
            files.push((dir.join(&name), csv));
            entries.push(FigureState {
                n: st.state.index,
                parity: st.parity(),
                energy: st.energy(),
                norm_const: st.state.norm_const,
                csv: name,
                tail_fit: tail_analysis(&st)?,
                moments: space.moments(&[1, 2, 3], &cfg.cutoffs)?,
            });
        }
        let sidecar = FigureSidecar {
            version: env!("CARGO_PKG_VERSION"),
            well: *well,
            p_grid: GridInfo {
                p_min: p_grid[0],
                p_max: cfg.pmax,
                points: cfg.points,
                spacing: "log",
            },
            cutoffs: cfg.cutoffs.clone(),
            verdict_rule: VERDICT_RULE,
            tail_windows: default_tail_windows(),
            states: entries,
        };
        files.push((dir.join(format!("{}.json", well.kind)), to_json(&sidecar)?));
    }
    Ok(Output::Files(files))
}

#[derive(Debug, Serialize)]
struct MomentsEntry {
    well: WellSpec,
    n: usize,
    parity: Parity,
    energy: f64,
    /// `⟨(E − V)^j⟩` for j = 1, 2, 3.
    ev_terms: Vec<f64>,
    /// `(ε, 2∫_ε^∞ (ψ''')² dx)`.
    p6_cutoff_study: Vec<(f64, f64)>,
    reports: Vec<MomentReport>,
}

fn moments(cfg: &RunConfig) -> Result<Output, CliError> {
    let p_limit = *cfg.cutoffs.last().expect("cutoffs validated");
    let mut entries = Vec::new();
    for well in &cfg.wells {
        for st in states_for(cfg, well)? {
            let space = MomentumSpace::new(&st, p_limit)?;
            let position = position_moments(&st)?;
            entries.push(MomentsEntry {
                well: *well,
                n: st.state.index,
                parity: st.parity(),
                energy: st.energy(),
                ev_terms: position.ev_terms.values().copied().collect(),
                p6_cutoff_study: position.p6_cutoff_study.clone(),
                reports: space.moments(&cfg.js, &cfg.cutoffs)?,
            });
        }
    }
    let text = match cfg.format {
        Format::Json => to_json(&serde_json::json!({
            "verdict_rule": VERDICT_RULE,
            "cutoffs": cfg.cutoffs,
            "states": entries,
        }))?,
        Format::Csv => {
            let mut s = String::from(
                "well,n,parity,j,verdict,momentum_value,position_value,relative_gap\n",
            );
            for e in &entries {
                for r in &e.reports {
                    let value = match r.verdict {
                        Verdict::Converged(v) => format!("{v:e}"),
                        _ => String::new(),
                    };
                    let position = r
                        .position_value
                        .finite()
                        .map(|v| format!("{v:e}"))
                        .unwrap_or_default();
                    let gap = r
                        .relative_gap()
                        .map(|g| format!("{g:.3e}"))
                        .unwrap_or_default();
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{value},{position},{gap}",
                        e.well.kind,
                        e.n,
                        e.parity,
                        r.j,
                        r.verdict.name(),
                    );
                }
            }
            s
        }
    };
    Ok(emit(cfg, text))
}

#[derive(Debug, Serialize)]
struct TailEntry {
    well: WellSpec,
    n: usize,
    parity: Parity,
    energy: f64,
    tail_fit: TailFit,
}

fn tails(cfg: &RunConfig) -> Result<Output, CliError> {
    let default_grid = cfg.pmax == TAIL_WINDOW_RANGE.1 && cfg.points == TAIL_GRID_POINTS;
    let mut entries = Vec::new();
    for well in &cfg.wells {
        for st in states_for(cfg, well)? {
            let fit = if default_grid {
                tail_analysis(&st)?
            } else {
                let dist = distribution(&st, cfg.pmax, cfg.points, 0)?;
                tail_fit(&dist, &default_tail_windows())?
            };
            entries.push(TailEntry {
                well: *well,
                n: st.state.index,
                parity: st.parity(),
                energy: st.energy(),
                tail_fit: fit,
            });
        }
    }
    let text = match cfg.format {
        Format::Json => to_json(&serde_json::json!({
            "windows": default_tail_windows(),
            "states": entries,
        }))?,
        Format::Csv => {
            let mut s =
                String::from("well,n,parity,exponent,stability,r_squared,window_exponents\n");
            for e in &entries {
                let windows: Vec<String> = e
                    .tail_fit
                    .windows
                    .iter()
                    .map(|w| format!("{:.6}", w.exponent))
                    .collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{:.6},{:.6},{:.8},{}",
                    e.well.kind,
                    e.n,
                    e.parity,
                    e.tail_fit.exponent,
                    e.tail_fit.stability,
                    e.tail_fit.r_squared,
                    windows.join(";"),
                );
            }
            s
        }
    };
    Ok(emit(cfg, text))
}
