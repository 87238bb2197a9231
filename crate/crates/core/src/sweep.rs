//! Parameter sweeps over (s, n̄, r), the loss-of-nonlocality crossing time,
//! and the aggregated oracle runs behind the command line.
//!
//! Sweeps evaluate the lattice in parallel but emit rows in a fixed
//! (s, n̄, r) order with per-point seeds derived deterministically from the
//! base seed, so identical specs produce byte-identical CSV.

use crate::bell::{bell_function, max_bell, OptimizerConfig};
use crate::error::{Error, Result};
use crate::fock::{bell_from_fock, recommended_cutoff, tmss_amplitudes};
use crate::oracles::{
    convolve_numeric, superposition_norm, superposition_wigner_check, QuadratureSpec,
    WeightFunction,
};
use crate::phase_space::{
    evolve_coeffs, wigner_value, BathSpec, ChannelTime, PhasePoint, SqueezeSpec,
};
use crate::tol;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;

/// Uniform r-grid over a closed subinterval of [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl RGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("r grid bounds must be finite".into()));
        }
        if !(0.0..=1.0).contains(&self.start)
            || !(0.0..=1.0).contains(&self.stop)
            || self.start > self.stop
        {
            return Err(Error::Config(format!(
                "r grid [{}, {}] must sit inside [0, 1]",
                self.start, self.stop
            )));
        }
        if self.count < 2 {
            return Err(Error::Config("r grid needs at least 2 points".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Full description of one sweep run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub s_values: Vec<f64>,
    pub nbar_values: Vec<f64>,
    pub r_grid: RGrid,
    pub optimizer: OptimizerConfig,
    pub emit_plot_script: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            s_values: vec![0.3],
            nbar_values: vec![0.0],
            r_grid: RGrid {
                start: 0.0,
                stop: 1.0,
                count: 101,
            },
            optimizer: OptimizerConfig::default(),
            emit_plot_script: false,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.s_values.is_empty() || self.nbar_values.is_empty() {
            return Err(Error::Config("s and nbar lists must be non-empty".into()));
        }
        for &s in &self.s_values {
            SqueezeSpec::magnitude(s)?;
        }
        for &nbar in &self.nbar_values {
            BathSpec::new(nbar)?;
        }
        self.r_grid.validate()?;
        self.optimizer.validate()
    }

    /// Parse the plain-text config grammar: one `key = value` per line,
    /// lists comma-separated, `#` starts a comment. Keys: `s`, `nbar`,
    /// `r_grid` (start:stop:count), `restarts`, `seed`, `search_radius`,
    /// `max_iterations`, `step_tolerance`, `value_tolerance`, `plot_script`.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut spec = SweepSpec::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad_num = |what: &str| {
                Error::Config(format!("line {}: bad {what}: `{value}`", lineno + 1))
            };
            match key {
                "s" => spec.s_values = parse_list(value).map_err(|_| bad_num("s list"))?,
                "nbar" => {
                    spec.nbar_values = parse_list(value).map_err(|_| bad_num("nbar list"))?
                }
                "r_grid" => spec.r_grid = parse_r_grid(value)?,
                "restarts" => {
                    spec.optimizer.restarts =
                        value.parse().map_err(|_| bad_num("restart count"))?
                }
                "seed" => {
                    spec.optimizer.rng_seed = value.parse().map_err(|_| bad_num("seed"))?
                }
                "search_radius" => {
                    spec.optimizer.search_radius =
                        value.parse().map_err(|_| bad_num("search radius"))?
                }
                "max_iterations" => {
                    spec.optimizer.max_iterations =
                        value.parse().map_err(|_| bad_num("iteration cap"))?
                }
                "step_tolerance" => {
                    spec.optimizer.step_tolerance =
                        value.parse().map_err(|_| bad_num("step tolerance"))?
                }
                "value_tolerance" => {
                    spec.optimizer.value_tolerance =
                        value.parse().map_err(|_| bad_num("value tolerance"))?
                }
                "plot_script" => {
                    spec.emit_plot_script = value.parse().map_err(|_| bad_num("flag"))?
                }
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_list(value: &str) -> std::result::Result<Vec<f64>, std::num::ParseFloatError> {
    value.split(',').map(|v| v.trim().parse()).collect()
}

/// `start:stop:count` for r-grids.
pub fn parse_r_grid(value: &str) -> Result<RGrid> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "r grid `{value}` must be start:stop:count"
        )));
    }
    let start = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad r grid start `{}`", parts[0])))?;
    let stop = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad r grid stop `{}`", parts[1])))?;
    let count = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad r grid count `{}`", parts[2])))?;
    let grid = RGrid { start, stop, count };
    grid.validate()?;
    Ok(grid)
}

/// One lattice point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub s: f64,
    pub nbar: f64,
    pub r: f64,
    pub b_max: f64,
    pub arg_a: f64,
    pub arg_b: f64,
    pub converged: bool,
}

/// splitmix64, used to derive independent per-point seeds from the base
/// seed; any scheduling of the lattice yields the same rows.
fn mix_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maximize |B| on every (s, n̄, r) lattice point. Rows come back sorted by
/// (s, n̄, r) in the order given by the spec's lists; a non-converged
/// optimizer flags its row and the sweep continues.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let rs = spec.r_grid.values();
    let mut points = Vec::new();
    for &s in &spec.s_values {
        for &nbar in &spec.nbar_values {
            for &r in &rs {
                points.push((s, nbar, r));
            }
        }
    }
    points
        .par_iter()
        .enumerate()
        .map(|(idx, &(s, nbar, r))| {
            let coeffs = evolve_coeffs(
                &SqueezeSpec::magnitude(s)?,
                &BathSpec::new(nbar)?,
                &ChannelTime::from_r(r)?,
            )?;
            let cfg = OptimizerConfig {
                rng_seed: mix_seed(spec.optimizer.rng_seed, idx as u64),
                ..spec.optimizer
            };
            let res = max_bell(&coeffs, &cfg)?;
            Ok(SweepRow {
                s,
                nbar,
                r,
                b_max: res.b_max,
                arg_a: res.arg_a,
                arg_b: res.arg_b,
                converged: res.converged,
            })
        })
        .collect()
}

/// Render rows as CSV with a header and 17 significant digits, enough to
/// round-trip every f64 exactly.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96 + 64);
    out.push_str("s,nbar,r,b_max,arg_a,arg_b,converged\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            row.s, row.nbar, row.r, row.b_max, row.arg_a, row.arg_b, row.converged
        );
    }
    out
}

/// A matplotlib script that redraws the decay curves from a sweep CSV.
/// The artifact itself never renders images.
pub fn plot_script(csv_path: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
"""Plot |B|_max decay curves from a sweep CSV."""
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

curves = defaultdict(list)
with open({csv_path:?}) as fh:
    for row in csv.DictReader(fh):
        key = (float(row["s"]), float(row["nbar"]))
        curves[key].append((float(row["r"]), float(row["b_max"])))

fig, ax = plt.subplots(figsize=(7, 4.5))
for (s, nbar), pts in sorted(curves.items()):
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts],
            label=f"s={{s:g}}, nbar={{nbar:g}}")
ax.axhline(2.0, color="gray", lw=0.8, ls="--", label="locality bound")
ax.set_xlabel(r"dimensionless time $r(\tau)$")
ax.set_ylabel(r"$|B|_{{\max}}$")
ax.legend()
fig.tight_layout()
fig.savefig({png_path:?}, dpi=160)
print("wrote", {png_path:?})
"#,
        csv_path = csv_path,
        png_path = format!("{}.png", csv_path.trim_end_matches(".csv")),
    )
}

/// The first channel time at which the Bell maximum falls to the locality
/// bound 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauCrossing {
    /// Crossing in the r parameterization, r_c ∈ (0, 1).
    pub r_c: f64,
    /// The same time as γτ = −ln(1 − r_c²).
    pub gamma_tau_c: f64,
}

/// Locate the first r with b_max(r) ≤ 2 by a monotone scan at the pinned
/// resolution followed by bisection down to `r_tol`. Requires s > 0 so the
/// curve starts strictly above 2.
pub fn find_tau_c(
    s: f64,
    nbar: f64,
    r_tol: f64,
    optimizer: &OptimizerConfig,
) -> Result<TauCrossing> {
    if !(s > 0.0) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            range: "(0, 20] (the vacuum never exceeds the bound)",
        });
    }
    if !(r_tol > 0.0 && r_tol.is_finite()) {
        return Err(Error::OutOfRange {
            name: "r_tol",
            value: r_tol,
            range: "(0, ∞)",
        });
    }
    let squeeze = SqueezeSpec::magnitude(s)?;
    let bath = BathSpec::new(nbar)?;
    let excess = |r: f64| -> Result<f64> {
        let coeffs = evolve_coeffs(&squeeze, &bath, &ChannelTime::from_r(r)?)?;
        Ok(max_bell(&coeffs, optimizer)?.b_max - 2.0)
    };
    if excess(0.0)? <= 0.0 {
        return Err(Error::NoCrossing { s, nbar });
    }
    // bracket the first sign change
    let mut lo = 0.0;
    let mut hi = None;
    let mut r = 0.0;
    while r < 1.0 {
        let next = (r + tol::TAU_C_SCAN_STEP).min(1.0);
        if excess(next)? <= 0.0 {
            lo = r;
            hi = Some(next);
            break;
        }
        r = next;
    }
    let Some(mut hi) = hi else {
        return Err(Error::NoCrossing { s, nbar });
    };
    while hi - lo > r_tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r_c = 0.5 * (lo + hi);
    Ok(TauCrossing {
        r_c,
        gamma_tau_c: -(1.0 - r_c * r_c).ln(),
    })
}

/// Which oracle families `run_oracles` should exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleScope {
    Fock,
    Convolution,
    Superposition,
    All,
}

impl std::str::FromStr for OracleScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fock" => Ok(Self::Fock),
            "convolution" => Ok(Self::Convolution),
            "superposition" => Ok(Self::Superposition),
            "all" => Ok(Self::All),
            other => Err(Error::Config(format!(
                "unknown oracle scope `{other}` (fock | convolution | superposition | all)"
            ))),
        }
    }
}

/// Knobs for the oracle suites.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    /// Override the automatic number-basis cutoff.
    pub cutoff: Option<usize>,
    pub quad: QuadratureSpec,
    pub rng_seed: u64,
    /// Random phase points per configuration.
    pub samples_per_config: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            cutoff: None,
            quad: QuadratureSpec::default(),
            rng_seed: 42,
            samples_per_config: 5,
        }
    }
}

/// One aggregated check with its worst observed deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    /// Parameters to reproduce the worst case.
    pub params: String,
    pub worst_deviation: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.worst_deviation <= self.tolerance
    }
}

/// Aggregated pass/fail report over the selected oracle families.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    /// One line per check plus a summary, the format the CLI prints.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<44} worst {:>12.3e}  tol {:>8.1e}  ({})",
                if c.passed() { "pass" } else { "FAIL" },
                c.name,
                c.worst_deviation,
                c.tolerance,
                c.params
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(
            out,
            "{} checks, {} failed",
            self.checks.len(),
            failed
        );
        out
    }
}

const ORACLE_S_FOCK: [f64; 3] = [0.1, 0.5, 1.0];
const ORACLE_S_LATTICE: [f64; 3] = [0.1, 0.5, 1.0];
const ORACLE_NBAR_LATTICE: [f64; 3] = [0.0, 0.5, 2.0];
const ORACLE_R_LATTICE: [f64; 3] = [0.3, 0.5, 0.7];
const ORACLE_S_SUPERPOSITION: [f64; 3] = [0.1, 0.3, 0.8];

fn fock_checks(settings: &OracleSettings, report: &mut OracleReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.rng_seed);
    for &s in &ORACLE_S_FOCK {
        let squeeze = SqueezeSpec::magnitude(s)?;
        // components sampled in [−0.9, 0.9]: |α|² ≤ 1.62
        let cutoff = settings
            .cutoff
            .unwrap_or_else(|| recommended_cutoff(&squeeze, 1.62));
        let state = tmss_amplitudes(&squeeze, cutoff)?;
        let mut worst = 0.0f64;
        let mut worst_at = (PhasePoint::ORIGIN, PhasePoint::ORIGIN);
        for _ in 0..100 {
            let a = PhasePoint::new(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            let b = PhasePoint::new(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            let via_parity = 4.0 / (std::f64::consts::PI * std::f64::consts::PI)
                * crate::fock::joint_parity_expectation(&state, a, b)?;
            let dev = (via_parity - crate::phase_space::initial_wigner(&squeeze, a, b)?).abs();
            if dev > worst {
                worst = dev;
                worst_at = (a, b);
            }
        }
        report.checks.push(OracleCheck {
            name: format!("fock wigner-parity identity s={s}"),
            params: format!(
                "cutoff={cutoff}, worst at alpha=({:.3},{:.3}) beta=({:.3},{:.3})",
                worst_at.0.re, worst_at.0.im, worst_at.1.re, worst_at.1.im
            ),
            worst_deviation: worst,
            tolerance: tol::WIGNER_PARITY_TOL,
        });

        // Bell assembled from parity expectations at the optimizer's argmax
        let coeffs = evolve_coeffs(&squeeze, &BathSpec::vacuum(), &ChannelTime::initial())?;
        let opt = max_bell(&coeffs, &OptimizerConfig::default())?;
        let alpha = PhasePoint::new(opt.arg_a, 0.0);
        let beta = PhasePoint::new(-opt.arg_b, 0.0);
        let via_fock = bell_from_fock(&state, alpha, beta)?;
        let via_wigner = bell_function(&coeffs, alpha, beta);
        report.checks.push(OracleCheck {
            name: format!("fock bell at argmax s={s}"),
            params: format!("cutoff={cutoff}, a={:.6}, b={:.6}", opt.arg_a, opt.arg_b),
            worst_deviation: (via_fock - via_wigner).abs(),
            tolerance: tol::FOCK_BELL_TOL,
        });
    }
    Ok(())
}

fn convolution_checks(settings: &OracleSettings, report: &mut OracleReport) -> Result<()> {
    let mut configs = Vec::new();
    for &s in &ORACLE_S_LATTICE {
        for &nbar in &ORACLE_NBAR_LATTICE {
            for &r in &ORACLE_R_LATTICE {
                configs.push((s, nbar, r));
            }
        }
    }
    let checks: Result<Vec<OracleCheck>> = configs
        .par_iter()
        .enumerate()
        .map(|(idx, &(s, nbar, r))| {
            let squeeze = SqueezeSpec::magnitude(s)?;
            let bath = BathSpec::new(nbar)?;
            let time = ChannelTime::from_r(r)?;
            let coeffs = evolve_coeffs(&squeeze, &bath, &time)?;
            let mut rng =
                ChaCha8Rng::seed_from_u64(mix_seed(settings.rng_seed, idx as u64));
            let mut worst = 0.0f64;
            let mut worst_at = (PhasePoint::ORIGIN, PhasePoint::ORIGIN);
            for _ in 0..settings.samples_per_config {
                let a = PhasePoint::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let b = PhasePoint::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let numeric = convolve_numeric(&squeeze, &bath, &time, a, b, &settings.quad)?;
                let dev = (numeric - wigner_value(&coeffs, a, b)).abs();
                if dev > worst {
                    worst = dev;
                    worst_at = (a, b);
                }
            }
            Ok(OracleCheck {
                name: format!("convolution s={s} nbar={nbar} r={r}"),
                params: format!(
                    "nodes={}, worst at alpha=({:.3},{:.3}) beta=({:.3},{:.3})",
                    settings.quad.nodes_per_axis,
                    worst_at.0.re,
                    worst_at.0.im,
                    worst_at.1.re,
                    worst_at.1.im
                ),
                worst_deviation: worst,
                tolerance: tol::CONVOLUTION_TOL,
            })
        })
        .collect();
    report.checks.extend(checks?);
    Ok(())
}

fn superposition_checks(settings: &OracleSettings, report: &mut OracleReport) -> Result<()> {
    for &s in &ORACLE_S_SUPERPOSITION {
        let w = WeightFunction::new(&SqueezeSpec::magnitude(s)?)?;
        let norm = superposition_norm(&w, &settings.quad)?;
        report.checks.push(OracleCheck {
            name: format!("superposition norm s={s}"),
            params: format!("nodes={}", settings.quad.nodes_per_axis),
            worst_deviation: (norm - 1.0).abs(),
            tolerance: tol::SUPERPOSITION_NORM_TOL,
        });
        let check = superposition_wigner_check(&w, &settings.quad)?;
        report.checks.push(OracleCheck {
            name: format!("superposition amplitudes s={s}"),
            params: format!("nodes={}, n ≤ 2", settings.quad.nodes_per_axis),
            worst_deviation: check.worst_deviation,
            tolerance: tol::SUPERPOSITION_AMP_TOL,
        });
    }
    Ok(())
}

/// Run the selected oracle families at their pinned lattices and tolerances.
pub fn run_oracles(scope: OracleScope, settings: &OracleSettings) -> Result<OracleReport> {
    settings.quad.validate()?;
    let mut report = OracleReport::default();
    if matches!(scope, OracleScope::Fock | OracleScope::All) {
        fock_checks(settings, &mut report)?;
    }
    if matches!(scope, OracleScope::Convolution | OracleScope::All) {
        convolution_checks(settings, &mut report)?;
    }
    if matches!(scope, OracleScope::Superposition | OracleScope::All) {
        superposition_checks(settings, &mut report)?;
    }
    Ok(report)
}
