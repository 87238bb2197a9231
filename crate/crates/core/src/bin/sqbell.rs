//! Command line for the squeezed-vacuum Bell-decay simulator.
//!
//! Exit codes: 0 success, 1 invalid input, 2 oracle/property failure,
//! 3 optimizer non-convergence in `maximize`.

use clap::{Args, Parser, Subcommand};
use squeezed_bell::bell::{bell_function, max_bell, OptimizerConfig};
use squeezed_bell::oracles::QuadratureSpec;
use squeezed_bell::phase_space::{evolve_coeffs, BathSpec, ChannelTime, PhasePoint, SqueezeSpec};
use squeezed_bell::sweep::{
    find_tau_c, parse_r_grid, plot_script, rows_to_csv, run_oracles, run_sweep, OracleScope,
    OracleSettings, RGrid, SweepSpec,
};
use squeezed_bell::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INVALID_INPUT: u8 = 1;
const EXIT_ORACLE_FAILURE: u8 = 2;
const EXIT_NON_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sqbell",
    version,
    about = "Bell-nonlocality decay of a two-mode squeezed vacuum in thermal noise"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct StateArgs {
    /// Squeezing magnitude s ≥ 0.
    #[arg(long = "s")]
    s: f64,
    /// Mean thermal photon number of each bath mode.
    #[arg(long, default_value_t = 0.0)]
    nbar: f64,
    /// Channel time as the decayed fraction r ∈ [0, 1].
    #[arg(long, default_value_t = 0.0)]
    r: f64,
}

#[derive(Args)]
struct OptimizerArgs {
    /// Ascent restarts.
    #[arg(long)]
    restarts: Option<usize>,
    /// RNG seed for restart sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration cap per restart.
    #[arg(long)]
    max_iterations: Option<usize>,
}

impl OptimizerArgs {
    fn build(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::default();
        if let Some(restarts) = self.restarts {
            cfg.restarts = restarts;
        }
        if let Some(seed) = self.seed {
            cfg.rng_seed = seed;
        }
        if let Some(cap) = self.max_iterations {
            cfg.max_iterations = cap;
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the Bell function at one displacement pair.
    Eval {
        #[command(flatten)]
        state: StateArgs,
        /// Displacement of mode a, as `re,im`.
        #[arg(long, value_parser = parse_point)]
        alpha: PhasePoint,
        /// Displacement of mode b, as `re,im`.
        #[arg(long, value_parser = parse_point)]
        beta: PhasePoint,
    },
    /// Maximize |B| over displacement settings.
    Maximize {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Sweep (s, nbar, r) and write decay curves as CSV.
    Sweep {
        /// Plain-text config file (`key = value`, lists comma-separated).
        #[arg(long, conflicts_with_all = ["s", "nbar", "r_grid"])]
        config: Option<PathBuf>,
        /// Squeezing values, comma-separated.
        #[arg(long = "s")]
        s: Option<String>,
        /// Bath photon numbers, comma-separated.
        #[arg(long)]
        nbar: Option<String>,
        /// r grid as `start:stop:count`.
        #[arg(long)]
        r_grid: Option<String>,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a plot script next to the CSV (requires --out).
        #[arg(long)]
        plot_script: bool,
    },
    /// Find the first channel time at which |B|_max falls to 2.
    TauC {
        /// Squeezing magnitude s > 0.
        #[arg(long = "s")]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        nbar: f64,
        /// Bisection tolerance in r.
        #[arg(long, default_value_t = squeezed_bell::tol::TAU_C_DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Run the verification oracles and report worst deviations.
    Oracle {
        /// fock | convolution | superposition | all
        #[arg(long, default_value = "all")]
        scope: String,
        /// Override the automatic number-basis cutoff.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Gauss–Hermite nodes per axis.
        #[arg(long)]
        quad_nodes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_point(text: &str) -> std::result::Result<PhasePoint, String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| format!("`{text}` must be `re,im`"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad re `{re}`"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad im `{im}`"))?;
    PhasePoint::checked(re, im).map_err(|e| e.to_string())
}

fn coeffs_for(state: &StateArgs) -> Result<squeezed_bell::GaussianCoeffs> {
    evolve_coeffs(
        &SqueezeSpec::magnitude(state.s)?,
        &BathSpec::new(state.nbar)?,
        &ChannelTime::from_r(state.r)?,
    )
}

fn cmd_eval(state: &StateArgs, alpha: PhasePoint, beta: PhasePoint) -> Result<u8> {
    let coeffs = coeffs_for(state)?;
    let b = bell_function(&coeffs, alpha, beta);
    println!(
        "s={} nbar={} r={} alpha=({},{}) beta=({},{})",
        state.s, state.nbar, state.r, alpha.re, alpha.im, beta.re, beta.im
    );
    println!("B = {b:.16e}");
    Ok(0)
}

fn cmd_maximize(state: &StateArgs, optimizer: &OptimizerArgs) -> Result<u8> {
    let coeffs = coeffs_for(state)?;
    let res = max_bell(&coeffs, &optimizer.build())?;
    println!("s={} nbar={} r={}", state.s, state.nbar, state.r);
    println!("b_max = {:.16e}", res.b_max);
    println!("arg_a = {:.16e}", res.arg_a);
    println!("arg_b = {:.16e}", res.arg_b);
    println!("restarts = {}", res.restarts_used);
    println!("converged = {}", res.converged);
    if !res.converged {
        eprintln!("warning: no restart converged within the iteration cap");
        return Ok(EXIT_NON_CONVERGENCE);
    }
    Ok(0)
}

fn sweep_spec_from_flags(
    s: Option<&str>,
    nbar: Option<&str>,
    r_grid: Option<&str>,
    optimizer: &OptimizerArgs,
    plot: bool,
) -> Result<SweepSpec> {
    let parse_list = |name: &str, text: &str| -> Result<Vec<f64>> {
        text.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad {name} value `{v}`")))
            })
            .collect()
    };
    let mut spec = SweepSpec {
        optimizer: optimizer.build(),
        emit_plot_script: plot,
        ..SweepSpec::default()
    };
    if let Some(text) = s {
        spec.s_values = parse_list("s", text)?;
    }
    if let Some(text) = nbar {
        spec.nbar_values = parse_list("nbar", text)?;
    }
    if let Some(text) = r_grid {
        spec.r_grid = parse_r_grid(text)?;
    } else {
        spec.r_grid = RGrid {
            start: 0.0,
            stop: 1.0,
            count: 101,
        };
    }
    spec.validate()?;
    Ok(spec)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: Option<&Path>,
    s: Option<&str>,
    nbar: Option<&str>,
    r_grid: Option<&str>,
    optimizer: &OptimizerArgs,
    out: Option<&Path>,
    plot: bool,
) -> Result<u8> {
    let mut spec = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("read {}: {e}", path.display())))?;
            let mut spec = SweepSpec::from_config_str(&text)?;
            // command-line optimizer flags override the file
            if let Some(restarts) = optimizer.restarts {
                spec.optimizer.restarts = restarts;
            }
            if let Some(seed) = optimizer.seed {
                spec.optimizer.rng_seed = seed;
            }
            if let Some(cap) = optimizer.max_iterations {
                spec.optimizer.max_iterations = cap;
            }
            spec
        }
        None => sweep_spec_from_flags(s, nbar, r_grid, optimizer, plot)?,
    };
    spec.emit_plot_script |= plot;
    if spec.emit_plot_script && out.is_none() {
        return Err(Error::Config(
            "--plot-script needs --out so the script has a CSV to read".into(),
        ));
    }

    let rows = run_sweep(&spec)?;
    let csv = rows_to_csv(&rows);
    match out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| Error::Config(format!("write {}: {e}", path.display())))?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
            if spec.emit_plot_script {
                let script_path = path.with_extension("py");
                std::fs::write(&script_path, plot_script(&path.to_string_lossy()))
                    .map_err(|e| Error::Config(format!("write {}: {e}", script_path.display())))?;
                eprintln!("wrote plot script to {}", script_path.display());
            }
        }
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_tau_c(s: f64, nbar: f64, tol: f64, optimizer: &OptimizerArgs) -> Result<u8> {
    let crossing = find_tau_c(s, nbar, tol, &optimizer.build())?;
    println!("s={s} nbar={nbar}");
    println!("r_c = {:.16e}", crossing.r_c);
    println!("gamma_tau_c = {:.16e}", crossing.gamma_tau_c);
    Ok(0)
}

fn cmd_oracle(
    scope: &str,
    cutoff: Option<usize>,
    quad_nodes: Option<usize>,
    seed: Option<u64>,
) -> Result<u8> {
    let scope: OracleScope = scope.parse()?;
    let mut settings = OracleSettings {
        cutoff,
        ..OracleSettings::default()
    };
    if let Some(nodes) = quad_nodes {
        settings.quad = QuadratureSpec::new(nodes, settings.quad.rescale)?;
    }
    if let Some(seed) = seed {
        settings.rng_seed = seed;
    }
    let report = run_oracles(scope, &settings)?;
    print!("{}", report.render());
    if report.passed() {
        Ok(0)
    } else {
        Ok(EXIT_ORACLE_FAILURE)
    }
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Eval { state, alpha, beta } => cmd_eval(state, *alpha, *beta),
        Cmd::Maximize { state, optimizer } => cmd_maximize(state, optimizer),
        Cmd::Sweep {
            config,
            s,
            nbar,
            r_grid,
            optimizer,
            out,
            plot_script,
        } => cmd_sweep(
            config.as_deref(),
            s.as_deref(),
            nbar.as_deref(),
            r_grid.as_deref(),
            optimizer,
            out.as_deref(),
            *plot_script,
        ),
        Cmd::TauC {
            s,
            nbar,
            tol,
            optimizer,
        } => cmd_tau_c(*s, *nbar, *tol, optimizer),
        Cmd::Oracle {
            scope,
            cutoff,
            quad_nodes,
            seed,
        } => cmd_oracle(scope, *cutoff, *quad_nodes, *seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_INVALID_INPUT)
        }
    }
}
