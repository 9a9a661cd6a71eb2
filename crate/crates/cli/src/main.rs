mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;
use photocount::{PhaseMode, PulseSpec, StateSpec};

#[derive(Parser, Debug)]
#[command(
    name = "photocount",
    version,
    about = "Photocount statistics from quadrature and voltage samples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic quadrature batch, or a voltage trace when --pulse is given.
    Simulate(SimulateArgs),
    /// Photon statistics of a quadrature batch, optionally reference-subtracted.
    Analyze(AnalyzeArgs),
    /// Classicality verdicts for an analysis report.
    Classify(ClassifyArgs),
    /// Energy and photon number of a voltage trace.
    Wideband(WidebandArgs),
    /// Run the Fock-space oracle self-checks.
    VerifyOracle(VerifyArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StateName {
    Vacuum,
    Coherent,
    Thermal,
    Squeezed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PulseName {
    Gaussian,
    Chirp,
}

/// Accepts `1000000`, `1e6`, `2.5e5`.
fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= usize::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(format!("not a whole count: {s}"))
    }
}

/// `averaged` or a fixed phase in radians.
fn parse_phase(s: &str) -> Result<PhaseMode, String> {
    if s.eq_ignore_ascii_case("averaged") {
        return Ok(PhaseMode::Averaged);
    }
    s.parse::<f64>()
        .map(|theta| PhaseMode::Fixed { theta })
        .map_err(|_| format!("expected 'averaged' or an angle in radians, got {s}"))
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    state: Option<StateName>,
    /// Mean photon number of a coherent or thermal state.
    #[arg(long)]
    mean_photons: Option<f64>,
    /// Squeeze parameter.
    #[arg(long)]
    r: Option<f64>,
    /// Phase of the anti-squeezed quadrature, radians.
    #[arg(long, default_value_t = 0.0)]
    squeeze_angle: f64,
    /// Mean photon number of added independent thermal noise.
    #[arg(long)]
    noise: Option<f64>,
    /// `averaged` or a fixed phase in radians.
    #[arg(long, value_parser = parse_phase)]
    phase: Option<PhaseMode>,
    /// Number of samples, e.g. 1e6.
    #[arg(long, value_parser = parse_count)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV; a `.meta.json` sidecar is written beside it.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write a voltage trace of this pulse instead of a quadrature batch.
    #[arg(long, value_enum)]
    pulse: Option<PulseName>,
    /// Gaussian carrier frequency, Hz.
    #[arg(long)]
    carrier: Option<f64>,
    /// Gaussian envelope width, s.
    #[arg(long)]
    sigma_t: Option<f64>,
    /// Chirp start frequency, Hz.
    #[arg(long)]
    start_hz: Option<f64>,
    /// Chirp stop frequency, Hz.
    #[arg(long)]
    stop_hz: Option<f64>,
    /// Chirp length, s.
    #[arg(long)]
    length: Option<f64>,
    /// Peak voltage, V.
    #[arg(long, default_value_t = 1e-6)]
    amplitude: f64,
    /// White noise power spectral density, V^2/Hz.
    #[arg(long)]
    noise_floor: Option<f64>,
    /// Sample rate, Hz.
    #[arg(long)]
    fs: Option<f64>,
    /// Record length, s.
    #[arg(long)]
    duration: Option<f64>,
    /// Line impedance, ohms.
    #[arg(long)]
    impedance: Option<f64>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    /// Quadrature batch CSV.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Reference (source off) batch whose cumulants are subtracted.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Bootstrap resamples; 0 disables error estimation.
    #[arg(long)]
    bootstrap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    /// Report JSON written by `analyze`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    k_sigma: Option<f64>,
    /// Mean photon number below which the Fano criterion applies.
    #[arg(long)]
    n_small: Option<f64>,
    /// Verdicts JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the classical boundary curve as CSV.
    #[arg(long)]
    boundary: Option<PathBuf>,
    /// Upper end of the boundary grid.
    #[arg(long)]
    n_max: Option<f64>,
    /// Number of boundary grid points.
    #[arg(long)]
    points: Option<usize>,
    /// Also write the third-moment boundary surface as `n,var,boundary` CSV.
    #[arg(long)]
    surface: Option<PathBuf>,
    /// Upper end of the variance grid of the surface.
    #[arg(long)]
    var_max: Option<f64>,
}

#[derive(Args, Debug)]
struct WidebandArgs {
    #[command(flatten)]
    common: Common,
    /// Voltage trace CSV (`t,v`) with its `.meta.json` sidecar.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Reference frequency for the narrowband comparison, Hz.
    #[arg(long)]
    nu0: Option<f64>,
    /// Report JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the quadrature pair as `t,x,p` CSV.
    #[arg(long)]
    quadratures: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Check results JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn state_from_flags(a: &SimulateArgs) -> Result<Option<StateSpec>, error::CliError> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| error::CliError::Config(format!("--state needs --{flag}")))
    };
    let spec = match a.state {
        None => {
            if a.noise.is_some() {
                return Err(error::CliError::Config("--noise needs --state".into()));
            }
            return Ok(None);
        }
        Some(StateName::Vacuum) => StateSpec::vacuum(),
        Some(StateName::Coherent) => StateSpec::coherent(need(a.mean_photons, "mean-photons")?),
        Some(StateName::Thermal) => StateSpec::thermal(need(a.mean_photons, "mean-photons")?),
        Some(StateName::Squeezed) => StateSpec::squeezed_vacuum(need(a.r, "r")?, a.squeeze_angle),
    };
    Ok(Some(match a.noise {
        Some(n) => spec.with_noise(n),
        None => spec,
    }))
}

fn pulse_from_flags(a: &SimulateArgs) -> Result<Option<PulseSpec>, error::CliError> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| error::CliError::Config(format!("--pulse needs --{flag}")))
    };
    let pulse = match a.pulse {
        None => return Ok(None),
        Some(PulseName::Gaussian) => {
            PulseSpec::gaussian(need(a.carrier, "carrier")?, need(a.sigma_t, "sigma-t")?, a.amplitude)
        }
        Some(PulseName::Chirp) => PulseSpec::chirp(
            need(a.start_hz, "start-hz")?,
            need(a.stop_hz, "stop-hz")?,
            need(a.length, "length")?,
            a.amplitude,
        ),
    };
    Ok(Some(match a.noise_floor {
        Some(d) => pulse.with_noise_floor(d),
        None => pulse,
    }))
}

fn flags_and_config(cli: Cli) -> Result<(config::CommandName, Option<PathBuf>, RunConfig), error::CliError> {
    use config::CommandName as C;
    Ok(match cli.command {
        Command::Simulate(a) => {
            let flags = RunConfig {
                state: state_from_flags(&a)?,
                pulse: pulse_from_flags(&a)?,
                phase: a.phase,
                n: a.n,
                seed: a.seed,
                out: a.out.clone(),
                fs: a.fs,
                duration: a.duration,
                impedance: a.impedance,
                ..Default::default()
            };
            (C::Simulate, a.common.config, flags)
        }
        Command::Analyze(a) => (
            C::Analyze,
            a.common.config,
            RunConfig {
                input: a.input,
                reference: a.reference,
                bootstrap: a.bootstrap,
                seed: a.seed,
                out: a.out,
                ..Default::default()
            },
        ),
        Command::Classify(a) => (
            C::Classify,
            a.common.config,
            RunConfig {
                input: a.input,
                k_sigma: a.k_sigma,
                n_small: a.n_small,
                out: a.out,
                boundary_out: a.boundary,
                boundary_n_max: a.n_max,
                boundary_points: a.points,
                surface_out: a.surface,
                surface_var_max: a.var_max,
                ..Default::default()
            },
        ),
        Command::Wideband(a) => (
            C::Wideband,
            a.common.config,
            RunConfig {
                input: a.input,
                nu0: a.nu0,
                out: a.out,
                quadratures_out: a.quadratures,
                ..Default::default()
            },
        ),
        Command::VerifyOracle(a) => (
            C::VerifyOracle,
            a.common.config,
            RunConfig {
                out: a.out,
                ..Default::default()
            },
        ),
    })
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    let (name, config_path, flags) = flags_and_config(cli)?;
    let file = match config_path {
        Some(p) => RunConfig::load(&p)?,
        None => RunConfig::default(),
    };
    file.check_command(name)?;
    let cfg = file.overlay(&flags);
    commands::dispatch(name, cfg)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("photocount: {e}");
            e.exit_code()
        }
    }
}
