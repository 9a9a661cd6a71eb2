use std::path::{Path, PathBuf};

use photocount::error::SamplerError;
use photocount::moments::{
    accumulate_moments, bootstrap_errors, bootstrap_subtracted, cumulants_from_moments,
    photon_stats_from_cumulants, photon_stats_of, subtract_reference, PhotonStats, VacuumTerm,
};
use photocount::sampler::{PulseShape, MIN_OVERSAMPLING};
use photocount::{io, verify, wideband};
use photocount::{
    boundary_curve, classify_with, sample_quadratures, sample_timetrace, third_moment_surface,
    PhaseMode,
};

use crate::config::{resolved_config_path, CommandName, RunConfig};
use crate::error::CliError;

const DEFAULT_N: usize = 100_000;
const DEFAULT_RESAMPLES: usize = 200;
const DEFAULT_IMPEDANCE: f64 = 50.0;
const DEFAULT_BOUNDARY_N_MAX: f64 = 2.0;
const DEFAULT_BOUNDARY_POINTS: usize = 101;

pub fn dispatch(name: CommandName, mut cfg: RunConfig) -> Result<(), CliError> {
    cfg.command = Some(name);
    match name {
        CommandName::Simulate => simulate(cfg),
        CommandName::Analyze => analyze(cfg),
        CommandName::Classify => classify(cfg),
        CommandName::Wideband => wideband_cmd(cfg),
        CommandName::VerifyOracle => verify_oracle(cfg),
    }
}

fn required<T: Clone>(value: &Option<T>, key: &str) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| CliError::Config(format!("missing required setting `{key}`")))
}

fn with_path<T>(path: &Path, r: Result<T, photocount::error::FormatError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_resolved(out: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    Ok(io::write_json(&resolved_config_path(out), cfg)?)
}

fn simulate(mut cfg: RunConfig) -> Result<(), CliError> {
    let seed = *cfg.seed.get_or_insert(0);
    match (&cfg.state, &cfg.pulse) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "give either a state (quadrature batch) or a pulse (voltage trace), not both".into(),
        )),
        (None, None) => Err(CliError::Config(
            "simulate needs a state (--state) or a pulse (--pulse)".into(),
        )),
        (Some(spec), None) => {
            let spec = *spec;
            let phase = *cfg.phase.get_or_insert(PhaseMode::Averaged);
            let n = *cfg.n.get_or_insert(DEFAULT_N);
            let out = cfg.out.get_or_insert_with(|| PathBuf::from("batch.csv")).clone();
            let batch = sample_quadratures(&spec, phase, n, seed)?;
            io::write_batch(&out, &batch)?;
            write_resolved(&out, &cfg)?;
            println!("wrote {n} quadrature samples to {}", out.display());
            Ok(())
        }
        (None, Some(pulse)) => {
            let pulse = *pulse;
            let fs = *cfg.fs.get_or_insert(8.0 * pulse.max_frequency());
            let duration = *cfg.duration.get_or_insert(match pulse.shape {
                PulseShape::Gaussian { sigma_t, .. } => 12.0 * sigma_t,
                PulseShape::Chirp { length_s, .. } => 1.2 * length_s,
            });
            let z = *cfg.impedance.get_or_insert(DEFAULT_IMPEDANCE);
            let out = cfg.out.get_or_insert_with(|| PathBuf::from("trace.csv")).clone();
            let trace = sample_timetrace(&pulse, fs, duration, z, seed)?;
            io::write_trace(&out, &trace)?;
            write_resolved(&out, &cfg)?;
            println!("wrote {} trace samples to {}", trace.len(), out.display());
            Ok(())
        }
    }
}

fn analyze(mut cfg: RunConfig) -> Result<(), CliError> {
    let input = required(&cfg.input, "input")?;
    let resamples = *cfg.bootstrap.get_or_insert(DEFAULT_RESAMPLES);
    let seed = *cfg.seed.get_or_insert(0);
    let out = cfg.out.get_or_insert_with(|| PathBuf::from("report.json")).clone();
    let batch = with_path(&input, io::read_batch(&input))?;
    let stats: PhotonStats = match &cfg.reference {
        None if resamples == 0 => photon_stats_of(&batch)?,
        None => bootstrap_errors(&batch, resamples, seed)?,
        Some(r) => {
            let reference = with_path(r, io::read_batch(r))?;
            if resamples == 0 {
                let ct = cumulants_from_moments(&accumulate_moments(&batch)?);
                let cr = cumulants_from_moments(&accumulate_moments(&reference)?);
                photon_stats_from_cumulants(&subtract_reference(&ct, &cr), VacuumTerm::Removed)
            } else {
                bootstrap_subtracted(&batch, &reference, resamples, seed)?
            }
        }
    };
    io::write_json(&out, &stats)?;
    write_resolved(&out, &cfg)?;
    print_stats(&stats);
    Ok(())
}

fn print_stats(s: &PhotonStats) {
    let se = s.errors.as_ref();
    let fmt = |v: f64, e: Option<f64>| match e {
        Some(e) => format!("{v:.6} +- {e:.2e}"),
        None => format!("{v:.6}"),
    };
    println!("<n>     = {}", fmt(s.n_mean, se.map(|e| e.n_mean)));
    println!("<dn^2>  = {}", fmt(s.n_var, se.map(|e| e.n_var)));
    println!("<dn^3>  = {}", fmt(s.n_skew3, se.map(|e| e.n_skew3)));
    match s.fano {
        Some(f) => println!("fano    = {}", fmt(f, se.and_then(|e| e.fano))),
        None => println!("fano    = undefined"),
    }
    for flag in &s.flags {
        println!("warning: {flag:?}");
    }
}

fn classify(mut cfg: RunConfig) -> Result<(), CliError> {
    let input = required(&cfg.input, "input")?;
    let opts = cfg.classify_options();
    cfg.k_sigma = Some(opts.k_sigma);
    cfg.n_small = Some(opts.n_small);
    let out = cfg
        .out
        .get_or_insert_with(|| PathBuf::from("classification.json"))
        .clone();
    let stats: PhotonStats = with_path(&input, io::read_json(&input))?;
    let report = classify_with(&stats, &opts)?;
    if cfg.boundary_out.is_some() || cfg.surface_out.is_some() {
        let n_max = *cfg.boundary_n_max.get_or_insert(DEFAULT_BOUNDARY_N_MAX);
        let points = *cfg.boundary_points.get_or_insert(DEFAULT_BOUNDARY_POINTS);
        let n_grid = grid(n_max, points)?;
        if let Some(path) = &cfg.boundary_out {
            io::write_boundary(path, &boundary_curve(&n_grid)?)?;
        }
        if let Some(path) = cfg.surface_out.clone() {
            let var_max = *cfg.surface_var_max.get_or_insert(2.0 * n_max);
            io::write_surface(&path, &third_moment_surface(&n_grid, &grid(var_max, points)?)?)?;
        }
    }
    io::write_json(&out, &report)?;
    write_resolved(&out, &cfg)?;
    println!("variance condition: {:?}", report.cond_variance.verdict);
    println!("small-n limit:      {:?}", report.cond_limit.verdict);
    println!("third moment:       {:?}", report.cond_third.verdict);
    println!("overall:            {:?}", report.overall);
    Ok(())
}

fn grid(max: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(max > 0.0 && max.is_finite()) || points < 2 {
        return Err(CliError::Config(
            "boundary grids need a positive upper end and at least 2 points".into(),
        ));
    }
    Ok((0..points)
        .map(|i| max * i as f64 / (points - 1) as f64)
        .collect())
}

fn wideband_cmd(mut cfg: RunConfig) -> Result<(), CliError> {
    let input = required(&cfg.input, "input")?;
    let nu0 = required(&cfg.nu0, "nu0")?;
    let out = cfg.out.get_or_insert_with(|| PathBuf::from("wideband.json")).clone();
    let trace = with_path(&input, io::read_trace(&input))?;
    if !(nu0 > 0.0 && nu0.is_finite()) {
        return Err(CliError::Config(format!("nu0 must be positive, got {nu0}")));
    }
    if trace.fs <= MIN_OVERSAMPLING * nu0 {
        return Err(SamplerError::Aliasing {
            carrier_hz: nu0,
            fs: trace.fs,
            factor: MIN_OVERSAMPLING,
        }
        .into());
    }
    let report = wideband::analyze(&trace, nu0)?;
    if let Some(path) = &cfg.quadratures_out {
        let (x, p) = wideband::hilbert_pair(&trace)?;
        io::write_quadrature_pair(path, &x, &p)?;
    }
    io::write_json(&out, &report)?;
    write_resolved(&out, &cfg)?;
    println!("energy   = {:.6e} J", report.energy_j);
    println!("photons  = {:.6e}", report.photons);
    if let Some(r) = report.ratio_to_hnu0 {
        println!("photons * h nu0 / energy = {r:.6}");
    }
    Ok(())
}

fn verify_oracle(cfg: RunConfig) -> Result<(), CliError> {
    let results = verify::run_oracle_suite();
    for r in &results {
        println!(
            "[{}] {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    if let Some(out) = &cfg.out {
        io::write_json(out, &results)?;
        write_resolved(out, &cfg)?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Verification(format!(
            "{failed} of {} checks failed",
            results.len()
        )));
    }
    Ok(())
}
