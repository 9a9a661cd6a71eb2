//! On-disk formats.
//!
//! * Quadrature batch: single-column CSV with header `x`, plus a JSON
//!   sidecar `<stem>.meta.json` holding [`BatchMeta`].
//! * Time trace: two-column CSV `t,v` (seconds, volts), sidecar [`TraceMeta`].
//! * Quadrature pair: CSV `t,x,p`.
//! * Classical boundary: CSV `n,boundary`; third-moment surface `n,var,boundary`.
//! * Reports: pretty-printed JSON.
//!
//! Floats are written in Rust's shortest round-trip form, so identical
//! inputs give byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::sampler::{PhaseMode, QuadratureBatch, StateSpec, TimeTrace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchMeta {
    pub spec: Option<StateSpec>,
    pub phase_mode: PhaseMode,
    pub seed: u64,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceMeta {
    pub fs: f64,
    pub z: f64,
    pub t0: f64,
    pub n: usize,
}

/// `dir/stem.csv` -> `dir/stem.meta.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
}

fn write_rows<const C: usize>(
    path: &Path,
    header: [&str; C],
    rows: impl Iterator<Item = [f64; C]>,
) -> Result<(), FormatError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            write!(out, "{v}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>, FormatError> {
    let mut rdr = csv::Reader::from_path(path)?;
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(FormatError::Malformed(format!(
            "{}: expected columns {header:?}, found {found:?}",
            path.display()
        )));
    }
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            rec.iter()
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|e| {
                        FormatError::Malformed(format!("{} row {}: {e}", path.display(), i + 1))
                    })
                })
                .collect()
        })
        .collect()
}

pub fn write_batch(csv: &Path, batch: &QuadratureBatch) -> Result<(), FormatError> {
    write_rows(csv, ["x"], batch.samples().iter().map(|&x| [x]))?;
    let meta = BatchMeta {
        spec: batch.spec().copied(),
        phase_mode: batch.phase_mode(),
        seed: batch.seed(),
        n: batch.len(),
    };
    write_json(&sidecar_path(csv), &meta)
}

pub fn read_batch(csv: &Path) -> Result<QuadratureBatch, FormatError> {
    let meta: BatchMeta = read_json(&sidecar_path(csv))?;
    let samples: Vec<f64> = read_rows(csv, &["x"])?.into_iter().map(|r| r[0]).collect();
    if samples.len() != meta.n {
        return Err(FormatError::Malformed(format!(
            "{}: sidecar says {} rows, found {}",
            csv.display(),
            meta.n,
            samples.len()
        )));
    }
    QuadratureBatch::new(samples, meta.phase_mode, meta.seed, meta.spec)
        .map_err(|e| FormatError::Malformed(e.to_string()))
}

pub fn write_trace(csv: &Path, trace: &TimeTrace) -> Result<(), FormatError> {
    write_rows(
        csv,
        ["t", "v"],
        trace
            .samples
            .iter()
            .enumerate()
            .map(|(i, &v)| [trace.time(i), v]),
    )?;
    let meta = TraceMeta {
        fs: trace.fs,
        z: trace.z,
        t0: trace.t0,
        n: trace.len(),
    };
    write_json(&sidecar_path(csv), &meta)
}

pub fn read_trace(csv: &Path) -> Result<TimeTrace, FormatError> {
    let meta: TraceMeta = read_json(&sidecar_path(csv))?;
    let samples: Vec<f64> = read_rows(csv, &["t", "v"])?
        .into_iter()
        .map(|r| r[1])
        .collect();
    if samples.len() != meta.n {
        return Err(FormatError::Malformed(format!(
            "{}: sidecar says {} rows, found {}",
            csv.display(),
            meta.n,
            samples.len()
        )));
    }
    TimeTrace::new(meta.fs, meta.z, meta.t0, samples)
        .map_err(|e| FormatError::Malformed(e.to_string()))
}

/// `t,x,p` rows for plotting a quadrature pair.
pub fn write_quadrature_pair(csv: &Path, x: &TimeTrace, p: &TimeTrace) -> Result<(), FormatError> {
    write_rows(
        csv,
        ["t", "x", "p"],
        x.samples
            .iter()
            .zip(&p.samples)
            .enumerate()
            .map(|(i, (&a, &b))| [x.time(i), a, b]),
    )
}

pub fn write_boundary(csv: &Path, points: &[(f64, f64)]) -> Result<(), FormatError> {
    write_rows(csv, ["n", "boundary"], points.iter().map(|&(n, b)| [n, b]))
}

/// `n,var,boundary` rows of the third-moment surface.
pub fn write_surface(csv: &Path, points: &[[f64; 3]]) -> Result<(), FormatError> {
    write_rows(csv, ["n", "var", "boundary"], points.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_quadratures, sample_timetrace, PulseSpec};

    #[test]
    fn batch_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("batch.csv");
        let spec = StateSpec::squeezed_vacuum(0.4, 0.1).with_noise(0.2);
        let batch = sample_quadratures(&spec, PhaseMode::Fixed { theta: 0.3 }, 1000, 42).unwrap();
        write_batch(&path, &batch).unwrap();
        assert!(dir.path().join("batch.meta.json").exists());
        assert_eq!(read_batch(&path).unwrap(), batch);
    }

    #[test]
    fn trace_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let pulse = PulseSpec::gaussian(1e9, 2e-9, 1e-6).with_noise_floor(1e-20);
        let tr = sample_timetrace(&pulse, 8e9, 30e-9, 50.0, 3).unwrap();
        write_trace(&path, &tr).unwrap();
        assert_eq!(read_trace(&path).unwrap(), tr);
    }

    #[test]
    fn row_count_mismatch_is_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.csv");
        let batch = sample_quadratures(&StateSpec::vacuum(), PhaseMode::Averaged, 10, 0).unwrap();
        write_batch(&path, &batch).unwrap();
        std::fs::write(&path, "x\n1.0\n2.0\n").unwrap();
        assert!(matches!(read_batch(&path), Err(FormatError::Malformed(_))));
        std::fs::write(&path, "y\n1.0\n").unwrap();
        assert!(matches!(read_batch(&path), Err(FormatError::Malformed(_))));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_batch(Path::new("/nonexistent/batch.csv")).unwrap_err();
        assert!(matches!(err, FormatError::Io(_)));
    }
}
