//! Photocount statistics of single-mode microwave fields reconstructed from
//! continuous quadrature and voltage samples.
//!
//! * [`fock`]: truncated Fock-space oracle (ladder operators, symmetric
//!   ordering sums, exact moments of density matrices).
//! * [`sampler`]: reproducible synthetic quadrature batches and voltage traces.
//! * [`moments`]: streaming central moments, cumulants, reference
//!   subtraction, inversion to photocount moments, bootstrap errors.
//! * [`classicality`]: the classical-light inequalities and Fano criterion.
//! * [`wideband`]: energy and photon-number functionals of voltage traces.
//! * [`io`]: CSV and JSON file formats.

pub mod classicality;
pub mod error;
pub mod fock;
pub mod io;
pub mod moments;
pub mod rng;
pub mod sampler;
pub mod verify;
pub mod wideband;

pub use classicality::{
    boundary_curve, classify, classify_with, third_moment_surface, ClassicalityReport, ClassifyOptions,
    Overall, Verdict,
};
pub use error::{Error, Result};
pub use fock::{
    exact_photon_stats, exact_quadrature_moment, make_ladder, symmetric_sum_closed,
    symmetric_sum_enumerated, DensityMatrix, FockOperator, Ladder, Surd,
};
pub use moments::{
    accumulate_moments, bootstrap_errors, bootstrap_subtracted, cumulants_from_moments,
    photon_stats_from_cumulants, subtract_reference, CumulantSet, MomentAccumulator, MomentSet,
    PhotonStats, StatErrors, VacuumTerm,
};
pub use sampler::{
    sample_quadratures, sample_timetrace, PhaseMode, PulseShape, PulseSpec, QuadratureBatch,
    StateKind, StateSpec, TimeTrace,
};
pub use wideband::{
    causal_transform, energy_of, hilbert_pair, photon_number_of, Spectrum, WidebandReport, PLANCK,
};
