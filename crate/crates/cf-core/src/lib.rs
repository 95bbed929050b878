//! Shared numerics for characteristic-function bounds.
//!
//! * [`cf`] – target CFs, weighted sums, empirical CFs
//! * [`quad`] – adaptive Gauss–Kronrod quadrature for real, complex and vector integrands
//! * [`lattice`], [`invert`] – exact lattice laws and Gil-Pelaez inversion
//! * [`rng`], [`par`] – seeded substreams and the rayon/sequential switch
//! * [`report`], [`rate`], [`io`] – experiment records, log-log fits, CSV output
//!
//! Heavy loops run on rayon when the `parallel` feature is on (default);
//! every entry point that loops takes an [`Exec`] so the sequential path
//! stays available and results are identical either way.

pub mod cf;
mod dd;
pub mod error;
pub mod invert;
pub mod io;
pub mod lattice;
pub mod par;
pub mod quad;
pub mod rate;
pub mod report;
pub mod rng;

pub use cf::{CharFn, Provenance, TargetSpec};
pub use error::{Error, Result};
pub use lattice::LatticeDistribution;
pub use par::Exec;
pub use rate::{fit_rate, RateFit};
pub use report::BoundReport;
