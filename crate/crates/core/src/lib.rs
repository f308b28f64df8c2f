//! Numerical emulation of singular traces on Fourier-side operator models.
//!
//! Everything here is `no_std` with `alloc`. The std companion crate
//! (`dixlab`) adds file formats, configuration and the experiment runner.
//!
//! Layout:
//! - [`seq`]: scalars, sparse Fourier series on the circle and torus, lacunary series.
//! - [`op`]: phase operators, truncation windows, sparse commutators, singular values,
//!   the torus phase kernel.
//! - [`trace`]: diagonal sequences, logarithmic means and tail probes.
//! - [`cocycle`]: evaluators for the singular cocycles and the finite-rank character.
//! - [`chain`]: exact Hochschild chains over Laurent polynomials.
//! - [`metric`]: sampled metric spaces, Hölder seminorms and the diagonal-cutoff decay fit.
#![no_std]
// Once anything in the dependency graph links std (test builds, dev-dependency
// feature unification), its inherent float methods shadow `num_traits::Float`.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chain;
pub mod cocycle;
pub mod error;
pub mod fit;
pub mod metric;
pub mod op;
pub mod seq;
pub mod trace;

pub use error::{Error, Result};
pub use seq::scalar::{Complex, GaussRational, Scalar};
pub use seq::series::{CircleSeries, FourierSeries, FrequencyIndex, TorusIndex};
