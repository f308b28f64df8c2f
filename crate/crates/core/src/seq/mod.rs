//! Fourier-side representation of functions on the circle and the 2-torus.

pub mod lacunary;
pub mod scalar;
pub mod series;

pub use lacunary::{lacunary_series, BoundedSequence, HolderExponent};
pub use scalar::{Complex, GaussRational, Scalar};
pub use series::{CircleSeries, Domain, FourierSeries, FrequencyIndex, TorusIndex};
