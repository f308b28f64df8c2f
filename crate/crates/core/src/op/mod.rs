//! Diagonal-phase operators on the Fourier basis, truncated commutators and
//! singular-value diagnostics.

pub mod kernel;
pub mod model;
pub mod recipe;
pub mod sparse;
pub mod svd;
pub mod window;


pub use model::{OperatorModel, Phase};
pub use recipe::{Factor, OperatorRecipe, SparseVector};
pub use sparse::{commutator, compose, SparseOperator};

pub use window::{laplacian_levels, TruncationWindow};
pub use svd::{lacunary_szego_singular_values, singular_values, singular_values_with, weak_quasinorm, SingularValueSequence, SvdOptions, WeakQuasinorm};
pub use kernel::{kernel_diagonal, modulus_one_identity, rho, rho_exact, rho_phase, rho_real, SurdSum};
