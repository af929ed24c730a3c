//! Lorentz-invariant decompositions of correlation tensors and noiseless projections.

pub mod correlation;
pub mod fit;
pub mod projector;

pub use correlation::{TensorCorrelation, TensorRank};
pub use fit::{
    conservation_defect, decompose_antisymmetric, decompose_antisymmetric_with, decompose_symmetric,
    decompose_symmetric_with, decompose_vector, decompose_vector_with, levi_civita, model_correlation,
    DecompositionFit, FitFrame, ZERO_TOL,
};
pub use projector::{
    contract_first, noiseless_components, noiseless_components_at, project_noiseless_tensor, project_noiseless_vector,
    sandwich, trace, Combination, Matrix4c, NoiselessComponents,
};
