//! Gamma matrices, spinors, field expansions and normal-ordered bilinears.

pub mod dirac;
pub mod em;
pub mod gamma;
pub mod observable;
pub mod scalar;

pub use dirac::{dirac_bilinear, dirac_current, dirac_field, dirac_field_forms};
pub use em::{em_field_forms, field_strength, polarizations, stress_tensor_em, EmFieldForms, StressConvention};
pub use gamma::{current_matrices, pauli, spinor_u, spinor_v, GammaMatrices, Handedness, Spinor};
pub use observable::{mode_momentum, normal_product, transfer, LinearForm, QuadraticObservable, SpatialWeight, Term};
pub use scalar::{conjugate_momentum, conjugate_momentum_form, scalar_field, scalar_field_form, stress_tensor_scalar};
