//! Free relativistic quantum fields (scalar, Dirac, electromagnetic) on a
//! periodic box with truncated Fock spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`spacetime`]: Minkowski geometry and closed-time-path contours.
//! * [`fock`]: momentum grids, occupation-number bases, ladder operators, states.
//! * [`fields`]: gamma matrices, spinors and composite bilinear observables.
//! * [`correlators`]: thermal CTP propagators and the Wick contraction engine.
//! * [`spectral`]: eigenstate-sum spectral densities and massless noise spectra.
//! * [`tensors`]: Lorentz decompositions of correlation tensors and noiseless projectors.
//! * [`measurement`]: windows, Sagnac statistics, localization leakage, homodyne readout.

pub mod correlators;
pub mod error;
pub mod fields;
pub mod fock;
pub mod measurement;
pub mod quadrature;
pub mod spacetime;
pub mod spectral;
pub mod tensors;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
