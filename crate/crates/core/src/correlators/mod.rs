//! Thermal closed-time-path propagators, Wick contractions and ordering schemes.

pub mod exact;
pub mod keldysh;
pub mod propagator;
pub mod threepoint;
pub mod wick;

pub use exact::{exact_correlator, heisenberg};
pub use keldysh::{keldysh_scalar_propagators, retarded_rational, KeldyshComponent, KeldyshDescriptor};
pub use propagator::{free_propagator, product_expectation, thermal_factors, ThermalFactors};
pub use threepoint::{three_point_combination, three_point_t_phi_phi, ThreePointValue, NOISELESS_COMBINATION};
pub use wick::{
    ordered_correlator, permutations, wick_npoint, LadderInsertion, OrderingScheme, TimedVertex, Vertex,
};
