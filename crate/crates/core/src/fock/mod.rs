//! Momentum grids, truncated Fock spaces, ladder operators and states.

pub mod grid;
pub mod space;
pub mod sparse;
pub mod state;

pub use grid::{Channel, Mode, ModeGrid, Species};
pub use space::{
    build_fock_space, FockSpace, FockSpaceDescription, Ladder, LadderKind, ModeOperator, DEFAULT_DIM_LIMIT,
    FOCK_SCHEMA,
};
pub use sparse::SparseOperator;
pub use state::{
    expectation, sagnac_state, thermal_state, DensityOperator, Expectation, SagnacConfig, SagnacKind,
    SagnacKinematics, StateVector,
};
