//! Windowed observables, Sagnac standing-wave statistics, localization
//! leakage and the homodyne readout.

pub mod homodyne;
pub mod localization;
pub mod sagnac;
pub mod window;

pub use homodyne::{difference_variance, homodyne_difference, richardson_ratio, HomodyneConfig, HomodyneReading};
pub use localization::{
    gaussian_leakage, localization_effect, rectangular_leakage, vacuum_variance, LocalizationPoint, LocalizationReport,
};
pub use sagnac::{
    default_tau, kind_label, moments, paper_values, regression_rows, sagnac_density, sagnac_momentum, sagnac_space,
    MomentReport, RegressionRow, SagnacObservable, SagnacRun, MAX_MOMENT, REGRESSION_HEADER,
};
pub use window::{
    box_transform, gaussian_transform, spacelike_windowed_observable, windowed_observable, Envelope, MeasurementWindow,
};
