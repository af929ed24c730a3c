//! Spectral densities from eigenstate sums, and the massless spectra with
//! their windowed-noise scaling.

pub mod lehmann;
pub mod massless;
pub mod noise;

pub use lehmann::{
    default_bin_width, fit_line, lehmann_from_operators, lehmann_spectral_density, suppression_fit,
    suppression_fit_operators, SpectralSample, SuppressionFit, BOX_NORM_TAG,
};
pub use massless::{massless_current_spectrum, massless_energy_spectrum, SpectralValue, SpectrumDescriptor, SupportType};
pub use noise::{
    log_space, noise_scaling, signal_vs_noise_curve, windowed_noise, NoiseEstimate, NoiseKind, NoiseScaling,
    SignalNoiseCurve, SignalNoiseRow,
};
