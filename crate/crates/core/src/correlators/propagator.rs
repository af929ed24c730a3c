use serde::{Deserialize, Serialize};

use crate::fock::Species;
use crate::spacetime::CtpTime;
use crate::C64;

/// Thermal occupation factors (n for A†A, 1 ± n for AA†).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalFactors {
    /// Coefficient of ⟨X X†⟩: 1/(1 − e^{−βE}) or 1/(1 + e^{−βE}).
    pub forward: f64,
    /// Coefficient of ⟨X† X⟩: 1/(e^{βE} − 1) or 1/(e^{βE} + 1).
    pub occupation: f64,
}

pub fn thermal_factors(species: Species, energy: f64, beta: Option<f64>) -> ThermalFactors {
    let Some(b) = beta else {
        return ThermalFactors { forward: 1.0, occupation: 0.0 };
    };
    let x = (-b * energy).exp();
    match species {
        Species::Boson => ThermalFactors { forward: 1.0 / (1.0 - x), occupation: x / (1.0 - x) },
        Species::Fermion => ThermalFactors { forward: 1.0 / (1.0 + x), occupation: x / (1.0 + x) },
    }
}

/// Plain product expectation ⟨X(t) Y(t′)⟩₀ of two ladder operators of one mode,
/// X, Y ∈ {a, a†} chosen by the dagger flags, with X(t) = e^{iHt}Xe^{−iHt}.
pub fn product_expectation(
    species: Species,
    energy: f64,
    beta: Option<f64>,
    (x_dagger, t): (bool, C64),
    (y_dagger, tp): (bool, C64),
) -> C64 {
    let f = thermal_factors(species, energy, beta);
    let i = C64::new(0.0, 1.0);
    match (x_dagger, y_dagger) {
        (false, true) => (i * (tp - t) * energy).exp() * f.forward,
        (true, false) => (i * (t - tp) * energy).exp() * f.occupation,
        _ => C64::new(0.0, 0.0),
    }
}

/// Contour-ordered ⟨𝒯 X(t) Y(t′)⟩₀ for one mode.
///
/// When t′ is later on the contour the pair is swapped, with a sign −1 for
/// fermions. Equal contour points keep the written order.
pub fn free_propagator(
    species: Species,
    energy: f64,
    beta: Option<f64>,
    (x_dagger, t): (bool, &CtpTime),
    (y_dagger, tp): (bool, &CtpTime),
) -> C64 {
    if tp.is_later_than(t) {
        let sign = if species == Species::Fermion { -1.0 } else { 1.0 };
        product_expectation(species, energy, beta, (y_dagger, tp.t), (x_dagger, t.t)) * sign
    } else {
        product_expectation(species, energy, beta, (x_dagger, t.t), (y_dagger, tp.t))
    }
}
