use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::FourVector;
use crate::C64;

/// Zero-temperature scalar two-point components in the classical/quantum basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KeldyshComponent {
    /// ⟨φ₊(p) φ₋(q)⟩
    PlusMinus,
    /// ⟨φ_c(p) φ_c(q)⟩
    ClassicalClassical,
    /// ⟨φ_c(p) φ_q(q)⟩
    ClassicalQuantum,
    /// ⟨φ_q(p) φ_q(q)⟩
    QuantumQuantum,
}

/// Structured form of a momentum-space propagator at q = −p.
///
/// The distribution is `prefactor · [delta_weight · δ(q·q − m²) + rational]`
/// times the momentum-conservation delta, which is kept symbolic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeldyshDescriptor {
    pub component: KeldyshComponent,
    pub q: FourVector,
    pub mass: f64,
    pub prefactor: f64,
    /// Weight of the mass-shell delta, including the θ(q⁰) selection.
    pub delta_weight: f64,
    /// Whether q lies on the mass shell (within tolerance).
    pub on_shell: bool,
    /// i/(q₊·q₊ − m²) in the ε → 0 limit; `None` on shell, where only the
    /// regulated value below is meaningful.
    pub rational: Option<C64>,
    /// i/(q₊·q₊ − m²) at the regulator ε actually used, and at ε/2.
    pub regulated: Option<(C64, C64)>,
    pub epsilon: f64,
    pub normalization_tag: String,
}

const SHELL_TOL: f64 = 1e-12;

/// i/(q₊·q₊ − m²) with q₊⁰ = q⁰ − iε.
pub fn retarded_rational(q: &FourVector, m: f64, eps: f64) -> C64 {
    let q0 = C64::new(q[0], -eps);
    let s = q0 * q0 - q.spatial_norm().powi(2) - m * m;
    C64::new(0.0, 1.0) / s
}

/// Descriptor of the zero-temperature scalar propagator component at p, with q = −p.
///
/// `epsilon = None` uses 10⁻⁶·E with E = √(m² + |q|²).
pub fn keldysh_scalar_propagators(
    p: FourVector,
    component: KeldyshComponent,
    m: f64,
    epsilon: Option<f64>,
) -> Result<KeldyshDescriptor> {
    if !(m >= 0.0) {
        return Err(Error::InvalidArgument("mass must be non-negative".into()));
    }
    let q = -p;
    let energy = (m * m + q.spatial_norm().powi(2)).sqrt();
    let eps = epsilon.unwrap_or(1e-6 * energy.max(f64::MIN_POSITIVE));
    let scale = q.euclidean_norm_sqr().max(m * m).max(1.0);
    let on_shell = (q.dot(&q) - m * m).abs() <= SHELL_TOL * scale;
    let two_pi = 2.0 * PI;
    let (prefactor, delta_weight, rational, regulated) = match component {
        KeldyshComponent::PlusMinus => (two_pi.powi(5), if q[0] > 0.0 { 1.0 } else { 0.0 }, None, None),
        KeldyshComponent::ClassicalClassical => (two_pi.powi(5) / 2.0, 1.0, None, None),
        KeldyshComponent::ClassicalQuantum => {
            let exact = (!on_shell).then(|| C64::new(0.0, 1.0) / (q.dot(&q) - m * m));
            let reg = (retarded_rational(&q, m, eps), retarded_rational(&q, m, eps / 2.0));
            (two_pi.powi(4), 0.0, exact, Some(reg))
        }
        KeldyshComponent::QuantumQuantum => (0.0, 0.0, Some(C64::new(0.0, 0.0)), None),
    };
    Ok(KeldyshDescriptor {
        component,
        q,
        mass: m,
        prefactor,
        delta_weight,
        on_shell,
        rational,
        regulated,
        epsilon: eps,
        normalization_tag: "infinite-volume; momentum-conservation delta symbolic".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_quantum_off_shell_is_rational() {
        let p = FourVector::new(0.5, 0.0, 0.0, 2.0);
        let d = keldysh_scalar_propagators(p, KeldyshComponent::ClassicalQuantum, 1.0, None).unwrap();
        let want = C64::new(0.0, 1.0) / (p.dot(&p) - 1.0);
        assert!((d.rational.unwrap() - want).norm() < 1e-15);
        let (r1, r2) = d.regulated.unwrap();
        assert!((r1 - want).norm() < 1e-6 && (r2 - want).norm() < 1e-6);
        assert!(!d.on_shell);
    }

    #[test]
    fn quantum_quantum_vanishes() {
        let d = keldysh_scalar_propagators(FourVector::new(1.0, 0.2, 0.0, 0.0), KeldyshComponent::QuantumQuantum, 0.3, None)
            .unwrap();
        assert_eq!(d.rational, Some(C64::new(0.0, 0.0)));
        assert_eq!(d.prefactor * d.delta_weight, 0.0);
    }

    #[test]
    fn plus_minus_selects_forward_shell() {
        let e = 2f64.sqrt();
        // q = −p, so p⁰ < 0 gives q⁰ > 0.
        let fwd = keldysh_scalar_propagators(FourVector::new(-e, 0.0, 0.0, -1.0), KeldyshComponent::PlusMinus, 1.0, None).unwrap();
        let bwd = keldysh_scalar_propagators(FourVector::new(e, 0.0, 0.0, 1.0), KeldyshComponent::PlusMinus, 1.0, None).unwrap();
        assert!(fwd.on_shell && bwd.on_shell);
        assert_eq!((fwd.delta_weight, bwd.delta_weight), (1.0, 0.0));
        let cc = keldysh_scalar_propagators(FourVector::new(e, 0.0, 0.0, 1.0), KeldyshComponent::ClassicalClassical, 1.0, None).unwrap();
        assert!((cc.prefactor - 16.0 * PI.powi(5)).abs() < 1e-9);
    }
}
