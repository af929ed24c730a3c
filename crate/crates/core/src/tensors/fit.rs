use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::correlation::{TensorCorrelation, TensorRank};
use crate::error::{Error, Result};
use crate::spacetime::{classify_interval, g, FourVector, IntervalClass, LorentzMatrix};
use crate::C64;

/// Coefficients below this count as zero when flagging positivity.
pub const ZERO_TOL: f64 = 1e-8;
const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitFrame {
    /// Fitted after boosting p to (0, 0, 0, q).
    Canonical,
    /// Fitted at the momentum as given.
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFit {
    pub rank: TensorRank,
    pub p: FourVector,
    /// Named coefficients in basis order.
    pub coefficients: Vec<(String, C64)>,
    /// ‖G − model‖/‖G‖, 0 for vanishing data.
    pub residual: f64,
    pub condition_number: f64,
    pub frame: FitFrame,
    pub conservation_assumed: bool,
    /// max |p_μ G^{μ…}| relative to ‖G‖|p|, when conservation is checked.
    pub conservation_defect: Option<f64>,
    /// p is lightlike; the zero-extraction argument does not apply.
    pub lightlike: bool,
    /// Space-like p with a coefficient that positivity forces to zero above [`ZERO_TOL`].
    pub positivity_violation: bool,
}

impl DecompositionFit {
    pub fn coefficient(&self, name: &str) -> Option<C64> {
        self.coefficients.iter().find(|(n, _)| n == name).map(|&(_, c)| c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit report serializes")
    }
}

/// ε^{μνσρ} with ε^{0123} = +1.
pub fn levi_civita(i: [usize; 4]) -> f64 {
    if (0..4).any(|a| (a + 1..4).any(|b| i[a] == i[b])) {
        return 0.0;
    }
    let mut s = 1.0;
    for a in 0..4 {
        for b in a + 1..4 {
            if i[a] > i[b] {
                s = -s;
            }
        }
    }
    s
}

type Basis = Vec<(&'static str, Vec<C64>)>;

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn tabulate4<F: Fn(usize, usize, usize, usize) -> f64>(f: F) -> Vec<C64> {
    (0..256).map(|i| real(f(i / 64, (i / 16) % 4, (i / 4) % 4, i % 4))).collect()
}

fn vector_basis(p: &FourVector) -> Basis {
    vec![
        ("eta", (0..16).map(|i| real(p[i / 4] * p[i % 4])).collect()),
        ("xi", (0..16).map(|i| real(-g(i / 4, i % 4))).collect()),
    ]
}

/// `split_b` keeps b and b* as separate coefficients (time-like p).
fn symmetric_basis(p: &FourVector, split_b: bool) -> Basis {
    let p = *p;
    let mut out: Basis = vec![("a", tabulate4(|m, n, s, r| p[m] * p[n] * p[s] * p[r]))];
    if split_b {
        out.push(("b", tabulate4(|m, n, s, r| -p[m] * p[n] * g(s, r))));
        out.push(("b_conj", tabulate4(|m, n, s, r| -p[s] * p[r] * g(m, n))));
    } else {
        out.push(("b", tabulate4(|m, n, s, r| -p[m] * p[n] * g(s, r) - p[s] * p[r] * g(m, n))));
    }
    out.push((
        "f",
        tabulate4(|m, n, s, r| p[m] * p[s] * g(n, r) + p[m] * p[r] * g(n, s) + p[n] * p[s] * g(m, r) + p[n] * p[r] * g(m, s)),
    ));
    out.push(("v", tabulate4(|m, n, s, r| g(m, s) * g(n, r) + g(n, s) * g(m, r))));
    out.push(("w", tabulate4(|m, n, s, r| g(m, n) * g(s, r))));
    out
}

fn conserved_basis(p: &FourVector) -> Result<Basis> {
    let pp = p.dot(p);
    if pp == 0.0 {
        return Err(Error::DegenerateBasis("transverse projector needs p·p ≠ 0".into()));
    }
    let t = |a: usize, b: usize| g(a, b) - p[a] * p[b] / pp;
    Ok(vec![("w", tabulate4(|m, n, s, r| t(m, n) * t(s, r)))])
}

fn antisymmetric_basis(p: &FourVector) -> Basis {
    let p = *p;
    vec![
        // ε^{μνρσ} in the ordering where G^{0123} = a.
        ("a", tabulate4(|m, n, s, r| levi_civita([m, n, r, s]) * -1.0)),
        ("v", tabulate4(|m, n, s, r| g(m, s) * g(n, r) - g(n, s) * g(m, r))),
        (
            "f",
            tabulate4(|m, n, s, r| p[m] * p[s] * g(n, r) - p[m] * p[r] * g(n, s) - p[n] * p[s] * g(m, r) + p[n] * p[r] * g(m, s)),
        ),
    ]
}

/// Complex least squares by SVD; returns coefficients, relative residual and
/// condition number.
fn least_squares(data: &[C64], basis: &Basis) -> Result<(Vec<C64>, f64, f64)> {
    let (rows, cols) = (data.len(), basis.len());
    let a = DMatrix::from_fn(rows, cols, |i, j| basis[j].1[i]);
    let b = DVector::from_column_slice(data);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::DegenerateBasis(format!("basis rank deficient (condition {:e})", smax / smin)));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::DegenerateBasis(e.to_string()))?;
    let norm = b.norm();
    let residual = if norm == 0.0 { 0.0 } else { (&a * &x - &b).norm() / norm };
    Ok((x.iter().copied().collect(), residual, smax / smin))
}

fn prepare(t: &TensorCorrelation, canonicalize: bool) -> Result<(TensorCorrelation, FitFrame, IntervalClass)> {
    if t.p.euclidean_norm_sqr() == 0.0 {
        return Err(Error::DegenerateBasis("p = 0".into()));
    }
    let class = classify_interval(t.p, CLASSIFY_TOL);
    if canonicalize && class == IntervalClass::Spacelike {
        let l = LorentzMatrix::canonical_frame(t.p)?;
        Ok((t.transformed(&l), FitFrame::Canonical, class))
    } else {
        Ok((t.clone(), FitFrame::Given, class))
    }
}

fn named(basis: &Basis, x: Vec<C64>) -> Vec<(String, C64)> {
    basis.iter().zip(x).map(|((n, _), c)| (n.to_string(), c)).collect()
}

fn any_nonzero(coeffs: &[(String, C64)], names: &[&str]) -> bool {
    coeffs.iter().any(|(n, c)| names.contains(&n.as_str()) && c.norm() > ZERO_TOL)
}

/// Fits G^{μν} = p^μp^ν η − g^{μν} ξ.
pub fn decompose_vector(t: &TensorCorrelation) -> Result<DecompositionFit> {
    decompose_vector_with(t, true)
}

pub fn decompose_vector_with(t: &TensorCorrelation, canonicalize: bool) -> Result<DecompositionFit> {
    if t.rank != TensorRank::Vector {
        return Err(Error::InvalidArgument("expected a vector correlation".into()));
    }
    let (t, frame, class) = prepare(t, canonicalize)?;
    let basis = vector_basis(&t.p);
    let (x, residual, cond) = least_squares(&t.values, &basis)?;
    let coefficients = named(&basis, x);
    Ok(DecompositionFit {
        rank: TensorRank::Vector,
        p: t.p,
        positivity_violation: class == IntervalClass::Spacelike && any_nonzero(&coefficients, &["xi"]),
        coefficients,
        residual,
        condition_number: cond,
        frame,
        conservation_assumed: false,
        conservation_defect: None,
        lightlike: class == IntervalClass::Lightlike,
    })
}

/// max_{ν…} |p_μ G^{μν…}| / (‖G‖ |p|), the first index contracted.
pub fn conservation_defect(t: &TensorCorrelation) -> f64 {
    let p = t.p;
    let scale = t.norm() * p.euclidean_norm_sqr().sqrt();
    if scale == 0.0 {
        return 0.0;
    }
    let rest = t.values.len() / 4;
    (0..rest)
        .map(|j| (0..4).map(|m| t.values[m * rest + j] * (g(m, m) * p[m])).sum::<C64>().norm())
        .fold(0.0, f64::max)
        / scale
}

/// Fits the symmetric rank-4 basis {a, b, f, v, w}; with `conserved`, the
/// single transverse w structure after checking p_μG^{μνσρ} = 0.
pub fn decompose_symmetric(t: &TensorCorrelation, conserved: bool) -> Result<DecompositionFit> {
    decompose_symmetric_with(t, conserved, true)
}

pub fn decompose_symmetric_with(t: &TensorCorrelation, conserved: bool, canonicalize: bool) -> Result<DecompositionFit> {
    if t.rank != TensorRank::Symmetric2 {
        return Err(Error::InvalidArgument("expected a symmetric rank-2 correlation".into()));
    }
    let (t, frame, class) = prepare(t, canonicalize)?;
    let basis = if conserved { conserved_basis(&t.p)? } else { symmetric_basis(&t.p, class == IntervalClass::Timelike) };
    let (x, residual, cond) = least_squares(&t.values, &basis)?;
    let coefficients = named(&basis, x);
    Ok(DecompositionFit {
        rank: TensorRank::Symmetric2,
        p: t.p,
        positivity_violation: class == IntervalClass::Spacelike && any_nonzero(&coefficients, &["f", "v"]),
        coefficients,
        residual,
        condition_number: cond,
        frame,
        conservation_assumed: conserved,
        conservation_defect: conserved.then(|| conservation_defect(&t)),
        lightlike: class == IntervalClass::Lightlike,
    })
}

/// Fits the antisymmetric rank-4 basis {a, v, f}.
pub fn decompose_antisymmetric(t: &TensorCorrelation) -> Result<DecompositionFit> {
    decompose_antisymmetric_with(t, true)
}

pub fn decompose_antisymmetric_with(t: &TensorCorrelation, canonicalize: bool) -> Result<DecompositionFit> {
    if t.rank != TensorRank::Antisymmetric2 {
        return Err(Error::InvalidArgument("expected an antisymmetric rank-2 correlation".into()));
    }
    let (t, frame, class) = prepare(t, canonicalize)?;
    let basis = antisymmetric_basis(&t.p);
    let (x, residual, cond) = least_squares(&t.values, &basis)?;
    let coefficients = named(&basis, x);
    Ok(DecompositionFit {
        rank: TensorRank::Antisymmetric2,
        p: t.p,
        positivity_violation: class == IntervalClass::Spacelike && any_nonzero(&coefficients, &["a", "v", "f"]),
        coefficients,
        residual,
        condition_number: cond,
        frame,
        conservation_assumed: false,
        conservation_defect: None,
        lightlike: class == IntervalClass::Lightlike,
    })
}

/// Synthetic model data for the given rank and named coefficients.
pub fn model_correlation(rank: TensorRank, p: FourVector, coefficients: &[(&str, C64)]) -> Result<TensorCorrelation> {
    let class = classify_interval(p, CLASSIFY_TOL);
    let basis = match rank {
        TensorRank::Vector => vector_basis(&p),
        TensorRank::Symmetric2 => {
            let mut b = symmetric_basis(&p, true);
            b.extend(conserved_basis(&p).unwrap_or_default().into_iter().map(|(_, v)| ("w_conserved", v)));
            b
        }
        TensorRank::Antisymmetric2 => antisymmetric_basis(&p),
    };
    let mut values = vec![C64::new(0.0, 0.0); rank.len()];
    let mut add = |n: &str, coeff: C64| -> Result<()> {
        let (_, v) = basis
            .iter()
            .find(|(b, _)| *b == n)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown coefficient {n}")))?;
        values.iter_mut().zip(v).for_each(|(o, x)| *o += coeff * x);
        Ok(())
    };
    for &(name, c) in coefficients {
        if rank == TensorRank::Symmetric2 && name == "b" {
            // b multiplies ppg, its conjugate gpp; they coincide off the time-like cone.
            add("b", c)?;
            add("b_conj", if class == IntervalClass::Timelike { c.conj() } else { c })?;
        } else {
            add(name, c)?;
        }
    }
    TensorCorrelation::new(rank, p, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita([0, 1, 2, 3]), 1.0);
        assert_eq!(levi_civita([1, 0, 2, 3]), -1.0);
        assert_eq!(levi_civita([0, 0, 2, 3]), 0.0);
    }

    #[test]
    fn vector_exact_model() {
        let p = FourVector::new(0.0, 0.0, 0.0, 1.0);
        let t = model_correlation(TensorRank::Vector, p, &[("eta", c(2.5))]).unwrap();
        let f = decompose_vector(&t).unwrap();
        assert!((f.coefficient("eta").unwrap() - c(2.5)).norm() < 1e-12);
        assert!(f.coefficient("xi").unwrap().norm() < 1e-12);
        assert!(f.residual < 1e-12 && !f.positivity_violation);
    }

    #[test]
    fn vector_xi_violates_positivity() {
        let p = FourVector::new(0.0, 0.0, 0.0, 1.0);
        let t = model_correlation(TensorRank::Vector, p, &[("xi", c(1.0))]).unwrap();
        // G⁰⁰ = −ξ and G¹¹ = ξ cannot both be non-negative.
        assert!(t.get2(0, 0).re < 0.0 && t.get2(1, 1).re > 0.0);
        let f = decompose_vector(&t).unwrap();
        assert!((f.coefficient("xi").unwrap() - c(1.0)).norm() < 1e-12 && f.positivity_violation);
    }

    #[test]
    fn symmetric_exact_model() {
        let p = FourVector::new(0.0, 0.0, 0.0, 1.0);
        let t = model_correlation(TensorRank::Symmetric2, p, &[("w", c(1.0)), ("a", c(0.2)), ("b", c(0.3))]).unwrap();
        let f = decompose_symmetric(&t, false).unwrap();
        for (n, want) in [("w", 1.0), ("a", 0.2), ("b", 0.3), ("f", 0.0), ("v", 0.0)] {
            assert!((f.coefficient(n).unwrap() - c(want)).norm() < 1e-10, "{n}");
        }
        assert!(f.residual < 1e-10 && !f.positivity_violation);
    }

    #[test]
    fn antisymmetric_epsilon_component() {
        let p = FourVector::new(0.0, 0.0, 0.0, 1.0);
        let t = model_correlation(TensorRank::Antisymmetric2, p, &[("a", c(1.0))]).unwrap();
        assert_eq!(t.get4(0, 1, 2, 3), c(1.0));
        assert_eq!(t.get4(1, 0, 2, 3), c(-1.0));
        let f = decompose_antisymmetric(&t).unwrap();
        assert!((f.coefficient("a").unwrap() - c(1.0)).norm() < 1e-12 && f.positivity_violation);
    }

    #[test]
    fn frame_checks_in_canonical_frame() {
        let p = FourVector::new(0.0, 0.0, 0.0, 2.0);
        let sym = model_correlation(TensorRank::Symmetric2, p, &[("v", c(1.0)), ("f", c(0.5))]).unwrap();
        assert!((sym.get4(1, 2, 1, 2) - c(1.0)).norm() < 1e-15);
        assert!((sym.get4(0, 1, 0, 1) + c(1.0)).norm() < 1e-15);
        assert!((sym.get4(0, 3, 0, 3) - c(4.0 * 0.5 - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_momentum_is_degenerate() {
        let t = TensorCorrelation::from_fn2(FourVector::default(), |_, _| c(0.0)).unwrap();
        assert!(matches!(decompose_vector(&t), Err(Error::DegenerateBasis(_))));
    }

    #[test]
    fn timelike_complex_b() {
        let p = FourVector::new(2.0, 0.0, 0.5, 0.0);
        let b = C64::new(0.3, 0.4);
        let t = model_correlation(TensorRank::Symmetric2, p, &[("b", b), ("w", c(1.0))]).unwrap();
        let f = decompose_symmetric(&t, false).unwrap();
        assert!((f.coefficient("b").unwrap() - b).norm() < 1e-10);
        assert!((f.coefficient("b_conj").unwrap() - b.conj()).norm() < 1e-10);
        assert_eq!(f.frame, FitFrame::Given);
    }

    #[test]
    fn report_serializes() {
        let p = FourVector::new(0.0, 0.0, 0.0, 1.0);
        let t = model_correlation(TensorRank::Vector, p, &[("eta", c(1.0))]).unwrap();
        let js = decompose_vector(&t).unwrap().to_json();
        let back: DecompositionFit = serde_json::from_str(&js).unwrap();
        assert_eq!(back.frame, FitFrame::Canonical);
    }
}
