use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{FockSpace, Ladder, Species, SparseOperator};
use crate::spacetime::FourVector;
use crate::C64;

/// Four-momentum (E, k) of mode `m`.
pub fn mode_momentum(space: &FockSpace, m: usize) -> FourVector {
    let md = &space.modes()[m];
    FourVector::from_parts(md.energy, md.k)
}

/// Phase transfer K of a ladder product: the product varies as e^{iK·x}.
pub fn transfer(space: &FockSpace, ops: &[Ladder]) -> FourVector {
    ops.iter().fold(FourVector::default(), |acc, l| {
        let k = mode_momentum(space, l.mode);
        if l.dagger {
            acc + k
        } else {
            acc - k
        }
    })
}

/// Σ c_j ℓ_j: a field linear in ladder operators, written at x = 0.
///
/// Each ladder carries its plane-wave phase implicitly: a_k ∝ e^{−ik·x},
/// a†_k ∝ e^{+ik·x}.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearForm {
    pub terms: Vec<(C64, Ladder)>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: C64, l: Ladder) {
        if c != C64::new(0.0, 0.0) {
            self.terms.push((c, l));
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        LinearForm { terms: self.terms.iter().map(|&(c, l)| (c * s, l)).collect() }
    }

    pub fn add(&self, other: &LinearForm) -> Self {
        let mut t = self.terms.clone();
        t.extend_from_slice(&other.terms);
        LinearForm { terms: t }
    }

    /// ∂^μ acting on the plane-wave phases.
    pub fn derivative(&self, space: &FockSpace, mu: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(c, l)| {
                let k = mode_momentum(space, l.mode)[mu];
                let f = if l.dagger { C64::new(0.0, k) } else { C64::new(0.0, -k) };
                (c * f, l)
            })
            .collect();
        LinearForm { terms }
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        LinearForm { terms: self.terms.iter().map(|&(c, l)| (c.conj(), l.adjoint())).collect() }
    }

    /// Operator terms with phases evaluated at `x`.
    pub fn at(&self, space: &FockSpace, x: &FourVector) -> Vec<(C64, Vec<Ladder>)> {
        self.terms
            .iter()
            .map(|&(c, l)| {
                let ph = transfer(space, &[l]).dot(x);
                (c * C64::from_polar(1.0, ph), vec![l])
            })
            .collect()
    }

    pub fn realize_at(&self, space: &FockSpace, x: &FourVector) -> SparseOperator {
        space.realize(&self.at(space, x))
    }
}

/// One normal-ordered monomial c·ℓ₁ℓ₂ (or c·ℓ₁).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: C64,
    pub ops: Vec<Ladder>,
}

/// How the position dependence has been treated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpatialWeight {
    /// Local density; terms carry their plane-wave phases, realized at x = 0.
    Local,
    /// Integrated against a window.
    Window(String),
    /// Integrated against cos(p·x) times a window.
    Cosine { p: [f64; 4], window: String },
}

/// Normal-ordered quadratic form in the mode operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticObservable {
    pub label: String,
    pub terms: Vec<Term>,
    /// Vacuum constant removed by normal ordering (local density at any x).
    pub zero_point: C64,
    pub weight: SpatialWeight,
}

fn swap_sign(space: &FockSpace, a: &Ladder, b: &Ladder) -> f64 {
    let f = |l: &Ladder| space.modes()[l.mode].species == Species::Fermion;
    if f(a) && f(b) {
        -1.0
    } else {
        1.0
    }
}

/// Normal-ordered product N(AB) and the c-number ⟨0|AB|0⟩ it drops.
pub fn normal_product(space: &FockSpace, a: &LinearForm, b: &LinearForm) -> (Vec<Term>, C64) {
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    let mut constant = C64::new(0.0, 0.0);
    for &(ca, la) in &a.terms {
        for &(cb, lb) in &b.terms {
            let c = ca * cb;
            if !la.dagger && lb.dagger {
                let s = swap_sign(space, &la, &lb);
                terms.push(Term { coeff: c * s, ops: vec![lb, la] });
                if la.mode == lb.mode {
                    constant += c;
                }
            } else {
                terms.push(Term { coeff: c, ops: vec![la, lb] });
            }
        }
    }
    (terms, constant)
}

impl QuadraticObservable {
    pub fn new(label: impl Into<String>) -> Self {
        QuadraticObservable { label: label.into(), terms: Vec::new(), zero_point: C64::new(0.0, 0.0), weight: SpatialWeight::Local }
    }

    /// N(AB) with coefficient `c`.
    pub fn add_product(&mut self, space: &FockSpace, c: C64, a: &LinearForm, b: &LinearForm) {
        let (t, z) = normal_product(space, a, b);
        self.terms.extend(t.into_iter().map(|mut t| {
            t.coeff *= c;
            t
        }));
        self.zero_point += c * z;
    }

    pub fn scaled(&self, s: C64) -> Self {
        let mut o = self.clone();
        o.terms.iter_mut().for_each(|t| t.coeff *= s);
        o.zero_point *= s;
        o
    }

    /// Σ c_i O_i, keeping the weight of the first operand.
    pub fn combine(label: impl Into<String>, parts: &[(C64, &QuadraticObservable)]) -> Self {
        let mut out = QuadraticObservable::new(label);
        if let Some((_, first)) = parts.first() {
            out.weight = first.weight.clone();
        }
        for (c, o) in parts {
            let s = o.scaled(*c);
            out.terms.extend(s.terms);
            out.zero_point += s.zero_point;
        }
        out.simplified()
    }

    /// Merges identical monomials and drops exact zeros.
    pub fn simplified(&self) -> Self {
        let mut acc: BTreeMap<Vec<(bool, usize)>, C64> = BTreeMap::new();
        for t in &self.terms {
            let key = t.ops.iter().map(|l| (!l.dagger, l.mode)).collect();
            *acc.entry(key).or_insert(C64::new(0.0, 0.0)) += t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| *c != C64::new(0.0, 0.0))
            .map(|(k, coeff)| Term { coeff, ops: k.into_iter().map(|(d, m)| Ladder { mode: m, dagger: !d }).collect() })
            .collect();
        QuadraticObservable { terms, ..self.clone() }
    }

    /// Keeps only terms whose ladders all satisfy `keep`.
    pub fn restricted<F: Fn(&Ladder) -> bool>(&self, label: impl Into<String>, keep: F) -> Self {
        QuadraticObservable {
            label: label.into(),
            terms: self.terms.iter().filter(|t| t.ops.iter().all(&keep)).cloned().collect(),
            ..self.clone()
        }
    }

    /// Multiplies each term by f(K), K the term's phase transfer.
    pub fn map_transfer<F: Fn(&FourVector) -> C64>(&self, space: &FockSpace, f: F) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let c = t.coeff * f(&transfer(space, &t.ops));
                (c != C64::new(0.0, 0.0)).then(|| Term { coeff: c, ops: t.ops.clone() })
            })
            .collect();
        QuadraticObservable { terms, ..self.clone() }
    }

    /// The local density evaluated at `x`.
    pub fn at(&self, space: &FockSpace, x: &FourVector) -> Self {
        self.map_transfer(space, |k| C64::from_polar(1.0, k.dot(x)))
    }

    pub fn ladder_terms(&self) -> Vec<(C64, Vec<Ladder>)> {
        self.terms.iter().map(|t| (t.coeff, t.ops.clone())).collect()
    }

    pub fn realize(&self, space: &FockSpace) -> SparseOperator {
        space.realize(&self.ladder_terms())
    }

    pub fn realize_at(&self, space: &FockSpace, x: &FourVector) -> SparseOperator {
        self.at(space, x).realize(space)
    }

    /// ‖O − O†‖_max of the realized operator.
    pub fn hermiticity_defect(&self, space: &FockSpace) -> Result<f64> {
        Ok(self.realize(space).hermiticity_defect())
    }
}
