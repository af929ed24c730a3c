use serde::{Deserialize, Serialize};

use super::propagator::free_propagator;
use crate::error::{Error, Result};
use crate::fock::Species;
use crate::spacetime::{ctp_contour, CtpTime};
use crate::C64;

/// One ladder operator of a free mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderInsertion {
    pub mode: usize,
    pub species: Species,
    pub energy: f64,
    pub dagger: bool,
}

impl LadderInsertion {
    pub fn boson(mode: usize, energy: f64, dagger: bool) -> Self {
        LadderInsertion { mode, species: Species::Boson, energy, dagger }
    }
    pub fn fermion(mode: usize, energy: f64, dagger: bool) -> Self {
        LadderInsertion { mode, species: Species::Fermion, energy, dagger }
    }
}

/// A product of ladder factors at one contour point, read as normal ordered.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub factors: Vec<LadderInsertion>,
    pub time: CtpTime,
}

impl Vertex {
    pub fn single(f: LadderInsertion, time: CtpTime) -> Self {
        Vertex { factors: vec![f], time }
    }

    fn fermion_parity(&self) -> usize {
        self.factors.iter().filter(|f| f.species == Species::Fermion).count() % 2
    }
}

/// Thermal part of an equal-time pair inside one normal-ordered vertex:
/// ⟨f_a f_b⟩_β − ⟨f_a f_b⟩_0.
fn self_contraction(fa: LadderInsertion, fb: LadderInsertion, beta: Option<f64>) -> f64 {
    let Some(beta) = beta else { return 0.0 };
    let fermion = fa.species == Species::Fermion;
    let occ = 1.0 / ((beta * fa.energy).exp() + if fermion { 1.0 } else { -1.0 });
    match (fa.dagger, fb.dagger) {
        (true, false) => occ,
        (false, true) if fermion => -occ,
        (false, true) => occ,
        _ => 0.0,
    }
}

/// Contour-ordered free n-point function ⟨𝒯 V₁V₂…⟩ by Wick's theorem.
///
/// Sums over all perfect matchings; pairs inside one vertex carry only their
/// thermal part. Each matching has the sign of its permutation restricted to
/// fermionic factors.
pub fn wick_npoint(vertices: &[Vertex], beta: Option<f64>) -> C64 {
    let flat: Vec<(usize, LadderInsertion)> =
        vertices.iter().enumerate().flat_map(|(v, vx)| vx.factors.iter().map(move |f| (v, *f))).collect();
    let n = flat.len();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    if n % 2 == 1 || n > 64 {
        return C64::new(0.0, 0.0);
    }
    let zero = C64::new(0.0, 0.0);
    let mut pair = vec![zero; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let ((va, fa), (vb, fb)) = (flat[a], flat[b]);
            if fa.mode != fb.mode || fa.species != fb.species {
                continue;
            }
            if va == vb {
                pair[a * n + b] = C64::new(self_contraction(fa, fb, beta), 0.0);
                continue;
            }
            pair[a * n + b] = free_propagator(
                fa.species,
                fa.energy,
                beta,
                (fa.dagger, &vertices[va].time),
                (fb.dagger, &vertices[vb].time),
            );
        }
    }
    let fermionic: Vec<bool> = flat.iter().map(|(_, f)| f.species == Species::Fermion).collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    let mut total = zero;
    let mut stack: Vec<(u64, C64)> = vec![(0, C64::new(1.0, 0.0))];
    while let Some((used, acc)) = stack.pop() {
        if used == full {
            total += acc;
            continue;
        }
        let a = (!used).trailing_zeros() as usize;
        let mut between_fermions = 0usize;
        for b in a + 1..n {
            if used & (1 << b) != 0 {
                continue;
            }
            let p = pair[a * n + b];
            if p != zero {
                let sign = if fermionic[b] && between_fermions % 2 == 1 { -1.0 } else { 1.0 };
                stack.push((used | (1 << a) | (1 << b), acc * p * sign));
            }
            if fermionic[b] {
                between_fermions += 1;
            }
        }
    }
    total
}

/// Operator orderings of a correlation of real-time vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderingScheme {
    /// Vertices placed along the contour in written order, first one latest.
    ContourOrdered,
    /// Average over upper/lower Keldysh branch for every vertex.
    KeldyshSymmetric,
    /// Average over all permutations of the written order (graded for fermions).
    FullySymmetrized,
    /// Average over assignments of up to three vertices to distinct branches
    /// of the three-part contour.
    ThreeBranch,
}

/// Vertex factors at a real time.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedVertex {
    pub factors: Vec<LadderInsertion>,
    pub t: f64,
}

fn written_order(vs: &[&TimedVertex]) -> Vec<Vertex> {
    let n = vs.len();
    vs.iter()
        .enumerate()
        .map(|(i, v)| Vertex { factors: v.factors.clone(), time: CtpTime { branch: 0, t: C64::new(v.t, 0.0), s: (n - i) as f64 } })
        .collect()
}

/// Lexicographic permutations of 0..n.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
    out
}

fn graded_sign(perm: &[usize], parity: &[usize]) -> f64 {
    let mut s = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                s += parity[perm[i]] * parity[perm[j]];
            }
        }
    }
    if s % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn ordered_correlator(vertices: &[TimedVertex], beta: Option<f64>, scheme: OrderingScheme) -> Result<C64> {
    let n = vertices.len();
    let refs: Vec<&TimedVertex> = vertices.iter().collect();
    match scheme {
        OrderingScheme::ContourOrdered => Ok(wick_npoint(&written_order(&refs), beta)),
        OrderingScheme::FullySymmetrized => {
            let parity: Vec<usize> = written_order(&refs).iter().map(|v| v.fermion_parity()).collect();
            let perms = permutations(n);
            let sum: C64 = perms
                .iter()
                .map(|p| {
                    let vs: Vec<&TimedVertex> = p.iter().map(|&i| &vertices[i]).collect();
                    wick_npoint(&written_order(&vs), beta) * graded_sign(p, &parity)
                })
                .sum();
            Ok(sum / perms.len() as f64)
        }
        OrderingScheme::KeldyshSymmetric => {
            if n > 20 {
                return Err(Error::InvalidArgument("too many vertices for branch averaging".into()));
            }
            let c = ctp_contour(beta, 2)?;
            let mut sum = C64::new(0.0, 0.0);
            for mask in 0..(1u32 << n) {
                let vs = vertices
                    .iter()
                    .enumerate()
                    .map(|(i, v)| Ok(Vertex { factors: v.factors.clone(), time: c.point(((mask >> i) & 1) as usize, v.t)? }))
                    .collect::<Result<Vec<_>>>()?;
                sum += wick_npoint(&vs, beta);
            }
            Ok(sum / (1u32 << n) as f64)
        }
        OrderingScheme::ThreeBranch => {
            if n > 3 {
                return Err(Error::InvalidArgument("three-branch ordering takes at most 3 vertices".into()));
            }
            let c = ctp_contour(beta, 3)?;
            let perms = permutations(3);
            let mut seen: Vec<Vec<usize>> = Vec::new();
            let mut sum = C64::new(0.0, 0.0);
            for p in perms {
                let assign = p[..n].to_vec();
                if seen.contains(&assign) {
                    continue;
                }
                let vs = vertices
                    .iter()
                    .zip(&assign)
                    .map(|(v, &b)| Ok(Vertex { factors: v.factors.clone(), time: c.point(b, v.t)? }))
                    .collect::<Result<Vec<_>>>()?;
                sum += wick_npoint(&vs, beta);
                seen.push(assign);
            }
            Ok(sum / seen.len() as f64)
        }
    }
}
