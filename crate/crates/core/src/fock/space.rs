use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::grid::{Channel, Mode, ModeGrid, Species};
use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::C64;

/// Default cap on the Fock-space dimension.
pub const DEFAULT_DIM_LIMIT: usize = 200_000;

/// Creation or annihilation of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { mode, dagger: true }
    }
    pub fn annihilate(mode: usize) -> Self {
        Ladder { mode, dagger: false }
    }
    pub fn adjoint(self) -> Self {
        Ladder { mode: self.mode, dagger: !self.dagger }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// A single mode operator realized as a matrix on the truncated basis.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    pub matrix: SparseOperator,
    pub kind: LadderKind,
    pub mode: usize,
    pub channel: Channel,
}

/// Truncated occupation-number space over a set of channels.
///
/// Modes are ordered by (channel, n₁, n₂, n₃); basis states are enumerated
/// lexicographically in that mode order with occupations increasing, so the
/// vacuum is basis state 0. Fermionic signs follow the Jordan–Wigner string
/// over all fermionic modes that precede the acted-on mode.
#[derive(Debug, Clone)]
pub struct FockSpace {
    grids: Vec<(Channel, ModeGrid)>,
    modes: Vec<Mode>,
    caps: Vec<u8>,
    n_max_per_mode: u8,
    n_max_total: u32,
    basis: Vec<Box<[u8]>>,
    index: HashMap<Box<[u8]>, usize>,
    mode_index: HashMap<(Channel, [i32; 3]), usize>,
    energies: Vec<f64>,
    momenta: Vec<[f64; 3]>,
}

/// Versioned JSON description of a Fock space.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FockSpaceDescription {
    pub schema: String,
    pub channels: Vec<(Channel, ModeGrid)>,
    pub n_max_per_mode: u8,
    pub n_max_total: u32,
    pub dim: usize,
    pub modes: Vec<Mode>,
}

pub const FOCK_SCHEMA: &str = "qfnoise.fock/1";

/// Number of occupation configurations with per-mode caps and a total cap.
fn count_configurations(caps: &[u8], total: u32) -> u128 {
    let total = total as usize;
    let mut dp = vec![0u128; total + 1];
    dp[0] = 1;
    for &c in caps {
        let mut next = vec![0u128; total + 1];
        for (s, &ways) in dp.iter().enumerate() {
            if ways == 0 {
                continue;
            }
            for occ in 0..=c as usize {
                if s + occ > total {
                    break;
                }
                next[s + occ] = next[s + occ].saturating_add(ways);
            }
        }
        dp = next;
    }
    dp.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

pub fn build_fock_space(grids: &[(Channel, ModeGrid)], n_max_per_mode: u8, n_max_total: u32) -> Result<FockSpace> {
    FockSpace::with_limit(grids, n_max_per_mode, n_max_total, DEFAULT_DIM_LIMIT)
}

impl FockSpace {
    pub fn with_limit(
        grids: &[(Channel, ModeGrid)],
        n_max_per_mode: u8,
        n_max_total: u32,
        limit: usize,
    ) -> Result<Self> {
        if n_max_per_mode < 1 || n_max_total < 1 {
            return Err(Error::InvalidArgument("occupation caps must be at least 1".into()));
        }
        let mut grids = grids.to_vec();
        grids.sort_by_key(|(c, _)| *c);
        for w in grids.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("channel {:?} given twice", w[0].0)));
            }
        }
        let mut modes = Vec::new();
        for (channel, grid) in &grids {
            if channel.species() != grid.species {
                return Err(Error::InvalidArgument(format!(
                    "channel {channel:?} requires {:?} statistics",
                    channel.species()
                )));
            }
            for n in grid.indices() {
                let k = grid.momentum(n);
                modes.push(Mode { channel: *channel, n, k, energy: grid.energy(k), species: grid.species });
            }
        }
        let caps: Vec<u8> = modes
            .iter()
            .map(|m| match m.species {
                Species::Boson => n_max_per_mode,
                Species::Fermion => 1,
            })
            .collect();
        let dim = count_configurations(&caps, n_max_total);
        if dim > limit as u128 {
            return Err(Error::DimensionOverflow { dim, limit });
        }

        let mut basis = Vec::with_capacity(dim as usize);
        let mut current = vec![0u8; modes.len()];
        enumerate(&caps, n_max_total, 0, 0, &mut current, &mut basis);
        debug_assert_eq!(basis.len() as u128, dim);

        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let mode_index = modes.iter().enumerate().map(|(i, m)| ((m.channel, m.n), i)).collect();
        let energies = basis
            .iter()
            .map(|cfg| cfg.iter().zip(&modes).map(|(&o, m)| o as f64 * m.energy).sum())
            .collect();
        let momenta = basis
            .iter()
            .map(|cfg| {
                let mut p = [0.0; 3];
                for (&o, m) in cfg.iter().zip(&modes) {
                    for a in 0..3 {
                        p[a] += o as f64 * m.k[a];
                    }
                }
                p
            })
            .collect();
        Ok(FockSpace {
            grids,
            modes,
            caps,
            n_max_per_mode,
            n_max_total,
            basis,
            index,
            mode_index,
            energies,
            momenta,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn grids(&self) -> &[(Channel, ModeGrid)] {
        &self.grids
    }

    pub fn grid(&self, channel: Channel) -> Option<&ModeGrid> {
        self.grids.iter().find(|(c, _)| *c == channel).map(|(_, g)| g)
    }

    pub fn n_max_per_mode(&self) -> u8 {
        self.n_max_per_mode
    }

    pub fn n_max_total(&self) -> u32 {
        self.n_max_total
    }

    pub fn configuration(&self, i: usize) -> &[u8] {
        &self.basis[i]
    }

    pub fn index_of(&self, config: &[u8]) -> Option<usize> {
        self.index.get(config).copied()
    }

    pub fn mode_index(&self, channel: Channel, n: [i32; 3]) -> Result<usize> {
        self.mode_index
            .get(&(channel, n))
            .copied()
            .ok_or_else(|| Error::UnknownMode(format!("{channel:?} {n:?}")))
    }

    /// Free energy Σ n_k E(k) of basis state `i`.
    pub fn energy(&self, i: usize) -> f64 {
        self.energies[i]
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Total momentum of basis state `i`.
    pub fn momentum(&self, i: usize) -> [f64; 3] {
        self.momenta[i]
    }

    pub fn vacuum_index(&self) -> usize {
        0
    }

    /// Applies `ops` (rightmost first) to an occupation configuration.
    ///
    /// Returns the resulting configuration and amplitude, or `None` for an
    /// exact zero (empty annihilation, Pauli blocking). The result may lie
    /// outside the truncated basis; callers decide what to do with it.
    pub fn apply_ladders(&self, config: &[u8], ops: &[Ladder]) -> Option<(Vec<u8>, f64)> {
        let mut cfg = config.to_vec();
        let mut amp = 1.0;
        for op in ops.iter().rev() {
            let m = op.mode;
            let occ = cfg[m];
            match self.modes[m].species {
                Species::Boson => {
                    if op.dagger {
                        cfg[m] = occ.checked_add(1)?;
                        amp *= ((occ as f64) + 1.0).sqrt();
                    } else {
                        if occ == 0 {
                            return None;
                        }
                        cfg[m] = occ - 1;
                        amp *= (occ as f64).sqrt();
                    }
                }
                Species::Fermion => {
                    let parity = cfg[..m]
                        .iter()
                        .zip(&self.modes[..m])
                        .filter(|(o, md)| **o > 0 && md.species == Species::Fermion)
                        .count();
                    if op.dagger {
                        if occ == 1 {
                            return None;
                        }
                        cfg[m] = 1;
                    } else {
                        if occ == 0 {
                            return None;
                        }
                        cfg[m] = 0;
                    }
                    if parity % 2 == 1 {
                        amp = -amp;
                    }
                }
            }
        }
        Some((cfg, amp))
    }

    /// Realizes Σ c·(ladder product) as a matrix, dropping out-of-basis results.
    pub fn realize(&self, terms: &[(C64, Vec<Ladder>)]) -> SparseOperator {
        let mut trip = Vec::new();
        for (col, cfg) in self.basis.iter().enumerate() {
            for (c, ops) in terms {
                if let Some((out, a)) = self.apply_ladders(cfg, ops) {
                    if let Some(&row) = self.index.get(out.as_slice()) {
                        trip.push((row, col, c * a));
                    }
                }
            }
        }
        SparseOperator::from_triplets(self.dim(), trip)
    }

    /// Applies Σ c·(ladder product) to a state vector.
    ///
    /// Returns the in-basis image and the squared norm of the part that left
    /// the truncated space.
    pub fn apply_terms(&self, terms: &[(C64, Vec<Ladder>)], state: &[C64]) -> Result<(Vec<C64>, f64)> {
        if state.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: state.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        let mut leaked: HashMap<Vec<u8>, C64> = HashMap::new();
        for (col, amp) in state.iter().enumerate() {
            if *amp == C64::new(0.0, 0.0) {
                continue;
            }
            let cfg = &self.basis[col];
            for (c, ops) in terms {
                if let Some((res, a)) = self.apply_ladders(cfg, ops) {
                    let v = c * a * amp;
                    match self.index.get(res.as_slice()) {
                        Some(&row) => out[row] += v,
                        None => *leaked.entry(res).or_insert(C64::new(0.0, 0.0)) += v,
                    }
                }
            }
        }
        Ok((out, leaked.values().map(|v| v.norm_sqr()).sum()))
    }

    pub fn mode_operator(&self, channel: Channel, n: [i32; 3], kind: LadderKind) -> Result<ModeOperator> {
        let mode = self.mode_index(channel, n)?;
        let ladder = Ladder { mode, dagger: kind == LadderKind::Create };
        Ok(ModeOperator {
            matrix: self.realize(&[(C64::new(1.0, 0.0), vec![ladder])]),
            kind,
            mode,
            channel,
        })
    }

    /// Free Hamiltonian Σ_k E_k n_k (vacuum energy dropped), diagonal in the basis.
    pub fn free_hamiltonian(&self) -> SparseOperator {
        SparseOperator::diagonal(&self.energies)
    }

    /// Total momentum component along `axis` (1, 2 or 3), diagonal in the basis.
    pub fn total_momentum(&self, axis: usize) -> Result<SparseOperator> {
        if !(1..=3).contains(&axis) {
            return Err(Error::InvalidArgument(format!("axis {axis} not in 1..=3")));
        }
        Ok(SparseOperator::diagonal(&self.momenta.iter().map(|p| p[axis - 1]).collect::<Vec<_>>()))
    }

    /// Whether basis state `i` sits on a bosonic occupation cap (per-mode or total).
    pub fn at_cap(&self, i: usize) -> bool {
        let cfg = &self.basis[i];
        let total: u32 = cfg.iter().map(|&o| o as u32).sum();
        total >= self.n_max_total
            || cfg
                .iter()
                .zip(&self.modes)
                .zip(&self.caps)
                .any(|((&o, m), &c)| m.species == Species::Boson && o >= c)
    }

    pub fn describe(&self) -> FockSpaceDescription {
        FockSpaceDescription {
            schema: FOCK_SCHEMA.to_string(),
            channels: self.grids.clone(),
            n_max_per_mode: self.n_max_per_mode,
            n_max_total: self.n_max_total,
            dim: self.dim(),
            modes: self.modes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.describe()).expect("description serializes")
    }
}

fn enumerate(caps: &[u8], total: u32, pos: usize, used: u32, current: &mut Vec<u8>, out: &mut Vec<Box<[u8]>>) {
    if pos == caps.len() {
        out.push(current.clone().into_boxed_slice());
        return;
    }
    let max = (caps[pos] as u32).min(total - used);
    for occ in 0..=max {
        current[pos] = occ as u8;
        enumerate(caps, total, pos + 1, used + occ, current, out);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single_boson(n_max: u8) -> FockSpace {
        let mut g = ModeGrid::new([2.0 * PI; 3], [(0, 0), (0, 0), (1, 1)], Species::Boson, 1.0).unwrap();
        g.include_zero_mode = false;
        build_fock_space(&[(Channel::Scalar, g)], n_max, n_max as u32).unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(single_boson(4).dim(), 5);

        let f = ModeGrid::new([2.0 * PI; 3], [(0, 0), (0, 0), (1, 2)], Species::Fermion, 0.0).unwrap();
        assert_eq!(build_fock_space(&[(Channel::DiracL, f)], 4, 4).unwrap().dim(), 4);

        let b = ModeGrid::new([2.0 * PI; 3], [(0, 0), (0, 0), (1, 2)], Species::Boson, 0.0).unwrap();
        let s = build_fock_space(&[(Channel::Scalar, b)], 2, 2).unwrap();
        assert_eq!(s.dim(), 6);
        // Enumerated lexicographically: 00, 01, 02, 10, 11, 20.
        let got: Vec<Vec<u8>> = (0..6).map(|i| s.configuration(i).to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn overflow_is_reported() {
        let g = ModeGrid::cube(3, 1.0, 2, Species::Boson, 0.0).unwrap();
        let err = FockSpace::with_limit(&[(Channel::Scalar, g)], 4, 4, 1000).unwrap_err();
        assert!(matches!(err, Error::DimensionOverflow { .. }));
    }

    #[test]
    fn bosonic_ladder_amplitudes() {
        let s = single_boson(4);
        let up = s.mode_operator(Channel::Scalar, [0, 0, 1], LadderKind::Create).unwrap();
        assert_eq!(up.matrix.get(1, 0), C64::new(1.0, 0.0));
        assert!((up.matrix.get(2, 1).re - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.mode_operator(Channel::Scalar, [0, 0, 5], LadderKind::Create).is_err());
    }

    #[test]
    fn fermionic_antisymmetry() {
        let f = ModeGrid::new([2.0 * PI; 3], [(0, 0), (0, 0), (1, 2)], Species::Fermion, 0.0).unwrap();
        let s = build_fock_space(&[(Channel::DiracL, f)], 1, 2).unwrap();
        let c1 = s.mode_operator(Channel::DiracL, [0, 0, 1], LadderKind::Create).unwrap().matrix;
        let c2 = s.mode_operator(Channel::DiracL, [0, 0, 2], LadderKind::Create).unwrap().matrix;
        let lhs = c2.matmul(&c1).unwrap();
        let rhs = c1.matmul(&c2).unwrap().scale(C64::new(-1.0, 0.0));
        assert_eq!(lhs.sub(&rhs).unwrap().max_abs(), 0.0);
        assert!(lhs.max_abs() > 0.5);
    }

    #[test]
    fn hamiltonian_eigenvalues() {
        let s = single_boson(4);
        let h = s.free_hamiltonian();
        let e = (1.0f64 + 1.0).sqrt();
        assert_eq!(h.get(0, 0), C64::new(0.0, 0.0));
        assert!((h.get(1, 1).re - e).abs() < 1e-14);
        assert!((h.get(2, 2).re - 2.0 * e).abs() < 1e-14);
        let p = s.total_momentum(3).unwrap();
        assert_eq!(h.commutator(&p).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn json_description_round_trips() {
        let s = single_boson(2);
        let d: FockSpaceDescription = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(d, s.describe());
        assert_eq!(d.schema, FOCK_SCHEMA);
    }
}
