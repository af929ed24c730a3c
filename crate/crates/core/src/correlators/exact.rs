use super::wick::Vertex;
use crate::error::Result;
use crate::fock::{thermal_state, FockSpace, Ladder, SparseOperator, Species};
use crate::C64;

/// O(t) = e^{iHt} O e^{−iHt} in the occupation basis.
pub fn heisenberg(space: &FockSpace, op: &SparseOperator, t: f64) -> SparseOperator {
    let trip = op
        .triplets()
        .map(|(i, j, v)| (i, j, v * C64::from_polar(1.0, (space.energy(i) - space.energy(j)) * t)))
        .collect::<Vec<_>>();
    SparseOperator::from_triplets(op.dim(), trip)
}

/// Tr[ρ 𝒯 Π V] by direct matrix products, vertices sorted latest-first on the
/// contour with the fermionic reordering sign. Real times only.
pub fn exact_correlator(space: &FockSpace, vertices: &[Vertex], beta: Option<f64>) -> Result<C64> {
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    idx.sort_by(|&a, &b| vertices[b].time.s.total_cmp(&vertices[a].time.s));
    let parity: Vec<usize> = vertices
        .iter()
        .map(|v| v.factors.iter().filter(|f| f.species == Species::Fermion).count() % 2)
        .collect();
    let mut swaps = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                swaps += parity[idx[i]] * parity[idx[j]];
            }
        }
    }
    let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
    let mut prod = SparseOperator::identity(space.dim());
    for &v in &idx {
        let ladders: Vec<Ladder> = vertices[v].factors.iter().map(|f| Ladder { mode: f.mode, dagger: f.dagger }).collect();
        let op = space.realize(&[(C64::new(1.0, 0.0), ladders)]);
        prod = prod.matmul(&heisenberg(space, &op, vertices[v].time.t.re))?;
    }
    let rho = thermal_state(space, beta)?;
    let w = rho.weights().expect("thermal states are diagonal");
    Ok((0..space.dim()).map(|i| prod.get(i, i) * w[i]).sum::<C64>() * sign)
}
