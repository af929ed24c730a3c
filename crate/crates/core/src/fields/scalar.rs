use super::observable::{LinearForm, QuadraticObservable};
use crate::error::{Error, Result};
use crate::fock::{Channel, FockSpace, Ladder, SparseOperator};
use crate::spacetime::{g, FourVector};
use crate::C64;

fn scalar_grid_params(space: &FockSpace) -> Result<(f64, f64)> {
    let grid = space
        .grid(Channel::Scalar)
        .ok_or_else(|| Error::UnknownMode("no scalar channel in this space".into()))?;
    Ok((grid.mass, grid.volume()))
}

/// φ = Σ_k (2E V)^{−1/2} (a_k e^{−ik·x} + a†_k e^{ik·x}).
pub fn scalar_field_form(space: &FockSpace) -> Result<LinearForm> {
    let (_, vol) = scalar_grid_params(space)?;
    let mut f = LinearForm::new();
    for (i, m) in space.modes().iter().enumerate() {
        if m.channel != Channel::Scalar {
            continue;
        }
        let c = C64::new((2.0 * m.energy * vol).sqrt().recip(), 0.0);
        f.push(c, Ladder::annihilate(i));
        f.push(c, Ladder::create(i));
    }
    Ok(f)
}

/// π = ∂_t φ.
pub fn conjugate_momentum_form(space: &FockSpace) -> Result<LinearForm> {
    Ok(scalar_field_form(space)?.derivative(space, 0))
}

pub fn scalar_field(space: &FockSpace, x: &FourVector) -> Result<SparseOperator> {
    Ok(scalar_field_form(space)?.realize_at(space, x))
}

pub fn conjugate_momentum(space: &FockSpace, x: &FourVector) -> Result<SparseOperator> {
    Ok(conjugate_momentum_form(space)?.realize_at(space, x))
}

/// Normal-ordered T^{μν} = ∂^μφ∂^νφ − g^{μν}(∂_σφ∂^σφ − m²φ²)/2 as a local density.
pub fn stress_tensor_scalar(mu: usize, nu: usize, space: &FockSpace) -> Result<QuadraticObservable> {
    if mu > 3 || nu > 3 {
        return Err(Error::InvalidArgument(format!("tensor index ({mu},{nu}) out of range")));
    }
    let (mass, _) = scalar_grid_params(space)?;
    let phi = scalar_field_form(space)?;
    let d: Vec<LinearForm> = (0..4).map(|s| phi.derivative(space, s)).collect();
    let one = C64::new(1.0, 0.0);
    let mut t = QuadraticObservable::new(format!("T{mu}{nu}"));
    t.add_product(space, one, &d[mu], &d[nu]);
    let gmn = g(mu, nu);
    if gmn != 0.0 {
        for s in 0..4 {
            t.add_product(space, C64::new(-0.5 * gmn * g(s, s), 0.0), &d[s], &d[s]);
        }
        t.add_product(space, C64::new(0.5 * gmn * mass * mass, 0.0), &phi, &phi);
    }
    Ok(t.simplified())
}
