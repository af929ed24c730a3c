use std::f64::consts::PI;

use proptest::prelude::*;
use qfnoise_core::fields::{field_strength, stress_tensor_scalar};
use qfnoise_core::fock::{build_fock_space, Channel, ModeGrid, SparseOperator, Species};
use qfnoise_core::spacetime::{g, FourVector};
use qfnoise_core::spectral::lehmann_from_operators;
use qfnoise_core::tensors::*;
use qfnoise_core::C64;

fn spacelike() -> impl Strategy<Value = FourVector> {
    (prop::array::uniform3(-3.0f64..3.0), -0.9f64..0.9).prop_filter_map("nonzero", |(k, f)| {
        let n = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        (n > 0.1).then(|| FourVector::from_parts(f * n, k))
    })
}

fn cplx() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| C64::new(a, b))
}

fn sym_matrix() -> impl Strategy<Value = Matrix4c> {
    prop::array::uniform16(cplx()).prop_map(|v| std::array::from_fn(|m| std::array::from_fn(|n| v[4 * m.min(n) + m.max(n)])))
}

fn rel(x: C64, scale: f64) -> f64 {
    x.norm() / scale.max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn vector_projection_is_transverse(p in spacelike(), a in prop::array::uniform4(cplx())) {
        let t = project_noiseless_vector(&a, &p);
        let pt: C64 = (0..4).map(|m| t[m] * (g(m, m) * p[m])).sum();
        let scale = p.euclidean_norm_sqr().powf(1.5) * a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        prop_assert!(rel(pt, scale) < 1e-12);
    }

    #[test]
    fn tensor_projection_identities(p in spacelike(), b in sym_matrix()) {
        let scale = p.euclidean_norm_sqr().powi(3) * b.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
        let gen = project_noiseless_tensor(&b, &p, false);
        prop_assert!(rel(trace(&gen), scale) < 1e-12);
        prop_assert!(rel(sandwich(&gen, &p), scale) < 1e-12);

        // Make the input conserved, then the reduced projection is transverse and traceless.
        let pp = p.dot(&p);
        let proj = |m: usize, a: usize| (if m == a { 1.0 } else { 0.0 }) - p[m] * g(a, a) * p[a] / pp;
        let cons: Matrix4c = std::array::from_fn(|m| std::array::from_fn(|n| {
            let mut s = C64::new(0.0, 0.0);
            for a in 0..4 { for c in 0..4 { s += b[a][c] * (proj(m, a) * proj(n, c)); } }
            s
        }));
        let out = project_noiseless_tensor(&cons, &p, true);
        let scale = p.euclidean_norm_sqr().powf(1.5) * cons.iter().flatten().map(|x| x.norm()).fold(1e-300, f64::max);
        prop_assert!(rel(trace(&out), scale) < 1e-12);
        for x in contract_first(&out, &p) {
            prop_assert!(rel(x, scale) < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_models_and_frame_independence(
        p in spacelike(),
        a in 0.0f64..2.0, b in -1.0f64..1.0, f in -1.0f64..1.0, v in -1.0f64..1.0, w in 0.0f64..2.0,
    ) {
        let r = |x: f64| C64::new(x, 0.0);
        let cases = [
            (TensorRank::Vector, vec![("eta", r(a)), ("xi", r(b))]),
            (TensorRank::Symmetric2, vec![("a", r(a)), ("b", r(b)), ("f", r(f)), ("v", r(v)), ("w", r(w))]),
            (TensorRank::Antisymmetric2, vec![("a", r(a)), ("v", r(v)), ("f", r(f))]),
        ];
        for (rank, coeffs) in cases {
            let t = model_correlation(rank, p, &coeffs).unwrap();
            let (canon, direct) = match rank {
                TensorRank::Vector => (decompose_vector(&t).unwrap(), decompose_vector_with(&t, false).unwrap()),
                TensorRank::Symmetric2 => (decompose_symmetric(&t, false).unwrap(), decompose_symmetric_with(&t, false, false).unwrap()),
                TensorRank::Antisymmetric2 => (decompose_antisymmetric(&t).unwrap(), decompose_antisymmetric_with(&t, false).unwrap()),
            };
            prop_assert!(canon.residual < 1e-10 && direct.residual < 1e-10, "{rank:?}");
            for (name, want) in &coeffs {
                let (x, y) = (canon.coefficient(name).unwrap(), direct.coefficient(name).unwrap());
                prop_assert!((x - want).norm() < 1e-9 * (1.0 + want.norm()), "{rank:?} {name}: {x} vs {want}");
                prop_assert!((x - y).norm() < 1e-9 * (1.0 + want.norm()));
            }
        }
    }

    #[test]
    fn conserved_model_and_covariant_noiseless_set(p in spacelike(), w in 0.1f64..2.0, eta in 0.1f64..2.0) {
        let t = model_correlation(TensorRank::Symmetric2, p, &[("w_conserved", C64::new(w, 0.0))]).unwrap();
        let fit = decompose_symmetric(&t, true).unwrap();
        prop_assert!((fit.coefficient("w").unwrap().re - w).abs() < 1e-9 && fit.residual < 1e-10);
        prop_assert!(fit.conservation_defect.unwrap() < 1e-12);

        // Pulled-back combinations have zero variance on the lab-frame data.
        let set = noiseless_components_at(p).unwrap();
        let norm = t.norm();
        for c in &set.tensor {
            let mut var = C64::new(0.0, 0.0);
            for m in 0..4 { for n in 0..4 { for s in 0..4 { for r in 0..4 {
                var += t.get4(m, n, s, r) * (c.coefficients[m][n] * c.coefficients[s][r]);
            }}}}
            let cn: f64 = c.coefficients.iter().flatten().map(|x| x * x).sum();
            prop_assert!(var.norm() < 1e-9 * norm * cn, "{}: {var}", c.label);
        }
        let v = model_correlation(TensorRank::Vector, p, &[("eta", C64::new(eta, 0.0))]).unwrap();
        for c in &set.vector {
            let var: C64 = (0..16).map(|i| v.values[i] * (c[i / 4] * c[i % 4])).sum();
            prop_assert!(var.norm() < 1e-9 * v.norm());
        }
    }
}

fn vacuum_rank4(ops: &[SparseOperator], space: &qfnoise_core::fock::FockSpace, p: FourVector, rank: TensorRank) -> TensorCorrelation {
    TensorCorrelation::from_fn4(rank, p, |m, n, s, r| {
        lehmann_from_operators(space, ("B", &ops[4 * m + n]), ("B", &ops[4 * s + r]), p, None, None).unwrap().g
    })
    .unwrap()
}

#[test]
fn vacuum_scalar_stress_tensor_spacelike() {
    let grid = ModeGrid::line(3, 2.0 * PI, 2, Species::Boson, 0.0).unwrap();
    let space = build_fock_space(&[(Channel::Scalar, grid)], 2, 2).unwrap();
    let ops: Vec<SparseOperator> =
        (0..16).map(|i| stress_tensor_scalar(i / 4, i % 4, &space).unwrap().realize(&space)).collect();
    for p in [FourVector::new(0.0, 0.0, 0.0, 1.0), FourVector::new(1.0, 0.0, 0.0, 2.0)] {
        let t = vacuum_rank4(&ops, &space, p, TensorRank::Symmetric2);
        let fit = decompose_symmetric(&t, false).unwrap();
        for name in ["v", "f"] {
            assert!(fit.coefficient(name).unwrap().norm() <= 1e-8);
        }
        assert!(fit.coefficient("a").unwrap().re >= -1e-10);
        assert!(!fit.positivity_violation);
    }
}

#[test]
fn vacuum_field_strength_spacelike() {
    let grids: Vec<_> = [Channel::PhotonH, Channel::PhotonV]
        .iter()
        .map(|&c| (c, ModeGrid::line(3, 2.0 * PI, 2, Species::Boson, 0.0).unwrap()))
        .collect();
    let space = build_fock_space(&grids, 2, 2).unwrap();
    let f = field_strength(&space, &FourVector::default()).unwrap();
    let p = FourVector::new(1.0, 0.0, 0.0, 2.0);
    let t = vacuum_rank4(&f, &space, p, TensorRank::Antisymmetric2);
    assert!(t.max_abs() <= 1e-8);
    let fit = decompose_antisymmetric(&t).unwrap();
    assert!(!fit.positivity_violation);
}
