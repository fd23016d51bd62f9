use proptest::prelude::*;
use qfid::sampling::{sample_state, Measure, SamplerSpec};
use qfid::states::{
    bloch_from_density, bloch_of, generator_basis, purity, qubit_from_bloch, qunit_from_bloch, BlochVector,
};

#[test]
fn bloch_round_trip_all_dims() {
    for dim in [2, 3, 4] {
        let basis = generator_basis(dim).unwrap();
        for measure in [Measure::HilbertSchmidtMixed, Measure::HaarPure] {
            let spec = SamplerSpec::new(measure, dim, 42).unwrap();
            for i in 0..300 {
                let rho = sample_state(&spec, i).unwrap();
                let m = bloch_from_density(&rho, &basis).unwrap();
                assert!(m.norm() <= 1.0 + 1e-10);
                let back = qunit_from_bloch(&m, &basis).unwrap();
                assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-10);
                let again = bloch_from_density(&back, &basis).unwrap();
                for (a, b) in m.coords().iter().zip(again.coords()) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn purity_tracks_bloch_norm() {
    // Tr rho^2 = 1/N + (N-1)/N |m|^2
    for dim in [2, 3, 4] {
        let spec = SamplerSpec::new(Measure::HilbertSchmidtMixed, dim, 3).unwrap();
        let n = dim as f64;
        for i in 0..200 {
            let rho = sample_state(&spec, i).unwrap();
            let m = bloch_of(&rho).unwrap().norm();
            let p = purity(&rho);
            assert!((p - (1.0 / n + (n - 1.0) / n * m * m)).abs() < 1e-12);
            assert!(p >= 1.0 / n - 1e-10 && p <= 1.0 + 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn qunit_map_reduces_to_qubit_map(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let len = (x * x + y * y + z * z).sqrt();
        prop_assume!(len <= 1.0);
        let basis = generator_basis(2).unwrap();
        let n = BlochVector::qubit(x, y, z).unwrap();
        let a = qubit_from_bloch(&n).unwrap();
        let b = qunit_from_bloch(&n, &basis).unwrap();
        prop_assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14);
        let back = bloch_of(&a).unwrap();
        for (p, q) in back.coords().iter().zip(n.coords()) {
            prop_assert!((p - q).abs() < 1e-15);
        }
    }
}
