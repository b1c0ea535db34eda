use horizon_entropy::numerics::{
    smallest_eigenpair, svd, sym_eig, LanczosOptions, RealSymmetricMatrix,
};
use horizon_entropy::C64;
use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symmetric(n: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Array2::from_shape_fn((n, n), |_| rng.random_range(-1.0..1.0));
    &a + &a.t()
}

#[test]
fn lanczos_matches_dense_up_to_512() {
    for (n, seed) in [(2, 1), (17, 2), (128, 3), (512, 4)] {
        let m = random_symmetric(n, seed);
        let dense = sym_eig(&RealSymmetricMatrix::new(m.clone()).unwrap()).unwrap();
        let apply = |x: &[f64], y: &mut [f64]| {
            let v = m.dot(&ndarray::ArrayView1::from(x));
            y.copy_from_slice(v.as_slice().unwrap());
        };
        let pair = smallest_eigenpair(apply, n, &LanczosOptions::default(), None).unwrap();
        assert!(
            (pair.value - dense.values[0]).abs() < 1e-8,
            "n={n}: {} vs {}",
            pair.value,
            dense.values[0]
        );
        assert!(pair.residual <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sym_eig_preserves_trace_and_reconstructs(n in 1usize..24, seed in any::<u64>()) {
        let m = random_symmetric(n, seed);
        let eig = sym_eig(&RealSymmetricMatrix::new(m.clone()).unwrap()).unwrap();
        let trace: f64 = m.diag().sum();
        prop_assert!((eig.values.sum() - trace).abs() < 1e-10 * (1.0 + trace.abs()));
        prop_assert!(eig.values.windows(2).into_iter().all(|w| w[0] <= w[1]));
        let back = eig.vectors.dot(&Array2::from_diag(&eig.values)).dot(&eig.vectors.t());
        let err = (&back - &m).iter().fold(0.0f64, |a, x| a.max(x.abs()));
        prop_assert!(err < 1e-10);
    }

    #[test]
    fn svd_preserves_frobenius_norm(rows in 1usize..9, cols in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Array2::from_shape_fn((rows, cols), |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let dec = svd(&a).unwrap();
        let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let sig: f64 = dec.sigma.iter().map(|s| s * s).sum();
        prop_assert!((fro - sig).abs() < 1e-10 * (1.0 + fro));
        prop_assert!(dec.sigma.windows(2).into_iter().all(|w| w[0] >= w[1]));
        let err = (&dec.reconstruct() - &a).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        prop_assert!(err < 1e-10);
    }
}
