//! Cross-module properties: measures, moment tables, reconstruction,
//! convolution and the distribution form must all describe the same object.

use fockmodel::gns::{self, DEFAULT_NULL_TOL};
use fockmodel::jordan::{self, Classification, JordanOptions};
use fockmodel::kernel::{eval_f, taylor_kernel};
use fockmodel::models::{self, AtomicMeasure};
use fockmodel::{random, Cx, MultiIndex};
use proptest::prelude::*;

/// Up to `max_atoms` distinct atoms on a grid with spacing 0.4 in
/// `[-0.8, 0.8]²` per coordinate, so the interpolation problems stay well posed.
fn atomic(n: usize, max_atoms: usize) -> impl Strategy<Value = AtomicMeasure> {
    let grid = (-2i32..=2, -2i32..=2);
    (
        proptest::collection::vec(proptest::collection::vec(grid, n), 1..=max_atoms),
        proptest::collection::vec(0.2f64..2.0, max_atoms),
    )
        .prop_map(move |(raw, w)| {
            let mut atoms: Vec<Vec<Cx>> = Vec::new();
            for a in raw {
                let p: Vec<Cx> = a.iter().map(|&(x, y)| Cx::new(0.4 * x as f64, 0.4 * y as f64)).collect();
                if !atoms.contains(&p) {
                    atoms.push(p);
                }
            }
            let k = atoms.len();
            AtomicMeasure::new(atoms, w[..k].to_vec()).unwrap()
        })
}

fn point(n: usize) -> impl Strategy<Value = Vec<Cx>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Cx::new(a, b)), n)
}

fn rel(a: Cx, b: Cx) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reconstruction_from_atomic_moments_keeps_the_kernel(
        mu in atomic(1, 3),
        z in point(1),
        w in point(1),
    ) {
        // k atoms in one variable need polynomials up to degree k - 1.
        let d = mu.len() + 1;
        let rebuilt = gns::gns_reconstruct(&mu.moments(d), DEFAULT_NULL_TOL).unwrap();
        prop_assert_eq!(rebuilt.tuple.dim(), mu.len());
        prop_assert!(rel(eval_f(&rebuilt.tuple, &z, &w), mu.kernel(&z, &w)) < 1e-8);
    }

    #[test]
    fn reconstruction_in_two_variables(
        mu in atomic(2, 3),
        z in point(2),
        w in point(2),
    ) {
        let rebuilt = gns::gns_reconstruct(&mu.moments(4), DEFAULT_NULL_TOL).unwrap();
        prop_assert_eq!(rebuilt.tuple.dim(), mu.len());
        prop_assert!(rel(eval_f(&rebuilt.tuple, &z, &w), mu.kernel(&z, &w)) < 1e-8);
    }

    #[test]
    fn convolution_multiplies_kernels(
        mu in atomic(1, 2),
        nu in atomic(1, 2),
        z in point(1),
        w in point(1),
    ) {
        let t = models::atomic_tuple(&mu);
        let s = models::atomic_tuple(&nu);
        let conv = gns::convolve(&t, &s, 6, DEFAULT_NULL_TOL).unwrap();
        let product = eval_f(&t, &z, &w) * eval_f(&s, &z, &w);
        prop_assert!(rel(eval_f(&conv.gns.tuple, &z, &w), product) < 1e-8);
        prop_assert!(conv.bound_excess() <= 1e-8);
        // Oracle through the convolved measure itself.
        let mu_nu = mu.convolve(&nu).unwrap();
        prop_assert!(rel(mu_nu.kernel(&z, &w), product) < 1e-10);
    }

    #[test]
    fn convolution_of_jordan_blocks_multiplies_kernels(
        m1 in 1usize..=3,
        m2 in 1usize..=3,
        l1 in point(1),
        l2 in point(1),
        z in point(1),
        w in point(1),
    ) {
        let t = models::jordan_block_tuple(m1, l1[0]);
        let s = models::jordan_block_tuple(m2, l2[0]);
        // The product kernel's cyclic space is spanned by degrees < m1 + m2 - 1.
        let conv = gns::convolve(&t, &s, m1 + m2 + 1, DEFAULT_NULL_TOL).unwrap();
        let product = eval_f(&t, &z, &w) * eval_f(&s, &z, &w);
        prop_assert!(rel(eval_f(&conv.gns.tuple, &z, &w), product) < 1e-7);
    }

    #[test]
    fn atomic_distribution_is_weighted_point_masses(mu in atomic(2, 3)) {
        let t = models::atomic_tuple(&mu);
        let dec = jordan::joint_spectral_decompose(&t, &JordanOptions::default()).unwrap();
        prop_assert_eq!(dec.classification, Classification::Jordan);
        let rep = jordan::distribution_rep(&t, &dec, 1).unwrap();
        prop_assert_eq!(rep.terms.len(), mu.len());
        let zero = MultiIndex::zeros(2);
        for term in &rep.terms {
            let j = mu
                .atoms()
                .iter()
                .position(|a| a.iter().zip(&term.lambda).all(|(x, y)| (x - y).norm() < 1e-9))
                .expect("support point is an atom");
            let coeffs = term.operator_coefficients(1e-10);
            prop_assert_eq!(coeffs.len(), 1);
            let c = coeffs[&(zero.clone(), zero.clone())];
            prop_assert!((c - Cx::new(mu.weights()[j], 0.0)).norm() < 1e-9);
        }
        prop_assert!(jordan::round_trip_error(&rep, &mu.moments(3)) < 1e-9);
    }

    #[test]
    fn taylor_truncation_converges_to_the_kernel(seed in 0u64..1000, z in point(2), w in point(2)) {
        let mut rng = random::rng(seed);
        let t = random::polynomial_tuple(&mut rng, 2, 3, 0.5);
        let exact = eval_f(&t, &z, &w);
        let approx = taylor_kernel(&t.moments(16), &z, &w);
        prop_assert!(rel(approx, exact) < 1e-10);
    }
}
