//! Property tests over seeded fixtures and random small inputs.

use proptest::prelude::*;

use opbar::algebra::{algebra_diagnostics, fixtures, KAlgebra};
use opbar::bar::{bar, check_square_zero, shuffle, shuffle_derivation_holds, Word};
use opbar::cochains::{models, reduced_cochains};
use opbar::sigma::{
    compose_dims_bruteforce, compose_dims_formula, random_sparse, tensor_dims_bruteforce, tensor_dims_formula,
};
use opbar::{kernel_basis, rank, CoeffField, DegreeWindow, SparseMatrix};

fn field() -> impl Strategy<Value = CoeffField> {
    prop_oneof![
        Just(CoeffField::Rationals),
        Just(CoeffField::Prime(2)),
        Just(CoeffField::Prime(3)),
        Just(CoeffField::Prime(7)),
    ]
}

fn matrix() -> impl Strategy<Value = (CoeffField, Vec<Vec<i64>>)> {
    (field(), 1usize..6, 1usize..6).prop_flat_map(|(f, r, c)| {
        (Just(f), prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
    })
}

/// Bar windows on the side of zero where the fixture lives.
fn window_for(a: &opbar::algebra::Algebra, d: i64) -> DegreeWindow {
    let positive = KAlgebra::elements(a).iter().all(|x| a.degree(x) > 0);
    if positive {
        DegreeWindow { min: 0, max: d }
    } else {
        DegreeWindow { min: -d, max: 0 }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(f in field(), a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let (x, y, z) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inverse()).is_one());
        }
    }

    #[test]
    fn field_names_round_trip(f in field()) {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<CoeffField>().unwrap(), f);
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<CoeffField>(&json).unwrap(), f);
    }

    #[test]
    fn rank_nullity((f, rows) in matrix()) {
        let m = SparseMatrix::from_rows(f, &rows);
        let r = rank(&m);
        prop_assert_eq!(r, rank(&m.transpose()));
        let kernel = kernel_basis(&m);
        prop_assert_eq!(kernel.len() + r, m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_empty());
        }
    }

    #[test]
    fn random_dga_bar_squares_to_zero(f in field(), seed in 0u64..10_000) {
        let a = fixtures::random_dga(f, seed, false);
        prop_assert_eq!(algebra_diagnostics(&a), Ok(()));
        let b = bar(&a, window_for(&a, 7), None).unwrap();
        prop_assert_eq!(check_square_zero(&a, &b), Ok(()));
    }

    #[test]
    fn shuffle_is_graded_commutative_and_a_derivation(f in field(), seed in 0u64..10_000) {
        let a = fixtures::random_dga(f, seed, true);
        let b = bar(&a, window_for(&a, 5), None).unwrap();
        let words: Vec<(Word<u32>, i64)> = b.words().filter(|(w, _)| w.weight() <= 2).map(|(w, d)| (w.clone(), d)).collect();
        for (u, du) in &words {
            for (v, dv) in &words {
                prop_assert_eq!(shuffle(&a, u, v), shuffle(&a, v, u).scaled(&f.sign(du * dv)));
                prop_assert!(shuffle_derivation_holds(&a, u, v));
            }
        }
    }

    #[test]
    fn sigma_dimension_formulas(seed in 0u64..10_000) {
        let f = CoeffField::Rationals;
        let (m, n) = (random_sparse(f, 3, seed), random_sparse(f, 3, seed ^ 0x5eed));
        for r in 1..=3 {
            prop_assert_eq!(tensor_dims_formula(&m, &n, r), tensor_dims_bruteforce(&m, &n, r));
            prop_assert_eq!(compose_dims_formula(&m, &n, r), compose_dims_bruteforce(&m, &n, r));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spheres_and_simplices_have_the_expected_cohomology(f in field(), n in 1usize..4) {
        let sphere = reduced_cochains(&models::sphere(n), f).unwrap().algebra;
        let carrier = sphere.carrier();
        let h = carrier.homology(carrier.window()).unwrap();
        for d in 0..=n as i64 {
            prop_assert_eq!(h.get(&-d).copied().unwrap_or(0), usize::from(d == n as i64), "H^{} of S^{}", d, n);
        }
        let simplex = reduced_cochains(&models::standard_simplex(n), f).unwrap().algebra;
        let carrier = simplex.carrier();
        prop_assert!(carrier.homology(carrier.window()).unwrap().values().all(|k| *k == 0));
    }
}
