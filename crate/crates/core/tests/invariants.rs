//! Cross-module invariants checked against brute-force oracles.

use proptest::prelude::*;

use jnucleus::bose_mesner::{
    adjacency_matrix, distance_matrices, eigenvalues, intersection_array, multiplicity_closed_form, primitive_idempotents,
};
use jnucleus::combinatorics::{binomial_u64, distance, enumerate_vertices, GroundParams, Vertex};
use jnucleus::dual::DualData;
use jnucleus::linalg::ExactMatrix;
use jnucleus::nucleus::nucleus;
use jnucleus::report::run_instance;
use jnucleus::Rational;

fn params(n: usize, d: usize) -> GroundParams {
    GroundParams::new(n, d).unwrap()
}

#[test]
fn traces_of_powers_match_spectrum() {
    for (n, d) in [(5, 2), (7, 3), (7, 2), (8, 3)] {
        let p = params(n, d);
        let a = adjacency_matrix(&p, &enumerate_vertices(p));
        let theta = eigenvalues(&p);
        let mults: Vec<u64> = (0..=d).map(|i| multiplicity_closed_form(&p, i)).collect();
        let mut power = ExactMatrix::identity(a.rows());
        for k in 0..5u32 {
            let expected: i64 = theta.iter().zip(&mults).map(|(&t, &m)| m as i64 * t.pow(k)).sum();
            assert_eq!(power.trace(), Rational::from_int(expected), "J({n},{d}) trace(A^{k})");
            power = power.mul(&a).unwrap();
        }
    }
}

#[test]
fn distance_matrices_satisfy_three_term_recurrence() {
    for (n, d) in [(6, 2), (7, 3), (9, 3)] {
        let p = params(n, d);
        let order = enumerate_vertices(p);
        let ai = distance_matrices(&p, &order);
        for (i, m) in ai.iter().enumerate() {
            for r in 0..order.len() {
                for c in 0..order.len() {
                    let want = distance(order.get(r), order.get(c)) == i;
                    assert_eq!(m.get(r, c).is_zero(), !want);
                }
            }
        }
        let ia = intersection_array(&p);
        let a = &ai[1];
        for i in 0..=d {
            let mut rhs = ai[i].scale(&Rational::from_int(ia.a[i] as i64));
            if i > 0 {
                rhs = rhs.add(&ai[i - 1].scale(&Rational::from_int(ia.b_at(i - 1) as i64))).unwrap();
            }
            if i < d {
                rhs = rhs.add(&ai[i + 1].scale(&Rational::from_int(ia.c_at(i + 1) as i64))).unwrap();
            }
            assert_eq!(a.mul(&ai[i]).unwrap(), rhs, "J({n},{d}) A·A_{i}");
            for j in 0..=d {
                assert_eq!(ai[i].mul(&ai[j]).unwrap(), ai[j].mul(&ai[i]).unwrap());
            }
        }
    }
}

#[test]
fn idempotents_resolve_identity_and_diagonalise_adjacency() {
    let p = params(8, 3);
    let a = adjacency_matrix(&p, &enumerate_vertices(p));
    let sd = primitive_idempotents(&p, &a).unwrap();
    let mut sum = ExactMatrix::zeros(a.rows(), a.cols());
    let mut weighted = ExactMatrix::zeros(a.rows(), a.cols());
    for (e, &t) in sd.idempotents.iter().zip(&sd.theta) {
        sum = sum.add(e).unwrap();
        weighted = weighted.add(&e.scale(&Rational::from_int(t))).unwrap();
        assert_eq!(a.mul(e).unwrap(), e.scale(&Rational::from_int(t)));
    }
    assert_eq!(sum, ExactMatrix::identity(a.rows()));
    assert_eq!(weighted, a);
}

fn instance_and_base() -> impl Strategy<Value = (GroundParams, Vertex)> {
    (1usize..=3)
        .prop_flat_map(|d| (Just(d), 2 * d + 1..=2 * d + 3))
        .prop_flat_map(|(d, n)| (Just(d), Just(n), prop::sample::subsequence((1..=n).collect::<Vec<_>>(), d)))
        .prop_map(|(d, n, elems)| {
            let p = params(n, d);
            let x = Vertex::from_elements(n, elems).unwrap();
            (p, x)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn nucleus_dimensions_do_not_depend_on_base((p, x) in instance_and_base()) {
        let order = enumerate_vertices(p);
        let sd = primitive_idempotents(&p, &adjacency_matrix(&p, &order)).unwrap();
        let dd = DualData::build(&p, &order, &x, &sd).unwrap();
        let nd = nucleus(&p, &sd, &dd).unwrap();
        let d = p.d() as u64;
        let binomials: Vec<usize> = (0..=p.d()).map(|i| binomial_u64(d, i as i64) as usize).collect();
        prop_assert_eq!(&nd.dims_parts, &binomials);
        prop_assert_eq!(&nd.dims_estar, &binomials);
        prop_assert_eq!(nd.dim(), 1usize << p.d());
    }

    #[test]
    fn every_check_passes_at_any_base((p, x) in instance_and_base()) {
        let r = run_instance(&p, &x);
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed()).map(|c| (&c.name, &c.detail)).collect();
        prop_assert!(failed.is_empty(), "{} x={}: {:?}", p, x, failed);
    }
}
