use proptest::prelude::*;

use fermat_jacobian::fp::hyperplane_count;
use fermat_jacobian::{
    admissible_hyperplanes, build_group, classify_hyperplanes, count_admissible, decompose,
    enumerate_hyperplanes, genus_gfc, genus_quotient, group_by_kernel, lift_subgroup,
    multpp_constraint, pullback_kernel, quotient_by, rref_basis, span_contains,
    verify_dimension_identity, Budget, FpVector, Functional, GenusValue, IndexSet, Prime,
    PrymStatus, ReportDocument,
};

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn vectors() -> impl Strategy<Value = (u32, usize, Vec<Vec<u32>>)> {
    (prime(), 1usize..=6).prop_flat_map(|(p, n)| {
        let v = prop::collection::vec(0..p, n);
        (Just(p), Just(n), prop::collection::vec(v, 0..8))
    })
}

fn to_fp(raw: &[Vec<u32>], p: Prime) -> Vec<FpVector> {
    raw.iter().map(|v| FpVector::new(v, p).unwrap()).collect()
}

proptest! {
    #[test]
    fn rref_is_idempotent_and_span_preserving((p, n, raw) in vectors()) {
        let p = Prime::new(p).unwrap();
        let vs = to_fp(&raw, p);
        let b = rref_basis(&vs, n, p).unwrap();
        let again = rref_basis(b.rows(), n, p).unwrap();
        prop_assert_eq!(&again, &b);
        for v in &vs {
            prop_assert!(span_contains(&b, v).unwrap());
        }
        // Rows are themselves in the span of the input.
        let input_span = rref_basis(&vs, n, p).unwrap();
        for r in b.rows() {
            prop_assert!(span_contains(&input_span, r).unwrap());
            prop_assert_eq!(r.get(r.leading_index().unwrap()), 1);
        }
        prop_assert!(b.pivots().windows(2).all(|w| w[0] < w[1]));
        for (row, &c) in b.rows().iter().zip(b.pivots()) {
            for (other, _) in b.rows().iter().zip(b.pivots()) {
                if other != row {
                    prop_assert_eq!(other.get(c), 0);
                }
            }
        }
    }

    #[test]
    fn kernel_membership_is_functional_vanishing(
        (p, raw_phi, raw_v) in prime().prop_flat_map(|p| (1usize..=5).prop_flat_map(move |n| {
            (Just(p), prop::collection::vec(0..p, n), prop::collection::vec(0..p, n))
        }))
    ) {
        let p = Prime::new(p).unwrap();
        let phi = FpVector::new(&raw_phi, p).unwrap();
        prop_assume!(!phi.is_zero());
        let phi = Functional::new(phi).unwrap();
        let v = FpVector::new(&raw_v, p).unwrap();
        prop_assert_eq!(span_contains(&phi.kernel(), &v).unwrap(), phi.eval(&v).unwrap() == 0);
    }

    #[test]
    fn iterated_quotient_equals_direct(
        (n, p, t1, t2) in (3usize..=5, prime()).prop_flat_map(|(n, p)| {
            let mask = (1u64 << (n + 1)) - 1;
            (Just(n), Just(p), 0..=mask, 0..=mask)
        })
    ) {
        let g = build_group(n, p).unwrap();
        let t1 = IndexSet::from_bits(t1);
        let t2 = IndexSet::from_bits(t2);
        prop_assume!(t1.union(t2).len() < n);
        let iterated = quotient_by(&g, t1).unwrap().refine(t2).unwrap();
        let direct = quotient_by(&g, t1.union(t2)).unwrap();
        prop_assert_eq!(iterated.kernel(), direct.kernel());
        let lifts = |q: &fermat_jacobian::Quotient<'_>| {
            let mut v: Vec<_> = admissible_hyperplanes(q)
                .iter()
                .map(|h| lift_subgroup(q, h).unwrap())
                .map(|b| b.rows().to_vec())
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(lifts(&iterated), lifts(&direct));
    }

    #[test]
    fn report_json_round_trip(n in 2usize..=4, p in prime()) {
        let g = build_group(n, p).unwrap();
        let doc = ReportDocument::build(&g, Budget::default()).unwrap();
        let text = doc.to_json().unwrap();
        prop_assert_eq!(ReportDocument::from_json(&text).unwrap(), doc);
    }
}

#[test]
fn hyperplane_counts() {
    for m in 1..=6 {
        for p in PRIMES {
            let p = Prime::new(p).unwrap();
            let listed = enumerate_hyperplanes(m, p);
            assert_eq!(listed.len() as u128, hyperplane_count(m, p));
            assert!(listed.windows(2).all(|w| w[0] < w[1]));
            assert!(listed.iter().all(|f| f.is_canonical()));
        }
    }
}

#[test]
fn partition_identity() {
    for n in 2..=6usize {
        for p in PRIMES {
            let p = Prime::new(p).unwrap();
            let lhs: u128 = (0..n)
                .map(|t| {
                    let c = fermat_jacobian::genus::binomial(n + 1, t);
                    let c: u128 = c.try_into().unwrap();
                    c * count_admissible(n - t, p)
                })
                .sum();
            assert_eq!(lhs, hyperplane_count(n, p), "n={n} p={p}");
        }
    }
}

#[test]
fn vanishing_counts_bounded_for_all_quotients() {
    for n in 2..=5usize {
        for p in [2u32, 3, 5] {
            let g = build_group(n, p).unwrap();
            for k in 0..n {
                for t in IndexSet::subsets_of_size(n, k) {
                    let q = quotient_by(&g, t).unwrap();
                    for phi in enumerate_hyperplanes(q.dim(), g.p()) {
                        assert!(q.vanishing_indices(&phi).len() < n - k);
                    }
                    for h in admissible_hyperplanes(&q) {
                        assert!(q.vanishing_indices(h.functional()).is_empty());
                    }
                }
            }
        }
    }
}

#[test]
fn quotient_by_generators_has_lower_type() {
    for n in 2..=6usize {
        for p in [2u32, 3, 5, 7] {
            let g = build_group(n, p).unwrap();
            for k in 0..n {
                for t in IndexSet::subsets_of_size(n, k) {
                    let q = quotient_by(&g, t).unwrap();
                    assert_eq!(
                        genus_quotient(&g, q.kernel()).unwrap(),
                        genus_gfc(n - k, g.p())
                    );
                }
            }
        }
    }
}

#[test]
fn classification_round_trips() {
    for (n, p) in [(3, 3), (4, 2), (3, 5), (4, 3)] {
        let g = build_group(n, p).unwrap();
        for c in classify_hyperplanes(&g) {
            assert!(c.t.len() < n);
            let q = quotient_by(&g, c.t).unwrap();
            let lifted = lift_subgroup(&q, &c.induced).unwrap();
            assert_eq!(lifted, c.functional.kernel());
        }
    }
}

#[test]
fn prym_invariants_hold_on_every_factor() {
    for (n, p) in [
        (2, 5),
        (3, 5),
        (4, 5),
        (3, 7),
        (2, 13),
        (4, 3),
        (5, 3),
        (5, 2),
        (7, 2),
    ] {
        let r = decompose(n, p, Budget::default()).unwrap();
        let g = build_group(n, p).unwrap();
        for f in &r.factors {
            let q = quotient_by(&g, f.t).unwrap();
            let h = q.admissible(f.functional.clone()).unwrap();
            let k = pullback_kernel(&q, &h).unwrap();
            assert_eq!(
                k.order.clone() * p,
                fermat_jacobian::genus::prime_power(g.p(), q.dim())
            );
            let dim = f.dimension.to_u64().unwrap();
            let bound = fermat_jacobian::genus::prime_power(g.p(), dim as usize);
            match p {
                2 => assert_eq!(f.prym.status, PrymStatus::PrymTyurinReported),
                3 => {
                    assert_eq!(f.prym.status, PrymStatus::Inconclusive);
                    assert_eq!(k.order, bound);
                }
                _ => {
                    assert_eq!(f.prym.status, PrymStatus::NotPrymTyurin);
                    assert!(k.order < bound);
                    assert!(!multpp_constraint(dim, g.p(), &k.order));
                }
            }
        }
    }
}

#[test]
fn character_blocks_sum_to_genus() {
    for n in 2..=5usize {
        for p in [2u32, 3, 5, 7] {
            let g = build_group(n, p).unwrap();
            let classes = group_by_kernel(&g, Budget::default()).unwrap();
            let total: GenusValue = classes.iter().map(|c| &c.block_dimension).sum();
            assert_eq!(total, genus_gfc(n, g.p()), "n={n} p={p}");
            for c in classes.iter().take(5) {
                for chi in c.members() {
                    let k = chi.kernel().unwrap().kernel();
                    assert_eq!(genus_quotient(&g, &k).unwrap(), c.block_dimension);
                }
            }
        }
    }
}

#[test]
fn dimension_identity_small_sweep() {
    for n in 2..=5usize {
        for p in [2u32, 3, 5, 7] {
            let r = decompose(n, p, Budget::default()).unwrap();
            assert!(verify_dimension_identity(&r).pass, "n={n} p={p}");
            assert!(r
                .factors
                .iter()
                .all(|f| !f.dimension.is_zero() && f.t.len() + 2 <= n));
        }
    }
}
