//! Brute-force oracles that work with explicit element sets instead of
//! echelon forms and functionals.

use std::collections::BTreeSet;

use fermat_jacobian::{
    admissible_hyperplanes, build_group, classify_hyperplanes, decompose, genus_gfc,
    genus_quotient, quotient_by, rref_basis, Budget, FpVector, IndexSet, Prime,
};

type Element = Vec<u32>;

fn all_elements(n: usize, p: u32) -> Vec<Element> {
    let total = (p as usize).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u32; n];
            for slot in v.iter_mut().rev() {
                *slot = (code % p as usize) as u32;
                code /= p as usize;
            }
            v
        })
        .collect()
}

fn add(a: &Element, b: &Element, p: u32) -> Element {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

/// Additive closure of `gens` by repeated addition.
fn closure(gens: &[Element], n: usize, p: u32) -> BTreeSet<Element> {
    let mut set: BTreeSet<Element> = BTreeSet::new();
    set.insert(vec![0; n]);
    loop {
        let mut grew = false;
        let current: Vec<Element> = set.iter().cloned().collect();
        for x in &current {
            for g in gens {
                if set.insert(add(x, g, p)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return set;
        }
    }
}

fn sigma(n: usize, p: u32, i: usize) -> Element {
    if i == 0 {
        vec![p - 1; n]
    } else {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        v
    }
}

/// Every subgroup of index p, as an explicit set.
fn index_p_subgroups(n: usize, p: u32) -> Vec<BTreeSet<Element>> {
    let target = (p as usize).pow(n as u32 - 1);
    let elems = all_elements(n, p);
    let mut found: BTreeSet<BTreeSet<Element>> = BTreeSet::new();
    // Every index-p subgroup of F_p^n is generated by n - 1 elements.
    fn choose(
        elems: &[Element],
        start: usize,
        k: usize,
        acc: &mut Vec<Element>,
        out: &mut Vec<Vec<Element>>,
    ) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..elems.len() {
            acc.push(elems[i].clone());
            choose(elems, i + 1, k - 1, acc, out);
            acc.pop();
        }
    }
    let mut tuples = Vec::new();
    choose(&elems[1..], 0, n - 1, &mut Vec::new(), &mut tuples);
    for gens in tuples {
        let h = closure(&gens, n, p);
        if h.len() == target {
            found.insert(h);
        }
    }
    found.into_iter().collect()
}

/// Riemann-Hurwitz with stabilizers counted element by element.
fn oracle_genus(n: usize, p: u32, h: &BTreeSet<Element>) -> i64 {
    let pi = p as i64;
    let g_x = (2 + pi.pow(n as u32 - 1) * ((n as i64 - 1) * (pi - 1) - 2)) / 2;
    let mut ramification = 0i64;
    for i in 0..=n {
        let s = sigma(n, p, i);
        let cyclic = closure(std::slice::from_ref(&s), n, p);
        let d = cyclic.intersection(h).count() as i64;
        ramification += pi.pow(n as u32 - 1) * (d - 1);
    }
    let euler = (2 * g_x - 2 - ramification) / h.len() as i64;
    (euler + 2) / 2
}

#[test]
fn explicit_subgroup_counts_match_hyperplane_enumeration() {
    for (n, p) in [(2, 5), (3, 2), (3, 3), (2, 7)] {
        let explicit = index_p_subgroups(n, p);
        let g = build_group(n, p).unwrap();
        assert_eq!(
            explicit.len(),
            classify_hyperplanes(&g).len(),
            "n={n} p={p}"
        );
    }
}

#[test]
fn decomposition_matches_explicit_oracle() {
    for (n, p) in [(2, 5), (3, 3), (3, 2), (2, 7), (4, 2), (3, 5)] {
        let mut oracle_dims: Vec<i64> = Vec::new();
        let mut oracle_census = vec![0u64; n];
        for h in index_p_subgroups(n, p) {
            let t = (0..=n).filter(|&i| h.contains(&sigma(n, p, i))).count();
            oracle_census[t] += 1;
            let genus = oracle_genus(n, p, &h);
            if n - t >= 2 && genus > 0 {
                oracle_dims.push(genus);
            }
        }
        let report = decompose(n, p, Budget::default()).unwrap();
        let mut dims: Vec<i64> = report
            .factors
            .iter()
            .map(|f| f.dimension.to_u64().unwrap() as i64)
            .collect();
        dims.sort_unstable();
        oracle_dims.sort_unstable();
        assert_eq!(dims, oracle_dims, "n={n} p={p}");
        let census: Vec<u64> = report.hyperplane_census.values().copied().collect();
        assert_eq!(census, oracle_census, "n={n} p={p}");
        assert_eq!(
            oracle_dims.iter().sum::<i64>() as u64,
            genus_gfc(n, Prime::new(p).unwrap()).to_u64().unwrap()
        );
    }
}

#[test]
fn riemann_hurwitz_matches_explicit_oracle_on_every_hyperplane() {
    for (n, p) in [(3, 3), (2, 5), (4, 2)] {
        let g = build_group(n, p).unwrap();
        let prime = Prime::new(p).unwrap();
        for h in index_p_subgroups(n, p) {
            let gens: Vec<FpVector> = h.iter().map(|e| FpVector::new(e, prime).unwrap()).collect();
            let basis = rref_basis(&gens, n, prime).unwrap();
            let ours = genus_quotient(&g, &basis).unwrap().to_u64().unwrap() as i64;
            assert_eq!(ours, oracle_genus(n, p, &h));
        }
    }
}

#[test]
fn admissible_sets_match_explicit_intersection() {
    // n = 2, p = 5, T empty: the subgroups avoiding every sigma_i.
    let n = 2;
    let p = 5;
    let mut avoiding = 0;
    for h in index_p_subgroups(n, p) {
        if (0..=n).all(|i| !h.contains(&sigma(n, p, i))) {
            avoiding += 1;
        }
    }
    let g = build_group(n, p).unwrap();
    let q = quotient_by(&g, IndexSet::EMPTY).unwrap();
    assert_eq!(admissible_hyperplanes(&q).len(), avoiding);
    assert_eq!(avoiding, 3);
}

#[test]
fn quotient_map_kernel_by_enumeration() {
    let prime = Prime::new(3).unwrap();
    let g = build_group(3, 3).unwrap();
    for k in 0..3 {
        for t in IndexSet::subsets_of_size(3, k) {
            let q = quotient_by(&g, t).unwrap();
            let gens: Vec<Element> = t.indices().into_iter().map(|i| sigma(3, 3, i)).collect();
            let span = closure(&gens, 3, 3);
            for e in all_elements(3, 3) {
                let v = FpVector::new(&e, prime).unwrap();
                assert_eq!(q.project(&v).is_zero(), span.contains(&e));
            }
        }
    }
}
