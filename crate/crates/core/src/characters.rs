//! Characters of E and the grouping of the tangent-space weight spaces by
//! kernel.
//!
//! A character is stored by its exponents `a_i` with `chi(sigma_i) = zeta^a_i`
//! for i = 1..n; the value on sigma_0 is forced to `-(a_1 + ... + a_n)`. Roots
//! of unity never appear numerically. The kernel of chi is the kernel of the
//! functional `a`, so characters fall into classes of p - 1 nonzero multiples,
//! one class per hyperplane. The weight spaces of one class add up to the
//! H-invariant tangent directions, whose dimension is the genus of X/H.

use rayon::prelude::*;

use crate::budget::{saturating_pow, Budget};
use crate::error::Result;
use crate::fp::{FpVector, Functional, Prime};
use crate::genus::{genus_quotient, GenusValue};
use crate::group::FermatGroup;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterVector {
    a: FpVector,
}

impl CharacterVector {
    pub fn new(a: FpVector) -> Self {
        CharacterVector { a }
    }

    /// Exponents on sigma_1..sigma_n.
    #[inline]
    pub fn exponents(&self) -> &FpVector {
        &self.a
    }

    /// Exponent on sigma_0.
    pub fn a0(&self) -> u8 {
        let p = self.a.modulus();
        self.a.entries().iter().fold(0u8, |acc, &x| p.sub(acc, x))
    }

    /// Exponent of `chi(v)` for `v` in E.
    pub fn exponent_at(&self, v: &FpVector) -> Result<u8> {
        self.a.dot(v)
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_zero()
    }

    /// The kernel as a canonical functional; `None` for the trivial character.
    pub fn kernel(&self) -> Option<Functional> {
        Functional::new(self.a.clone()).ok().map(|f| f.canonical())
    }
}

/// Walks F_p^n in lexicographic order.
struct Odometer {
    current: Option<Vec<u8>>,
    p: Prime,
}

impl Iterator for Odometer {
    type Item = FpVector;

    fn next(&mut self) -> Option<FpVector> {
        let cur = self.current.as_mut()?;
        let out = FpVector::from_raw(cur.clone(), self.p);
        let top = self.p.get() as u8;
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.current = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < top {
                break;
            }
            cur[k] = 0;
        }
        Some(out)
    }
}

fn characters(group: &FermatGroup) -> impl Iterator<Item = CharacterVector> {
    Odometer {
        current: Some(vec![0; group.n()]),
        p: group.p(),
    }
    .map(CharacterVector::new)
}

/// All p^n characters, trivial first, in lexicographic order of exponents.
pub fn enumerate_characters(group: &FermatGroup, budget: Budget) -> Result<Vec<CharacterVector>> {
    budget.check(saturating_pow(group.p().get(), group.n()))?;
    Ok(characters(group).collect())
}

/// The nontrivial characters sharing one kernel H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelClass {
    pub kernel: Functional,
    pub member_count: usize,
    /// Dimension of the sum of the weight spaces V_chi with ker chi = H.
    pub block_dimension: GenusValue,
}

impl KernelClass {
    /// The p - 1 nonzero multiples of the kernel functional.
    pub fn members(&self) -> Vec<CharacterVector> {
        let p = self.kernel.modulus().get() as u8;
        (1..p)
            .map(|c| CharacterVector::new(self.kernel.coefficients().scale(c)))
            .collect()
    }
}

/// Groups the nontrivial characters by kernel, sorted by kernel functional.
/// The trivial character has zero weight space and forms no class.
pub fn group_by_kernel(group: &FermatGroup, budget: Budget) -> Result<Vec<KernelClass>> {
    let total = saturating_pow(group.p().get(), group.n());
    budget.check(total)?;
    let n = group.n();
    let p = group.p();
    let q = p.get() as u64;
    // Characters are indexed by their base-p code with a_1 most significant,
    // so increasing codes are lexicographic order. Each nonzero character is
    // tallied under the code of its canonical (leading 1) multiple.
    let mut counts = vec![0u32; total as usize];
    let mut digits = vec![0u8; n];
    for code in 1..total as u64 {
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = (c % q) as u8;
            c /= q;
        }
        let lead = digits.iter().position(|&d| d != 0).expect("nonzero code");
        let inv = p.inv(digits[lead]);
        let canonical = digits
            .iter()
            .fold(0u64, |acc, &d| acc * q + p.mul(d, inv) as u64);
        counts[canonical as usize] += 1;
    }
    let classes: Vec<(Functional, usize)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(code, &c)| {
            let mut e = vec![0u8; n];
            let mut rest = code as u64;
            for d in e.iter_mut().rev() {
                *d = (rest % q) as u8;
                rest /= q;
            }
            let f = Functional::new(FpVector::from_raw(e, p)).expect("nonzero code");
            (f, c as usize)
        })
        .collect();
    classes
        .into_par_iter()
        .map(|(kernel, member_count)| {
            let block_dimension = genus_quotient(group, &kernel.kernel())?;
            Ok(KernelClass {
                kernel,
                member_count,
                block_dimension,
            })
        })
        .collect()
}

/// Block dimension of `class`, recomputed from the quotient genus.
pub fn weight_block_dimension(group: &FermatGroup, class: &KernelClass) -> Result<GenusValue> {
    genus_quotient(group, &class.kernel.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus::genus_gfc;
    use crate::group::build_group;

    #[test]
    fn character_counts() {
        let g = build_group(2, 5).unwrap();
        let chars = enumerate_characters(&g, Budget::default()).unwrap();
        assert_eq!(chars.len(), 25);
        assert!(chars[0].is_trivial());
        assert_eq!(chars[0].a0(), 0);
        assert_eq!(
            enumerate_characters(&build_group(3, 2).unwrap(), Budget::default())
                .unwrap()
                .len(),
            8
        );
    }

    #[test]
    fn a0_is_value_on_sigma0() {
        let g = build_group(3, 5).unwrap();
        for chi in enumerate_characters(&g, Budget::default()).unwrap() {
            assert_eq!(chi.a0(), chi.exponent_at(g.generator(0)).unwrap());
            for i in 1..=3 {
                assert_eq!(
                    chi.exponent_at(g.generator(i)).unwrap(),
                    chi.exponents().get(i - 1)
                );
            }
        }
    }

    #[test]
    fn class_sizes() {
        for (n, p, classes, size) in [(2, 5, 6, 4), (3, 2, 7, 1), (3, 3, 13, 2)] {
            let g = build_group(n, p).unwrap();
            let cls = group_by_kernel(&g, Budget::default()).unwrap();
            assert_eq!(cls.len(), classes);
            assert!(cls.iter().all(|c| c.member_count == size));
            assert!(cls.iter().all(|c| c.members().len() == size));
        }
    }

    #[test]
    fn block_dimensions_n2_p5() {
        let g = build_group(2, 5).unwrap();
        let cls = group_by_kernel(&g, Budget::default()).unwrap();
        let dims: Vec<u64> = cls
            .iter()
            .map(|c| c.block_dimension.to_u64().unwrap())
            .collect();
        // kernels 0,1 / 1,0 / 1,1 / 1,2 / 1,3 / 1,4
        assert_eq!(dims, [0, 0, 2, 2, 2, 0]);
        let total: GenusValue = cls.iter().map(|c| &c.block_dimension).sum();
        assert_eq!(total, genus_gfc(2, g.p()));
    }

    #[test]
    fn humbert_edge_elliptic_block() {
        let g = build_group(3, 2).unwrap();
        let cls = group_by_kernel(&g, Budget::default()).unwrap();
        let c = cls
            .iter()
            .find(|c| c.kernel.to_string() == "1,1,1")
            .unwrap();
        assert_eq!(c.block_dimension, 1);
        assert_eq!(weight_block_dimension(&g, c).unwrap(), 1);
        let total: GenusValue = cls.iter().map(|c| &c.block_dimension).sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn grouping_matches_brute_force() {
        use std::collections::BTreeMap;
        for (n, p) in [(2, 7), (3, 3), (4, 2), (3, 5)] {
            let g = build_group(n, p).unwrap();
            let mut brute: BTreeMap<Functional, usize> = BTreeMap::new();
            for chi in enumerate_characters(&g, Budget::default()).unwrap() {
                if let Some(k) = chi.kernel() {
                    *brute.entry(k).or_default() += 1;
                }
            }
            let grouped: Vec<(Functional, usize)> = group_by_kernel(&g, Budget::default())
                .unwrap()
                .into_iter()
                .map(|c| (c.kernel, c.member_count))
                .collect();
            assert_eq!(grouped, brute.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn members_share_kernel() {
        let g = build_group(3, 5).unwrap();
        for c in group_by_kernel(&g, Budget::default()).unwrap() {
            for chi in c.members() {
                assert_eq!(chi.kernel().unwrap(), c.kernel);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = build_group(6, 13).unwrap();
        let small = Budget {
            limit: 1000,
            force: false,
        };
        assert!(enumerate_characters(&g, small).is_err());
        assert!(group_by_kernel(&g, small).is_err());
    }
}
