//! The generalized Fermat group E = (Z/pZ)^n with its distinguished
//! generators, its quotients E_T = E / <T>, and the index-p subgroups that
//! index the decomposition.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{nullspace, quotient_map, rref_basis, FpVector, Functional, Prime, SubspaceBasis};

/// Largest rank supported; generator subsets are `u64` bitmasks over `0..=n`.
pub const MAX_RANK: usize = 62;

/// A subset of the generator indices `{0, ..., n}`.
///
/// Ordered by size first and then by bitmask value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        IndexSet(indices.iter().fold(0u64, |acc, &i| acc | (1 << i)))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Sorted member indices.
    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// Largest member, if any.
    fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// All subsets of `{0, ..., n}` of size `k`, in increasing bitmask order.
    pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = IndexSet> {
        let universe = n + 1;
        // Gosper's hack walks same-popcount bitmasks in increasing order.
        let first: Option<u64> = if k > universe {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some((1u64 << k) - 1)
        };
        let limit = 1u64 << universe;
        std::iter::successors(first, move |&x| {
            if x == 0 {
                return None;
            }
            let c = x & x.wrapping_neg();
            let r = x + c;
            let next = (((r ^ x) >> 2) / c) | r;
            (next < limit).then_some(next)
        })
        .map(IndexSet)
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), self.0).cmp(&(other.len(), other.0))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// E_(n,p) = F_p^n with generators sigma_1..sigma_n the standard basis and
/// sigma_0 = -(sigma_1 + ... + sigma_n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatGroup {
    n: usize,
    p: Prime,
    generators: Vec<FpVector>,
}

/// Builds E_(n,p). Requires `2 <= n <= MAX_RANK` and `p` prime.
pub fn build_group(n: usize, p: u32) -> Result<FermatGroup> {
    FermatGroup::new(n, Prime::new(p)?)
}

impl FermatGroup {
    pub fn new(n: usize, p: Prime) -> Result<Self> {
        if n < 2 {
            return Err(Error::RankTooSmall { n, min: 2 });
        }
        if n > MAX_RANK {
            return Err(Error::RankTooLarge(n));
        }
        let mut generators = Vec::with_capacity(n + 1);
        let minus_one = p.get() - 1;
        generators.push(FpVector::new(&vec![minus_one; n], p)?);
        generators.extend((0..n).map(|i| FpVector::unit(n, i, p)));
        Ok(FermatGroup { n, p, generators })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn generators(&self) -> &[FpVector] {
        &self.generators
    }

    #[inline]
    pub fn generator(&self, i: usize) -> &FpVector {
        &self.generators[i]
    }

    /// The set of all generator indices `{0, ..., n}`.
    pub fn all_indices(&self) -> IndexSet {
        IndexSet((1u64 << (self.n + 1)) - 1)
    }

    fn check_indices(&self, t: IndexSet) -> Result<()> {
        if t.max_index().is_some_and(|i| i > self.n) {
            return Err(Error::IndexOutOfRange(t.indices(), self.n));
        }
        Ok(())
    }

    /// The subgroup `<sigma_i : i in T>`.
    pub fn span_of(&self, t: IndexSet) -> Result<SubspaceBasis> {
        self.check_indices(t)?;
        let gens: Vec<FpVector> = t
            .indices()
            .into_iter()
            .map(|i| self.generators[i].clone())
            .collect();
        rref_basis(&gens, self.n, self.p)
    }

    /// `{i : sigma_i in h}`.
    pub fn generators_in(&self, h: &SubspaceBasis) -> IndexSet {
        let mut t = IndexSet::EMPTY;
        for (i, g) in self.generators.iter().enumerate() {
            if h.contains_unchecked(g) {
                t.insert(i);
            }
        }
        t
    }
}

/// The quotient E_T = E / <T> presented as F_p^m, `m = n - |T|`.
///
/// `projection` holds the m coordinate functionals of the quotient map and
/// `section` a preimage in E of each standard basis vector of F_p^m.
#[derive(Clone, Debug)]
pub struct Quotient<'g> {
    group: &'g FermatGroup,
    t: IndexSet,
    kernel: SubspaceBasis,
    projection: Vec<FpVector>,
    section: Vec<FpVector>,
    images: Vec<FpVector>,
}

/// Forms E_T. Only `|T| <= n - 1` is accepted: larger T leaves no curve quotient.
pub fn quotient_by(group: &FermatGroup, t: IndexSet) -> Result<Quotient<'_>> {
    group.check_indices(t)?;
    if t.len() >= group.n() {
        return Err(Error::QuotientTooLarge {
            size: t.len(),
            max: group.n() - 1,
        });
    }
    let n = group.n();
    let p = group.p();
    let kernel = group.span_of(t)?;
    let q = quotient_map(n, &kernel)?;
    let m = q.target_dim();
    debug_assert_eq!(m, n - t.len());
    let columns: Vec<FpVector> = (0..n)
        .map(|j| {
            q.apply(&FpVector::unit(n, j, p))
                .expect("target dimension is positive")
        })
        .collect();
    let projection = (0..m)
        .map(|k| FpVector::from_raw(columns.iter().map(|c| c.get(k)).collect(), p))
        .collect();
    let section = q
        .free_columns()
        .iter()
        .map(|&c| FpVector::unit(n, c, p))
        .collect();
    let mut quotient = Quotient {
        group,
        t,
        kernel,
        projection,
        section,
        images: Vec::new(),
    };
    quotient.images = group
        .generators()
        .iter()
        .map(|g| quotient.project(g))
        .collect();
    Ok(quotient)
}

impl<'g> Quotient<'g> {
    #[inline]
    pub fn group(&self) -> &'g FermatGroup {
        self.group
    }

    #[inline]
    pub fn t(&self) -> IndexSet {
        self.t
    }

    /// Dimension m of E_T over F_p.
    #[inline]
    pub fn dim(&self) -> usize {
        self.projection.len()
    }

    /// `<T>` as a subspace of E.
    #[inline]
    pub fn kernel(&self) -> &SubspaceBasis {
        &self.kernel
    }

    /// The list S_T: image of every sigma_i, zero for `i in T`.
    #[inline]
    pub fn images(&self) -> &[FpVector] {
        &self.images
    }

    pub fn project(&self, v: &FpVector) -> FpVector {
        FpVector::from_raw(
            self.projection
                .iter()
                .map(|row| row.dot_unchecked(v))
                .collect(),
            self.group.p(),
        )
    }

    /// Quotients further by the images of `extra`, giving E / <T u extra>.
    pub fn refine(&self, extra: IndexSet) -> Result<Quotient<'g>> {
        self.group.check_indices(extra)?;
        let t = self.t.union(extra);
        if t.len() >= self.group.n() {
            return Err(Error::QuotientTooLarge {
                size: t.len(),
                max: self.group.n() - 1,
            });
        }
        let p = self.group.p();
        let m = self.dim();
        let gens: Vec<FpVector> = extra
            .indices()
            .into_iter()
            .map(|i| self.images[i].clone())
            .collect();
        let sub = rref_basis(&gens, m, p)?;
        let q = quotient_map(m, &sub)?;
        // Compose coordinate functionals: row'_l = sum_k q(e_k)_l * row_k.
        let columns: Vec<FpVector> = (0..m)
            .map(|k| {
                q.apply(&FpVector::unit(m, k, p))
                    .expect("positive dimension")
            })
            .collect();
        let m2 = q.target_dim();
        let n = self.group.n();
        let projection: Vec<FpVector> = (0..m2)
            .map(|l| {
                let mut acc = vec![0u8; n];
                for (k, row) in self.projection.iter().enumerate() {
                    let c = columns[k].get(l);
                    if c != 0 {
                        for (a, &b) in acc.iter_mut().zip(row.entries()) {
                            *a = p.add(*a, p.mul(c, b));
                        }
                    }
                }
                FpVector::from_raw(acc, p)
            })
            .collect();
        let section = q
            .free_columns()
            .iter()
            .map(|&c| self.section[c].clone())
            .collect();
        let mut quotient = Quotient {
            group: self.group,
            t,
            kernel: nullspace(&projection, n, p)?,
            projection,
            section,
            images: Vec::new(),
        };
        quotient.images = self
            .group
            .generators()
            .iter()
            .map(|g| quotient.project(g))
            .collect();
        Ok(quotient)
    }

    /// Checks that `functional` (on F_p^m) vanishes on no image `sigma_i`, `i` not in T.
    pub fn admissible(&self, functional: Functional) -> Result<AdmissibleSubgroup> {
        if functional.dim() != self.dim() || functional.modulus() != self.group.p() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: functional.dim(),
            });
        }
        let functional = functional.canonical();
        if let Some(i) = self.vanishing_indices(&functional).indices().first() {
            return Err(Error::NotAdmissible(*i));
        }
        Ok(AdmissibleSubgroup {
            t: self.t,
            functional,
        })
    }

    /// `{i not in T : phi(image_i) = 0}`, i.e. the indices of H meeting S_T.
    pub fn vanishing_indices(&self, phi: &Functional) -> IndexSet {
        let mut out = IndexSet::EMPTY;
        for (i, img) in self.images.iter().enumerate() {
            if !self.t.contains(i) && phi.eval_unchecked(img) == 0 {
                out.insert(i);
            }
        }
        out
    }

    /// The functional `phi . projection` on E.
    pub fn pull_back(&self, phi: &Functional) -> Functional {
        let p = self.group.p();
        let n = self.group.n();
        let mut acc = vec![0u8; n];
        for (row, &c) in self.projection.iter().zip(phi.coefficients().entries()) {
            if c != 0 {
                for (a, &b) in acc.iter_mut().zip(row.entries()) {
                    *a = p.add(*a, p.mul(c, b));
                }
            }
        }
        Functional::new(FpVector::from_raw(acc, p)).expect("projection is surjective")
    }

    /// Factors a functional on E through E_T. `None` if it does not vanish on `<T>`.
    pub fn descend(&self, psi: &Functional) -> Option<Functional> {
        if psi.dim() != self.group.n() {
            return None;
        }
        if self
            .t
            .indices()
            .iter()
            .any(|&i| psi.eval_unchecked(self.group.generator(i)) != 0)
        {
            return None;
        }
        let coeffs = self.section.iter().map(|s| psi.eval_unchecked(s)).collect();
        Functional::new(FpVector::from_raw(coeffs, self.group.p())).ok()
    }
}

/// An index-p subgroup H of E_T with H meeting S_T trivially, held as the
/// canonical functional whose kernel it is.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleSubgroup {
    t: IndexSet,
    functional: Functional,
}

impl AdmissibleSubgroup {
    #[inline]
    pub fn t(&self) -> IndexSet {
        self.t
    }

    #[inline]
    pub fn functional(&self) -> &Functional {
        &self.functional
    }

    /// `|H| = p^(m-1)`.
    pub fn order(&self) -> u128 {
        (self.functional.modulus().get() as u128).pow(self.functional.dim() as u32 - 1)
    }
}

/// The admissible subgroups of E_T, sorted by functional.
pub fn admissible_hyperplanes(q: &Quotient<'_>) -> Vec<AdmissibleSubgroup> {
    crate::fp::Hyperplanes::new(q.dim(), q.group().p())
        .filter(|phi| q.vanishing_indices(phi).is_empty())
        .map(|functional| AdmissibleSubgroup {
            t: q.t(),
            functional,
        })
        .collect()
}

/// The subgroup of E lying over `h`: the preimage of `h` in E.
pub fn lift_subgroup(q: &Quotient<'_>, h: &AdmissibleSubgroup) -> Result<SubspaceBasis> {
    Ok(lift_functional(q, h)?.kernel())
}

/// Canonical functional on E whose kernel is the lift of `h`.
pub fn lift_functional(q: &Quotient<'_>, h: &AdmissibleSubgroup) -> Result<Functional> {
    if h.t() != q.t() {
        return Err(Error::IndexOutOfRange(h.t().indices(), q.group().n()));
    }
    if h.functional().dim() != q.dim() {
        return Err(Error::LengthMismatch {
            expected: q.dim(),
            got: h.functional().dim(),
        });
    }
    Ok(q.pull_back(h.functional()).canonical())
}

/// A hyperplane of E together with `T = {i : sigma_i in H}` and the
/// admissible functional it induces on E_T.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedHyperplane {
    pub functional: Functional,
    pub t: IndexSet,
    pub induced: AdmissibleSubgroup,
}

/// Classifies every hyperplane of E by the generators it contains.
///
/// Sorted by the functional on E. `|T| <= n - 1` always holds.
pub fn classify_hyperplanes(group: &FermatGroup) -> Vec<ClassifiedHyperplane> {
    let functionals: Vec<Functional> = crate::fp::Hyperplanes::new(group.n(), group.p()).collect();
    let tagged: Vec<(Functional, IndexSet)> = functionals
        .into_par_iter()
        .map(|psi| {
            let mut t = IndexSet::EMPTY;
            for (i, g) in group.generators().iter().enumerate() {
                if psi.eval_unchecked(g) == 0 {
                    t.insert(i);
                }
            }
            (psi, t)
        })
        .collect();
    let mut distinct: Vec<IndexSet> = tagged.iter().map(|(_, t)| *t).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let quotients: BTreeMap<IndexSet, Quotient<'_>> = distinct
        .into_par_iter()
        .map(|t| {
            let q =
                quotient_by(group, t).expect("a proper subgroup contains at most n-1 generators");
            (t, q)
        })
        .collect();
    tagged
        .into_par_iter()
        .map(|(psi, t)| {
            let q = &quotients[&t];
            let phi = q
                .descend(&psi)
                .expect("psi vanishes on <T> by construction")
                .canonical();
            debug_assert!(q.vanishing_indices(&phi).is_empty());
            ClassifiedHyperplane {
                functional: psi,
                t,
                induced: AdmissibleSubgroup { t, functional: phi },
            }
        })
        .collect()
}
