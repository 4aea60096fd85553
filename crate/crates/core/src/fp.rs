//! Exact linear algebra over the prime field F_p.
//!
//! Subspaces are always held in reduced row-echelon form, which is the unique
//! canonical form of a subspace: two subspaces are equal iff their bases are
//! equal. Index-p subgroups (hyperplanes) are held as nonzero functionals
//! normalized so that the first nonzero coefficient is 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted. Residues are stored as `u8`.
pub const MAX_PRIME: u32 = 97;

/// A validated prime modulus `p <= MAX_PRIME`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn add(self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.0) as u8
    }

    #[inline]
    pub(crate) fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.0 - b as u32) % self.0) as u8
    }

    #[inline]
    pub(crate) fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.0) as u8
    }

    #[inline]
    pub(crate) fn neg(self, a: u8) -> u8 {
        ((self.0 - a as u32) % self.0) as u8
    }

    /// Multiplicative inverse of a nonzero residue (Fermat's little theorem).
    pub(crate) fn inv(self, a: u8) -> u8 {
        debug_assert!(a != 0);
        let mut result = 1u32;
        let mut base = a as u32;
        let mut exp = self.0 - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        result as u8
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trial-division primality test.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A vector in F_p^len with residues in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    entries: Vec<u8>,
    modulus: Prime,
}

impl FpVector {
    /// Builds a vector from residues, rejecting entries `>= p` and empty input.
    pub fn new(entries: &[u32], modulus: Prime) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        let mut out = Vec::with_capacity(entries.len());
        for &value in entries {
            if value >= modulus.get() {
                return Err(Error::ResidueOutOfRange {
                    value,
                    modulus: modulus.get(),
                });
            }
            out.push(value as u8);
        }
        Ok(FpVector {
            entries: out,
            modulus,
        })
    }

    /// Builds a vector from arbitrary integers, reducing each modulo p.
    pub fn from_integers(entries: &[i64], modulus: Prime) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        let p = modulus.get() as i64;
        Ok(FpVector {
            entries: entries.iter().map(|&x| x.rem_euclid(p) as u8).collect(),
            modulus,
        })
    }

    pub(crate) fn from_raw(entries: Vec<u8>, modulus: Prime) -> Self {
        debug_assert!(entries.iter().all(|&e| (e as u32) < modulus.get()));
        FpVector { entries, modulus }
    }

    pub fn zero(len: usize, modulus: Prime) -> Self {
        FpVector {
            entries: vec![0; len],
            modulus,
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize, modulus: Prime) -> Self {
        let mut v = FpVector::zero(len, modulus);
        v.entries[i] = 1;
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.entries[i]
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Index of the first nonzero entry.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.iter().position(|&e| e != 0)
    }

    fn check_compatible(&self, other: &FpVector) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus.get(),
                got: other.modulus.get(),
            });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }

    /// Standard bilinear pairing `sum_i self_i * other_i`.
    pub fn dot(&self, other: &FpVector) -> Result<u8> {
        self.check_compatible(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &FpVector) -> u8 {
        let p = self.modulus.get();
        let mut acc = 0u32;
        for (&a, &b) in self.entries.iter().zip(&other.entries) {
            acc = (acc + a as u32 * b as u32) % p;
        }
        acc as u8
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.check_compatible(other)?;
        let p = self.modulus;
        Ok(FpVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
            modulus: p,
        })
    }

    pub fn neg(&self) -> FpVector {
        let p = self.modulus;
        FpVector {
            entries: self.entries.iter().map(|&a| p.neg(a)).collect(),
            modulus: p,
        }
    }

    pub fn scale(&self, c: u8) -> FpVector {
        let p = self.modulus;
        let c = (c as u32 % p.get()) as u8;
        FpVector {
            entries: self.entries.iter().map(|&a| p.mul(a, c)).collect(),
            modulus: p,
        }
    }

    /// `self -= c * other`, in place. Caller guarantees compatibility.
    fn sub_scaled_assign(&mut self, other: &FpVector, c: u8) {
        let p = self.modulus;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = p.sub(*a, p.mul(c, b));
        }
    }
}

impl fmt::Display for FpVector {
    /// Comma-joined residues, e.g. `1,0,4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A subspace of F_p^n held by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    rows: Vec<FpVector>,
    pivots: Vec<usize>,
    ambient_dim: usize,
    modulus: Prime,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize, modulus: Prime) -> Self {
        SubspaceBasis {
            rows: Vec::new(),
            pivots: Vec::new(),
            ambient_dim,
            modulus,
        }
    }

    pub fn whole(ambient_dim: usize, modulus: Prime) -> Self {
        SubspaceBasis {
            rows: (0..ambient_dim)
                .map(|i| FpVector::unit(ambient_dim, i, modulus))
                .collect(),
            pivots: (0..ambient_dim).collect(),
            ambient_dim,
            modulus,
        }
    }

    #[inline]
    pub fn rows(&self) -> &[FpVector] {
        &self.rows
    }

    /// Pivot columns, strictly increasing.
    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    /// Number of elements, `p^rank`.
    pub fn order(&self) -> u128 {
        (self.modulus.get() as u128).pow(self.rank() as u32)
    }

    /// Columns that are not pivots, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    fn check_vector(&self, v: &FpVector) -> Result<()> {
        if v.modulus() != self.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus.get(),
                got: v.modulus().get(),
            });
        }
        if v.len() != self.ambient_dim {
            return Err(Error::LengthMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Reduces `v` against the basis, clearing every pivot coordinate.
    /// The result is zero iff `v` lies in the span.
    pub(crate) fn reduce(&self, v: &FpVector) -> FpVector {
        let mut r = v.clone();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let coeff = r.entries[c];
            if coeff != 0 {
                r.sub_scaled_assign(row, coeff);
            }
        }
        r
    }

    pub(crate) fn contains_unchecked(&self, v: &FpVector) -> bool {
        if self.rows.len() == self.ambient_dim {
            return true;
        }
        let mut r = v.entries.clone();
        let p = self.modulus;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let coeff = r[c];
            if coeff != 0 {
                for (a, &b) in r.iter_mut().zip(&row.entries).skip(c) {
                    *a = p.sub(*a, p.mul(coeff, b));
                }
            }
        }
        r.iter().all(|&e| e == 0)
    }
}

/// Returns the reduced row-echelon basis of the span of `vectors` in F_p^ambient_dim.
pub fn rref_basis(vectors: &[FpVector], ambient_dim: usize, p: Prime) -> Result<SubspaceBasis> {
    for v in vectors {
        if v.modulus() != p {
            return Err(Error::ModulusMismatch {
                expected: p.get(),
                got: v.modulus().get(),
            });
        }
        if v.len() != ambient_dim {
            return Err(Error::LengthMismatch {
                expected: ambient_dim,
                got: v.len(),
            });
        }
    }
    let mut rows: Vec<FpVector> = vectors.iter().filter(|v| !v.is_zero()).cloned().collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ambient_dim {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].entries[col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = p.inv(rows[rank].entries[col]);
        rows[rank] = rows[rank].scale(inv);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank {
                let coeff = row.entries[col];
                if coeff != 0 {
                    row.sub_scaled_assign(&pivot_row, coeff);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Ok(SubspaceBasis {
        rows,
        pivots,
        ambient_dim,
        modulus: p,
    })
}

/// Common kernel of the functionals `rows` on F_p^ambient_dim, in RREF.
pub fn nullspace(rows: &[FpVector], ambient_dim: usize, p: Prime) -> Result<SubspaceBasis> {
    let reduced = rref_basis(rows, ambient_dim, p)?;
    let pivots = reduced.pivots();
    // One kernel vector per free column f: e_f - sum_r row_r[f] e_{pivot_r}.
    let gens: Vec<FpVector> = reduced
        .free_columns()
        .into_iter()
        .map(|f| {
            let mut v = FpVector::unit(ambient_dim, f, p);
            for (row, &c) in reduced.rows().iter().zip(pivots) {
                v.entries[c] = p.neg(row.entries[f]);
            }
            v
        })
        .collect();
    rref_basis(&gens, ambient_dim, p)
}

/// Membership test `v in span(basis)`.
pub fn span_contains(basis: &SubspaceBasis, v: &FpVector) -> Result<bool> {
    basis.check_vector(v)?;
    Ok(basis.contains_unchecked(v))
}

/// The linear surjection F_p^n -> F_p^n / span(sub), identified with F_p^m
/// through the non-pivot coordinates of `sub` taken in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    sub: SubspaceBasis,
    free_columns: Vec<usize>,
}

impl QuotientMap {
    #[inline]
    pub fn source_dim(&self) -> usize {
        self.sub.ambient_dim()
    }

    #[inline]
    pub fn target_dim(&self) -> usize {
        self.free_columns.len()
    }

    #[inline]
    pub fn kernel(&self) -> &SubspaceBasis {
        &self.sub
    }

    /// Source coordinates that become the target coordinates, in order.
    #[inline]
    pub fn free_columns(&self) -> &[usize] {
        &self.free_columns
    }

    /// Image of `v`. Fails for the map onto the zero space, whose vectors
    /// have no coordinates; use [`QuotientMap::kills`] there.
    pub fn apply(&self, v: &FpVector) -> Result<FpVector> {
        self.sub.check_vector(v)?;
        if self.free_columns.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &FpVector) -> FpVector {
        let r = self.sub.reduce(v);
        FpVector::from_raw(
            self.free_columns.iter().map(|&c| r.entries[c]).collect(),
            v.modulus(),
        )
    }

    /// True iff `v` maps to zero.
    pub fn kills(&self, v: &FpVector) -> Result<bool> {
        span_contains(&self.sub, v)
    }

    /// Pulls a functional on the target back to the source: `phi . q`.
    pub fn pull_back(&self, phi: &Functional) -> Result<Functional> {
        if phi.dim() != self.target_dim() {
            return Err(Error::LengthMismatch {
                expected: self.target_dim(),
                got: phi.dim(),
            });
        }
        let p = self.sub.modulus();
        let coeffs = (0..self.source_dim())
            .map(|j| {
                let image = self.apply_unchecked(&FpVector::unit(self.source_dim(), j, p));
                image.dot_unchecked(phi.coefficients())
            })
            .collect();
        Functional::new(FpVector::from_raw(coeffs, p))
    }

    /// Pushes a functional that vanishes on the kernel down to the target.
    /// Returns `None` if `psi` does not vanish on `span(sub)`.
    pub fn push_forward(&self, psi: &Functional) -> Option<Functional> {
        if psi.dim() != self.source_dim() || self.target_dim() == 0 {
            return None;
        }
        if self
            .sub
            .rows()
            .iter()
            .any(|r| r.dot_unchecked(psi.coefficients()) != 0)
        {
            return None;
        }
        // Unit vector at a free column maps to the matching unit vector.
        let coeffs = self
            .free_columns
            .iter()
            .map(|&c| psi.coefficients().get(c))
            .collect();
        Functional::new(FpVector::from_raw(coeffs, self.sub.modulus())).ok()
    }
}

/// Builds the quotient map by `sub`. The target dimension is `n - rank(sub)`.
pub fn quotient_map(ambient_dim: usize, sub: &SubspaceBasis) -> Result<QuotientMap> {
    if sub.ambient_dim() != ambient_dim {
        return Err(Error::LengthMismatch {
            expected: ambient_dim,
            got: sub.ambient_dim(),
        });
    }
    Ok(QuotientMap {
        free_columns: sub.free_columns(),
        sub: sub.clone(),
    })
}

/// A nonzero linear functional on F_p^m; its kernel is an index-p subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functional {
    coefficients: FpVector,
}

impl Functional {
    pub fn new(coefficients: FpVector) -> Result<Self> {
        if coefficients.is_zero() {
            return Err(Error::ZeroFunctional);
        }
        Ok(Functional { coefficients })
    }

    #[inline]
    pub fn coefficients(&self) -> &FpVector {
        &self.coefficients
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.coefficients.modulus()
    }

    pub fn is_canonical(&self) -> bool {
        self.coefficients
            .leading_index()
            .is_some_and(|i| self.coefficients.get(i) == 1)
    }

    /// The representative of the same hyperplane with leading coefficient 1.
    pub fn canonical(&self) -> Functional {
        let lead = self
            .coefficients
            .leading_index()
            .expect("functional is nonzero");
        let inv = self.modulus().inv(self.coefficients.get(lead));
        Functional {
            coefficients: self.coefficients.scale(inv),
        }
    }

    pub fn eval(&self, v: &FpVector) -> Result<u8> {
        self.coefficients.dot(v)
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, v: &FpVector) -> u8 {
        self.coefficients.dot_unchecked(v)
    }

    /// RREF basis of the kernel.
    pub fn kernel(&self) -> SubspaceBasis {
        nullspace(
            std::slice::from_ref(&self.coefficients),
            self.dim(),
            self.modulus(),
        )
        .expect("single row has the functional's shape")
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.coefficients.fmt(f)
    }
}

/// Number of hyperplanes of F_p^m, `(p^m - 1) / (p - 1)`, saturating at `u128::MAX`.
pub fn hyperplane_count(m: usize, p: Prime) -> u128 {
    let p = p.get() as u128;
    let mut term = 1u128;
    let mut total = 0u128;
    for _ in 0..m {
        total = total.saturating_add(term);
        term = term.saturating_mul(p);
    }
    total
}

/// Iterates the canonical functionals on F_p^m in lexicographic order.
///
/// Vectors whose leading 1 sits further right sort first, so the iterator
/// walks lead positions from `m - 1` down to `0`, odometering the tail.
#[derive(Clone, Debug)]
pub struct Hyperplanes {
    m: usize,
    p: Prime,
    lead: Option<usize>,
    current: Vec<u8>,
}

impl Hyperplanes {
    pub fn new(m: usize, p: Prime) -> Self {
        let lead = m.checked_sub(1);
        let mut current = vec![0; m];
        if let Some(l) = lead {
            current[l] = 1;
        }
        Hyperplanes {
            m,
            p,
            lead,
            current,
        }
    }
}

impl Iterator for Hyperplanes {
    type Item = Functional;

    fn next(&mut self) -> Option<Functional> {
        let lead = self.lead?;
        let out = Functional {
            coefficients: FpVector::from_raw(self.current.clone(), self.p),
        };
        // Advance the tail odometer after `lead`.
        let p = self.p.get() as u8;
        let mut k = self.m;
        loop {
            if k == lead + 1 {
                // Tail exhausted: move the leading 1 one slot left.
                self.current.iter_mut().for_each(|e| *e = 0);
                if lead == 0 {
                    self.lead = None;
                } else {
                    self.lead = Some(lead - 1);
                    self.current[lead - 1] = 1;
                }
                break;
            }
            k -= 1;
            self.current[k] += 1;
            if self.current[k] < p {
                break;
            }
            self.current[k] = 0;
        }
        Some(out)
    }
}

/// All canonical functionals on F_p^m, sorted lexicographically. Empty for `m = 0`.
pub fn enumerate_hyperplanes(m: usize, p: Prime) -> Vec<Functional> {
    Hyperplanes::new(m, p).collect()
}
