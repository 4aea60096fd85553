//! Genus of X_(n,p) and of its quotients X_(n,p) / H for subgroups H of E.
//!
//! Ramification model: the only elements of E with fixed points are the
//! nontrivial powers of the sigma_i, and each such element fixes exactly the
//! p^(n-1) points lying over the i-th branch point of X -> P^1. For a
//! subgroup H the stabilizer of such a point is H meeting <sigma_i>, of order
//! d_i in {1, p}, so Riemann-Hurwitz for X -> X/H reads
//!
//! ```text
//! 2 g_X - 2 = |H| (2 g' - 2) + sum_i p^(n-1) (d_i - 1).
//! ```

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fp::{Prime, SubspaceBasis};
use crate::group::FermatGroup;

/// A genus or abelian-variety dimension. Exact and non-negative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusValue(BigUint);

impl GenusValue {
    pub fn new(value: BigUint) -> Self {
        GenusValue(value)
    }

    pub fn zero() -> Self {
        GenusValue(BigUint::zero())
    }

    #[inline]
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for GenusValue {
    fn from(v: u64) -> Self {
        GenusValue(BigUint::from(v))
    }
}

impl PartialEq<u64> for GenusValue {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Add for GenusValue {
    type Output = GenusValue;

    fn add(self, rhs: GenusValue) -> GenusValue {
        GenusValue(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a GenusValue> for GenusValue {
    type Output = GenusValue;

    fn add(self, rhs: &'a GenusValue) -> GenusValue {
        GenusValue(self.0 + &rhs.0)
    }
}

impl Sum for GenusValue {
    fn sum<I: Iterator<Item = GenusValue>>(iter: I) -> Self {
        iter.fold(GenusValue::zero(), Add::add)
    }
}

impl<'a> Sum<&'a GenusValue> for GenusValue {
    fn sum<I: Iterator<Item = &'a GenusValue>>(iter: I) -> Self {
        iter.fold(GenusValue::zero(), |acc, g| acc + g)
    }
}

impl fmt::Display for GenusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// JSON number when it fits in u64, decimal string otherwise.
impl Serialize for GenusValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => serializer.serialize_u64(v),
            None => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for GenusValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Small(u64),
            Big(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Small(v) => Ok(GenusValue::from(v)),
            Repr::Big(s) => s
                .parse::<BigUint>()
                .map(GenusValue)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Stabilizer orders `d_i = |H meeting <sigma_i>|` and `|H|` for a subgroup H of E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationProfile {
    pub d: Vec<u32>,
    pub subgroup_order: BigUint,
}

impl RamificationProfile {
    pub fn of(group: &FermatGroup, h: &SubspaceBasis) -> Self {
        let p = group.p().get();
        let d = group
            .generators()
            .iter()
            .map(|s| if h.contains_unchecked(s) { p } else { 1 })
            .collect();
        RamificationProfile {
            d,
            subgroup_order: BigUint::from(p).pow(h.rank() as u32),
        }
    }
}

fn pow(p: Prime, e: usize) -> BigInt {
    BigInt::from(p.get()).pow(e as u32)
}

/// Genus of a generalized Fermat curve of type (n, p):
/// `g = (2 + p^(n-1) ((n-1)(p-1) - 2)) / 2`. Defined for `n >= 1`.
pub fn genus_gfc(n: usize, p: Prime) -> GenusValue {
    if n == 0 {
        // X_(0,p) would be P^1 itself; report genus 0.
        return GenusValue::zero();
    }
    let inner: BigInt = BigInt::from((n as i64 - 1) * (p.get() as i64 - 1) - 2);
    let twice: BigInt = BigInt::from(2) + pow(p, n - 1) * inner;
    debug_assert!(!twice.is_negative() && twice.is_even());
    let half: BigInt = twice / 2;
    GenusValue(half.to_biguint().expect("genus is non-negative"))
}

/// Genus of X_(n,p) / H via Riemann-Hurwitz, for any subgroup H of E.
pub fn genus_quotient(group: &FermatGroup, h: &SubspaceBasis) -> Result<GenusValue> {
    if h.ambient_dim() != group.n() || h.modulus() != group.p() {
        return Err(Error::LengthMismatch {
            expected: group.n(),
            got: h.ambient_dim(),
        });
    }
    let profile = RamificationProfile::of(group, h);
    let ramified = profile.d.iter().filter(|&&d| d != 1).count();
    let (n, p, rank) = (group.n(), group.p(), h.rank());
    riemann_hurwitz_small(n, p.get(), rank, ramified)
        .unwrap_or_else(|| riemann_hurwitz_big(n, p, rank, ramified))
}

/// Solves the balance for g' given n, p, `rank = log_p |H|` and the number
/// of sigma_i contained in H (each contributes `p^(n-1) (p - 1)`).
fn riemann_hurwitz_big(n: usize, p: Prime, rank: usize, ramified: usize) -> Result<GenusValue> {
    let g_x = BigInt::from(genus_gfc(n, p).0);
    let fibre = pow(p, n - 1);
    let ramification: BigInt = fibre * BigInt::from(p.get() - 1) * BigInt::from(ramified);
    let balance: BigInt = BigInt::from(2) * g_x - 2 - ramification;
    let order = pow(p, rank);
    let (euler, rem) = balance.div_rem(&order);
    if !rem.is_zero() {
        return Err(Error::RiemannHurwitz(format!(
            "{balance} is not divisible by |H| = {order}"
        )));
    }
    // euler = 2g' - 2
    if euler < BigInt::from(-2) || euler.is_odd() {
        return Err(Error::RiemannHurwitz(format!(
            "2g' - 2 = {euler} is odd or below -2"
        )));
    }
    let g: BigInt = (euler + 2) / 2;
    Ok(GenusValue(g.to_biguint().expect("checked non-negative")))
}

/// The same balance in `i128`; `None` when an intermediate value overflows.
fn riemann_hurwitz_small(
    n: usize,
    p: u32,
    rank: usize,
    ramified: usize,
) -> Option<Result<GenusValue>> {
    let p = p as i128;
    let fibre = p.checked_pow(n as u32 - 1)?;
    // 2 g_X - 2 = p^(n-1) ((n-1)(p-1) - 2)
    let euler_x = fibre.checked_mul((n as i128 - 1) * (p - 1) - 2)?;
    let ramification = fibre.checked_mul(p - 1)?.checked_mul(ramified as i128)?;
    let balance = euler_x.checked_sub(ramification)?;
    let order = p.checked_pow(rank as u32)?;
    if balance % order != 0 {
        return Some(Err(Error::RiemannHurwitz(format!(
            "{balance} is not divisible by |H| = {order}"
        ))));
    }
    let euler = balance / order;
    if euler < -2 || euler % 2 != 0 {
        return Some(Err(Error::RiemannHurwitz(format!(
            "2g' - 2 = {euler} is odd or below -2"
        ))));
    }
    Some(Ok(GenusValue(BigUint::from(((euler + 2) / 2) as u128))))
}

/// Dimension `(n - t - 1)(p - 1) / 2` of a factor indexed by `|T| = t`.
///
/// Rejects `t > n - 1` and the half-integral case (p = 2 with n - t even),
/// which never carries an admissible subgroup.
pub fn factor_dimension(n: usize, t: usize, p: Prime) -> Result<GenusValue> {
    if n == 0 || t > n - 1 {
        return Err(Error::QuotientTooLarge {
            size: t,
            max: n.saturating_sub(1),
        });
    }
    let twice = (n - t - 1) as u64 * (p.get() as u64 - 1);
    if twice % 2 == 1 {
        return Err(Error::NoFactor { n, t, p: p.get() });
    }
    Ok(GenusValue::from(twice / 2))
}

/// True iff H contains no sigma_i, i.e. H acts without fixed points.
pub fn is_etale(group: &FermatGroup, h: &SubspaceBasis) -> bool {
    group.generators().iter().all(|s| !h.contains_unchecked(s))
}

/// `p^e` as an unbounded integer.
pub fn prime_power(p: Prime, e: usize) -> BigUint {
    BigUint::from(p.get()).pow(e as u32)
}

/// Binomial coefficient C(n, k) as an unbounded integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
