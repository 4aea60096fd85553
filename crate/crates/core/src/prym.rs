//! Pullback kernels and Prym-Tyurin status of the decomposition factors.
//!
//! For a factor indexed by (T, H) with `m = n - |T|`, the cover X_T -> X_T/H
//! is étale with group H elementary abelian of order p^(m-1), so the pullback
//! on Jacobians has kernel isomorphic to H. If the pulled-back principal
//! polarization were a multiple of a principal one, the kernel order would
//! have to be p^g or p^(2g), `g = (m-1)(p-1)/2`. For p >= 5 the kernel is
//! strictly smaller than p^g, which rules the factor out; for p = 3 it equals
//! p^g and nothing is decided.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::genus::{factor_dimension, prime_power, GenusValue};
use crate::group::{AdmissibleSubgroup, Quotient};

/// Kernel of the pullback `J(X_T/H) -> J(X_T)`: elementary abelian of rank `m - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDescriptor {
    pub order: BigUint,
    pub rank: usize,
    pub exponent: Prime,
}

/// Kernel of the pullback along X_T -> X_T/H. Rejects H with fixed points.
pub fn pullback_kernel(q: &Quotient<'_>, h: &AdmissibleSubgroup) -> Result<KernelDescriptor> {
    if h.t() != q.t() || h.functional().dim() != q.dim() {
        return Err(Error::LengthMismatch {
            expected: q.dim(),
            got: h.functional().dim(),
        });
    }
    if let Some(&i) = q.vanishing_indices(h.functional()).indices().first() {
        return Err(Error::NotEtale(i));
    }
    // H has index p in E_T, which has order p^m.
    let rank = q.dim() - 1;
    Ok(KernelDescriptor {
        order: prime_power(q.group().p(), rank),
        rank,
        exponent: q.group().p(),
    })
}

/// Necessary condition for an isogeny with kernel of this order to pull a
/// principal polarization back to a multiple of a principal one.
pub fn multpp_constraint(g: u64, p: Prime, kernel_order: &BigUint) -> bool {
    let g = g as usize;
    *kernel_order == prime_power(p, g) || *kernel_order == prime_power(p, 2 * g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrymStatus {
    /// Ruled out: kernel order below p^g (p >= 5).
    NotPrymTyurin,
    /// Kernel order equals p^g (p = 3); the obstruction does not apply.
    Inconclusive,
    /// Humbert-Edge factor; known Prym-Tyurin of exponent 2^(n-3), not re-derived here.
    PrymTyurinReported,
}

impl PrymStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PrymStatus::NotPrymTyurin => "NotPrymTyurin",
            PrymStatus::Inconclusive => "Inconclusive",
            PrymStatus::PrymTyurinReported => "PrymTyurinReported",
        }
    }
}

impl std::fmt::Display for PrymStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymVerdict {
    pub status: PrymStatus,
    /// Prym-Tyurin exponent, only for p = 2.
    pub exponent: Option<u64>,
    pub dimension: GenusValue,
    pub kernel_order: GenusValue,
    /// Outcome of the order test `|ker| in {p^g, p^2g}`.
    pub multpp: bool,
    /// Number of intermediate covers X_T' (T' a subset of T) the obstruction
    /// applies to; the inequality does not depend on T'. Zero unless p >= 5.
    pub obstructed_covers: u64,
    pub rationale: String,
}

/// Prym-Tyurin status of a factor with `|T| = t` in the decomposition of X_(n,p).
pub fn prym_verdict(n: usize, p: Prime, t: usize) -> Result<PrymVerdict> {
    if n < 2 {
        return Err(Error::RankTooSmall { n, min: 2 });
    }
    let dim = factor_dimension(n, t, p)?;
    if dim.is_zero() {
        return Err(Error::NoFactor { n, t, p: p.get() });
    }
    let g = dim.to_u64().expect("factor dimensions are small");
    let rank = n - t - 1;
    let order = prime_power(p, rank);
    let multpp = multpp_constraint(g, p, &order);
    let bound = prime_power(p, g as usize);
    let q = p.get();
    let verdict = match q {
        2 => {
            let exponent = 1u64 << (n - 3);
            PrymVerdict {
                status: PrymStatus::PrymTyurinReported,
                exponent: Some(exponent),
                dimension: dim,
                kernel_order: GenusValue::new(order),
                multpp,
                obstructed_covers: 0,
                rationale: format!(
                    "Humbert-Edge factor: known Prym-Tyurin variety of exponent 2^{} = {exponent}; \
                     kernel 2^{rank} = 2^(2g) is consistent",
                    n - 3
                ),
            }
        }
        3 => PrymVerdict {
            status: PrymStatus::Inconclusive,
            exponent: None,
            dimension: dim,
            kernel_order: GenusValue::new(order),
            multpp,
            obstructed_covers: 0,
            rationale: format!(
                "|H| = 3^{rank} equals 3^g with g = {g}; the kernel-order obstruction does not apply"
            ),
        },
        _ => {
            debug_assert!(order < bound && !multpp);
            PrymVerdict {
                status: PrymStatus::NotPrymTyurin,
                exponent: None,
                dimension: dim,
                kernel_order: GenusValue::new(order),
                multpp,
                obstructed_covers: 1u64 << t,
                rationale: format!(
                    "étale cover with |H| = {q}^{rank} < {q}^{g} = p^g: a principal polarization \
                     cannot pull back to a multiple of a principal one"
                ),
            }
        }
    };
    Ok(verdict)
}
