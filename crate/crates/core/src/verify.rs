//! Exact identity checks run by `verify` and recorded in every report.

use num_bigint::BigUint;

use crate::budget::{saturating_pow, Budget};
use crate::characters::group_by_kernel;
use crate::decomposition::{
    census_formula, count_admissible, multiplicity_formula, verify_dimension_identity,
    DecompositionReport, IdentityCheck,
};
use crate::error::Result;
use crate::fp::{hyperplane_count, Prime};
use crate::genus::{binomial, genus_gfc, genus_quotient, prime_power, GenusValue};
use crate::group::{quotient_by, FermatGroup};
use crate::prym::multpp_constraint;

fn natural(x: impl Into<BigUint>) -> GenusValue {
    GenusValue::new(x.into())
}

/// `sum_t C(n+1, t) N(n-t, p) = (p^n - 1)/(p - 1)` with N counted by brute force.
pub fn partition_identity(n: usize, p: Prime) -> IdentityCheck {
    let lhs: BigUint = (0..n)
        .map(|t| binomial(n + 1, t) * BigUint::from(count_admissible(n - t, p)))
        .sum();
    IdentityCheck::new(
        "hyperplane_partition",
        natural(lhs),
        natural(hyperplane_count(n, p)),
    )
}

/// Identities that only need the decomposition report and the group.
pub fn report_identities(
    group: &FermatGroup,
    report: &DecompositionReport,
) -> Result<Vec<IdentityCheck>> {
    let n = report.n;
    let p = report.p;
    let mut out = vec![verify_dimension_identity(report), partition_identity(n, p)];

    let census_total: u64 = report.hyperplane_census.values().sum();
    out.push(IdentityCheck::new(
        "census_total",
        natural(census_total),
        natural(hyperplane_count(n, p)),
    ));
    let predicted = census_formula(n, p);
    for (t, &count) in &report.hyperplane_census {
        out.push(IdentityCheck::new(
            format!("census[t={t}]"),
            natural(count),
            natural(predicted[t].clone()),
        ));
    }

    let formula = multiplicity_formula(n, p);
    let dims: std::collections::BTreeSet<u64> = report
        .multiplicity_table
        .keys()
        .chain(formula.keys())
        .copied()
        .collect();
    for d in dims {
        out.push(IdentityCheck::new(
            format!("multiplicity[dim={d}]"),
            natural(report.multiplicity_table.get(&d).copied().unwrap_or(0)),
            natural(formula.get(&d).copied().unwrap_or(0)),
        ));
    }

    // Riemann-Hurwitz on the lifted subgroup against the closed-form dimension,
    // and pullback kernel order against the cardinality of ker(functional).
    let mut rh_agree = 0u64;
    let mut kernel_agree = 0u64;
    let mut prym_consistent = 0u64;
    for f in &report.factors {
        if genus_quotient(group, &f.lifted.kernel())? == f.dimension {
            rh_agree += 1;
        }
        let cardinality = prime_power(p, f.functional.kernel().rank());
        let m = n - f.t.len();
        if f.kernel_order == cardinality && f.kernel_order == prime_power(p, m - 1) {
            kernel_agree += 1;
        }
        let g = f.dimension.to_u64().expect("small");
        if multpp_constraint(g, p, &f.kernel_order) == f.prym.multpp {
            prym_consistent += 1;
        }
    }
    let total = natural(report.factors.len() as u64);
    out.push(IdentityCheck::new(
        "riemann_hurwitz_factors",
        natural(rh_agree),
        total.clone(),
    ));
    out.push(IdentityCheck::new(
        "kernel_order_factors",
        natural(kernel_agree),
        total.clone(),
    ));
    out.push(IdentityCheck::new(
        "multpp_factors",
        natural(prym_consistent),
        total,
    ));

    // Boundary cases of Riemann-Hurwitz.
    out.push(IdentityCheck::new(
        "genus_quotient[trivial]",
        genus_quotient(group, &crate::fp::SubspaceBasis::zero(n, p))?,
        report.genus.clone(),
    ));
    out.push(IdentityCheck::new(
        "genus_quotient[E]",
        genus_quotient(group, &crate::fp::SubspaceBasis::whole(n, p))?,
        GenusValue::zero(),
    ));
    for i in 0..=n {
        let h = group.span_of(crate::group::IndexSet::from_indices(&[i]))?;
        out.push(IdentityCheck::new(
            format!("genus_quotient[sigma_{i}]"),
            genus_quotient(group, &h)?,
            genus_gfc(n - 1, p),
        ));
    }
    // Every T with |T| <= n - 1: quotient by <T> has type (n - |T|, p).
    let mut span_agree = 0u64;
    let mut span_total = 0u64;
    for k in 0..n {
        for t in crate::group::IndexSet::subsets_of_size(n, k) {
            let q = quotient_by(group, t)?;
            span_total += 1;
            if genus_quotient(group, q.kernel())? == genus_gfc(n - k, p) {
                span_agree += 1;
            }
        }
    }
    out.push(IdentityCheck::new(
        "genus_quotient[<T>]",
        natural(span_agree),
        natural(span_total),
    ));
    Ok(out)
}

/// Kernel-class identities: class count, class sizes, and block dimensions
/// summing to the genus.
pub fn character_identities(group: &FermatGroup, budget: Budget) -> Result<Vec<IdentityCheck>> {
    let n = group.n();
    let p = group.p();
    let classes = group_by_kernel(group, budget)?;
    let sized = classes
        .iter()
        .filter(|c| c.member_count == p.get() as usize - 1)
        .count() as u64;
    let block_sum: GenusValue = classes.iter().map(|c| &c.block_dimension).sum();
    Ok(vec![
        IdentityCheck::new(
            "character_classes",
            natural(classes.len() as u64),
            natural(hyperplane_count(n, p)),
        ),
        IdentityCheck::new(
            "character_class_sizes",
            natural(sized),
            natural(classes.len() as u64),
        ),
        IdentityCheck::new(
            "character_members",
            natural(classes.iter().map(|c| c.member_count as u64).sum::<u64>() + 1),
            natural(saturating_pow(p.get(), n)),
        ),
        IdentityCheck::new("character_block_sum", block_sum, genus_gfc(n, p)),
    ])
}

/// Outcome of the full suite for one (n, p).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PairResult {
    pub n: usize,
    pub p: u32,
    pub identities: Vec<IdentityCheck>,
    /// Character identities are skipped when p^n exceeds the budget.
    pub characters_checked: bool,
}

impl PairResult {
    pub fn pass(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.identities.iter().filter(|i| !i.pass)
    }
}

/// Runs every identity for (n, p).
pub fn verify_pair(n: usize, p: Prime, budget: Budget) -> Result<PairResult> {
    let group = FermatGroup::new(n, p)?;
    let report = crate::decomposition::decompose_group(&group, budget)?;
    let mut identities = report_identities(&group, &report)?;
    let characters_checked = budget.check(saturating_pow(p.get(), n)).is_ok();
    if characters_checked {
        identities.extend(character_identities(&group, budget)?);
    }
    Ok(PairResult {
        n,
        p: p.get(),
        identities,
        characters_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_small_cases() {
        for (n, p) in [(2, 2), (2, 5), (3, 3), (4, 2), (3, 7)] {
            let r = verify_pair(n, Prime::new(p).unwrap(), Budget::default()).unwrap();
            assert!(r.pass(), "{n},{p}: {:?}", r.failures().collect::<Vec<_>>());
            assert!(r.characters_checked);
        }
    }

    #[test]
    fn characters_skipped_over_budget() {
        let budget = Budget {
            limit: 20,
            force: false,
        };
        // 13 hyperplanes fit, 27 characters do not.
        let r = verify_pair(3, Prime::new(3).unwrap(), budget).unwrap();
        assert!(!r.characters_checked);
        assert!(r.pass());
    }

    #[test]
    fn genus_3_7() {
        let r = verify_pair(3, Prime::new(7).unwrap(), Budget::default()).unwrap();
        let dim = r.identities.iter().find(|i| i.name == "dimension").unwrap();
        assert_eq!(dim.rhs, 246);
        assert!(dim.pass);
    }
}
