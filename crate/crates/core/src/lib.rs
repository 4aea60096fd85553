//! Isogeny decomposition of the Jacobian of a generalized Fermat curve
//! X_(n,p), p prime.
//!
//! The group E = (Z/pZ)^n acts on X_(n,p) with distinguished generators
//! sigma_0, ..., sigma_n (sigma_0 + ... + sigma_n = 0). The Jacobian splits up
//! to isogeny into pullbacks of Jacobians of the quotients X_T / H, one for
//! every subset T of generators with n - |T| >= 2 and every index-p subgroup
//! H of E_T = E / <T> that contains none of the images of the sigma_i. Each
//! such factor has dimension (n - |T| - 1)(p - 1)/2.
//!
//! ```
//! use fermat_jacobian::{decompose, Budget};
//!
//! let report = decompose(3, 3, Budget::default()).unwrap();
//! assert_eq!(report.factors.len(), 7);
//! assert_eq!(report.total_dimension, report.genus);
//! ```

pub mod budget;
pub mod characters;
pub mod decomposition;
pub mod error;
pub mod fp;
pub mod genus;
pub mod group;
pub mod prym;
pub mod report;
pub mod verify;

pub use budget::Budget;
pub use characters::{
    enumerate_characters, group_by_kernel, weight_block_dimension, CharacterVector, KernelClass,
};
pub use decomposition::{
    admissible_count_formula, count_admissible, decompose, decompose_group, humbert_edge_summary,
    multiplicity_formula, multiplicity_table, verify_dimension_identity, DecompositionFactor,
    DecompositionReport, HumbertEdgeSummary, IdentityCheck,
};
pub use error::{Error, Result};
pub use fp::{
    enumerate_hyperplanes, quotient_map, rref_basis, span_contains, FpVector, Functional, Prime,
    QuotientMap, SubspaceBasis,
};
pub use genus::{factor_dimension, genus_gfc, genus_quotient, is_etale, GenusValue};
pub use group::{
    admissible_hyperplanes, build_group, classify_hyperplanes, lift_subgroup, quotient_by,
    AdmissibleSubgroup, ClassifiedHyperplane, FermatGroup, IndexSet, Quotient,
};
pub use prym::{
    multpp_constraint, prym_verdict, pullback_kernel, KernelDescriptor, PrymStatus, PrymVerdict,
};
pub use report::{CharacterDocument, ReportDocument, VerifyDocument};
pub use verify::{verify_pair, PairResult};
