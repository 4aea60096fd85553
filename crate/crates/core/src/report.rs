//! Serializable documents and their JSON, CSV and Markdown renderings.
//!
//! JSON is the stable machine contract (schema in `docs/report.schema.json`).
//! Objects are emitted with sorted keys and factors in report order, so the
//! output is byte-identical for identical input.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::characters::{group_by_kernel, KernelClass};
use crate::decomposition::{decompose_group, DecompositionReport, IdentityCheck};
use crate::error::{Error, Result};
use crate::genus::{genus_gfc, GenusValue};
use crate::group::FermatGroup;
use crate::prym::PrymStatus;
use crate::verify::{report_identities, PairResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub n: usize,
    pub p: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub t: Vec<usize>,
    pub t_bitmask: u64,
    /// Canonical functional on E_T, comma-joined residues.
    pub functional: String,
    /// Canonical functional on E cutting out the preimage of H.
    pub lifted: String,
    pub dimension: GenusValue,
    pub kernel_order: GenusValue,
    pub prym_status: PrymStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub t_bitmask: u64,
    pub functional: String,
    pub status: PrymStatus,
    pub exponent: Option<u64>,
    pub multpp: bool,
    pub obstructed_covers: u64,
    pub rationale: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityRow {
    pub dimension: u64,
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub t: usize,
    pub count: u64,
}

/// The decomposition of J(X_(n,p)) with its checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub parameters: Parameters,
    pub genus: GenusValue,
    pub total_dimension: GenusValue,
    pub factors: Vec<FactorRecord>,
    pub multiplicity_table: Vec<MultiplicityRow>,
    pub identities: Vec<IdentityCheck>,
    pub verdicts: Vec<VerdictRecord>,
    pub census: Vec<CensusRow>,
}

impl ReportDocument {
    pub fn from_report(report: &DecompositionReport, identities: Vec<IdentityCheck>) -> Self {
        let factors = report
            .factors
            .iter()
            .map(|f| FactorRecord {
                t: f.t.indices(),
                t_bitmask: f.t.bits(),
                functional: f.functional.to_string(),
                lifted: f.lifted.to_string(),
                dimension: f.dimension.clone(),
                kernel_order: GenusValue::new(f.kernel_order.clone()),
                prym_status: f.prym.status,
            })
            .collect();
        let verdicts = report
            .factors
            .iter()
            .map(|f| VerdictRecord {
                t_bitmask: f.t.bits(),
                functional: f.functional.to_string(),
                status: f.prym.status,
                exponent: f.prym.exponent,
                multpp: f.prym.multpp,
                obstructed_covers: f.prym.obstructed_covers,
                rationale: f.prym.rationale.clone(),
            })
            .collect();
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            parameters: Parameters {
                n: report.n,
                p: report.p.get(),
            },
            genus: report.genus.clone(),
            total_dimension: report.total_dimension.clone(),
            factors,
            multiplicity_table: report
                .multiplicity_table
                .iter()
                .map(|(&dimension, &count)| MultiplicityRow { dimension, count })
                .collect(),
            identities,
            verdicts,
            census: report
                .hyperplane_census
                .iter()
                .map(|(&t, &count)| CensusRow { t, count })
                .collect(),
        }
    }

    /// Decomposes and checks (n, p) in one step.
    pub fn build(group: &FermatGroup, budget: Budget) -> Result<Self> {
        let report = decompose_group(group, budget)?;
        let identities = report_identities(group, &report)?;
        Ok(ReportDocument::from_report(&report, identities))
    }

    pub fn all_identities_pass(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        to_sorted_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Flat factor table: `T_bitmask,functional,dimension,kernel_order,prym_status`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record([
            "T_bitmask",
            "functional",
            "dimension",
            "kernel_order",
            "prym_status",
        ])
        .map_err(ser)?;
        for f in &self.factors {
            w.write_record([
                f.t_bitmask.to_string(),
                f.functional.clone(),
                f.dimension.to_string(),
                f.kernel_order.to_string(),
                f.prym_status.to_string(),
            ])
            .map_err(ser)?;
        }
        finish_csv(w)
    }

    pub fn to_markdown(&self) -> String {
        let Parameters { n, p } = self.parameters;
        let mut s = String::new();
        let _ = writeln!(s, "# Decomposition of J(X_({n},{p}))\n");
        let _ = writeln!(
            s,
            "genus {}, {} factors, total dimension {}\n",
            self.genus,
            self.factors.len(),
            self.total_dimension
        );
        s.push_str(
            "| T | T_bitmask | functional | lifted | dimension | kernel_order | prym_status |\n",
        );
        s.push_str("|---|---|---|---|---|---|---|\n");
        for f in &self.factors {
            let _ = writeln!(
                s,
                "| {} | {} | ({}) | ({}) | {} | {} | {} |",
                format_set(&f.t),
                f.t_bitmask,
                f.functional,
                f.lifted,
                f.dimension,
                f.kernel_order,
                f.prym_status
            );
        }
        s.push_str("\n## Multiplicities\n\n| dimension | count |\n|---|---|\n");
        for row in &self.multiplicity_table {
            let _ = writeln!(s, "| {} | {} |", row.dimension, row.count);
        }
        s.push_str("\n## Hyperplane census\n\n| t | count |\n|---|---|\n");
        for row in &self.census {
            let _ = writeln!(s, "| {} | {} |", row.t, row.count);
        }
        s.push('\n');
        s.push_str(&identities_markdown(&self.identities));
        s
    }

    /// Verdict table as CSV.
    pub fn verdicts_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record([
            "T_bitmask",
            "functional",
            "status",
            "exponent",
            "multpp",
            "obstructed_covers",
            "rationale",
        ])
        .map_err(ser)?;
        for v in &self.verdicts {
            w.write_record([
                v.t_bitmask.to_string(),
                v.functional.clone(),
                v.status.to_string(),
                v.exponent.map(|e| e.to_string()).unwrap_or_default(),
                v.multpp.to_string(),
                v.obstructed_covers.to_string(),
                v.rationale.clone(),
            ])
            .map_err(ser)?;
        }
        finish_csv(w)
    }

    pub fn verdicts_markdown(&self) -> String {
        let Parameters { n, p } = self.parameters;
        let mut s = String::new();
        let _ = writeln!(s, "# Prym-Tyurin verdicts for X_({n},{p})\n");
        s.push_str("| T_bitmask | functional | status | exponent | multpp | rationale |\n");
        s.push_str("|---|---|---|---|---|---|\n");
        for v in &self.verdicts {
            let _ = writeln!(
                s,
                "| {} | ({}) | {} | {} | {} | {} |",
                v.t_bitmask,
                v.functional,
                v.status,
                v.exponent
                    .map(|e| e.to_string())
                    .unwrap_or_else(|| "-".into()),
                v.multpp,
                md_cell(&v.rationale)
            );
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub kernel: String,
    pub members: usize,
    pub block_dimension: GenusValue,
}

/// Characters of E grouped by kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDocument {
    pub schema_version: u32,
    pub parameters: Parameters,
    pub characters: u64,
    pub classes: Vec<ClassRecord>,
    pub block_dimension_sum: GenusValue,
    pub genus: GenusValue,
}

impl CharacterDocument {
    pub fn build(group: &FermatGroup, budget: Budget) -> Result<Self> {
        let classes = group_by_kernel(group, budget)?;
        Ok(CharacterDocument::from_classes(group, &classes))
    }

    pub fn from_classes(group: &FermatGroup, classes: &[KernelClass]) -> Self {
        let block_dimension_sum = classes.iter().map(|c| &c.block_dimension).sum();
        CharacterDocument {
            schema_version: SCHEMA_VERSION,
            parameters: Parameters {
                n: group.n(),
                p: group.p().get(),
            },
            characters: classes.iter().map(|c| c.member_count as u64).sum::<u64>() + 1,
            classes: classes
                .iter()
                .map(|c| ClassRecord {
                    kernel: c.kernel.to_string(),
                    members: c.member_count,
                    block_dimension: c.block_dimension.clone(),
                })
                .collect(),
            block_dimension_sum,
            genus: genus_gfc(group.n(), group.p()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_sorted_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(["kernel", "members", "block_dimension"])
            .map_err(ser)?;
        for c in &self.classes {
            w.write_record([
                c.kernel.clone(),
                c.members.to_string(),
                c.block_dimension.to_string(),
            ])
            .map_err(ser)?;
        }
        finish_csv(w)
    }

    pub fn to_markdown(&self) -> String {
        let Parameters { n, p } = self.parameters;
        let mut s = String::new();
        let _ = writeln!(s, "# Characters of E_({n},{p}) by kernel\n");
        let _ = writeln!(
            s,
            "{} characters, {} kernel classes, block dimension sum {} (genus {})\n",
            self.characters,
            self.classes.len(),
            self.block_dimension_sum,
            self.genus
        );
        s.push_str("| kernel | members | block_dimension |\n|---|---|---|\n");
        for c in &self.classes {
            let _ = writeln!(
                s,
                "| ({}) | {} | {} |",
                c.kernel, c.members, c.block_dimension
            );
        }
        s
    }
}

/// Outcome of a verification sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub schema_version: u32,
    pub results: Vec<PairResult>,
    pub pass: bool,
}

impl VerifyDocument {
    pub fn new(results: Vec<PairResult>) -> Self {
        let pass = results.iter().all(|r| r.pass());
        VerifyDocument {
            schema_version: SCHEMA_VERSION,
            results,
            pass,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_sorted_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(["n", "p", "identity", "lhs", "rhs", "pass"])
            .map_err(ser)?;
        for r in &self.results {
            for i in &r.identities {
                w.write_record([
                    r.n.to_string(),
                    r.p.to_string(),
                    i.name.clone(),
                    i.lhs.to_string(),
                    i.rhs.to_string(),
                    i.pass.to_string(),
                ])
                .map_err(ser)?;
            }
        }
        finish_csv(w)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from("# Verification\n\n| n | p | identities | characters | result |\n|---|---|---|---|---|\n");
        for r in &self.results {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                r.n,
                r.p,
                r.identities.len(),
                if r.characters_checked {
                    "checked"
                } else {
                    "skipped"
                },
                if r.pass() { "pass" } else { "FAIL" }
            );
        }
        for r in &self.results {
            for i in r.failures() {
                let _ = writeln!(
                    s,
                    "\nFAIL (n={}, p={}) {}: {} != {}",
                    r.n, r.p, i.name, i.lhs, i.rhs
                );
            }
        }
        let _ = writeln!(s, "\noverall: {}", if self.pass { "pass" } else { "FAIL" });
        s
    }
}

fn identities_markdown(identities: &[IdentityCheck]) -> String {
    let mut s =
        String::from("## Identities\n\n| identity | lhs | rhs | pass |\n|---|---|---|---|\n");
    for i in identities {
        let _ = writeln!(s, "| {} | {} | {} | {} |", i.name, i.lhs, i.rhs, i.pass);
    }
    s
}

fn md_cell(text: &str) -> String {
    text.replace('|', "\\|")
}

fn format_set(t: &[usize]) -> String {
    let inner: Vec<String> = t.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

// serde_json::Value keeps object keys in a BTreeMap, so this sorts them.
fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Serialization(e.to_string()))?;
    let mut s =
        serde_json::to_string_pretty(&v).map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn doc(n: usize, p: u32) -> ReportDocument {
        ReportDocument::build(&build_group(n, p).unwrap(), Budget::default()).unwrap()
    }

    #[test]
    fn csv_rows() {
        let csv = doc(2, 5).to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "T_bitmask,functional,dimension,kernel_order,prym_status"
        );
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,\"1,1\",2,5,NotPrymTyurin");
    }

    #[test]
    fn markdown_rows() {
        let md = doc(5, 2).to_markdown();
        let rows = md
            .lines()
            .take_while(|l| !l.starts_with("## "))
            .filter(|l| l.starts_with("| {"))
            .count();
        assert_eq!(rows, 16);
    }

    #[test]
    fn verdict_markdown_has_fixed_column_count() {
        for (n, p) in [(2, 5), (4, 3), (5, 2)] {
            let md = doc(n, p).verdicts_markdown();
            for line in md.lines().filter(|l| l.starts_with("| ")) {
                let unescaped = line.matches('|').count() - line.matches("\\|").count();
                assert_eq!(unescaped, 7, "{line}");
            }
        }
    }

    #[test]
    fn json_round_trip_and_sorted_keys() {
        let d = doc(3, 3);
        let text = d.to_json().unwrap();
        assert_eq!(ReportDocument::from_json(&text).unwrap(), d);
        assert_eq!(text, doc(3, 3).to_json().unwrap());
        let census = text.find("\"census\"").unwrap();
        let factors = text.find("\"factors\"").unwrap();
        let version = text.find("\"schema_version\"").unwrap();
        assert!(census < factors && factors < version);
        assert!(d.all_identities_pass());
    }

    #[test]
    fn character_document() {
        let g = build_group(2, 5).unwrap();
        let c = CharacterDocument::build(&g, Budget::default()).unwrap();
        assert_eq!(c.classes.len(), 6);
        assert_eq!(c.characters, 25);
        assert_eq!(c.block_dimension_sum, 6);
        let mut dims: Vec<u64> = c
            .classes
            .iter()
            .map(|k| k.block_dimension.to_u64().unwrap())
            .collect();
        dims.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(dims, [2, 2, 2, 0, 0, 0]);
    }
}
