use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DatasetRecord, Origin};
use crate::cnl::PropositionKind;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub source: usize,
    pub generated: usize,
    pub rephrased: usize,
    pub total: usize,
}

impl CategoryCounts {
    fn add(&mut self, origin: Origin) {
        match origin {
            Origin::Source => self.source += 1,
            Origin::Generated => self.generated += 1,
            Origin::Rephrased => self.rephrased += 1,
        }
        self.total += 1;
    }
}

/// Per-category record counts of a dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub categories: BTreeMap<PropositionKind, CategoryCounts>,
    pub grand: CategoryCounts,
    /// Paraphrases per original, when the dataset was expanded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rephrase_k: Option<usize>,
}

impl DatasetManifest {
    /// Counts `records`; every category gets a row, possibly all zero.
    pub fn from_records(records: &[DatasetRecord], rephrase_k: Option<usize>) -> Self {
        let mut categories: BTreeMap<_, _> = PropositionKind::ALL
            .iter()
            .map(|k| (*k, CategoryCounts::default()))
            .collect();
        let mut grand = CategoryCounts::default();
        for r in records {
            categories.entry(r.category).or_default().add(r.origin);
            grand.add(r.origin);
        }
        DatasetManifest {
            categories,
            grand,
            rephrase_k,
        }
    }
}

impl fmt::Display for DatasetManifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<18} {:>8} {:>10} {:>10} {:>8}",
            "Category", "Source", "Generated", "Rephrased", "Total"
        )?;
        let rows = self
            .categories
            .iter()
            .map(|(k, c)| (k.table_label(), c))
            .chain(std::iter::once(("Total", &self.grand)));
        for (label, c) in rows {
            writeln!(
                f,
                "{:<18} {:>8} {:>10} {:>10} {:>8}",
                label, c.source, c.generated, c.rephrased, c.total
            )?;
        }
        Ok(())
    }
}

/// A broken identity found by [`audit_manifest`]. `category` is `None` for
/// the grand-total row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestViolation {
    pub category: Option<PropositionKind>,
    pub identity: String,
    pub expected: usize,
    pub actual: usize,
}

impl fmt::Display for ManifestViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = self.category.map_or("grand total", |k| k.label());
        write!(
            f,
            "{row}: {} (expected {}, found {})",
            self.identity, self.expected, self.actual
        )
    }
}

/// Checks the arithmetic of a manifest: every row sums to its total, the
/// grand row is the column-wise sum of the category rows, and with
/// `rephrase_k = Some(k)` each row has `rephrased = k * (source + generated)`.
pub fn audit_manifest(m: &DatasetManifest) -> Result<(), Vec<ManifestViolation>> {
    let mut out = Vec::new();
    let mut check = |category, identity: &str, expected, actual| {
        if expected != actual {
            out.push(ManifestViolation {
                category,
                identity: identity.to_string(),
                expected,
                actual,
            });
        }
    };
    let mut sum = CategoryCounts::default();
    let rows = m
        .categories
        .iter()
        .map(|(k, c)| (Some(*k), c))
        .chain(std::iter::once((None, &m.grand)));
    for (category, c) in rows {
        check(
            category,
            "total = source + generated + rephrased",
            c.source + c.generated + c.rephrased,
            c.total,
        );
        if let Some(k) = m.rephrase_k {
            check(
                category,
                "rephrased = k * (source + generated)",
                k * (c.source + c.generated),
                c.rephrased,
            );
        }
        if category.is_some() {
            sum.source += c.source;
            sum.generated += c.generated;
            sum.rephrased += c.rephrased;
            sum.total += c.total;
        }
    }
    check(
        None,
        "grand source = sum of sources",
        sum.source,
        m.grand.source,
    );
    check(
        None,
        "grand generated = sum of generated",
        sum.generated,
        m.grand.generated,
    );
    check(
        None,
        "grand rephrased = sum of rephrased",
        sum.rephrased,
        m.grand.rephrased,
    );
    check(
        None,
        "grand total = sum of totals",
        sum.total,
        m.grand.total,
    );
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(category: PropositionKind, origin: Origin) -> DatasetRecord {
        DatasetRecord {
            id: 0,
            nl: String::new(),
            cnl: String::new(),
            category,
            origin,
            parent_id: None,
        }
    }

    #[test]
    fn counts_and_audits() {
        let records = [
            rec(PropositionKind::WeakConstraint, Origin::Source),
            rec(PropositionKind::WeakConstraint, Origin::Generated),
            rec(PropositionKind::WeakConstraint, Origin::Rephrased),
            rec(PropositionKind::WeakConstraint, Origin::Rephrased),
        ];
        let m = DatasetManifest::from_records(&records, Some(1));
        let w = m.categories[&PropositionKind::WeakConstraint];
        assert_eq!((w.source, w.generated, w.rephrased, w.total), (1, 1, 2, 4));
        assert_eq!(m.categories.len(), 7);
        assert_eq!(audit_manifest(&m), Ok(()));
    }

    #[test]
    fn perturbed_total_is_reported() {
        let mut m = DatasetManifest::from_records(
            &[rec(PropositionKind::DefinitionWhen, Origin::Source)],
            None,
        );
        m.categories
            .get_mut(&PropositionKind::DefinitionWhen)
            .unwrap()
            .total += 1;
        let v = audit_manifest(&m).unwrap_err();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].category, Some(PropositionKind::DefinitionWhen));
        assert_eq!((v[0].expected, v[0].actual), (1, 2));
        assert_eq!(v[1].category, None);
    }

    #[test]
    fn k_fold_identity() {
        let records = [rec(PropositionKind::QuantifiedChoice, Origin::Generated)];
        let m = DatasetManifest::from_records(&records, Some(5));
        let v = audit_manifest(&m).unwrap_err();
        assert!(v.iter().all(|x| x.identity.starts_with("rephrased")));
        assert_eq!((v[0].expected, v[0].actual), (5, 0));
    }
}
