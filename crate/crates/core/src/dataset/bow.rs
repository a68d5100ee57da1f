use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::placeholder::SlotKind;
use super::DatasetError;
use crate::cnl::RESERVED;

/// Replacement vocabulary, one list per placeholder category.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BagOfWords {
    pub pids: Vec<String>,
    pub nouns: Vec<String>,
    pub verbs: Vec<String>,
    pub colors: Vec<String>,
}

const FILES: [(&str, SlotKind); 4] = [
    ("pids.txt", SlotKind::Pid),
    ("nouns.txt", SlotKind::Noun),
    ("verbs.txt", SlotKind::Verb),
    ("colors.txt", SlotKind::Color),
];

/// One entry per non-empty line; `#` starts a comment line.
fn parse_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect()
}

impl BagOfWords {
    pub fn from_lists(pids: &str, nouns: &str, verbs: &str, colors: &str) -> Self {
        BagOfWords {
            pids: parse_list(pids),
            nouns: parse_list(nouns),
            verbs: parse_list(verbs),
            colors: parse_list(colors),
        }
    }

    /// Reads `pids.txt`, `nouns.txt`, `verbs.txt` and `colors.txt` from `dir`.
    pub fn load(dir: &Path) -> Result<Self, DatasetError> {
        let mut bow = BagOfWords::default();
        for (file, kind) in FILES {
            let path = dir.join(file);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
            *bow.list_mut(kind) = parse_list(&text);
        }
        Ok(bow)
    }

    pub fn list(&self, kind: SlotKind) -> &[String] {
        match kind {
            SlotKind::Pid => &self.pids,
            SlotKind::Noun => &self.nouns,
            SlotKind::Verb => &self.verbs,
            SlotKind::Color => &self.colors,
            SlotKind::Num | SlotKind::Var => &[],
        }
    }

    fn list_mut(&mut self, kind: SlotKind) -> &mut Vec<String> {
        match kind {
            SlotKind::Pid => &mut self.pids,
            SlotKind::Noun => &mut self.nouns,
            SlotKind::Verb => &mut self.verbs,
            _ => &mut self.colors,
        }
    }

    /// Every list must be non-empty, duplicate-free and made of lowercase
    /// words (PIDs may have several words). Lists are pairwise disjoint and
    /// contain no reserved CNL word.
    pub fn validate(&self) -> Result<(), DatasetError> {
        let mut owner = std::collections::BTreeMap::new();
        for (_, kind) in FILES {
            let list = self.list(kind);
            if list.is_empty() {
                return Err(DatasetError::EmptyBagCategory {
                    category: kind.label().to_string(),
                });
            }
            let mut seen = BTreeSet::new();
            for w in list {
                if !seen.insert(w) {
                    return Err(DatasetError::InvalidBag(format!(
                        "duplicate {} entry '{w}'",
                        kind.label()
                    )));
                }
                let ok = w.split(' ').all(|part| {
                    part.starts_with(|c: char| c.is_ascii_lowercase())
                        && part
                            .chars()
                            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
                });
                if !ok || (kind != SlotKind::Pid && w.contains(' ')) {
                    return Err(DatasetError::InvalidBag(format!(
                        "malformed {} entry '{w}'",
                        kind.label()
                    )));
                }
                if w.split(' ').any(|part| RESERVED.contains(&part)) {
                    return Err(DatasetError::InvalidBag(format!(
                        "{} entry '{w}' is a reserved word",
                        kind.label()
                    )));
                }
                if let Some(other) = owner.insert(w.as_str(), kind) {
                    return Err(DatasetError::InvalidBag(format!(
                        "'{w}' is listed as both {} and {}",
                        other.label(),
                        kind.label()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_validates() {
        let bow = BagOfWords::from_lists(
            "first vtx\n# comment\n\nsecond vtx",
            "node",
            "edge\nlink",
            "red",
        );
        assert_eq!(bow.pids, ["first vtx", "second vtx"]);
        assert!(bow.validate().is_ok());
        let dup = BagOfWords::from_lists("p", "node\nnode", "edge", "red");
        assert!(matches!(dup.validate(), Err(DatasetError::InvalidBag(_))));
        let empty = BagOfWords::from_lists("p", "node", "", "red");
        assert!(matches!(
            empty.validate(),
            Err(DatasetError::EmptyBagCategory { .. })
        ));
        let upper = BagOfWords::from_lists("p", "Node", "edge", "red");
        assert!(upper.validate().is_err());
        let reserved = BagOfWords::from_lists("p", "node\nthere", "edge", "red");
        assert!(reserved.validate().is_err());
        let shared = BagOfWords::from_lists("p", "node", "node", "red");
        assert!(shared.validate().is_err());
    }
}
