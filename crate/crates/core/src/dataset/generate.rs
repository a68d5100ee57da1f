use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bow::BagOfWords;
use super::manifest::DatasetManifest;
use super::placeholder::{
    join_choice, render, Assignment, Placeholder, Side, Slot, SlotKind, TemplatePair,
};
use super::{DatasetError, DatasetRecord, Origin};
use crate::cnl::{check_syntax, PropositionKind, SyntaxVerdict};

/// Attempts per record before [`generate_balanced`] gives up on a template.
pub const DEFAULT_RETRY_CAP: usize = 50;

/// Requested number of generated records per category.
pub type Targets = BTreeMap<PropositionKind, usize>;

/// Variable names drawn for `var_N`; `A` and `I` read as words in English.
const VARIABLES: &[&str] = &[
    "B", "C", "D", "E", "F", "G", "H", "J", "K", "L", "M", "N", "P", "Q", "R", "S", "T", "U", "V",
    "W", "X", "Y", "Z",
];

/// Fills `template` with seeded random draws.
pub fn instantiate(
    template: &TemplatePair,
    bow: &BagOfWords,
    seed: u64,
) -> Result<DatasetRecord, DatasetError> {
    instantiate_with(template, bow, seed).map(|(r, _)| r)
}

/// Like [`instantiate`], also returning the values chosen for each slot.
///
/// Words are drawn without repetition inside a record, `num_N` slots are
/// numbered 1, 2, ... in index order, `num_range` draws uniformly within
/// its bounds and `num_choice` draws distinct integers from 1 to 10.
pub fn instantiate_with(
    template: &TemplatePair,
    bow: &BagOfWords,
    seed: u64,
) -> Result<(DatasetRecord, Assignment), DatasetError> {
    template.validate()?;
    let slots = template.slots()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut asg = Assignment::new();

    for kind in [
        SlotKind::Noun,
        SlotKind::Verb,
        SlotKind::Pid,
        SlotKind::Color,
        SlotKind::Var,
    ] {
        let wanted: Vec<Slot> = slots
            .keys()
            .filter(|s| matches!(s, Slot::Indexed(k, _) if *k == kind))
            .copied()
            .collect();
        if wanted.is_empty() {
            continue;
        }
        let pool: Vec<&str> = match kind {
            SlotKind::Var => VARIABLES.to_vec(),
            _ => bow.list(kind).iter().map(String::as_str).collect(),
        };
        if pool.is_empty() {
            return Err(DatasetError::EmptyBagCategory {
                category: kind.label().to_string(),
            });
        }
        if pool.len() < wanted.len() {
            return Err(DatasetError::InvalidBag(format!(
                "{} distinct {} entries needed, {} available",
                wanted.len(),
                kind.label(),
                pool.len()
            )));
        }
        for (slot, i) in wanted
            .iter()
            .zip(sample(&mut rng, pool.len(), wanted.len()).into_iter())
        {
            asg.insert(*slot, pool[i].to_string());
        }
    }
    let mut next = 1;
    for (slot, ph) in &slots {
        match ph {
            Placeholder::Indexed {
                kind: SlotKind::Num,
                ..
            } => {
                asg.insert(*slot, next.to_string());
                next += 1;
            }
            Placeholder::NumRange { lo, hi } => {
                asg.insert(*slot, rng.gen_range(*lo..=*hi).to_string());
            }
            Placeholder::NumChoice { count, connector } => {
                let mut picks: Vec<i64> = sample(&mut rng, 10, *count)
                    .into_iter()
                    .map(|i| i as i64 + 1)
                    .collect();
                picks.sort_unstable();
                asg.insert(*slot, join_choice(&picks, *connector));
            }
            Placeholder::Indexed { .. } => {}
        }
    }
    let record = DatasetRecord {
        id: 0,
        nl: render(&template.nl, &asg, Side::Nl)?,
        cnl: render(&template.cnl, &asg, Side::Cnl)?,
        category: template.category,
        origin: Origin::Generated,
        parent_id: None,
    };
    Ok((record, asg))
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn record_seed(seed: u64, category: usize, k: usize, attempt: usize) -> u64 {
    mix(mix(mix(seed ^ category as u64) ^ k as u64) ^ attempt as u64)
}

/// Generates exactly `targets[c]` records for every category `c`, cycling
/// through that category's templates. A record whose CNL is rejected by the
/// syntax checker, or lands in another category, is redrawn up to
/// [`DEFAULT_RETRY_CAP`] times. Records are numbered from 1.
pub fn generate_balanced(
    templates: &[TemplatePair],
    bow: &BagOfWords,
    targets: &Targets,
    seed: u64,
) -> Result<(Vec<DatasetRecord>, DatasetManifest), DatasetError> {
    generate_balanced_with(templates, bow, targets, seed, DEFAULT_RETRY_CAP)
}

/// [`generate_balanced`] with an explicit retry cap.
pub fn generate_balanced_with(
    templates: &[TemplatePair],
    bow: &BagOfWords,
    targets: &Targets,
    seed: u64,
    retry_cap: usize,
) -> Result<(Vec<DatasetRecord>, DatasetManifest), DatasetError> {
    bow.validate()?;
    let mut jobs = Vec::new();
    for (ci, kind) in PropositionKind::ALL.iter().enumerate() {
        let n = targets.get(kind).copied().unwrap_or(0);
        if n == 0 {
            continue;
        }
        let pool: Vec<usize> = templates
            .iter()
            .enumerate()
            .filter(|(_, t)| t.category == *kind)
            .map(|(i, _)| i)
            .collect();
        if pool.is_empty() {
            return Err(DatasetError::NoTemplates { category: *kind });
        }
        for k in 0..n {
            jobs.push((ci, k, pool[k % pool.len()]));
        }
    }
    let results: Vec<Result<DatasetRecord, DatasetError>> = jobs
        .par_iter()
        .map(|&(ci, k, ti)| {
            let t = &templates[ti];
            for attempt in 0..retry_cap {
                let rec = instantiate(t, bow, record_seed(seed, ci, k, attempt))?;
                if check_syntax(&rec.cnl, None)
                    == (SyntaxVerdict::Accepted {
                        category: t.category,
                    })
                {
                    return Ok(rec);
                }
            }
            Err(DatasetError::RetryExhausted {
                category: t.category,
                template: ti,
                attempts: retry_cap,
            })
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        let mut rec = r?;
        rec.id = i as u64 + 1;
        records.push(rec);
    }
    let manifest = DatasetManifest::from_records(&records, None);
    Ok((records, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bow() -> BagOfWords {
        BagOfWords::from_lists(
            "first vtx\nsecond vtx",
            "node\nitem\nbox",
            "edge\nlink\nassign",
            "red\ngreen",
        )
    }

    fn def_template() -> TemplatePair {
        TemplatePair::new(
            "A noun_1 is identified by an noun_2.",
            "Every noun_1 is identified by its noun_2.",
            PropositionKind::DefinitionConstCompound,
        )
    }

    #[test]
    fn same_seed_same_record() {
        let t = TemplatePair::new(
            "Whenever there is a noun_1 with id var_1 then we can have between num_1 and num_range(2 to 4) verb_1 with noun_1 var_1.",
            "For each noun_1 var_1 choose between num_1 and num_range(2 to 4) verb_1 for it, picking from num_choice(3).",
            PropositionKind::QuantifiedChoice,
        );
        assert!(t.validate().is_err());
        let t = TemplatePair::new(
            "Whenever there is a noun_1 with id var_1 then we can have between num_1 and num_range(2 to 4) verb_1 with noun_1 var_1.",
            "For each noun_1 var_1 choose between num_1 and num_range(2 to 4) verb_1 for it.",
            PropositionKind::QuantifiedChoice,
        );
        let a = instantiate(&t, &bow(), 11).unwrap();
        assert_eq!(a, instantiate(&t, &bow(), 11).unwrap());
        assert!(check_syntax(&a.cnl, None).is_accepted(), "{}", a.cnl);
        assert!(a.cnl.contains("between 1 and "));
    }

    #[test]
    fn no_placeholders_is_identity() {
        let t = TemplatePair::new(
            "A node is identified by an id.",
            "Each node has an id.",
            PropositionKind::DefinitionConstCompound,
        );
        let r = instantiate(&t, &bow(), 3).unwrap();
        assert_eq!(
            (r.cnl.as_str(), r.nl.as_str()),
            (t.cnl.as_str(), t.nl.as_str())
        );
        assert_eq!(r.origin, Origin::Generated);
    }

    #[test]
    fn words_do_not_repeat_within_a_record() {
        for seed in 0..20 {
            let (_, asg) = instantiate_with(&def_template(), &bow(), seed).unwrap();
            assert_ne!(
                asg[&Slot::Indexed(SlotKind::Noun, 1)],
                asg[&Slot::Indexed(SlotKind::Noun, 2)]
            );
        }
    }

    #[test]
    fn empty_category_is_reported() {
        let mut b = bow();
        b.nouns.clear();
        assert_eq!(
            instantiate(&def_template(), &b, 0).unwrap_err(),
            DatasetError::EmptyBagCategory {
                category: "noun".into()
            }
        );
    }

    #[test]
    fn zero_targets_give_nothing() {
        let (records, manifest) =
            generate_balanced(&[def_template()], &bow(), &Targets::new(), 1).unwrap();
        assert!(records.is_empty());
        assert_eq!(manifest.grand.total, 0);
    }

    #[test]
    fn unparseable_template_exhausts_retries() {
        let bad = TemplatePair::new(
            "A noun_1 is defined by an noun_2.",
            "A noun_1 has a noun_2.",
            PropositionKind::DefinitionConstCompound,
        );
        let targets = Targets::from([(PropositionKind::DefinitionConstCompound, 1)]);
        assert!(matches!(
            generate_balanced(&[bad], &bow(), &targets, 1),
            Err(DatasetError::RetryExhausted { template: 0, .. })
        ));
    }
}
