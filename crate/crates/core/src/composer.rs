//! Composition of pattern-variant titles from a phrase bank, and allocation of
//! titles and respondents to survey groups.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::model::{Component, FunctionTag, ObligatoryPattern, OptionalPattern, TaggedTitle};
use crate::template::OrderTemplate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("technology `{technology}` has no {slot} variant")]
    MissingVariant { technology: String, slot: String },
    #[error("bad title set: {0}")]
    BadTitleSet(String),
}

/// Phrase variants for one technology, one per expression pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhraseBankEntry {
    pub technology_id: String,
    pub field_id: String,
    pub t_text: String,
    pub b_text: String,
    pub o_variants: BTreeMap<ObligatoryPattern, String>,
    /// Keyed by `3.1` (jargon) and `3.2` (plain).
    pub m_variants: BTreeMap<OptionalPattern, String>,
    pub s_variant: String,
    #[serde(default)]
    pub p_text: Option<String>,
}

impl PhraseBankEntry {
    /// Every variant the twelve compositions need is present and non-empty.
    pub fn check(&self) -> Result<(), ComposeError> {
        let missing = |slot: &str| ComposeError::MissingVariant {
            technology: self.technology_id.clone(),
            slot: slot.to_string(),
        };
        for (slot, text) in [("T", &self.t_text), ("B", &self.b_text), ("4.0", &self.s_variant)] {
            if text.trim().is_empty() {
                return Err(missing(slot));
            }
        }
        for p in ObligatoryPattern::ALL {
            if self.o_variants.get(&p).is_none_or(|v| v.trim().is_empty()) {
                return Err(missing(p.label()));
            }
        }
        for p in [OptionalPattern::P3_1, OptionalPattern::P3_2] {
            if self.m_variants.get(&p).is_none_or(|v| v.trim().is_empty()) {
                return Err(missing(p.label()));
            }
        }
        if let Some(k) = self.m_variants.keys().find(|k| !matches!(k, OptionalPattern::P3_1 | OptionalPattern::P3_2)) {
            return Err(ComposeError::BadTitleSet(format!(
                "`{}` has a method variant under pattern {k}",
                self.technology_id
            )));
        }
        Ok(())
    }
}

/// Reads a phrase bank (JSON array of entries).
pub fn load_bank(json: &str) -> Result<Vec<PhraseBankEntry>, serde_json::Error> {
    serde_json::from_str(json)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposedTitle {
    pub title: String,
    pub technology_id: String,
    #[serde(default)]
    pub field_id: String,
    pub obligatory: ObligatoryPattern,
    pub optional: OptionalPattern,
    pub group: Option<usize>,
    /// Components as composed, with spans into `title`.
    #[serde(skip)]
    pub components: Vec<Component>,
}

impl ComposedTitle {
    pub fn to_tagged(&self, template: &OrderTemplate) -> TaggedTitle {
        TaggedTitle::new(self.title.clone(), self.components.clone(), template.id.clone())
    }
}

pub fn compose_title(
    entry: &PhraseBankEntry,
    obligatory: ObligatoryPattern,
    optional: OptionalPattern,
    template: &OrderTemplate,
) -> Result<ComposedTitle, ComposeError> {
    let missing = |slot: &str| ComposeError::MissingVariant {
        technology: entry.technology_id.clone(),
        slot: slot.to_string(),
    };
    let mut title = String::new();
    let mut len = 0usize;
    let mut components = Vec::new();
    for &tag in &template.compose_order {
        let phrase = match tag {
            FunctionTag::T => Some(entry.t_text.as_str()),
            FunctionTag::B => Some(entry.b_text.as_str()),
            FunctionTag::O => Some(entry.o_variants.get(&obligatory).map(String::as_str).unwrap_or("")),
            FunctionTag::M => match optional {
                OptionalPattern::P3_1 | OptionalPattern::P3_2 => {
                    Some(entry.m_variants.get(&optional).map(String::as_str).unwrap_or(""))
                }
                _ => None,
            },
            FunctionTag::S => (optional == OptionalPattern::P4_0).then_some(entry.s_variant.as_str()),
            _ => None,
        };
        let Some(phrase) = phrase else { continue };
        let phrase = phrase.trim();
        if phrase.is_empty() {
            let slot = match tag {
                FunctionTag::O => obligatory.label(),
                FunctionTag::M | FunctionTag::S => optional.label(),
                _ => if tag == FunctionTag::T { "T" } else { "B" },
            };
            return Err(missing(slot));
        }
        if !title.is_empty() {
            title.push_str(&template.separator);
            len += template.separator.chars().count();
        }
        let n = phrase.chars().count();
        components.push(Component::new(tag, phrase, None, (len, len + n)));
        title.push_str(phrase);
        len += n;
    }
    Ok(ComposedTitle {
        title,
        technology_id: entry.technology_id.clone(),
        field_id: entry.field_id.clone(),
        obligatory,
        optional,
        group: None,
        components,
    })
}

/// The twelve titles of one technology: 3 obligatory × 4 optional patterns.
pub fn compose_all(entry: &PhraseBankEntry, template: &OrderTemplate) -> Result<Vec<ComposedTitle>, ComposeError> {
    entry.check()?;
    let mut out = Vec::with_capacity(12);
    for ob in ObligatoryPattern::ALL {
        for op in OptionalPattern::ALL {
            out.push(compose_title(entry, ob, op, template)?);
        }
    }
    Ok(out)
}

/// Composes every entry of a bank; titles keep bank order.
pub fn compose_bank(entries: &[PhraseBankEntry], template: &OrderTemplate) -> Result<Vec<ComposedTitle>, ComposeError> {
    let mut out = Vec::new();
    for e in entries {
        out.extend(compose_all(e, template)?);
    }
    Ok(out)
}

/// Group that sees title (technology `t`, obligatory `i`, optional `o`).
///
/// Group `g` omits optional pattern `g`. Among the three groups that do show
/// pattern `o`, ranked in index order, rank `r` gets technology `(r + i) mod 3`.
/// Every group thus holds nine titles: each obligatory pattern three times,
/// three optional patterns three times each, and each technology three times.
pub fn group_of(technology: usize, obligatory: usize, optional: usize) -> usize {
    let rank = (technology + 3 - obligatory % 3) % 3;
    if rank < optional {
        rank
    } else {
        rank + 1
    }
}

/// Splits one field's 36 titles into 4 groups of 9.
///
/// Technologies are indexed in id order, so the result does not depend on input order.
pub fn allocate_groups(field_titles: &[ComposedTitle], n_groups: usize) -> Result<Vec<ComposedTitle>, ComposeError> {
    if n_groups != OptionalPattern::ALL.len() {
        return Err(ComposeError::BadTitleSet(format!(
            "{n_groups} groups requested; allocation needs one group per optional pattern (4)"
        )));
    }
    if field_titles.len() != 36 {
        return Err(ComposeError::BadTitleSet(format!("expected 36 titles, got {}", field_titles.len())));
    }
    let technologies: Vec<&str> = field_titles
        .iter()
        .map(|t| t.technology_id.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if technologies.len() != 3 {
        return Err(ComposeError::BadTitleSet(format!(
            "expected 3 technologies, got {}",
            technologies.len()
        )));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(36);
    for t in field_titles {
        let tech = technologies.iter().position(|id| *id == t.technology_id).expect("collected above");
        if !seen.insert((tech, t.obligatory, t.optional)) {
            return Err(ComposeError::BadTitleSet(format!(
                "duplicate title ({}, {}, {})",
                t.technology_id, t.obligatory, t.optional
            )));
        }
        let mut t = t.clone();
        t.group = Some(group_of(tech, t.obligatory.index(), t.optional.index()));
        out.push(t);
    }
    Ok(out)
}

/// Shuffles respondents with a seeded generator and deals them round-robin into groups.
///
/// Group sizes differ by at most one. Panics if `n_groups` is zero.
pub fn assign_respondents<S: AsRef<str>>(respondent_ids: &[S], n_groups: usize, seed: u64) -> BTreeMap<String, usize> {
    assert!(n_groups >= 1, "at least one group is required");
    let mut order: Vec<usize> = (0..respondent_ids.len()).collect();
    order.shuffle(&mut crate::rng::seeded(seed));
    order
        .into_iter()
        .enumerate()
        .map(|(k, i)| (respondent_ids[i].as_ref().to_string(), k % n_groups))
        .collect()
}
