//! Slot-order templates such as `P? M? S? O S? B S? T? D?`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::FunctionTag;

/// Where a method/purpose marker sits relative to the phrase it introduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkerPosition {
    /// English prepositions: "by Burnout".
    Prefix,
    /// Japanese postpositions: "X ni yori".
    Suffix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub tag: FunctionTag,
    pub optional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("template `{id}`: bad slot `{slot}`")]
    BadSlot { id: String, slot: String },
    #[error("template `{0}` has no slots")]
    Empty(String),
    #[error("unknown template `{0}`")]
    Unknown(String),
}

/// Ordered slot sequence plus the surface conventions of one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTemplate {
    pub id: String,
    pub slot_sequence: Vec<Slot>,
    /// Joins phrases when composing; an empty separator also selects lexicon-driven tokenization.
    pub separator: String,
    pub marker_position: MarkerPosition,
    /// Tag order used when composing a title from phrases.
    pub compose_order: Vec<FunctionTag>,
}

/// Serialized form used in lexicon files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub id: String,
    pub pattern: String,
    #[serde(default = "default_separator")]
    pub separator: String,
    #[serde(default = "default_marker_position")]
    pub marker_position: MarkerPosition,
    #[serde(default)]
    pub compose_order: Option<String>,
}

fn default_separator() -> String {
    " ".to_string()
}

fn default_marker_position() -> MarkerPosition {
    MarkerPosition::Prefix
}

pub const JA_PAPER: &str = "ja-paper";
pub const EN_PAPER: &str = "en-paper";

impl OrderTemplate {
    /// Builds a template from a grammar string: whitespace-separated tag letters, `?` marks an optional slot.
    pub fn from_pattern(
        id: &str,
        pattern: &str,
        separator: &str,
        marker_position: MarkerPosition,
        compose_order: Option<&str>,
    ) -> Result<Self, TemplateError> {
        let slot_sequence = parse_slots(id, pattern)?;
        let compose_order = match compose_order {
            Some(order) => parse_slots(id, order)?.into_iter().map(|s| s.tag).collect(),
            None => {
                let mut order: Vec<FunctionTag> = Vec::new();
                for slot in &slot_sequence {
                    if !order.contains(&slot.tag) {
                        order.push(slot.tag);
                    }
                }
                order
            }
        };
        Ok(OrderTemplate {
            id: id.to_string(),
            slot_sequence,
            separator: separator.to_string(),
            marker_position,
            compose_order,
        })
    }

    pub fn from_spec(spec: &TemplateSpec) -> Result<Self, TemplateError> {
        Self::from_pattern(
            &spec.id,
            &spec.pattern,
            &spec.separator,
            spec.marker_position,
            spec.compose_order.as_deref(),
        )
    }

    /// Japanese paper-title order.
    pub fn ja_paper() -> Self {
        Self::from_pattern(JA_PAPER, "P? M? S? O S? B S? T? D?", "", MarkerPosition::Suffix, None)
            .expect("built-in template")
    }

    /// English rendering of paper titles: "Development of an Exploration System of Buried Cables",
    /// "Method to Shorten Radioactive Half-life by Burnout".
    pub fn en_paper() -> Self {
        Self::from_pattern(
            EN_PAPER,
            "D? S? T? B T? O M? S? P?",
            " ",
            MarkerPosition::Prefix,
            Some("D T B O M S P"),
        )
        .expect("built-in template")
    }

    pub fn builtin(id: &str) -> Result<Self, TemplateError> {
        match id {
            JA_PAPER => Ok(Self::ja_paper()),
            EN_PAPER => Ok(Self::en_paper()),
            other => Err(TemplateError::Unknown(other.to_string())),
        }
    }

    pub fn is_spaced(&self) -> bool {
        !self.separator.is_empty()
    }

    pub fn pattern(&self) -> String {
        self.slot_sequence
            .iter()
            .map(|s| format!("{}{}", s.tag, if s.optional { "?" } else { "" }))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// True when the tag sequence fills the slots in order, each slot at most once
    /// and every non-optional slot exactly once.
    pub fn matches(&self, tags: &[FunctionTag]) -> bool {
        let slots = &self.slot_sequence;
        // reachable[j] after consuming i slots: first j tags consumed.
        let mut reachable = vec![false; tags.len() + 1];
        reachable[0] = true;
        for slot in slots {
            let mut next = vec![false; tags.len() + 1];
            for j in 0..=tags.len() {
                if !reachable[j] {
                    continue;
                }
                if slot.optional {
                    next[j] = true;
                }
                if j < tags.len() && tags[j] == slot.tag {
                    next[j + 1] = true;
                }
            }
            reachable = next;
        }
        reachable[tags.len()]
    }
}

impl fmt::Display for OrderTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.id, self.pattern())
    }
}

fn parse_slots(id: &str, pattern: &str) -> Result<Vec<Slot>, TemplateError> {
    let mut slots = Vec::new();
    for raw in pattern.split_whitespace() {
        let (name, optional) = match raw.strip_suffix('?') {
            Some(name) => (name, true),
            None => (raw, false),
        };
        let tag = name.parse::<FunctionTag>().map_err(|_| TemplateError::BadSlot {
            id: id.to_string(),
            slot: raw.to_string(),
        })?;
        slots.push(Slot { tag, optional });
    }
    if slots.is_empty() {
        return Err(TemplateError::Empty(id.to_string()));
    }
    Ok(slots)
}
