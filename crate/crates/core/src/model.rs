//! Tag inventory, tagged titles and the expression-pattern taxonomy.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Syntactic function of a title segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FunctionTag {
    /// Behavior of the technology (verbal noun).
    B,
    /// Object of the behavior.
    O,
    /// Technology type ("system", "method", ...).
    T,
    /// Purpose of development.
    P,
    /// Method for realizing.
    M,
    /// Strong point.
    S,
    /// Development expression ("development of", "a study on").
    D,
    /// Everything else: organization names, practical-use remarks.
    E,
}

impl FunctionTag {
    pub const ALL: [FunctionTag; 8] = [
        FunctionTag::B,
        FunctionTag::O,
        FunctionTag::T,
        FunctionTag::P,
        FunctionTag::M,
        FunctionTag::S,
        FunctionTag::D,
        FunctionTag::E,
    ];

    /// The six content tags used in comparative statistics. D and E are excluded.
    pub const CONTENT: [FunctionTag; 6] = [
        FunctionTag::B,
        FunctionTag::O,
        FunctionTag::T,
        FunctionTag::P,
        FunctionTag::M,
        FunctionTag::S,
    ];

    pub fn is_content(self) -> bool {
        !matches!(self, FunctionTag::D | FunctionTag::E)
    }

    /// Maximum number of occurrences in one title; `None` means unbounded.
    pub fn max_occurrences(self) -> Option<usize> {
        match self {
            FunctionTag::S => Some(3),
            FunctionTag::E => None,
            _ => Some(1),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            FunctionTag::B => 'B',
            FunctionTag::O => 'O',
            FunctionTag::T => 'T',
            FunctionTag::P => 'P',
            FunctionTag::M => 'M',
            FunctionTag::S => 'S',
            FunctionTag::D => 'D',
            FunctionTag::E => 'E',
        }
    }
}

impl fmt::Display for FunctionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown function tag `{0}`")]
pub struct UnknownTag(pub String);

impl FromStr for FunctionTag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "B" => Ok(FunctionTag::B),
            "O" => Ok(FunctionTag::O),
            "T" => Ok(FunctionTag::T),
            "P" => Ok(FunctionTag::P),
            "M" => Ok(FunctionTag::M),
            "S" => Ok(FunctionTag::S),
            "D" => Ok(FunctionTag::D),
            "E" => Ok(FunctionTag::E),
            other => Err(UnknownTag(other.to_string())),
        }
    }
}

/// Character offsets `[start, end)` into a source string.
pub type Span = (usize, usize);

/// One tagged text segment of a title.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub tag: FunctionTag,
    pub text: String,
    /// Preposition or particle that signalled the tag ("by", "for", "ni yori").
    pub marker: Option<String>,
    /// Covers the whole surface of the component, marker included.
    pub span: Span,
}

impl Component {
    pub fn new(tag: FunctionTag, text: impl Into<String>, marker: Option<String>, span: Span) -> Self {
        Component {
            tag,
            text: text.into(),
            marker,
            span,
        }
    }
}

/// A title or headline as an ordered sequence of tagged components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedTitle {
    pub source: String,
    pub components: Vec<Component>,
    #[serde(rename = "template")]
    pub language_template: String,
    /// Set when several complete readings existed and tie-breaking picked one.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ambiguous: bool,
}

impl TaggedTitle {
    pub fn new(source: impl Into<String>, components: Vec<Component>, template: impl Into<String>) -> Self {
        TaggedTitle {
            source: source.into(),
            components,
            language_template: template.into(),
            ambiguous: false,
        }
    }

    pub fn tags(&self) -> Vec<FunctionTag> {
        self.components.iter().map(|c| c.tag).collect()
    }

    pub fn has(&self, tag: FunctionTag) -> bool {
        self.components.iter().any(|c| c.tag == tag)
    }

    pub fn first(&self, tag: FunctionTag) -> Option<&Component> {
        self.components.iter().find(|c| c.tag == tag)
    }

    pub fn tag_counts(&self) -> BTreeMap<FunctionTag, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.components {
            *counts.entry(c.tag).or_insert(0) += 1;
        }
        counts
    }

    /// Source text of a span.
    pub fn slice(&self, span: Span) -> String {
        char_slice(&self.source, span.0, span.1)
    }

    /// Text between consecutive components, including leading and trailing material.
    pub fn separators(&self) -> Vec<String> {
        let len = self.source.chars().count();
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut cursor = 0;
        for c in &self.components {
            out.push(char_slice(&self.source, cursor, c.span.0.max(cursor)));
            cursor = cursor.max(c.span.1);
        }
        out.push(char_slice(&self.source, cursor, len));
        out
    }
}

pub(crate) fn char_slice(s: &str, start: usize, end: usize) -> String {
    s.chars().skip(start).take(end.saturating_sub(start)).collect()
}

/// Checks the structural invariants of a tagged title.
///
/// Violations are returned as data; an empty list means the title is well formed.
pub fn validate(title: &TaggedTitle) -> Vec<String> {
    let mut violations = Vec::new();
    let len = title.source.chars().count();

    for (tag, count) in title.tag_counts() {
        if let Some(max) = tag.max_occurrences() {
            if count > max {
                violations.push(format!("{tag} occurs {count} times, max {max}"));
            }
        }
    }

    for (i, c) in title.components.iter().enumerate() {
        if c.text.trim().is_empty() {
            violations.push(format!("{} component #{i} has empty text", c.tag));
        } else if c.text.trim() != c.text {
            violations.push(format!("{} component #{i} text is not trimmed", c.tag));
        }
        let (start, end) = c.span;
        if start >= end || end > len {
            violations.push(format!(
                "{} component #{i} span ({start}, {end}) is outside source bounds 0..{len}",
                c.tag
            ));
        }
    }

    for (i, pair) in title.components.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if b.span.0 < a.span.0 {
            violations.push(format!("{} component #{} starts before its predecessor", b.tag, i + 1));
        } else if b.span.0 < a.span.1 {
            violations.push(format!("{} component #{} overlaps {} component #{i}", b.tag, i + 1, a.tag));
        }
    }

    violations
}

/// Wording of the obligatory components (T, B, O).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ObligatoryPattern {
    /// What the technology does, in technical jargon.
    #[serde(rename = "1.1")]
    P1_1,
    /// What the technology does, in plain terms.
    #[serde(rename = "1.2")]
    P1_2,
    /// What the purpose of the technology is, in plain terms.
    #[serde(rename = "2.0")]
    P2_0,
}

impl ObligatoryPattern {
    pub const ALL: [ObligatoryPattern; 3] = [
        ObligatoryPattern::P1_1,
        ObligatoryPattern::P1_2,
        ObligatoryPattern::P2_0,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            ObligatoryPattern::P1_1 => "1.1",
            ObligatoryPattern::P1_2 => "1.2",
            ObligatoryPattern::P2_0 => "2.0",
        }
    }

    pub fn is_jargon(self) -> bool {
        self == ObligatoryPattern::P1_1
    }
}

/// Wording of the optional components (M or S), or their absence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OptionalPattern {
    /// Method of realization, in technical jargon.
    #[serde(rename = "3.1")]
    P3_1,
    /// Method of realization, in plain terms.
    #[serde(rename = "3.2")]
    P3_2,
    /// Strong point of the technology.
    #[serde(rename = "4.0")]
    P4_0,
    #[serde(rename = "none")]
    None,
}

impl OptionalPattern {
    pub const ALL: [OptionalPattern; 4] = [
        OptionalPattern::P3_1,
        OptionalPattern::P3_2,
        OptionalPattern::P4_0,
        OptionalPattern::None,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            OptionalPattern::P3_1 => "3.1",
            OptionalPattern::P3_2 => "3.2",
            OptionalPattern::P4_0 => "4.0",
            OptionalPattern::None => "none",
        }
    }
}

impl fmt::Display for ObligatoryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl fmt::Display for OptionalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(tag: FunctionTag, start: usize, end: usize) -> Component {
        Component::new(tag, "x", None, (start, end))
    }

    fn title(components: Vec<Component>) -> TaggedTitle {
        TaggedTitle::new("abcdefghijklmnopqrstuvwxyz", components, "en-paper")
    }

    #[test]
    fn well_formed_title_has_no_violations() {
        let t = title(vec![
            comp(FunctionTag::T, 0, 2),
            comp(FunctionTag::B, 3, 5),
            comp(FunctionTag::O, 6, 9),
        ]);
        assert!(validate(&t).is_empty());
    }

    #[test]
    fn repeated_object_is_reported() {
        let t = title(vec![comp(FunctionTag::O, 0, 2), comp(FunctionTag::O, 3, 5)]);
        assert_eq!(validate(&t), vec!["O occurs 2 times, max 1".to_string()]);
    }

    #[test]
    fn strong_point_limit_matches_grammar_slots() {
        // "P? M? S? O S? B S? T? D?" has exactly three S slots.
        let slots = "P? M? S? O S? B S? T? D?"
            .split_whitespace()
            .filter(|s| s.trim_end_matches('?') == "S")
            .count();
        assert_eq!(FunctionTag::S.max_occurrences(), Some(slots));

        let t = title((0..4).map(|i| comp(FunctionTag::S, i * 2, i * 2 + 1)).collect());
        assert_eq!(validate(&t), vec!["S occurs 4 times, max 3".to_string()]);
    }

    #[test]
    fn residue_tag_may_repeat() {
        let t = title((0..5).map(|i| comp(FunctionTag::E, i * 2, i * 2 + 1)).collect());
        assert!(validate(&t).is_empty());
    }

    #[test]
    fn bad_spans_and_overlaps() {
        let t = title(vec![comp(FunctionTag::T, 0, 5), comp(FunctionTag::B, 3, 8), comp(FunctionTag::O, 9, 99)]);
        let v = validate(&t);
        assert!(v.iter().any(|m| m.contains("overlaps")));
        assert!(v.iter().any(|m| m.contains("outside source bounds")));

        let t = title(vec![Component::new(FunctionTag::O, "  ", None, (0, 2))]);
        assert!(validate(&t)[0].contains("empty text"));
    }

    #[test]
    fn tags_parse_and_serialize_as_letters() {
        for tag in FunctionTag::ALL {
            assert_eq!(tag.to_string().parse::<FunctionTag>().unwrap(), tag);
            assert_eq!(serde_json::to_string(&tag).unwrap(), format!("\"{tag}\""));
        }
        assert!("X".parse::<FunctionTag>().is_err());
    }

    #[test]
    fn patterns_serialize_with_table_labels() {
        assert_eq!(serde_json::to_string(&ObligatoryPattern::P2_0).unwrap(), "\"2.0\"");
        assert_eq!(serde_json::to_string(&OptionalPattern::None).unwrap(), "\"none\"");
        let p: OptionalPattern = serde_json::from_str("\"4.0\"").unwrap();
        assert_eq!(p, OptionalPattern::P4_0);
    }

    #[test]
    fn separators_cover_gaps() {
        let t = TaggedTitle::new(
            "Method to Shorten X",
            vec![
                Component::new(FunctionTag::T, "Method", None, (0, 6)),
                Component::new(FunctionTag::B, "Shorten", None, (10, 17)),
                Component::new(FunctionTag::O, "X", None, (18, 19)),
            ],
            "en-paper",
        );
        assert_eq!(t.separators(), vec!["", " to ", " ", ""]);
    }
}
