//! Clue-driven tagging of newspaper headlines.
//!
//! Headlines drop verbs and invert word order, so slot order is not used.
//! Verbals are found first, one is chosen as the behavior by ranked clues,
//! and the remaining segments are tagged relative to it.

use serde::Serialize;

use crate::lexicon::MarkerLexicon;
use crate::model::{validate, Component, FunctionTag, Span, TaggedTitle};
use crate::parser::{marker_component, split_unmarked, trimmed_component, ParseError, Segment, TitleParser};
use crate::template::{MarkerPosition, OrderTemplate};
use crate::tokenize::{Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerbalCandidate {
    pub text: String,
    pub span: Span,
    /// Exact lexicon entry, as opposed to an inflected verb form.
    pub is_verbal_noun: bool,
}

/// Which clue decided the behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BehaviorClue {
    AdjacentObject,
    AdjacentMarker,
    Earliest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeadlineTagging {
    pub title: TaggedTitle,
    pub behavior_clue: Option<BehaviorClue>,
}

pub struct HeadlineTagger<'a> {
    parser: TitleParser<'a>,
}

const INFLECTIONS: [&str; 5] = ["ing", "es", "ed", "s", "d"];

impl<'a> HeadlineTagger<'a> {
    pub fn new(lexicon: &'a MarkerLexicon, template: &'a OrderTemplate) -> Self {
        HeadlineTagger {
            parser: TitleParser::new(lexicon, template),
        }
    }

    fn lexicon(&self) -> &MarkerLexicon {
        self.parser.lexicon()
    }

    fn verb_form(&self, word: &str) -> bool {
        if !word.is_ascii() {
            return false;
        }
        let lower = word.to_lowercase();
        let known = |stem: &str| self.lexicon().verbal_nouns.iter().any(|v| v.to_lowercase() == stem);
        INFLECTIONS.iter().any(|suffix| {
            lower.strip_suffix(suffix).is_some_and(|stem| {
                stem.len() > 2 && (known(stem) || known(&format!("{stem}e")))
            })
        })
    }

    /// Verbal nouns and inflected verbs outside marker phrases, in span order.
    pub fn find_verbals(&self, headline: &str) -> Result<Vec<VerbalCandidate>, ParseError> {
        let segments = self.parser.segment(headline)?;
        Ok(self.verbals_in(&segments))
    }

    fn verbals_in(&self, segments: &[Segment]) -> Vec<VerbalCandidate> {
        segments
            .iter()
            .filter(|s| s.marker_hit.is_none())
            .flat_map(|s| s.tokens.iter())
            .filter_map(|t| match t.kind {
                TokenKind::Verbal => Some((t, true)),
                TokenKind::Plain if self.verb_form(&t.text) => Some((t, false)),
                _ => None,
            })
            .map(|(t, exact)| VerbalCandidate {
                text: t.text.clone(),
                span: t.span,
                is_verbal_noun: exact,
            })
            .collect()
    }

    /// Ranks candidates: adjacent object phrase, then adjacent method/purpose marker, then earliest.
    pub fn select_behavior(&self, candidates: &[VerbalCandidate], headline: &str) -> Option<(VerbalCandidate, BehaviorClue)> {
        if candidates.is_empty() {
            return None;
        }
        let raw = self.parser.tokens(headline);
        let segments = self.parser.segment(headline).ok()?;
        let plain_object = |tok: &Token| {
            tok.kind == TokenKind::Plain
                && !candidates.iter().any(|c| c.span == tok.span)
                && segments
                    .iter()
                    .any(|s| s.marker_hit.is_none() && s.span.0 <= tok.span.0 && tok.span.1 <= s.span.1)
        };
        let position = self.parser.template().marker_position;

        let mut ranked: Vec<(bool, bool, usize, &VerbalCandidate)> = candidates
            .iter()
            .map(|c| {
                let idx = raw.iter().position(|t| t.span == c.span);
                let (object, marker) = match idx {
                    Some(i) => {
                        let object = match position {
                            MarkerPosition::Prefix => raw[i + 1..]
                                .iter()
                                .find(|t| !matches!(t.kind, TokenKind::Connective | TokenKind::TechType))
                                .is_some_and(&plain_object),
                            MarkerPosition::Suffix => raw[..i]
                                .iter()
                                .rev()
                                .find(|t| t.kind != TokenKind::Connective)
                                .is_some_and(&plain_object),
                        };
                        let is_marker = |t: &Token| matches!(t.kind, TokenKind::Method | TokenKind::Purpose);
                        let marker = raw.get(i + 1).is_some_and(is_marker)
                            || i.checked_sub(1).and_then(|j| raw.get(j)).is_some_and(is_marker);
                        (object, marker)
                    }
                    None => (false, false),
                };
                (object, marker, c.span.0, c)
            })
            .collect();
        ranked.sort_by_key(|(object, marker, start, _)| (!*object, !*marker, *start));
        let (object, marker, _, best) = ranked[0];
        let clue = if candidates.len() == 1 || (!object && !marker) {
            BehaviorClue::Earliest
        } else if object && ranked.iter().filter(|r| r.0).count() == 1 {
            BehaviorClue::AdjacentObject
        } else if marker {
            BehaviorClue::AdjacentMarker
        } else {
            BehaviorClue::Earliest
        };
        Some((best.clone(), clue))
    }

    pub fn tag(&self, headline: &str) -> Result<HeadlineTagging, ParseError> {
        let segments = self.parser.segment(headline)?;
        let candidates = self.verbals_in(&segments);
        let chosen = self.select_behavior(&candidates, headline);
        let behavior = chosen.as_ref().map(|(c, _)| c.span);
        let lexicon = self.lexicon();
        let template = self.parser.template();
        let spaced = template.is_spaced();

        let mut components: Vec<Component> = Vec::new();
        let mut plain_groups: Vec<usize> = Vec::new();
        for seg in &segments {
            match seg.hint() {
                Some(FunctionTag::M) | Some(FunctionTag::P) => {
                    components.push(marker_component(headline, seg, lexicon, template));
                }
                Some(tag) => {
                    if let Some(c) = trimmed_component(headline, tag, &seg.tokens, lexicon, spaced, None) {
                        components.push(c);
                    }
                }
                None => {
                    let no_behavior = (usize::MAX, usize::MAX);
                    for (tag, tokens) in split_unmarked(&seg.tokens, behavior.unwrap_or(no_behavior), true) {
                        if let Some(c) = trimmed_component(headline, tag, &tokens, lexicon, spaced, None) {
                            if tag == FunctionTag::O {
                                plain_groups.push(components.len());
                            }
                            components.push(c);
                        }
                    }
                }
            }
        }

        // object: the nearest plain phrase on B's object side, or on the other
        // side when the headline is inverted; other plain phrases are residue
        let after = |b: Span| plain_groups.iter().copied().find(|&i| components[i].span.0 >= b.1);
        let before = |b: Span| plain_groups.iter().copied().rev().find(|&i| components[i].span.1 <= b.0);
        let object = behavior.and_then(|b| match template.marker_position {
            MarkerPosition::Prefix => after(b).or_else(|| before(b)),
            MarkerPosition::Suffix => before(b).or_else(|| after(b)),
        });
        for i in plain_groups {
            if Some(i) != object {
                components[i].tag = FunctionTag::E;
            }
        }
        components.sort_by_key(|c| c.span);
        demote_excess(&mut components);

        let mut title = TaggedTitle::new(headline, components, template.id.clone());
        debug_assert!(validate(&title).is_empty(), "{:?}", validate(&title));
        title.ambiguous = false;
        Ok(HeadlineTagging {
            title,
            behavior_clue: chosen.map(|(_, clue)| clue),
        })
    }
}

/// Occurrences beyond a tag's limit fall to E.
fn demote_excess(components: &mut [Component]) {
    let mut seen = std::collections::BTreeMap::new();
    for c in components.iter_mut() {
        let n = seen.entry(c.tag).or_insert(0usize);
        *n += 1;
        if c.tag.max_occurrences().is_some_and(|max| *n > max) {
            c.tag = FunctionTag::E;
            c.marker = None;
        }
    }
}

pub fn find_verbals(
    headline: &str,
    lexicon: &MarkerLexicon,
    template: &OrderTemplate,
) -> Result<Vec<VerbalCandidate>, ParseError> {
    HeadlineTagger::new(lexicon, template).find_verbals(headline)
}

pub fn select_behavior(
    candidates: &[VerbalCandidate],
    headline: &str,
    lexicon: &MarkerLexicon,
    template: &OrderTemplate,
) -> Option<VerbalCandidate> {
    HeadlineTagger::new(lexicon, template)
        .select_behavior(candidates, headline)
        .map(|(c, _)| c)
}

pub fn tag_headline(headline: &str, lexicon: &MarkerLexicon, template: &OrderTemplate) -> Result<TaggedTitle, ParseError> {
    HeadlineTagger::new(lexicon, template).tag(headline).map(|t| t.title)
}
