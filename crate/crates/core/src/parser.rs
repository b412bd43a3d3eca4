//! Shallow parser for well-ordered titles.
//!
//! A title is split at lexicon anchors (method/purpose markers, development
//! expressions, technology-type words); the remaining unmarked runs are then
//! divided around the behavior verbal noun. Every choice of behavior is tried
//! and the readings that fit the order template are kept.

use serde::Serialize;

use crate::lexicon::MarkerLexicon;
use crate::model::{char_slice, validate, Component, FunctionTag, Span, TaggedTitle};
use crate::template::{MarkerPosition, OrderTemplate};
use crate::tokenize::{tokenizer_for, Token, TokenKind, Tokenizer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("title is empty")]
    EmptyTitle,
    #[error("no verbal noun qualifies as the behavior")]
    NoBehaviorFound,
    #[error("readings with behavior at {first:?} and {second:?} remain tied")]
    AmbiguousParse { first: Span, second: Span },
    #[error("no reading fits template `{template}` (closest: {tags})")]
    TemplateMismatch { template: String, tags: String },
}

impl ParseError {
    pub fn name(&self) -> &'static str {
        match self {
            ParseError::EmptyTitle => "EmptyTitle",
            ParseError::NoBehaviorFound => "NoBehaviorFound",
            ParseError::AmbiguousParse { .. } => "AmbiguousParse",
            ParseError::TemplateMismatch { .. } => "TemplateMismatch",
        }
    }
}

/// A stretch of the title delimited by lexicon anchors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub text: String,
    /// Marker text and the tag it hints at (M, P, D or T).
    pub marker_hit: Option<(String, FunctionTag)>,
    pub span: Span,
    pub(crate) tokens: Vec<Token>,
}

impl Segment {
    fn from_tokens(source: &str, tokens: &[Token], marker_hit: Option<(String, FunctionTag)>) -> Self {
        let span = (tokens[0].span.0, tokens[tokens.len() - 1].span.1);
        Segment {
            text: char_slice(source, span.0, span.1),
            marker_hit,
            span,
            tokens: tokens.to_vec(),
        }
    }

    pub fn hint(&self) -> Option<FunctionTag> {
        self.marker_hit.as_ref().map(|(_, tag)| *tag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseFailure {
    pub line: usize,
    pub input: String,
    pub error: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub parsed: Vec<TaggedTitle>,
    pub failures: Vec<ParseFailure>,
}

/// Parser bound to one lexicon and template; reusable across titles.
pub struct TitleParser<'a> {
    lexicon: &'a MarkerLexicon,
    template: &'a OrderTemplate,
    tokenizer: Box<dyn Tokenizer + 'a>,
}

impl<'a> TitleParser<'a> {
    pub fn new(lexicon: &'a MarkerLexicon, template: &'a OrderTemplate) -> Self {
        TitleParser {
            lexicon,
            template,
            tokenizer: tokenizer_for(lexicon, template.is_spaced()),
        }
    }

    pub fn template(&self) -> &OrderTemplate {
        self.template
    }

    pub fn lexicon(&self) -> &MarkerLexicon {
        self.lexicon
    }

    pub fn tokens(&self, title: &str) -> Vec<Token> {
        self.tokenizer.tokenize(title)
    }

    pub fn segment(&self, title: &str) -> Result<Vec<Segment>, ParseError> {
        if title.trim().is_empty() {
            return Err(ParseError::EmptyTitle);
        }
        let tokens = resolve_markers(self.tokens(title), self.template.marker_position);
        Ok(build_segments(title, &tokens, self.template.marker_position))
    }

    pub fn parse(&self, title: &str) -> Result<TaggedTitle, ParseError> {
        let segments = self.segment(title)?;
        let candidates: Vec<Span> = segments
            .iter()
            .filter(|s| s.marker_hit.is_none())
            .flat_map(|s| s.tokens.iter())
            .filter(|t| t.kind == TokenKind::Verbal)
            .map(|t| t.span)
            .collect();
        if candidates.is_empty() {
            return Err(ParseError::NoBehaviorFound);
        }

        let mut readings: Vec<((usize, usize), Vec<Component>)> = Vec::new();
        let mut closest: Option<Vec<FunctionTag>> = None;
        for &behavior in &candidates {
            let components = self.reading(title, &segments, behavior);
            let tags: Vec<FunctionTag> = components.iter().map(|c| c.tag).collect();
            let probe = TaggedTitle::new(title, components.clone(), self.template.id.clone());
            if self.template.matches(&tags) && validate(&probe).is_empty() {
                readings.push((distance_key(&components, behavior), components));
            } else if closest.is_none() {
                closest = Some(tags);
            }
        }

        if readings.is_empty() {
            let tags = closest.unwrap_or_default();
            return Err(ParseError::TemplateMismatch {
                template: self.template.id.clone(),
                tags: tags.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
            });
        }
        readings.sort_by_key(|(key, _)| *key);
        if readings.len() > 1 && readings[0].0 == readings[1].0 {
            let b = |r: &Vec<Component>| r.iter().find(|c| c.tag == FunctionTag::B).map(|c| c.span).unwrap_or_default();
            return Err(ParseError::AmbiguousParse {
                first: b(&readings[0].1),
                second: b(&readings[1].1),
            });
        }
        let ambiguous = readings.len() > 1;
        let (_, components) = readings.swap_remove(0);
        let mut tagged = TaggedTitle::new(title, components, self.template.id.clone());
        tagged.ambiguous = ambiguous;
        Ok(tagged)
    }

    pub fn parse_corpus<S: AsRef<str>>(&self, lines: &[S]) -> ParseReport {
        let mut report = ParseReport::default();
        for (i, line) in lines.iter().enumerate() {
            let line = line.as_ref();
            match self.parse(line) {
                Ok(t) => report.parsed.push(t),
                Err(e) => report.failures.push(ParseFailure {
                    line: i + 1,
                    input: line.to_string(),
                    error: e.name().to_string(),
                    detail: e.to_string(),
                }),
            }
        }
        report
    }

    /// Components for one choice of behavior token.
    fn reading(&self, source: &str, segments: &[Segment], behavior: Span) -> Vec<Component> {
        let spaced = self.template.is_spaced();
        let mut out = Vec::new();
        for seg in segments {
            match seg.hint() {
                Some(FunctionTag::M) | Some(FunctionTag::P) => {
                    out.push(marker_component(source, seg, self.lexicon, self.template))
                }
                Some(tag) => {
                    if let Some(c) = trimmed_component(source, tag, &seg.tokens, self.lexicon, spaced, None) {
                        out.push(c);
                    }
                }
                None => {
                    for (tag, tokens) in split_unmarked(&seg.tokens, behavior, false) {
                        if let Some(c) = trimmed_component(source, tag, &tokens, self.lexicon, spaced, None) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn segment(title: &str, lexicon: &MarkerLexicon, template: &OrderTemplate) -> Result<Vec<Segment>, ParseError> {
    TitleParser::new(lexicon, template).segment(title)
}

pub fn parse_title(title: &str, lexicon: &MarkerLexicon, template: &OrderTemplate) -> Result<TaggedTitle, ParseError> {
    TitleParser::new(lexicon, template).parse(title)
}

pub fn parse_corpus<S: AsRef<str>>(lines: &[S], lexicon: &MarkerLexicon, template: &OrderTemplate) -> ParseReport {
    TitleParser::new(lexicon, template).parse_corpus(lines)
}

/// Prefer the behavior nearest the technology-type word, then the earliest.
fn distance_key(components: &[Component], behavior: Span) -> (usize, usize) {
    let distance = components
        .iter()
        .find(|c| c.tag == FunctionTag::T)
        .map(|t| {
            if behavior.0 >= t.span.1 {
                behavior.0 - t.span.1
            } else {
                t.span.0.saturating_sub(behavior.1)
            }
        })
        .unwrap_or(0);
    (distance, behavior.0)
}

fn is_marker(kind: TokenKind) -> bool {
    matches!(kind, TokenKind::Method | TokenKind::Purpose)
}

/// Decides which marker tokens open a component.
///
/// A marker with no plain word on its content side is a separator. Of the
/// remaining markers of one family only the one closest to the title edge
/// opens a component; the others are nested inside a noun phrase.
pub(crate) fn resolve_markers(mut tokens: Vec<Token>, position: MarkerPosition) -> Vec<Token> {
    for i in 0..tokens.len() {
        if !is_marker(tokens[i].kind) {
            continue;
        }
        let neighbour = match position {
            MarkerPosition::Prefix => tokens.get(i + 1),
            MarkerPosition::Suffix => i.checked_sub(1).and_then(|j| tokens.get(j)),
        };
        if !matches!(neighbour, Some(t) if t.kind == TokenKind::Plain) {
            tokens[i].kind = TokenKind::Connective;
        }
    }
    for family in [TokenKind::Method, TokenKind::Purpose] {
        let positions: Vec<usize> = (0..tokens.len()).filter(|&i| tokens[i].kind == family).collect();
        let keep = match position {
            MarkerPosition::Prefix => positions.last(),
            MarkerPosition::Suffix => positions.first(),
        }
        .copied();
        for i in positions {
            if Some(i) != keep {
                tokens[i].kind = TokenKind::Plain;
            }
        }
    }
    tokens
}

pub(crate) fn build_segments(source: &str, tokens: &[Token], position: MarkerPosition) -> Vec<Segment> {
    let n = tokens.len();
    // marker phrase ranges, inclusive
    let mut ranges: Vec<(usize, usize, usize)> = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if !is_marker(tok.kind) {
            continue;
        }
        let stop = |k: TokenKind| is_marker(k) || matches!(k, TokenKind::Development | TokenKind::Organization);
        let (mut lo, mut hi) = match position {
            MarkerPosition::Prefix => {
                let mut j = i + 1;
                while j < n && !stop(tokens[j].kind) {
                    j += 1;
                }
                (i, j - 1)
            }
            MarkerPosition::Suffix => {
                let mut j = i;
                while j > 0 && !stop(tokens[j - 1].kind) {
                    j -= 1;
                }
                (j, i)
            }
        };
        while hi > lo && tokens[hi].kind == TokenKind::Connective {
            hi -= 1;
        }
        while lo < hi && tokens[lo].kind == TokenKind::Connective {
            lo += 1;
        }
        ranges.push((lo, hi, i));
    }

    let mut segments = Vec::new();
    let mut i = 0;
    while i < n {
        if let Some(&(lo, hi, m)) = ranges.iter().find(|(lo, hi, _)| (*lo..=*hi).contains(&i)) {
            let tag = if tokens[m].kind == TokenKind::Method {
                FunctionTag::M
            } else {
                FunctionTag::P
            };
            segments.push(Segment::from_tokens(
                source,
                &tokens[lo..=hi],
                Some((tokens[m].text.clone(), tag)),
            ));
            i = hi + 1;
            continue;
        }
        let in_range = |k: usize| ranges.iter().any(|(lo, hi, _)| (*lo..=*hi).contains(&k));
        match tokens[i].kind {
            TokenKind::Connective => i += 1,
            TokenKind::Development => {
                segments.push(Segment::from_tokens(
                    source,
                    &tokens[i..=i],
                    Some((tokens[i].text.clone(), FunctionTag::D)),
                ));
                i += 1;
            }
            TokenKind::TechType => {
                segments.push(Segment::from_tokens(
                    source,
                    &tokens[i..=i],
                    Some((tokens[i].text.clone(), FunctionTag::T)),
                ));
                i += 1;
            }
            _ => {
                let runs = |k: usize| {
                    k < n
                        && !in_range(k)
                        && matches!(
                            tokens[k].kind,
                            TokenKind::Plain | TokenKind::Verbal | TokenKind::Strong | TokenKind::Organization
                        )
                };
                let mut j = i + 1;
                loop {
                    if runs(j) {
                        j += 1;
                        continue;
                    }
                    // internal connectives stay inside the run
                    let mut k = j;
                    while k < n && !in_range(k) && tokens[k].kind == TokenKind::Connective {
                        k += 1;
                    }
                    if k > j && runs(k) {
                        j = k;
                        continue;
                    }
                    break;
                }
                segments.push(Segment::from_tokens(source, &tokens[i..j], None));
                i = j;
            }
        }
    }
    segments
}

/// Splits an unmarked run around the behavior token and strong-point words.
///
/// Plain stretches become O; organization names go to E when `headline` is set
/// and are treated as plain words otherwise.
pub(crate) fn split_unmarked(tokens: &[Token], behavior: Span, headline: bool) -> Vec<(FunctionTag, Vec<Token>)> {
    let mut out: Vec<(FunctionTag, Vec<Token>)> = Vec::new();
    let mut plain: Vec<Token> = Vec::new();
    let flush = |out: &mut Vec<(FunctionTag, Vec<Token>)>, plain: &mut Vec<Token>| {
        if !plain.is_empty() {
            out.push((FunctionTag::O, std::mem::take(plain)));
        }
    };
    for tok in tokens {
        let own = if tok.span == behavior {
            Some(FunctionTag::B)
        } else if tok.kind == TokenKind::Strong {
            Some(FunctionTag::S)
        } else if headline && tok.kind == TokenKind::Organization {
            Some(FunctionTag::E)
        } else {
            None
        };
        match own {
            Some(tag) => {
                flush(&mut out, &mut plain);
                out.push((tag, vec![tok.clone()]));
            }
            None => plain.push(tok.clone()),
        }
    }
    flush(&mut out, &mut plain);
    out
}

/// Builds a component from tokens after dropping edge connectives.
pub(crate) fn trimmed_component(
    source: &str,
    tag: FunctionTag,
    tokens: &[Token],
    lexicon: &MarkerLexicon,
    spaced: bool,
    marker: Option<String>,
) -> Option<Component> {
    let (start, end) = trim_connectives(tokens, lexicon, spaced)?;
    let text = char_slice(source, start, end);
    let text = text.trim().to_string();
    if text.is_empty() {
        return None;
    }
    Some(Component::new(tag, text, marker, (start, end)))
}

/// Span of the tokens with leading/trailing connectives removed, including
/// connective prefixes glued to a single token ("の開発").
fn trim_connectives(tokens: &[Token], lexicon: &MarkerLexicon, spaced: bool) -> Option<Span> {
    let mut lo = 0;
    let mut hi = tokens.len();
    while lo < hi && tokens[lo].kind == TokenKind::Connective {
        lo += 1;
    }
    while hi > lo && tokens[hi - 1].kind == TokenKind::Connective {
        hi -= 1;
    }
    if lo == hi {
        return None;
    }
    let mut start = tokens[lo].span.0;
    let mut end = tokens[hi - 1].span.1;
    let first = &tokens[lo].text;
    let last = &tokens[hi - 1].text;
    start += edge_connective_len(first, lexicon, spaced, true).min(end - start - 1);
    end -= edge_connective_len(last, lexicon, spaced, false).min(end - start - 1);
    Some((start, end))
}

/// Length in chars of a connective at the edge of a token, including the space after it.
fn edge_connective_len(text: &str, lexicon: &MarkerLexicon, spaced: bool, leading: bool) -> usize {
    let lower = text.to_lowercase();
    let mut best = 0;
    for c in &lexicon.connectives {
        let c = c.to_lowercase();
        if c.is_empty() || c.len() >= lower.len() {
            continue;
        }
        let hit = if leading {
            lower.strip_prefix(&c).map(|rest| rest.chars().take_while(|ch| ch.is_whitespace()).count())
        } else {
            lower.strip_suffix(&c).map(|rest| rest.chars().rev().take_while(|ch| ch.is_whitespace()).count())
        };
        if let Some(ws) = hit {
            // in spaced text the connective must be a whole word
            if spaced && ws == 0 {
                continue;
            }
            best = best.max(c.chars().count() + ws);
        }
    }
    best
}

/// M or P component from a marker segment; gain phrases after a method marker become S.
pub(crate) fn marker_component(
    source: &str,
    seg: &Segment,
    lexicon: &MarkerLexicon,
    template: &OrderTemplate,
) -> Component {
    let (marker, tag) = seg.marker_hit.clone().expect("marker segment");
    let content: Vec<Token> = seg
        .tokens
        .iter()
        .filter(|t| !(is_marker(t.kind) && t.text == marker))
        .cloned()
        .collect();
    let content_span = trim_connectives(&content, lexicon, template.is_spaced()).unwrap_or(seg.span);
    let content_text = char_slice(source, content_span.0, content_span.1);
    if tag == FunctionTag::M && lexicon.is_gain(&content_text) {
        return Component::new(FunctionTag::S, seg.text.trim(), None, seg.span);
    }
    let span = match template.marker_position {
        MarkerPosition::Prefix => (seg.span.0, content_span.1),
        MarkerPosition::Suffix => (content_span.0, seg.span.1),
    };
    Component::new(tag, content_text.trim(), Some(marker), span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use FunctionTag::*;

    fn en() -> (MarkerLexicon, OrderTemplate) {
        (MarkerLexicon::english(), OrderTemplate::en_paper())
    }

    fn summary(t: &TaggedTitle) -> Vec<(FunctionTag, &str)> {
        t.components.iter().map(|c| (c.tag, c.text.as_str())).collect()
    }

    #[test]
    fn segment_marks_method_phrase() {
        let (lex, tpl) = en();
        let segs = segment("Method to Shorten Storage Period of Radioactive Waste by Burnout", &lex, &tpl).unwrap();
        let last = segs.last().unwrap();
        assert_eq!(last.marker_hit, Some(("by".to_string(), M)));
        assert_eq!(last.text, "by Burnout");
    }

    #[test]
    fn segment_marks_purpose_phrase() {
        let (lex, tpl) = en();
        let segs = segment(
            "Exploration System of Buried Cables for power distribution cables under pavements",
            &lex,
            &tpl,
        )
        .unwrap();
        let p = segs.iter().find(|s| s.hint() == Some(P)).unwrap();
        assert_eq!(p.marker_hit.as_ref().unwrap().0, "for");
        assert_eq!(p.text, "for power distribution cables under pavements");
    }

    #[test]
    fn unmarked_text_is_one_segment() {
        let (lex, tpl) = en();
        let segs = segment("Buried Cables", &lex, &tpl).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].marker_hit, None);
        assert_eq!(segs[0].text, "Buried Cables");
    }

    #[test]
    fn empty_title_is_rejected() {
        let (lex, tpl) = en();
        assert_eq!(parse_title("", &lex, &tpl), Err(ParseError::EmptyTitle));
        assert_eq!(parse_title("   \t", &lex, &tpl), Err(ParseError::EmptyTitle));
        assert_eq!(segment(" ", &lex, &tpl), Err(ParseError::EmptyTitle));
    }

    #[test]
    fn development_title() {
        let (lex, tpl) = en();
        let t = parse_title("Development of an Exploration System of Buried Cables", &lex, &tpl).unwrap();
        assert_eq!(summary(&t), vec![(D, "Development"), (B, "Exploration"), (T, "System"), (O, "Buried Cables")]);
        assert!(validate(&t).is_empty());
    }

    #[test]
    fn method_title_with_method_component() {
        let (lex, tpl) = en();
        let t = parse_title(
            "Method to Shorten Storage Period of Radioactive Waste by Metallic Fuel FBR",
            &lex,
            &tpl,
        )
        .unwrap();
        assert_eq!(
            summary(&t),
            vec![
                (T, "Method"),
                (B, "Shorten"),
                (O, "Storage Period of Radioactive Waste"),
                (M, "Metallic Fuel FBR"),
            ]
        );
        let m = t.first(M).unwrap();
        assert_eq!(m.marker.as_deref(), Some("by"));
        assert_eq!(t.slice(m.span), "by Metallic Fuel FBR");
    }

    #[test]
    fn gain_after_by_is_strong_point() {
        let (lex, tpl) = en();
        let t = parse_title("Method to Shorten Storage Period of Radioactive Waste by 1/10000", &lex, &tpl).unwrap();
        let s = t.first(S).unwrap();
        assert_eq!(s.text, "by 1/10000");
        assert_eq!(s.marker, None);
        assert!(!t.has(M));
    }

    #[test]
    fn nested_marker_stays_in_object() {
        let (lex, tpl) = en();
        let t = parse_title(
            "Method to Shorten Storage Period of Waste Produced by Reactors by Burnout",
            &lex,
            &tpl,
        )
        .unwrap();
        assert_eq!(t.first(O).unwrap().text, "Storage Period of Waste Produced by Reactors");
        assert_eq!(t.first(M).unwrap().text, "Burnout");
    }

    #[test]
    fn marker_without_content_is_a_separator() {
        let (lex, tpl) = en();
        let t = parse_title("Method for Shortening Storage Period of Radioactive Waste", &lex, &tpl).unwrap();
        assert_eq!(t.tags(), vec![T, B, O]);
    }

    #[test]
    fn no_behavior() {
        let (lex, tpl) = en();
        assert_eq!(parse_title("Underground Radar", &lex, &tpl), Err(ParseError::NoBehaviorFound));
    }

    #[test]
    fn template_mismatch_is_reported() {
        let (lex, tpl) = en();
        let err = parse_title("Buried Cable Exploration System", &lex, &tpl).unwrap_err();
        assert_eq!(err.name(), "TemplateMismatch");
    }

    #[test]
    fn tied_readings_resolve_to_earliest_behavior() {
        let lex = MarkerLexicon::english();
        let tpl = OrderTemplate::from_pattern("loose", "O? B O?", " ", MarkerPosition::Prefix, None).unwrap();
        let t = parse_title("Detection Monitoring", &lex, &tpl).unwrap();
        assert_eq!(summary(&t), vec![(B, "Detection"), (O, "Monitoring")]);
        assert!(t.ambiguous);
    }

    #[test]
    fn behavior_nearest_technology_word_wins() {
        let lex = MarkerLexicon::english();
        let tpl = OrderTemplate::from_pattern("loose", "O? B O? T?", " ", MarkerPosition::Prefix, None).unwrap();
        let t = parse_title("Detection Monitoring System", &lex, &tpl).unwrap();
        assert_eq!(summary(&t), vec![(O, "Detection"), (B, "Monitoring"), (T, "System")]);
        assert!(t.ambiguous);

        let t = parse_title("Method to Monitor Detection Results", &lex, &OrderTemplate::en_paper()).unwrap();
        assert_eq!(t.first(B).unwrap().text, "Monitor");
        assert_eq!(t.first(O).unwrap().text, "Detection Results");
        assert!(!t.ambiguous);
    }

    #[test]
    fn japanese_title_under_ja_template() {
        let lex = MarkerLexicon::japanese();
        let tpl = OrderTemplate::ja_paper();
        let t = parse_title("地中レーダによる埋設ケーブルの探査システムの開発", &lex, &tpl).unwrap();
        assert_eq!(
            summary(&t),
            vec![(M, "地中レーダ"), (O, "埋設ケーブル"), (B, "探査"), (T, "システム"), (D, "開発")]
        );
        assert_eq!(t.first(M).unwrap().marker.as_deref(), Some("による"));
        assert!(validate(&t).is_empty());
    }

    #[test]
    fn corpus_collects_failures_in_order() {
        let (lex, tpl) = en();
        let lines = [
            "Method to Shorten Radioactive Half-life",
            "",
            "Development of an Exploration System of Buried Cables",
        ];
        let report = parse_corpus(&lines, &lex, &tpl);
        assert_eq!(report.parsed.len(), 2);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].line, 2);
        assert_eq!(report.failures[0].input, "");
        assert_eq!(report.failures[0].error, "EmptyTitle");
    }
}
