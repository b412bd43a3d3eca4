//! Expression-pattern classification by phrase-bank lookup.
//!
//! A component is attributed to the bank variant whose wording it reproduces.
//! Separators that sit between components in the source (the "to" of
//! "Method to Shorten") may belong to the variant, so each component is
//! compared with and without its neighbouring gap text.

use crate::composer::PhraseBankEntry;
use crate::lexicon::{normalize, MarkerLexicon};
use crate::model::{char_slice, FunctionTag, ObligatoryPattern, OptionalPattern, TaggedTitle};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("{tag} text `{text}` matches no variant of `{technology}`")]
    UnknownPhrase {
        tag: FunctionTag,
        text: String,
        technology: String,
    },
    #[error("title has no object component")]
    MissingObject,
    #[error("title carries both a method and a strong point")]
    MixedOptional,
}

fn surfaces(title: &TaggedTitle, index: usize) -> Vec<String> {
    let c = &title.components[index];
    let prev_end = index
        .checked_sub(1)
        .map(|i| title.components[i].span.1)
        .unwrap_or(0);
    let next_start = title
        .components
        .get(index + 1)
        .map(|n| n.span.0)
        .unwrap_or_else(|| title.source.chars().count());
    let (s, e) = c.span;
    [
        c.text.clone(),
        char_slice(&title.source, s, e),
        char_slice(&title.source, prev_end.min(s), e),
        char_slice(&title.source, s, next_start.max(e)),
        char_slice(&title.source, prev_end.min(s), next_start.max(e)),
    ]
    .iter()
    .map(|s| normalize(s))
    .collect()
}

fn matches_variant(surfaces: &[String], variant: &str) -> bool {
    let v = normalize(variant);
    !v.is_empty() && surfaces.contains(&v)
}

/// Recovers the (obligatory, optional) pattern pair whose bank variants produced the title.
pub fn classify_pattern(
    title: &TaggedTitle,
    bank: &PhraseBankEntry,
) -> Result<(ObligatoryPattern, OptionalPattern), ClassifyError> {
    let mut obligatory = None;
    let mut method = None;
    let mut strong = false;

    for (i, c) in title.components.iter().enumerate() {
        let surf = surfaces(title, i);
        let unknown = || ClassifyError::UnknownPhrase {
            tag: c.tag,
            text: c.text.clone(),
            technology: bank.technology_id.clone(),
        };
        match c.tag {
            FunctionTag::D | FunctionTag::E => {}
            FunctionTag::T => {
                if !matches_variant(&surf, &bank.t_text) {
                    return Err(unknown());
                }
            }
            FunctionTag::B => {
                if !matches_variant(&surf, &bank.b_text) {
                    return Err(unknown());
                }
            }
            FunctionTag::P => {
                let ok = bank.p_text.as_deref().is_some_and(|p| matches_variant(&surf, p));
                if !ok {
                    return Err(unknown());
                }
            }
            FunctionTag::O => {
                let hit = ObligatoryPattern::ALL
                    .into_iter()
                    .find(|p| bank.o_variants.get(p).is_some_and(|v| matches_variant(&surf, v)));
                obligatory = Some(hit.ok_or_else(unknown)?);
            }
            FunctionTag::M => {
                let hit = [OptionalPattern::P3_1, OptionalPattern::P3_2]
                    .into_iter()
                    .find(|p| bank.m_variants.get(p).is_some_and(|v| matches_variant(&surf, v)));
                method = Some(hit.ok_or_else(unknown)?);
            }
            FunctionTag::S => {
                if !matches_variant(&surf, &bank.s_variant) {
                    return Err(unknown());
                }
                strong = true;
            }
        }
    }

    let obligatory = obligatory.ok_or(ClassifyError::MissingObject)?;
    let optional = match (method, strong) {
        (Some(_), true) => return Err(ClassifyError::MixedOptional),
        (Some(m), false) => m,
        (None, true) => OptionalPattern::P4_0,
        (None, false) => OptionalPattern::None,
    };
    Ok((obligatory, optional))
}

/// Cross-checks the bank's jargon annotations against the lexicon's jargon terms.
///
/// Jargon variants (1.1, 3.1) must contain a listed term; plain variants must not.
pub fn check_jargon(bank: &PhraseBankEntry, lexicon: &MarkerLexicon) -> Vec<String> {
    let mut issues = Vec::new();
    let mut check = |label: &str, text: &str, jargon: bool| {
        if lexicon.is_jargon(text) != jargon {
            let expected = if jargon { "jargon" } else { "plain" };
            issues.push(format!("{}: variant {label} `{text}` should be {expected}", bank.technology_id));
        }
    };
    for (p, text) in &bank.o_variants {
        check(p.label(), text, p.is_jargon());
    }
    for (p, text) in &bank.m_variants {
        check(p.label(), text, *p == OptionalPattern::P3_1);
    }
    check(OptionalPattern::P4_0.label(), &bank.s_variant, false);
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composer::tests::radwaste;
    use crate::model::Component;
    use crate::parser::parse_title;
    use crate::template::OrderTemplate;

    fn parse(title: &str) -> TaggedTitle {
        parse_title(title, &MarkerLexicon::english(), &OrderTemplate::en_paper()).unwrap()
    }

    #[test]
    fn jargon_object_without_optional() {
        let t = parse("Method to Shorten Radioactive Half-life");
        assert_eq!(
            classify_pattern(&t, &radwaste()).unwrap(),
            (ObligatoryPattern::P1_1, OptionalPattern::None)
        );
    }

    #[test]
    fn purpose_object_with_strong_point() {
        let t = parse("Method to Shorten Storage Period of Radioactive Waste by 1/10000");
        assert_eq!(
            classify_pattern(&t, &radwaste()).unwrap(),
            (ObligatoryPattern::P2_0, OptionalPattern::P4_0)
        );
    }

    #[test]
    fn plain_method() {
        let t = parse("Method to Shorten Storage Period of Radioactive Waste by Burnout");
        assert_eq!(
            classify_pattern(&t, &radwaste()).unwrap(),
            (ObligatoryPattern::P2_0, OptionalPattern::P3_2)
        );
    }

    #[test]
    fn unknown_object_phrase() {
        let t = parse("Method to Shorten Storage Period of Spent Fuel");
        match classify_pattern(&t, &radwaste()) {
            Err(ClassifyError::UnknownPhrase { tag, text, .. }) => {
                assert_eq!(tag, FunctionTag::O);
                assert_eq!(text, "Storage Period of Spent Fuel");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn method_and_strong_point_together_are_rejected() {
        let source = "Method to Shorten the Duration of Radiation by Burnout by 1/10000";
        let t = TaggedTitle::new(
            source,
            vec![
                Component::new(FunctionTag::T, "Method", None, (0, 6)),
                Component::new(FunctionTag::B, "Shorten", None, (10, 17)),
                Component::new(FunctionTag::O, "the Duration of Radiation", None, (18, 43)),
                Component::new(FunctionTag::M, "Burnout", Some("by".into()), (44, 54)),
                Component::new(FunctionTag::S, "by 1/10000", None, (55, 65)),
            ],
            "en-paper",
        );
        assert_eq!(classify_pattern(&t, &radwaste()), Err(ClassifyError::MixedOptional));
    }

    #[test]
    fn bank_jargon_annotations_agree_with_lexicon() {
        assert!(check_jargon(&radwaste(), &MarkerLexicon::english()).is_empty());
        let mut bad = radwaste();
        bad.o_variants.insert(ObligatoryPattern::P1_2, "Radioactive Half-life Period".into());
        assert_eq!(check_jargon(&bad, &MarkerLexicon::english()).len(), 1);
    }
}
