use proptest::prelude::*;
use titlekit::headline::tag_headline;
use titlekit::{parse_corpus, parse_title, validate, MarkerLexicon, OrderTemplate, ParseError, TaggedTitle};

const EN_WORDS: &[&str] = &[
    "Method", "System", "Model", "to", "of", "a", "the", "by", "for", "using", "Development of", "a Study on",
    "Shorten", "Exploration", "Detection", "Monitoring", "Locates", "Buried", "Cables", "Radar", "Waste",
    "Highly Accurate", "Rapid", "1/10000", "Half", "CRIEPI", "Pavements", "FBR", "Fuel",
];

const JA_WORDS: &[&str] = &[
    "による", "のための", "の開発", "システム", "手法", "探査", "検出", "短縮", "の", "を", "する",
    "高精度な", "埋設", "ケーブル", "地中", "レーダ", "電中研", "10倍",
];

fn sentence(words: &'static [&'static str], sep: &'static str) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(words), 1..10).prop_map(move |w| w.join(sep))
}

/// Text outside every component must be separators: whitespace, punctuation, connectives or bare markers.
fn uncovered_text_is_separator_only(t: &TaggedTitle, lex: &MarkerLexicon) -> Result<(), String> {
    let chars: Vec<char> = t.source.chars().collect();
    let mut covered = vec![false; chars.len()];
    for c in &t.components {
        covered[c.span.0..c.span.1].iter_mut().for_each(|x| *x = true);
    }
    let gaps: String = chars.iter().zip(&covered).map(|(ch, cov)| if *cov { ' ' } else { *ch }).collect();
    let marker_words: Vec<String> = lex
        .method_markers
        .iter()
        .chain(&lex.purpose_markers)
        .flat_map(|m| m.split_whitespace().map(str::to_lowercase))
        .collect();
    for word in gaps.split(|c: char| c.is_whitespace() || ",;:!?\"()[]".contains(c)) {
        if !word.is_empty() && !lex.is_connective(word) && !marker_words.contains(&word.to_lowercase()) {
            return Err(format!("`{word}` of `{}` is in no component", t.source));
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn no_content_is_dropped(title in sentence(EN_WORDS, " ")) {
        let lex = MarkerLexicon::english();
        let template = OrderTemplate::en_paper();
        if let Ok(t) = parse_title(&title, &lex, &template) {
            prop_assert!(uncovered_text_is_separator_only(&t, &lex).is_ok(), "{:?}", uncovered_text_is_separator_only(&t, &lex));
        }
        if let Ok(t) = tag_headline(&title, &lex, &template) {
            prop_assert!(uncovered_text_is_separator_only(&t, &lex).is_ok(), "{:?}", uncovered_text_is_separator_only(&t, &lex));
        }
    }

    #[test]
    fn english_parses_are_valid_or_fail_cleanly(title in sentence(EN_WORDS, " ")) {
        let template = OrderTemplate::en_paper();
        match parse_title(&title, &MarkerLexicon::english(), &template) {
            Ok(t) => {
                prop_assert!(validate(&t).is_empty(), "{:?}", validate(&t));
                prop_assert!(template.matches(&t.tags()));
                prop_assert_eq!(&t.source, &title);
            }
            Err(e) => {
                let expected = matches!(
                    e,
                    ParseError::NoBehaviorFound | ParseError::TemplateMismatch { .. } | ParseError::AmbiguousParse { .. }
                );
                prop_assert!(expected, "{e:?}");
            }
        }
    }

    #[test]
    fn japanese_parses_are_valid_or_fail_cleanly(title in sentence(JA_WORDS, "")) {
        let template = OrderTemplate::ja_paper();
        if let Ok(t) = parse_title(&title, &MarkerLexicon::japanese(), &template) {
            prop_assert!(validate(&t).is_empty(), "{:?}", validate(&t));
            prop_assert!(template.matches(&t.tags()));
        }
    }

    #[test]
    fn headline_tagging_respects_multiplicities(title in sentence(EN_WORDS, " ")) {
        if let Ok(t) = tag_headline(&title, &MarkerLexicon::english(), &OrderTemplate::en_paper()) {
            prop_assert!(validate(&t).is_empty(), "{:?}", validate(&t));
        }
    }

    #[test]
    fn headline_and_parser_agree_on_the_same_behavior(title in sentence(EN_WORDS, " ")) {
        let lex = MarkerLexicon::english();
        let template = OrderTemplate::en_paper();
        // organization names are residue only in headline mode
        prop_assume!(!lex.organization_names.iter().any(|o| title.contains(o.as_str())));
        if let Ok(p) = parse_title(&title, &lex, &template) {
            let h = tag_headline(&title, &lex, &template).unwrap();
            let behavior = |t: &titlekit::TaggedTitle| t.first(titlekit::FunctionTag::B).map(|c| c.span);
            if behavior(&p) == behavior(&h) {
                let mut a = p.tags();
                let mut b = h.tags();
                a.sort();
                b.sort();
                prop_assert_eq!(a, b);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn corpus_parse_count_ignores_line_order(lines in prop::collection::vec(sentence(EN_WORDS, " "), 0..12)) {
        let lex = MarkerLexicon::english();
        let template = OrderTemplate::en_paper();
        let forward = parse_corpus(&lines, &lex, &template);
        let mut reversed = lines.clone();
        reversed.reverse();
        let backward = parse_corpus(&reversed, &lex, &template);
        prop_assert_eq!(forward.parsed.len(), backward.parsed.len());
        prop_assert_eq!(forward.parsed.len() + forward.failures.len(), lines.len());
    }
}

#[test]
fn blank_input_is_an_error() {
    let lex = MarkerLexicon::english();
    let t = OrderTemplate::en_paper();
    assert_eq!(parse_title("   ", &lex, &t), Err(ParseError::EmptyTitle));
    assert_eq!(tag_headline("", &lex, &t), Err(ParseError::EmptyTitle));
}
