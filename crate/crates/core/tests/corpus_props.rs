use std::collections::BTreeMap;

use proptest::prelude::*;
use titlekit::corpus::{compare_corpora, default_rates, synthetic_corpus, tag_cooccurrence, tag_frequency};
use titlekit::{Component, FunctionTag, TaggedTitle};

fn doc(tags: &[FunctionTag]) -> TaggedTitle {
    let mut source = String::new();
    let mut components = Vec::new();
    for (i, t) in tags.iter().enumerate() {
        if i > 0 {
            source.push(' ');
        }
        let start = source.len();
        source.push('w');
        components.push(Component::new(*t, "w", None, (start, start + 1)));
    }
    TaggedTitle::new(source, components, "test")
}

fn corpus() -> impl Strategy<Value = Vec<TaggedTitle>> {
    prop::collection::vec(prop::sample::subsequence(FunctionTag::ALL.to_vec(), 0..=8), 1..40)
        .prop_map(|docs| docs.iter().map(|d| doc(d)).collect())
}

/// Twenty documents each, S planted in one title and five headlines.
fn strong_point_fixture() -> (Vec<TaggedTitle>, Vec<TaggedTitle>) {
    use FunctionTag::*;
    let titles = (0..20).map(|i| if i == 0 { doc(&[B, O, S]) } else { doc(&[T, B, O, M]) }).collect();
    let headlines = (0..20).map(|i| if i < 5 { doc(&[B, O, S]) } else { doc(&[B, O]) }).collect();
    (titles, headlines)
}

#[test]
fn five_fold_strong_point_ratio() {
    let (titles, headlines) = strong_point_fixture();
    let r = compare_corpora(&titles, &headlines).unwrap();
    assert_eq!(r.title_report.rate(FunctionTag::S), 0.05);
    assert_eq!(r.headline_report.rate(FunctionTag::S), 0.25);
    assert!((r.s_ratio.unwrap() - 5.0).abs() < 1e-12);
    assert!((r.m_delta - 0.95).abs() < 1e-12);
    assert_eq!(r.ms_cooccurrence_rate.titles, 0.0);
    assert_eq!(tag_cooccurrence(&titles).unwrap()[&(FunctionTag::M, FunctionTag::S)], 0);
}

#[test]
fn default_generator_hits_its_bands() {
    let corpus = synthetic_corpus(&default_rates(), 100, 17, true).unwrap();
    let r = tag_frequency(&corpus).unwrap();
    for (tag, rate) in default_rates() {
        assert!((r.rate(tag) - rate).abs() <= 1.0 / 100.0, "{tag}");
    }
    assert_eq!(tag_cooccurrence(&corpus).unwrap()[&(FunctionTag::M, FunctionTag::S)], 0);
}

proptest! {
    #[test]
    fn rates_bounded_and_stable_under_permutation_and_duplication(c in corpus()) {
        let r = tag_frequency(&c).unwrap();
        prop_assert!(r.per_tag_rate.values().all(|v| (0.0..=1.0).contains(v)));
        prop_assert_eq!(r.per_tag_rate.len(), 6);
        let mut rev = c.clone();
        rev.reverse();
        prop_assert_eq!(&tag_frequency(&rev).unwrap().per_tag_rate, &r.per_tag_rate);
        let doubled: Vec<_> = c.iter().chain(c.iter()).cloned().collect();
        prop_assert_eq!(&tag_frequency(&doubled).unwrap().per_tag_rate, &r.per_tag_rate);
    }

    #[test]
    fn cooccurrence_symmetric_and_bounded(c in corpus()) {
        let co = tag_cooccurrence(&c).unwrap();
        for a in FunctionTag::CONTENT {
            for b in FunctionTag::CONTENT {
                prop_assert_eq!(co[&(a, b)], co[&(b, a)]);
                prop_assert!(co[&(a, b)] <= co[&(a, a)].min(co[&(b, b)]));
            }
        }
    }

    #[test]
    fn planted_rates_recovered_within_one_document(
        n in 1usize..300,
        seed in any::<u64>(),
        rates in prop::array::uniform6(0.0f64..=1.0),
    ) {
        let planted: BTreeMap<_, _> = FunctionTag::CONTENT.into_iter().zip(rates).collect();
        let c = synthetic_corpus(&planted, n, seed, false).unwrap();
        let r = tag_frequency(&c).unwrap();
        for (tag, rate) in planted {
            prop_assert!((r.rate(tag) - rate).abs() <= 1.0 / n as f64 + 1e-12);
        }
    }
}
