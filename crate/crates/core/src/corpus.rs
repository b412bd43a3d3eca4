//! Tag frequencies and co-occurrence over tagged corpora, and title-vs-headline contrasts.
//!
//! Frequencies are document-level: a title counts once for a tag however many
//! components carry it. D and E never enter any report.

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::model::{Component, FunctionTag, TaggedTitle};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("planted rate for {tag} is {rate}, outside [0, 1]")]
    BadRate { tag: FunctionTag, rate: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub per_tag_rate: BTreeMap<FunctionTag, f64>,
    pub corpus_size: usize,
}

impl FrequencyReport {
    pub fn rate(&self, tag: FunctionTag) -> f64 {
        self.per_tag_rate.get(&tag).copied().unwrap_or(0.0)
    }
}

/// Title corpus against headline corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub title_report: FrequencyReport,
    pub headline_report: FrequencyReport,
    /// Headline S rate over title S rate; `None` when titles carry no S.
    pub s_ratio: Option<f64>,
    /// Title M rate minus headline M rate.
    pub m_delta: f64,
    pub ms_cooccurrence_rate: CorpusPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusPair {
    pub titles: f64,
    pub headlines: f64,
}

fn presence(doc: &TaggedTitle) -> [bool; 6] {
    let mut p = [false; 6];
    for c in &doc.components {
        if let Some(i) = FunctionTag::CONTENT.iter().position(|t| *t == c.tag) {
            p[i] = true;
        }
    }
    p
}

pub fn tag_frequency(corpus: &[TaggedTitle]) -> Result<FrequencyReport, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut counts = [0usize; 6];
    for doc in corpus {
        for (i, present) in presence(doc).into_iter().enumerate() {
            counts[i] += present as usize;
        }
    }
    let n = corpus.len() as f64;
    Ok(FrequencyReport {
        per_tag_rate: FunctionTag::CONTENT
            .iter()
            .zip(counts)
            .map(|(t, c)| (*t, c as f64 / n))
            .collect(),
        corpus_size: corpus.len(),
    })
}

/// Symmetric document co-occurrence counts over the six content tags; the diagonal counts documents with the tag.
pub fn tag_cooccurrence(corpus: &[TaggedTitle]) -> Result<BTreeMap<(FunctionTag, FunctionTag), usize>, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut out = BTreeMap::new();
    for a in FunctionTag::CONTENT {
        for b in FunctionTag::CONTENT {
            out.insert((a, b), 0);
        }
    }
    for doc in corpus {
        let p = presence(doc);
        for (i, a) in FunctionTag::CONTENT.iter().enumerate() {
            for (j, b) in FunctionTag::CONTENT.iter().enumerate() {
                if p[i] && p[j] {
                    *out.get_mut(&(*a, *b)).expect("pre-filled") += 1;
                }
            }
        }
    }
    Ok(out)
}

fn ms_rate(corpus: &[TaggedTitle]) -> f64 {
    let both = corpus
        .iter()
        .filter(|d| d.has(FunctionTag::M) && d.has(FunctionTag::S))
        .count();
    both as f64 / corpus.len() as f64
}

pub fn compare_corpora(titles: &[TaggedTitle], headlines: &[TaggedTitle]) -> Result<ComparisonReport, CorpusError> {
    let title_report = tag_frequency(titles)?;
    let headline_report = tag_frequency(headlines)?;
    let title_s = title_report.rate(FunctionTag::S);
    let s_ratio = (title_s > 0.0).then(|| headline_report.rate(FunctionTag::S) / title_s);
    let m_delta = title_report.rate(FunctionTag::M) - headline_report.rate(FunctionTag::M);
    Ok(ComparisonReport {
        ms_cooccurrence_rate: CorpusPair {
            titles: ms_rate(titles),
            headlines: ms_rate(headlines),
        },
        title_report,
        headline_report,
        s_ratio,
        m_delta,
    })
}

/// CSV: one row per tag, then summary rows.
pub fn write_frequency_csv<W: Write>(
    out: W,
    titles: &FrequencyReport,
    comparison: Option<&ComparisonReport>,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["kind", "key", "titles", "headlines"])?;
    let fmt = |x: f64| format!("{x:.6}");
    for tag in FunctionTag::CONTENT {
        let h = comparison.map(|c| fmt(c.headline_report.rate(tag))).unwrap_or_default();
        w.write_record(["tag", &tag.to_string(), &fmt(titles.rate(tag)), &h])?;
    }
    let h_size = comparison.map(|c| c.headline_report.corpus_size.to_string()).unwrap_or_default();
    w.write_record(["summary", "corpus_size", &titles.corpus_size.to_string(), &h_size])?;
    if let Some(c) = comparison {
        let ratio = c.s_ratio.map(fmt).unwrap_or_else(|| "undefined".to_string());
        w.write_record(["summary", "s_ratio", &ratio, ""])?;
        w.write_record(["summary", "m_delta", &fmt(c.m_delta), ""])?;
        w.write_record([
            "summary",
            "ms_cooccurrence_rate",
            &fmt(c.ms_cooccurrence_rate.titles),
            &fmt(c.ms_cooccurrence_rate.headlines),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Default planted rates: B and O above 0.8, T at 0.58, optional tags below 0.3.
pub fn default_rates() -> BTreeMap<FunctionTag, f64> {
    BTreeMap::from([
        (FunctionTag::B, 0.85),
        (FunctionTag::O, 0.85),
        (FunctionTag::T, 0.58),
        (FunctionTag::P, 0.2),
        (FunctionTag::M, 0.2),
        (FunctionTag::S, 0.1),
    ])
}

/// Synthetic corpus with each tag present in exactly `round(rate * n)` documents.
///
/// With `separate_m_s`, M and S are planted in disjoint documents whenever their counts allow it.
pub fn synthetic_corpus(
    rates: &BTreeMap<FunctionTag, f64>,
    n: usize,
    seed: u64,
    separate_m_s: bool,
) -> Result<Vec<TaggedTitle>, CorpusError> {
    let mut plant: Vec<Vec<FunctionTag>> = vec![Vec::new(); n];
    for (stage, tag) in FunctionTag::CONTENT.into_iter().enumerate() {
        let rate = rates.get(&tag).copied().unwrap_or(0.0);
        if !(0.0..=1.0).contains(&rate) {
            return Err(CorpusError::BadRate {
                tag,
                rate: rate.to_string(),
            });
        }
        let count = (rate * n as f64).round() as usize;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut crate::rng::stage(seed, stage as u64));
        if separate_m_s && tag == FunctionTag::S {
            // documents without M first
            order.sort_by_key(|&i| plant[i].contains(&FunctionTag::M));
        }
        for &i in order.iter().take(count) {
            plant[i].push(tag);
        }
    }
    Ok(plant
        .into_iter()
        .enumerate()
        .map(|(doc, mut tags)| {
            let order = |t: &FunctionTag| match t {
                FunctionTag::T => 0,
                FunctionTag::B => 1,
                FunctionTag::O => 2,
                FunctionTag::M => 3,
                FunctionTag::S => 4,
                _ => 5,
            };
            tags.sort_by_key(order);
            let mut source = String::new();
            let mut components = Vec::new();
            for t in tags {
                if !source.is_empty() {
                    source.push(' ');
                }
                let word = format!("{}{doc}", t.as_char().to_ascii_lowercase());
                let start = source.chars().count();
                source.push_str(&word);
                components.push(Component::new(t, word.clone(), None, (start, start + word.len())));
            }
            if source.is_empty() {
                source.push_str("untagged");
                components.push(Component::new(FunctionTag::E, "untagged", None, (0, 8)));
            }
            TaggedTitle::new(source, components, "synthetic")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use FunctionTag::*;

    fn doc(tags: &[FunctionTag]) -> TaggedTitle {
        let components = tags
            .iter()
            .enumerate()
            .map(|(i, t)| Component::new(*t, "x", None, (i * 2, i * 2 + 1)))
            .collect();
        TaggedTitle::new("x x x x x x x x x x x", components, "test")
    }

    #[test]
    fn frequency_by_document_presence() {
        let r = tag_frequency(&[doc(&[B, O, T]), doc(&[B, O])]).unwrap();
        assert_eq!(r.rate(B), 1.0);
        assert_eq!(r.rate(O), 1.0);
        assert_eq!(r.rate(T), 0.5);
        assert_eq!(r.rate(M), 0.0);
        assert_eq!(r.corpus_size, 2);
    }

    #[test]
    fn excluded_tags_never_reported() {
        let r = tag_frequency(&[doc(&[D, E, E, B])]).unwrap();
        assert!(!r.per_tag_rate.contains_key(&D));
        assert!(!r.per_tag_rate.contains_key(&E));
        let co = tag_cooccurrence(&[doc(&[D, E, B])]).unwrap();
        assert!(co.keys().all(|(a, b)| a.is_content() && b.is_content()));
    }

    #[test]
    fn empty_corpus() {
        assert_eq!(tag_frequency(&[]), Err(CorpusError::EmptyCorpus));
        assert_eq!(tag_cooccurrence(&[]), Err(CorpusError::EmptyCorpus));
        assert_eq!(compare_corpora(&[doc(&[B])], &[]), Err(CorpusError::EmptyCorpus));
    }

    #[test]
    fn cooccurrence_counts() {
        let co = tag_cooccurrence(&[doc(&[B, O, M])]).unwrap();
        assert_eq!(co[&(B, O)], 1);
        assert_eq!(co[&(B, M)], 1);
        assert_eq!(co[&(O, M)], 1);
        assert_eq!(co[&(M, S)], 0);
        assert_eq!(co[&(M, M)], 1);
    }

    #[test]
    fn identical_corpora_compare_flat() {
        let c = vec![doc(&[B, O, S]), doc(&[B, O, M])];
        let r = compare_corpora(&c, &c).unwrap();
        assert_eq!(r.s_ratio, Some(1.0));
        assert_eq!(r.m_delta, 0.0);
    }

    #[test]
    fn zero_title_strong_points_leave_ratio_undefined() {
        let r = compare_corpora(&[doc(&[B, O])], &[doc(&[B, O, S])]).unwrap();
        assert_eq!(r.s_ratio, None);
    }

    #[test]
    fn synthetic_corpus_hits_planted_counts() {
        let rates = BTreeMap::from([(B, 0.85), (T, 0.58), (O, 1.0)]);
        let corpus = synthetic_corpus(&rates, 100, 3, false).unwrap();
        let r = tag_frequency(&corpus).unwrap();
        assert!((r.rate(B) - 0.85).abs() <= 0.01);
        assert!((r.rate(T) - 0.58).abs() <= 0.01);
        assert_eq!(r.rate(M), 0.0);
        for d in &corpus {
            assert!(crate::model::validate(d).is_empty());
        }
    }

    #[test]
    fn separated_m_and_s_never_cooccur() {
        let rates = BTreeMap::from([(B, 1.0), (O, 1.0), (M, 0.3), (S, 0.25)]);
        let corpus = synthetic_corpus(&rates, 200, 11, true).unwrap();
        let co = tag_cooccurrence(&corpus).unwrap();
        assert_eq!(co[&(M, S)], 0);
        assert_eq!(co[&(M, M)], 60);
        assert_eq!(co[&(S, S)], 50);
    }

    #[test]
    fn bad_rate_rejected() {
        let rates = BTreeMap::from([(B, 1.5)]);
        assert!(matches!(synthetic_corpus(&rates, 10, 0, false), Err(CorpusError::BadRate { .. })));
    }

    #[test]
    fn csv_layout() {
        let t = vec![doc(&[B, O, S])];
        let h = vec![doc(&[B, O, S]), doc(&[B, M])];
        let cmp = compare_corpora(&t, &h).unwrap();
        let mut buf = Vec::new();
        write_frequency_csv(&mut buf, &cmp.title_report, Some(&cmp)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind,key,titles,headlines");
        assert_eq!(lines[1], "tag,B,1.000000,1.000000");
        assert!(lines.contains(&"summary,s_ratio,0.500000,"));
        assert!(!text.contains('\r'));
    }
}
