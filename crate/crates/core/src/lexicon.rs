//! Marker lexicons: the surface clues that drive segmentation and tagging.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::template::{OrderTemplate, TemplateError, TemplateSpec};

const ENGLISH_DEFAULT: &str = include_str!("../data/lexicon.en.json");
const JAPANESE_DEFAULT: &str = include_str!("../data/lexicon.ja.json");

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed lexicon JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("lexicon list `{0}` is empty")]
    EmptyList(&'static str),
    #[error("marker `{marker}` appears in both `{first}` and `{second}`")]
    DuplicateMarker {
        marker: String,
        first: &'static str,
        second: &'static str,
    },
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// Word lists for one language.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerLexicon {
    pub method_markers: Vec<String>,
    pub purpose_markers: Vec<String>,
    pub development_markers: Vec<String>,
    pub technology_type_words: Vec<String>,
    pub verbal_nouns: Vec<String>,
    #[serde(default)]
    pub jargon_terms: BTreeSet<String>,
    /// Function words that separate components ("of", "to"); never a component on their own.
    #[serde(default)]
    pub connectives: Vec<String>,
    /// Adjective/adverb phrases that express an advantage ("highly accurate").
    #[serde(default)]
    pub strong_point_words: Vec<String>,
    /// Words that turn a "by ..." phrase into a gain (strong point) rather than a method.
    #[serde(default)]
    pub gain_words: Vec<String>,
    /// Development organizations; tagged E in headlines.
    #[serde(default)]
    pub organization_names: Vec<String>,
}

/// On-disk layout: the lexicon lists plus optional extra templates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LexiconFile {
    #[serde(flatten)]
    pub lexicon: MarkerLexicon,
    #[serde(default)]
    pub templates: Vec<TemplateSpec>,
}

impl LexiconFile {
    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        let file: LexiconFile = serde_json::from_str(text)?;
        file.lexicon.check()?;
        for spec in &file.templates {
            OrderTemplate::from_spec(spec)?;
        }
        Ok(file)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Looks a template up in the file first, then among the built-ins.
    pub fn template(&self, id: &str) -> Result<OrderTemplate, LexiconError> {
        match self.templates.iter().find(|t| t.id == id) {
            Some(spec) => Ok(OrderTemplate::from_spec(spec)?),
            None => Ok(OrderTemplate::builtin(id)?),
        }
    }
}

impl MarkerLexicon {
    pub fn english() -> Self {
        LexiconFile::from_json(ENGLISH_DEFAULT)
            .expect("bundled English lexicon")
            .lexicon
    }

    pub fn japanese() -> Self {
        LexiconFile::from_json(JAPANESE_DEFAULT)
            .expect("bundled Japanese lexicon")
            .lexicon
    }

    fn marker_lists(&self) -> [(&'static str, &Vec<String>); 8] {
        [
            ("method_markers", &self.method_markers),
            ("purpose_markers", &self.purpose_markers),
            ("development_markers", &self.development_markers),
            ("technology_type_words", &self.technology_type_words),
            ("verbal_nouns", &self.verbal_nouns),
            ("connectives", &self.connectives),
            ("strong_point_words", &self.strong_point_words),
            ("organization_names", &self.organization_names),
        ]
    }

    /// Checks that the required lists are populated and that no entry is claimed by two lists.
    pub fn check(&self) -> Result<(), LexiconError> {
        for (name, list) in self.marker_lists().into_iter().take(5) {
            if list.iter().all(|s| s.trim().is_empty()) {
                return Err(LexiconError::EmptyList(name));
            }
        }
        let mut owner: BTreeMap<String, &'static str> = BTreeMap::new();
        for (name, list) in self.marker_lists() {
            for entry in list {
                let key = normalize(entry);
                if key.is_empty() {
                    continue;
                }
                if let Some(first) = owner.get(&key) {
                    if *first != name {
                        return Err(LexiconError::DuplicateMarker {
                            marker: entry.clone(),
                            first,
                            second: name,
                        });
                    }
                }
                owner.insert(key, name);
            }
        }
        Ok(())
    }

    pub fn is_connective(&self, word: &str) -> bool {
        let w = normalize(word);
        self.connectives.iter().any(|c| normalize(c) == w)
    }

    pub fn is_jargon(&self, phrase: &str) -> bool {
        let p = normalize(phrase);
        self.jargon_terms.iter().any(|j| contains_phrase(&p, &normalize(j)))
    }

    /// True when a marker phrase's content expresses a gain ("1/10000", "half").
    pub fn is_gain(&self, content: &str) -> bool {
        if content.chars().any(|c| c.is_ascii_digit()) {
            return true;
        }
        let c = normalize(content);
        self.gain_words.iter().any(|g| contains_phrase(&c, &normalize(g)))
    }

    /// Which list a marker string belongs to, if any.
    pub fn marker_owner(&self, marker: &str) -> Option<&'static str> {
        let m = normalize(marker);
        self.marker_lists()
            .into_iter()
            .find(|(_, list)| list.iter().any(|e| normalize(e) == m))
            .map(|(name, _)| name)
    }
}

/// Lowercases and collapses whitespace.
pub fn normalize(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn contains_phrase(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    if !haystack.contains(' ') && !needle.contains(' ') && !haystack.is_ascii() {
        // unspaced scripts: substring containment
        return haystack.contains(needle);
    }
    let hay: Vec<&str> = haystack.split(' ').collect();
    let nee: Vec<&str> = needle.split(' ').collect();
    hay.windows(nee.len()).any(|w| w == nee.as_slice())
}
