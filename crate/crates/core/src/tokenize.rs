//! Lexicon-aware tokenization.
//!
//! Two tokenizers share one longest-match dictionary: a whitespace tokenizer for
//! spaced scripts and a greedy dictionary scanner for unspaced scripts, where
//! every run of characters not covered by a lexicon entry becomes one plain token.

use crate::lexicon::MarkerLexicon;
use crate::model::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Plain,
    Connective,
    Method,
    Purpose,
    Development,
    TechType,
    Verbal,
    Strong,
    Organization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub span: Span,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_anchor(&self) -> bool {
        !matches!(self.kind, TokenKind::Plain | TokenKind::Connective)
    }
}

pub trait Tokenizer {
    fn tokenize(&self, text: &str) -> Vec<Token>;
}

struct Entry {
    words: Vec<String>,
    chars: Vec<char>,
    kind: TokenKind,
}

struct Dictionary {
    entries: Vec<Entry>,
}

impl Dictionary {
    fn new(lexicon: &MarkerLexicon) -> Self {
        let lists: [(&Vec<String>, TokenKind); 8] = [
            (&lexicon.development_markers, TokenKind::Development),
            (&lexicon.method_markers, TokenKind::Method),
            (&lexicon.purpose_markers, TokenKind::Purpose),
            (&lexicon.technology_type_words, TokenKind::TechType),
            (&lexicon.verbal_nouns, TokenKind::Verbal),
            (&lexicon.strong_point_words, TokenKind::Strong),
            (&lexicon.organization_names, TokenKind::Organization),
            (&lexicon.connectives, TokenKind::Connective),
        ];
        let mut entries = Vec::new();
        for (list, kind) in lists {
            for raw in list {
                let lower = raw.trim().to_lowercase();
                if lower.is_empty() {
                    continue;
                }
                entries.push(Entry {
                    words: lower.split_whitespace().map(str::to_string).collect(),
                    chars: lower.chars().filter(|c| !c.is_whitespace()).collect(),
                    kind,
                });
            }
        }
        // stable: among equal lengths the list order above decides
        entries.sort_by_key(|e| std::cmp::Reverse(e.chars.len()));
        Dictionary { entries }
    }
}

fn is_break(c: char) -> bool {
    c.is_whitespace() || matches!(c, ',' | ';' | ':' | '!' | '?' | '"' | '(' | ')' | '[' | ']' | '、' | '。' | '「' | '」' | '・')
}

/// Splits on whitespace and punctuation, then merges multi-word lexicon entries (longest first).
pub struct WhitespaceTokenizer {
    dict: Dictionary,
}

impl WhitespaceTokenizer {
    pub fn new(lexicon: &MarkerLexicon) -> Self {
        WhitespaceTokenizer {
            dict: Dictionary::new(lexicon),
        }
    }
}

fn words(text: &str) -> Vec<(String, Span)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (i, c) in text.chars().enumerate() {
        if is_break(c) {
            if !current.is_empty() {
                out.push((std::mem::take(&mut current), (start, i)));
            }
        } else {
            if current.is_empty() {
                start = i;
            }
            current.push(c);
        }
    }
    if !current.is_empty() {
        let end = start + current.chars().count();
        out.push((current, (start, end)));
    }
    out
}

impl Tokenizer for WhitespaceTokenizer {
    fn tokenize(&self, text: &str) -> Vec<Token> {
        let words = words(text);
        let lower: Vec<String> = words.iter().map(|(w, _)| w.to_lowercase()).collect();
        let mut tokens = Vec::with_capacity(words.len());
        let mut i = 0;
        while i < words.len() {
            let hit = self.dict.entries.iter().find(|e| {
                e.words.len() <= words.len() - i
                    && e.words.iter().zip(&lower[i..]).all(|(a, b)| a == b)
            });
            let (len, kind) = match hit {
                Some(e) => (e.words.len(), e.kind),
                None => (1, TokenKind::Plain),
            };
            let span = (words[i].1 .0, words[i + len - 1].1 .1);
            tokens.push(Token {
                text: crate::model::char_slice(text, span.0, span.1),
                span,
                kind,
            });
            i += len;
        }
        tokens
    }
}

/// Greedy longest-match dictionary scan for unspaced text.
pub struct LexiconTokenizer {
    dict: Dictionary,
}

impl LexiconTokenizer {
    pub fn new(lexicon: &MarkerLexicon) -> Self {
        LexiconTokenizer {
            dict: Dictionary::new(lexicon),
        }
    }
}

impl Tokenizer for LexiconTokenizer {
    fn tokenize(&self, text: &str) -> Vec<Token> {
        let chars: Vec<char> = text.chars().collect();
        let lower: Vec<char> = chars
            .iter()
            .map(|c| c.to_lowercase().next().unwrap_or(*c))
            .collect();
        let mut tokens = Vec::new();
        let mut plain_start: Option<usize> = None;
        let flush = |tokens: &mut Vec<Token>, from: &mut Option<usize>, to: usize| {
            if let Some(s) = from.take() {
                tokens.push(Token {
                    text: chars[s..to].iter().collect(),
                    span: (s, to),
                    kind: TokenKind::Plain,
                });
            }
        };
        let mut i = 0;
        while i < chars.len() {
            if is_break(chars[i]) {
                flush(&mut tokens, &mut plain_start, i);
                i += 1;
                continue;
            }
            let hit = self
                .dict
                .entries
                .iter()
                .find(|e| !e.chars.is_empty() && lower[i..].starts_with(&e.chars));
            match hit {
                Some(e) => {
                    flush(&mut tokens, &mut plain_start, i);
                    let end = i + e.chars.len();
                    tokens.push(Token {
                        text: chars[i..end].iter().collect(),
                        span: (i, end),
                        kind: e.kind,
                    });
                    i = end;
                }
                None => {
                    plain_start.get_or_insert(i);
                    i += 1;
                }
            }
        }
        flush(&mut tokens, &mut plain_start, chars.len());
        tokens
    }
}

/// Picks the tokenizer matching a template's spacing convention.
pub fn tokenizer_for(lexicon: &MarkerLexicon, spaced: bool) -> Box<dyn Tokenizer> {
    if spaced {
        Box::new(WhitespaceTokenizer::new(lexicon))
    } else {
        Box::new(LexiconTokenizer::new(lexicon))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(tokens: &[Token]) -> Vec<(String, TokenKind)> {
        tokens.iter().map(|t| (t.text.clone(), t.kind)).collect()
    }

    #[test]
    fn whitespace_tokenizer_prefers_longest_entry() {
        let tok = WhitespaceTokenizer::new(&MarkerLexicon::english());
        let tokens = tok.tokenize("Development of an Exploration System of Buried Cables");
        use TokenKind::*;
        assert_eq!(
            kinds(&tokens),
            vec![
                ("Development of".into(), Development),
                ("an".into(), Connective),
                ("Exploration".into(), Verbal),
                ("System".into(), TechType),
                ("of".into(), Connective),
                ("Buried".into(), Plain),
                ("Cables".into(), Plain),
            ]
        );
        assert_eq!(tokens[0].span, (0, 14));
        assert_eq!(tokens[6].span, (47, 53));
    }

    #[test]
    fn punctuation_breaks_words() {
        let tok = WhitespaceTokenizer::new(&MarkerLexicon::english());
        let tokens = tok.tokenize("Radar, (Buried) Cables");
        assert_eq!(tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>(), ["Radar", "Buried", "Cables"]);
        assert_eq!(tokens[1].span, (8, 14));
    }

    #[test]
    fn lexicon_tokenizer_scans_unspaced_text() {
        let tok = LexiconTokenizer::new(&MarkerLexicon::japanese());
        let tokens = tok.tokenize("地中レーダによる埋設ケーブルの探査システムの開発");
        use TokenKind::*;
        assert_eq!(
            kinds(&tokens),
            vec![
                ("地中レーダ".into(), Plain),
                ("による".into(), Method),
                ("埋設ケーブル".into(), Plain),
                ("の".into(), Connective),
                ("探査".into(), Verbal),
                ("システム".into(), TechType),
                ("の開発".into(), Development),
            ]
        );
    }

    #[test]
    fn tokens_never_overlap() {
        let tok = WhitespaceTokenizer::new(&MarkerLexicon::english());
        let tokens = tok.tokenize("Method to Shorten Storage Period of Radioactive Waste by Metallic Fuel FBR");
        for pair in tokens.windows(2) {
            assert!(pair[0].span.1 <= pair[1].span.0);
        }
    }
}
