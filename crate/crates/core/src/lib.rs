//! Shallow parsing, pattern-controlled composition and reader-impression
//! statistics for technical titles and newspaper headlines.

pub mod classify;
pub mod composer;
pub mod corpus;
pub mod headline;
pub mod lexicon;
pub mod model;
pub mod parser;
pub mod rng;
pub mod survey;
pub mod template;
pub mod tokenize;

pub use classify::{classify_pattern, ClassifyError};
pub use composer::{ComposedTitle, PhraseBankEntry};
pub use lexicon::{LexiconFile, MarkerLexicon};
pub use model::{validate, Component, FunctionTag, ObligatoryPattern, OptionalPattern, TaggedTitle};
pub use parser::{parse_corpus, parse_title, segment, ParseError, ParseReport, TitleParser};
pub use template::OrderTemplate;
