//! Corpus loading and text preprocessing.
//!
//! Documents are listed in a CSV manifest (`path,author,title`), tokenized into
//! lowercase word sequences, optionally stripped of stopwords and mapped through
//! a lemma table, and finally cut into fixed-length samples.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{self, BufRead, BufReader};
use std::num::NonZeroUsize;
use std::ops::Deref;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Stopword list shipped with the crate, one lowercase token per line.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

/// Manifest describing the 78-book, 13-author English corpus. Paths are relative
/// to the manifest location; the texts themselves are not distributed.
pub const SI_BOOK_MANIFEST: &str = include_str!("../data/si_books.csv");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read manifest {path}: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("manifest row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("manifest row {row}: cannot read {path}: {source}")]
    Text {
        row: usize,
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("manifest row {row}: {path} is not valid UTF-8")]
    Encoding { row: usize, path: PathBuf },
    #[error("manifest row {row}: duplicate document ({author}, {title}), first seen at row {first_row}")]
    Duplicate {
        row: usize,
        first_row: usize,
        author: String,
        title: String,
    },
    #[error("invalid document: {0}")]
    InvalidDocument(&'static str),
    #[error("sample length must be at least 1")]
    InvalidSampleLength,
    #[error("sample too short: {available} tokens available, {needed} required")]
    SampleTooShort { needed: usize, available: usize },
    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, CorpusError>;

/// A raw text with its author label and title.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDocument {
    author: String,
    title: String,
    text: String,
}

impl LabeledDocument {
    pub fn new(
        author: impl Into<String>,
        title: impl Into<String>,
        text: impl Into<String>,
    ) -> Result<Self> {
        let (author, title, text) = (author.into(), title.into(), text.into());
        if author.trim().is_empty() {
            return Err(CorpusError::InvalidDocument("empty author"));
        }
        if title.trim().is_empty() {
            return Err(CorpusError::InvalidDocument("empty title"));
        }
        if text.is_empty() {
            return Err(CorpusError::InvalidDocument("empty text"));
        }
        Ok(Self {
            author,
            title,
            text,
        })
    }

    pub fn author(&self) -> &str {
        &self.author
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Ordered lowercase word tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn new(tokens: Vec<String>) -> Self {
        Self(tokens)
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    /// Distinct tokens of the sequence.
    pub fn vocabulary(&self) -> HashSet<&str> {
        self.0.iter().map(String::as_str).collect()
    }
}

impl Deref for TokenSequence {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl<S: Into<String>> FromIterator<S> for TokenSequence {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(Into::into).collect())
    }
}

/// Sample length `w`, in retained tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct SampleSpec(NonZeroUsize);

impl SampleSpec {
    pub fn new(w: usize) -> Result<Self> {
        NonZeroUsize::new(w)
            .map(Self)
            .ok_or(CorpusError::InvalidSampleLength)
    }

    pub fn len(self) -> usize {
        self.0.get()
    }
}

impl TryFrom<usize> for SampleSpec {
    type Error = CorpusError;

    fn try_from(w: usize) -> Result<Self> {
        Self::new(w)
    }
}

impl From<SampleSpec> for usize {
    fn from(s: SampleSpec) -> usize {
        s.len()
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into lowercase word tokens.
///
/// Any run of non-letter characters separates tokens. An apostrophe (ASCII or
/// U+2019) survives only between two letters and is normalized to `'`, so
/// `Don't` becomes `don't` while quotes around words disappear.
pub fn tokenize(text: &str) -> TokenSequence {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphabetic() {
            current.extend(c.to_lowercase());
        } else if is_apostrophe(c)
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphabetic())
        {
            current.push('\'');
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    TokenSequence(tokens)
}

/// Lowercase stopword set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordSet(HashSet<String>);

impl StopwordSet {
    /// The shipped English list.
    pub fn default_list() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    pub fn parse(contents: &str) -> Self {
        Self(
            contents
                .lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for StopwordSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(Into::into).collect())
    }
}

/// Removes stopwords unless `keep` is set. Order of the remaining tokens is preserved.
pub fn filter_stopwords(tokens: &TokenSequence, stopwords: &StopwordSet, keep: bool) -> TokenSequence {
    if keep {
        return tokens.clone();
    }
    tokens
        .iter()
        .filter(|t| !stopwords.contains(t))
        .cloned()
        .collect()
}

/// Surface form to lemma mapping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaMap(HashMap<String, String>);

impl LemmaMap {
    /// Parses `surface<TAB>lemma` lines; blank lines are ignored.
    pub fn parse(contents: &str, origin: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (i, line) in contents.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            match (fields.next(), fields.next(), fields.next()) {
                (Some(surface), Some(lemma), None)
                    if !surface.trim().is_empty() && !lemma.trim().is_empty() =>
                {
                    map.insert(surface.trim().to_lowercase(), lemma.trim().to_lowercase());
                }
                _ => {
                    return Err(CorpusError::Format {
                        path: origin.to_string(),
                        line: i + 1,
                        message: "expected `surface<TAB>lemma`".into(),
                    })
                }
            }
        }
        Ok(Self(map))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&fs::read_to_string(path)?, &path.display().to_string())
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.0.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for LemmaMap {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

/// Replaces each token by its lemma when one is known.
pub fn normalize_tokens(tokens: &TokenSequence, lemma_map: &LemmaMap) -> TokenSequence {
    tokens
        .iter()
        .map(|t| lemma_map.get(t).unwrap_or(t).to_string())
        .collect()
}

/// First `w` tokens of the sequence.
pub fn take_sample(tokens: &TokenSequence, spec: SampleSpec) -> Result<TokenSequence> {
    let w = spec.len();
    if tokens.len() < w {
        return Err(CorpusError::SampleTooShort {
            needed: w,
            available: tokens.len(),
        });
    }
    Ok(TokenSequence(tokens[..w].to_vec()))
}

/// Preprocessing options applied before sampling.
#[derive(Debug, Clone, Default)]
pub struct Preprocessing {
    /// `None` keeps stopwords.
    pub stopwords: Option<StopwordSet>,
    pub lemma_map: Option<LemmaMap>,
}

impl Preprocessing {
    /// Tokenize, drop stopwords, then map lemmas.
    pub fn apply(&self, text: &str) -> TokenSequence {
        let mut tokens = tokenize(text);
        if let Some(stop) = &self.stopwords {
            tokens = filter_stopwords(&tokens, stop, false);
        }
        if let Some(lemmas) = &self.lemma_map {
            tokens = normalize_tokens(&tokens, lemmas);
        }
        tokens
    }
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    path: String,
    author: String,
    title: String,
}

/// Loads every document listed in a `path,author,title` manifest, in row order.
///
/// Relative text paths resolve against the manifest's directory. Rows are numbered
/// from 1 for the first data line.
pub fn load_corpus(manifest_path: impl AsRef<Path>) -> Result<Vec<LabeledDocument>> {
    let manifest_path = manifest_path.as_ref();
    let file = fs::File::open(manifest_path).map_err(|source| CorpusError::Manifest {
        path: manifest_path.to_path_buf(),
        source,
    })?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    read_manifest(BufReader::new(file), base)
}

/// Reads a manifest from any reader; relative paths resolve against `base`.
pub fn read_manifest<R: BufRead>(reader: R, base: &Path) -> Result<Vec<LabeledDocument>> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = csv.headers().map_err(|e| CorpusError::Row {
        row: 0,
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>() != ["path", "author", "title"] {
        return Err(CorpusError::Row {
            row: 0,
            message: "header must be `path,author,title`".into(),
        });
    }
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    let mut docs = Vec::new();
    for (i, record) in csv.deserialize::<ManifestRow>().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CorpusError::Row {
            row,
            message: e.to_string(),
        })?;
        let key = (record.author.clone(), record.title.clone());
        if let Some(&first_row) = seen.get(&key) {
            return Err(CorpusError::Duplicate {
                row,
                first_row,
                author: record.author,
                title: record.title,
            });
        }
        seen.insert(key, row);
        let path = base.join(&record.path);
        let bytes = fs::read(&path).map_err(|source| CorpusError::Text {
            row,
            path: path.clone(),
            source,
        })?;
        let text = String::from_utf8(bytes).map_err(|_| CorpusError::Encoding {
            row,
            path: path.clone(),
        })?;
        let doc = LabeledDocument::new(record.author, record.title, text).map_err(|e| {
            CorpusError::Row {
                row,
                message: e.to_string(),
            }
        })?;
        docs.push(doc);
    }
    Ok(docs)
}
