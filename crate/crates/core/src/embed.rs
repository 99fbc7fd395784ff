//! Pre-trained embedding tables and similarity ranking of candidate word pairs.
//!
//! The loader reads the whitespace text formats used by GloVe (no header),
//! word2vec text and FastText `.vec` (first line `count dimension`).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("embedding file is empty")]
    Empty,
    #[error("line {line}: expected {expected} vector components, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: component {component:?} is not a number")]
    NonNumeric { line: usize, component: String },
    #[error("line {line}: word {word:?} has a zero vector")]
    ZeroVector { line: usize, word: String },
    #[error("line {line}: missing vector for {word:?}")]
    MissingVector { line: usize, word: String },
    #[error("vectors have different dimensions ({0} vs {1})")]
    VectorDimension(usize, usize),
    #[error("cosine similarity is undefined for a zero-norm vector")]
    ZeroNorm,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, EmbedError>;

/// Word to dense vector association with a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable<T> {
    dimension: usize,
    vectors: HashMap<String, Vec<T>>,
}

impl<T: Scalar> EmbeddingTable<T> {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(EmbedError::ZeroDimension);
        }
        Ok(Self {
            dimension,
            vectors: HashMap::new(),
        })
    }

    /// Inserts or replaces a vector; returns the previous one.
    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<T>) -> Result<Option<Vec<T>>> {
        let word = word.into();
        if vector.len() != self.dimension {
            return Err(EmbedError::VectorDimension(self.dimension, vector.len()));
        }
        if vector.iter().all(|x| x.is_zero()) {
            return Err(EmbedError::ZeroVector { line: 0, word });
        }
        Ok(self.vectors.insert(word, vector))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[T]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }

    /// Words in lexicographic order.
    pub fn words(&self) -> Vec<&str> {
        let mut words: Vec<&str> = self.vectors.keys().map(String::as_str).collect();
        words.sort_unstable();
        words
    }

    /// Cosine similarity of two stored words, `None` if either is missing.
    pub fn similarity(&self, a: &str, b: &str) -> Option<T> {
        let (u, v) = (self.get(a)?, self.get(b)?);
        cosine_similarity(u, v).ok()
    }

    /// Writes the table in headered text form, words sorted.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{} {}", self.len(), self.dimension)?;
        for word in self.words() {
            write!(out, "{word}")?;
            for x in &self.vectors[word] {
                write!(out, " {x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Options for [`load_embedding_table`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions<'a> {
    /// Keep only these words. Other lines are still dimension-checked but not parsed.
    pub restrict_to: Option<&'a HashSet<String>>,
}

/// Loads a whitespace-separated text embedding file.
pub fn load_embedding_table<T: Scalar>(
    path: impl AsRef<Path>,
    options: &LoadOptions<'_>,
) -> Result<EmbeddingTable<T>> {
    let file = File::open(path.as_ref())?;
    read_embedding_table(BufReader::new(file), options)
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let count = it.next()?.parse().ok()?;
    let dim = it.next()?.parse().ok()?;
    it.next().is_none().then_some((count, dim))
}

/// Parses an embedding table from a reader. A first line of exactly two integers is
/// taken as a `count dimension` header; later duplicates of a word replace earlier ones.
pub fn read_embedding_table<T: Scalar, R: BufRead>(
    reader: R,
    options: &LoadOptions<'_>,
) -> Result<EmbeddingTable<T>> {
    let mut dimension: Option<usize> = None;
    let mut vectors: HashMap<String, Vec<T>> = HashMap::new();
    let mut saw_content = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if !saw_content {
            saw_content = true;
            if let Some((_, dim)) = parse_header(&line) {
                if dim == 0 {
                    return Err(EmbedError::ZeroDimension);
                }
                dimension = Some(dim);
                continue;
            }
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().unwrap_or_default();
        let components: Vec<&str> = fields.collect();
        if components.is_empty() {
            return Err(EmbedError::MissingVector {
                line: line_no,
                word: word.to_string(),
            });
        }
        let expected = *dimension.get_or_insert(components.len());
        if components.len() != expected {
            return Err(EmbedError::DimensionMismatch {
                line: line_no,
                expected,
                found: components.len(),
            });
        }
        if options.restrict_to.is_some_and(|keep| !keep.contains(word)) {
            continue;
        }
        let vector = components
            .iter()
            .map(|c| {
                c.parse::<T>().ok().filter(|x| x.is_finite()).ok_or_else(|| {
                    EmbedError::NonNumeric {
                        line: line_no,
                        component: c.to_string(),
                    }
                })
            })
            .collect::<Result<Vec<T>>>()?;
        if vector.iter().all(|x| x.is_zero()) {
            return Err(EmbedError::ZeroVector {
                line: line_no,
                word: word.to_string(),
            });
        }
        if vectors.insert(word.to_string(), vector).is_some() {
            log::warn!("embedding line {line_no}: duplicate word {word:?} replaces earlier vector");
        }
    }
    if !saw_content {
        return Err(EmbedError::Empty);
    }
    Ok(EmbeddingTable {
        dimension: dimension.ok_or(EmbedError::Empty)?,
        vectors,
    })
}

fn dot<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

/// `(u·v)/(‖u‖‖v‖)`, clamped to `[-1, 1]`.
pub fn cosine_similarity<T: Scalar>(u: &[T], v: &[T]) -> Result<T> {
    if u.len() != v.len() {
        return Err(EmbedError::VectorDimension(u.len(), v.len()));
    }
    let nu = dot(u, u).sqrt();
    let nv = dot(v, v).sqrt();
    if nu.is_zero() || nv.is_zero() {
        return Err(EmbedError::ZeroNorm);
    }
    Ok((dot(u, v) / (nu * nv)).max(-T::one()).min(T::one()))
}

/// Two words proposed for a virtual edge, `word_a < word_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePair<T> {
    pub word_a: Arc<str>,
    pub word_b: Arc<str>,
    pub similarity: T,
}

impl<T: Scalar> CandidatePair<T> {
    /// Builds a pair in canonical order; `None` for a self pair.
    pub fn new(a: impl Into<Arc<str>>, b: impl Into<Arc<str>>, similarity: T) -> Option<Self> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            Ordering::Less => Some(Self {
                word_a: a,
                word_b: b,
                similarity,
            }),
            Ordering::Greater => Some(Self {
                word_a: b,
                word_b: a,
                similarity,
            }),
            Ordering::Equal => None,
        }
    }

    /// Ranking order: similarity descending, then `(word_a, word_b)` ascending.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .similarity
            .partial_cmp(&self.similarity)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.word_a.cmp(&other.word_a))
            .then_with(|| self.word_b.cmp(&other.word_b))
    }
}

/// Set of unordered word pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet(HashSet<(Arc<str>, Arc<str>)>);

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: &str, b: &str) -> bool {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.0.insert((a.into(), b.into()))
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        let key: (Arc<str>, Arc<str>) = if a <= b {
            (a.into(), b.into())
        } else {
            (b.into(), a.into())
        };
        self.0.contains(&key)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<A: AsRef<str>, B: AsRef<str>> FromIterator<(A, B)> for PairSet {
    fn from_iter<I: IntoIterator<Item = (A, B)>>(iter: I) -> Self {
        let mut set = PairSet::new();
        for (a, b) in iter {
            set.insert(a.as_ref(), b.as_ref());
        }
        set
    }
}

/// Ranks every unordered pair of embedded vocabulary words not in `exclude`.
pub fn rank_candidate_pairs<T, S>(
    vocabulary: &BTreeSet<S>,
    table: &EmbeddingTable<T>,
    exclude: &PairSet,
) -> Vec<CandidatePair<T>>
where
    T: Scalar,
    S: AsRef<str> + Ord,
{
    rank_top_candidate_pairs(vocabulary, table, exclude, None)
}

/// Like [`rank_candidate_pairs`] but keeps only the first `limit` pairs of the ranking.
pub fn rank_top_candidate_pairs<T, S>(
    vocabulary: &BTreeSet<S>,
    table: &EmbeddingTable<T>,
    exclude: &PairSet,
    limit: Option<usize>,
) -> Vec<CandidatePair<T>>
where
    T: Scalar,
    S: AsRef<str> + Ord,
{
    // Unit vectors make each pair a single dot product.
    let embedded: Vec<(Arc<str>, Vec<T>)> = vocabulary
        .iter()
        .filter_map(|w| {
            let v = table.get(w.as_ref())?;
            let norm = dot(v, v).sqrt();
            Some((Arc::from(w.as_ref()), v.iter().map(|&x| x / norm).collect()))
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, (wa, va)) in embedded.iter().enumerate() {
        for (wb, vb) in &embedded[i + 1..] {
            if exclude.contains(wa, wb) {
                continue;
            }
            let sim = dot(va, vb).max(-T::one()).min(T::one());
            pairs.push(CandidatePair {
                word_a: Arc::clone(wa),
                word_b: Arc::clone(wb),
                similarity: sim,
            });
        }
    }
    match limit {
        Some(k) if k < pairs.len() => {
            if k == 0 {
                return Vec::new();
            }
            pairs.select_nth_unstable_by(k - 1, CandidatePair::rank_cmp);
            pairs.truncate(k);
        }
        _ => {}
    }
    pairs.sort_unstable_by(CandidatePair::rank_cmp);
    pairs
}
