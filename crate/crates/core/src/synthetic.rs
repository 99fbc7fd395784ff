//! Synthetic corpus and embedding generator for end-to-end checks.
//!
//! Every author draws from the same pool of pseudo-words under a Zipf law, but
//! with an author-specific rank permutation, and mixes in a few words of their
//! own. Word vectors sit around a small number of cluster centres.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::LabeledDocument;
use crate::embed::EmbeddingTable;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub authors: usize,
    pub books_per_author: usize,
    pub tokens_per_book: usize,
    /// Pseudo-words shared by all authors.
    pub common_words: usize,
    /// Pseudo-words private to each author.
    pub author_words: usize,
    /// Probability that a token is drawn from the author's private words.
    pub private_rate: f64,
    /// Probability that a common word is followed by the author's preferred successor.
    pub successor_rate: f64,
    pub zipf_exponent: f64,
    pub dimension: usize,
    pub clusters: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            authors: 4,
            books_per_author: 6,
            tokens_per_book: 1200,
            common_words: 80,
            author_words: 12,
            private_rate: 0.1,
            successor_rate: 0.3,
            zipf_exponent: 1.0,
            dimension: 10,
            clusters: 5,
            seed: 17,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub documents: Vec<LabeledDocument>,
    pub embeddings: EmbeddingTable<f64>,
}

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// Three-syllable lowercase pseudo-word for an index; distinct indices give distinct words.
pub fn pseudo_word(index: usize) -> String {
    let syllables = CONSONANTS.len() * VOWELS.len();
    let mut rest = index;
    let mut word = String::with_capacity(6);
    for _ in 0..3 {
        let s = rest % syllables;
        rest /= syllables;
        word.push(CONSONANTS[s / VOWELS.len()] as char);
        word.push(VOWELS[s % VOWELS.len()] as char);
    }
    assert!(rest == 0, "pseudo-word index {index} out of range");
    word
}

fn author_name(a: usize) -> String {
    format!("author {}", (b'A' + (a % 26) as u8) as char)
}

pub fn generate(spec: &SyntheticSpec) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let common: Vec<String> = (0..spec.common_words).map(pseudo_word).collect();
    let private: Vec<Vec<String>> = (0..spec.authors)
        .map(|a| {
            (0..spec.author_words)
                .map(|i| pseudo_word(spec.common_words + a * spec.author_words + i))
                .collect()
        })
        .collect();
    let zipf: Vec<f64> = (1..=spec.common_words)
        .map(|r| 1.0 / (r as f64).powf(spec.zipf_exponent))
        .collect();
    let private_zipf: Vec<f64> = (1..=spec.author_words.max(1))
        .map(|r| 1.0 / (r as f64).powf(spec.zipf_exponent))
        .collect();

    let mut documents = Vec::with_capacity(spec.authors * spec.books_per_author);
    for (a, own) in private.iter().enumerate() {
        let mut ranking: Vec<usize> = (0..spec.common_words).collect();
        ranking.shuffle(&mut rng);
        let mut weights = vec![0.0; spec.common_words];
        for (rank, &w) in ranking.iter().enumerate() {
            weights[w] = zipf[rank];
        }
        let common_dist = WeightedIndex::new(&weights).expect("positive Zipf weights");
        let private_dist = WeightedIndex::new(&private_zipf).expect("positive Zipf weights");
        let mut successor: Vec<usize> = (0..spec.common_words).collect();
        successor.shuffle(&mut rng);
        for b in 0..spec.books_per_author {
            let mut text = String::new();
            let mut previous: Option<usize> = None;
            for t in 0..spec.tokens_per_book {
                let word = if !own.is_empty() && rng.gen_bool(spec.private_rate) {
                    previous = None;
                    &own[private_dist.sample(&mut rng)]
                } else {
                    let next = match previous {
                        Some(p) if rng.gen_bool(spec.successor_rate) => successor[p],
                        _ => common_dist.sample(&mut rng),
                    };
                    previous = Some(next);
                    &common[next]
                };
                if t > 0 {
                    text.push(if t % 12 == 0 { '\n' } else { ' ' });
                }
                text.push_str(word);
            }
            text.push('\n');
            documents.push(
                LabeledDocument::new(author_name(a), format!("book {}{}", a + 1, b + 1), text)
                    .expect("generated documents are valid"),
            );
        }
    }

    let mut embeddings = EmbeddingTable::new(spec.dimension).expect("dimension ≥ 1");
    let centres: Vec<Vec<f64>> = (0..spec.clusters.max(1))
        .map(|_| (0..spec.dimension).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let all_words = common.iter().chain(private.iter().flatten());
    for (i, word) in all_words.enumerate() {
        let centre = &centres[i % centres.len()];
        let v: Vec<f64> = centre.iter().map(|&c| c + rng.gen_range(-0.15..0.15)).collect();
        embeddings.insert(word.clone(), v).expect("vector has the table dimension");
    }
    SyntheticCorpus { documents, embeddings }
}

/// Writes `texts/*.txt`, `manifest.csv` and `embeddings.txt` under `dir`;
/// returns (manifest path, embedding path).
pub fn write_fixture(corpus: &SyntheticCorpus, dir: impl AsRef<Path>) -> io::Result<(PathBuf, PathBuf)> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir.join("texts"))?;
    let manifest = dir.join("manifest.csv");
    let mut w = csv::Writer::from_path(&manifest)?;
    w.write_record(["path", "author", "title"])?;
    for (i, doc) in corpus.documents.iter().enumerate() {
        let rel = format!("texts/doc{i:03}.txt");
        fs::write(dir.join(&rel), doc.text())?;
        w.write_record([rel.as_str(), doc.author(), doc.title()])?;
    }
    w.flush()?;
    let embeddings = dir.join("embeddings.txt");
    corpus.embeddings.write_text(io::BufWriter::new(fs::File::create(&embeddings)?))?;
    Ok((manifest, embeddings))
}
