//! Document clusters, sentence records, and the JSONL cluster loader.
//!
//! A cluster is flattened document-major: sentence `global_id`s run over
//! document 0 first, then document 1, and so on. Every downstream matrix and
//! score vector is indexed by that id.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

const ABBREVIATIONS: &[&str] = &["Mr", "Mrs", "Dr", "U.S", "Inc", "St", "No", "vs"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceRecord {
    pub cluster_id: String,
    pub doc_index: usize,
    pub sent_index: usize,
    pub global_id: usize,
    pub text: String,
    pub tokens: Vec<String>,
    pub word_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentCluster {
    pub cluster_id: String,
    pub sentences: Vec<SentenceRecord>,
    pub references: Vec<String>,
    pub n_documents: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClusterFormat {
    #[default]
    Jsonl,
}

/// Counters collected while loading a cluster file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadStats {
    pub clusters: usize,
    pub sentences: usize,
    pub dropped_sentences: usize,
}

impl DocumentCluster {
    /// Builds a cluster from pre-segmented documents. Whitespace-only
    /// sentences are dropped; the second return value counts them.
    pub fn from_documents(
        cluster_id: impl Into<String>,
        documents: Vec<Vec<String>>,
        references: Vec<String>,
    ) -> Result<(Self, usize)> {
        let cluster_id = cluster_id.into();
        let mut sentences = Vec::new();
        let mut dropped = 0;
        for (doc_index, doc) in documents.into_iter().enumerate() {
            let mut sent_index = 0;
            for text in doc {
                let words = word_count(&text);
                if words == 0 {
                    dropped += 1;
                    continue;
                }
                sentences.push(SentenceRecord {
                    cluster_id: cluster_id.clone(),
                    doc_index,
                    sent_index,
                    global_id: sentences.len(),
                    tokens: tokenize(&text),
                    text,
                    word_count: words,
                });
                sent_index += 1;
            }
        }
        let Some(last) = sentences.last() else {
            return Err(Error::EmptyCluster(cluster_id));
        };
        let n_documents = last.doc_index + 1;
        Ok((
            DocumentCluster {
                cluster_id,
                sentences,
                references,
                n_documents,
            },
            dropped,
        ))
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn word_counts(&self) -> Vec<usize> {
        self.sentences.iter().map(|s| s.word_count).collect()
    }

    /// Number of retained sentences in each document, indexed by `doc_index`.
    pub fn sentences_per_document(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_documents];
        for s in &self.sentences {
            counts[s.doc_index] += 1;
        }
        counts
    }
}

/// Lowercases and splits on every non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Number of whitespace-separated words.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn ends_with_abbreviation(segment: &str) -> bool {
    let word = segment
        .rsplit(char::is_whitespace)
        .next()
        .unwrap_or("")
        .trim_start_matches(|c: char| !c.is_alphanumeric());
    ABBREVIATIONS.contains(&word)
}

/// Rule-based sentence splitter for documents that arrive as raw text.
///
/// A boundary is a run of `.`, `!` or `?` (plus closing quotes/brackets)
/// followed by whitespace and an uppercase letter, or by the end of the text.
/// A period that closes one of the known abbreviations never ends a sentence.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminator(c) {
            i += 1;
            continue;
        }
        let mut end = i;
        while end + 1 < chars.len() && (is_terminator(chars[end + 1].1) || is_closer(chars[end + 1].1)) {
            end += 1;
        }
        let mut next = end + 1;
        while next < chars.len() && chars[next].1.is_whitespace() {
            next += 1;
        }
        let mut boundary = if next == chars.len() {
            true
        } else {
            next > end + 1 && chars[next].1.is_uppercase()
        };
        if boundary && c == '.' && ends_with_abbreviation(&text[start..pos]) {
            boundary = false;
        }
        if boundary {
            let stop = chars[end].0 + chars[end].1.len_utf8();
            let sentence = text[start..stop].trim();
            if !sentence.is_empty() {
                out.push(sentence.to_string());
            }
            start = chars.get(next).map_or(text.len(), |&(p, _)| p);
            i = next;
        } else {
            i = end + 1;
        }
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DocumentJson {
    Sentences(Vec<String>),
    Raw(String),
}

#[derive(Deserialize)]
struct ClusterJson {
    id: String,
    documents: Vec<DocumentJson>,
    #[serde(default)]
    references: Vec<String>,
}

/// Parses one cluster object. Returns the cluster and the number of dropped
/// empty sentences.
pub fn parse_cluster(json: &str, line: usize) -> Result<(DocumentCluster, usize)> {
    let raw: ClusterJson = serde_json::from_str(json).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })?;
    let documents = raw
        .documents
        .into_iter()
        .map(|doc| match doc {
            DocumentJson::Sentences(s) => s,
            DocumentJson::Raw(text) => split_sentences(&text),
        })
        .collect();
    DocumentCluster::from_documents(raw.id, documents, raw.references)
}

pub fn read_clusters<R: BufRead>(reader: R) -> Result<(Vec<DocumentCluster>, LoadStats)> {
    let mut clusters = Vec::new();
    let mut stats = LoadStats::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (cluster, dropped) = parse_cluster(&line, line_no)?;
        stats.clusters += 1;
        stats.sentences += cluster.len();
        stats.dropped_sentences += dropped;
        clusters.push(cluster);
    }
    Ok((clusters, stats))
}

pub fn load_clusters(path: impl AsRef<Path>, format: ClusterFormat) -> Result<Vec<DocumentCluster>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let (clusters, stats) = match format {
        ClusterFormat::Jsonl => read_clusters(BufReader::new(file))?,
    };
    if stats.dropped_sentences > 0 {
        log::warn!(
            "{}: dropped {} empty sentences",
            path.display(),
            stats.dropped_sentences
        );
    }
    Ok(clusters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("The cat's mat."), strings(&["the", "cat", "s", "mat"]));
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("A-B 42"), strings(&["a", "b", "42"]));
        assert!(tokenize("!!!").is_empty());
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_sentences("Hi. Bye."), strings(&["Hi.", "Bye."]));
        assert_eq!(split_sentences("Dr. Smith left."), strings(&["Dr. Smith left."]));
        assert_eq!(split_sentences("One"), strings(&["One"]));
        assert!(split_sentences("   ").is_empty());
    }

    #[test]
    fn split_needs_uppercase_after_terminator() {
        assert_eq!(
            split_sentences("It cost 3.5 dollars. then it rose! Why? Because."),
            strings(&["It cost 3.5 dollars. then it rose!", "Why?", "Because."])
        );
        assert_eq!(
            split_sentences("He moved to the U.S. Then he left. \"Really?\" She asked."),
            strings(&["He moved to the U.S. Then he left. \"Really?\"", "She asked."])
        );
    }

    #[test]
    fn loads_document_major_order() {
        let line = r#"{"id":"c1","documents":[["A.","B."],["C."]],"references":["A. C."]}"#;
        let (clusters, stats) = read_clusters(line.as_bytes()).unwrap();
        assert_eq!(clusters.len(), 1);
        let c = &clusters[0];
        assert_eq!(c.len(), 3);
        assert_eq!(
            c.sentences.iter().map(|s| s.global_id).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        let s = &c.sentences[2];
        assert_eq!((s.doc_index, s.sent_index, s.global_id), (1, 0, 2));
        assert_eq!(c.n_documents, 2);
        assert_eq!(c.references, strings(&["A. C."]));
        assert_eq!(stats.dropped_sentences, 0);
    }

    #[test]
    fn empty_cluster_is_an_error() {
        let line = r#"{"id":"c2","documents":[[]]}"#;
        let err = read_clusters(line.as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "cluster c2 has no sentences");
    }

    #[test]
    fn malformed_line_names_line_number() {
        let input = "{\"id\":\"a\",\"documents\":[[\"X.\"]]}\n\n{not json\n";
        let err = read_clusters(input.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn drops_blank_sentences_and_keeps_tokenless_ones() {
        let line = r#"{"id":"c","documents":[["  ","!!!","Real one."],["\t"],["Last."]]}"#;
        let (clusters, stats) = read_clusters(line.as_bytes()).unwrap();
        let c = &clusters[0];
        assert_eq!(stats.dropped_sentences, 2);
        assert_eq!(c.len(), 3);
        assert!(c.sentences[0].tokens.is_empty());
        assert_eq!(c.sentences[1].sent_index, 1);
        assert_eq!(c.sentences[2].doc_index, 2);
        assert_eq!(c.n_documents, 3);
        assert_eq!(c.sentences_per_document(), vec![2, 0, 1]);
    }

    #[test]
    fn raw_documents_use_the_splitter() {
        let line = r#"{"id":"r","documents":["First one. Second one!","Dr. Who arrived."],"references":[]}"#;
        let (clusters, _) = read_clusters(line.as_bytes()).unwrap();
        let texts: Vec<_> = clusters[0].sentences.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(texts, vec!["First one.", "Second one!", "Dr. Who arrived."]);
        assert!(clusters[0].references.is_empty());
    }
}
