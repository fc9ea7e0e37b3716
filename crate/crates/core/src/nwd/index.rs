//! Offline frequency providers: a positional document index built from
//! text, and the flat count table it serializes to.
//!
//! Index file (TSV, UTF-8):
//!
//! ```text
//! N<TAB><integer>
//! M<TAB><integer>
//! U<TAB><term><TAB><count>
//! P<TAB><termA><TAB><termB><TAB><count>     termA < termB
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{FrequencyProvider, NwdError};

/// Lowercases and splits on runs of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn term_key(term: &str) -> String {
    tokenize(term).join(" ")
}

/// `N = M` unless some term occurs in every document, in which case the
/// smallest integer above every count.
fn default_normalizer(documents: u64, max_count: u64) -> u64 {
    if max_count < documents {
        documents
    } else {
        max_count + 1
    }
}

/// Document-frequency index with token positions, so multi-word terms are
/// answered as exact phrase queries.
#[derive(Debug, Clone)]
pub struct DocumentIndex {
    doc_ids: Vec<String>,
    /// token -> (document, sorted positions), documents ascending.
    postings: HashMap<String, Vec<(u32, Vec<u32>)>>,
    n: u64,
}

/// Builds a [`DocumentIndex`] over `(doc-id, text)` pairs.
pub fn build_frequency_index<S, T>(documents: &[(S, T)]) -> Result<DocumentIndex, NwdError>
where
    S: AsRef<str>,
    T: AsRef<str>,
{
    if documents.is_empty() {
        return Err(NwdError::EmptyCorpus);
    }
    let mut postings: HashMap<String, Vec<(u32, Vec<u32>)>> = HashMap::new();
    for (doc, (_, text)) in documents.iter().enumerate() {
        let doc = doc as u32;
        for (pos, token) in tokenize(text.as_ref()).into_iter().enumerate() {
            let list = postings.entry(token).or_default();
            match list.last_mut() {
                Some((d, positions)) if *d == doc => positions.push(pos as u32),
                _ => list.push((doc, vec![pos as u32])),
            }
        }
    }
    let m = documents.len() as u64;
    let max_count = postings.values().map(|p| p.len() as u64).max().unwrap_or(0);
    Ok(DocumentIndex {
        doc_ids: documents.iter().map(|(id, _)| id.as_ref().to_owned()).collect(),
        postings,
        n: default_normalizer(m, max_count),
    })
}

impl DocumentIndex {
    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn set_normalizer(&mut self, n: u64) {
        self.n = n;
    }

    /// Sorted ids of documents containing the token sequence `term`.
    fn matching_docs(&self, term: &str) -> Vec<u32> {
        let tokens = tokenize(term);
        let Some((first, rest)) = tokens.split_first() else {
            return Vec::new();
        };
        let Some(head) = self.postings.get(first) else {
            return Vec::new();
        };
        if rest.is_empty() {
            return head.iter().map(|(d, _)| *d).collect();
        }
        let mut tails = Vec::with_capacity(rest.len());
        for t in rest {
            match self.postings.get(t) {
                Some(p) => tails.push(p),
                None => return Vec::new(),
            }
        }
        head.iter()
            .filter(|(doc, starts)| {
                let lists: Option<Vec<&Vec<u32>>> = tails
                    .iter()
                    .map(|p| {
                        p.binary_search_by_key(doc, |(d, _)| *d)
                            .ok()
                            .map(|k| &p[k].1)
                    })
                    .collect();
                let Some(lists) = lists else { return false };
                starts.iter().any(|&s| {
                    lists
                        .iter()
                        .enumerate()
                        .all(|(k, pos)| pos.binary_search(&(s + k as u32 + 1)).is_ok())
                })
            })
            .map(|(d, _)| *d)
            .collect()
    }

    /// Flattens unigram and co-occurrence counts into a [`CountTable`].
    pub fn to_table(&self) -> CountTable {
        let unigrams: BTreeMap<String, u64> = self
            .postings
            .iter()
            .map(|(t, p)| (t.clone(), p.len() as u64))
            .collect();
        let mut per_doc: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); self.doc_ids.len()];
        for (token, list) in &self.postings {
            for (doc, _) in list {
                per_doc[*doc as usize].insert(token);
            }
        }
        let mut pairs: BTreeMap<(String, String), u64> = BTreeMap::new();
        for tokens in &per_doc {
            let tokens: Vec<&str> = tokens.iter().copied().collect();
            for (i, a) in tokens.iter().enumerate() {
                for b in &tokens[i + 1..] {
                    *pairs.entry(((*a).to_owned(), (*b).to_owned())).or_default() += 1;
                }
            }
        }
        CountTable {
            n: self.n,
            m: self.doc_ids.len() as u64,
            unigrams,
            pairs,
        }
    }
}

impl FrequencyProvider for DocumentIndex {
    fn frequency(&self, term: &str) -> Result<u64, NwdError> {
        Ok(self.matching_docs(term).len() as u64)
    }

    fn pair_frequency(&self, a: &str, b: &str) -> Result<u64, NwdError> {
        let da = self.matching_docs(a);
        if term_key(a) == term_key(b) {
            return Ok(da.len() as u64);
        }
        let db = self.matching_docs(b);
        let (mut i, mut j, mut both) = (0, 0, 0u64);
        while i < da.len() && j < db.len() {
            match da[i].cmp(&db[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    both += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(both)
    }

    fn normalizer(&self) -> f64 {
        self.n as f64
    }

    fn indexed_pages(&self) -> Option<u64> {
        Some(self.doc_ids.len() as u64)
    }
}

/// Unigram and pair document counts. Unknown terms count 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n: u64,
    m: u64,
    unigrams: BTreeMap<String, u64>,
    pairs: BTreeMap<(String, String), u64>,
}

impl CountTable {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "N\t{}", self.n);
        let _ = writeln!(out, "M\t{}", self.m);
        for (term, count) in &self.unigrams {
            let _ = writeln!(out, "U\t{term}\t{count}");
        }
        for ((a, b), count) in &self.pairs {
            let _ = writeln!(out, "P\t{a}\t{b}\t{count}");
        }
        out
    }

    /// Parses and validates an index file: `N` must exceed every count and
    /// pair counts may not exceed either singleton count.
    pub fn parse_tsv(text: &str) -> Result<Self, NwdError> {
        let bad = |line: usize, message: String| NwdError::IndexFormat { line, message };
        let count = |line: usize, s: &str| {
            s.parse::<u64>()
                .map_err(|_| bad(line, format!("bad count {s:?}")))
        };
        let mut n = None;
        let mut m = None;
        let mut unigrams = BTreeMap::new();
        let mut pairs = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["N", v] => n = Some(count(line_no, v)?),
                ["M", v] => m = Some(count(line_no, v)?),
                ["U", term, v] => {
                    if unigrams.insert((*term).to_owned(), count(line_no, v)?).is_some() {
                        return Err(bad(line_no, format!("duplicate term {term:?}")));
                    }
                }
                ["P", a, b, v] => {
                    if a >= b {
                        return Err(bad(line_no, format!("pair terms must be ordered: {a:?} {b:?}")));
                    }
                    let key = ((*a).to_owned(), (*b).to_owned());
                    if pairs.insert(key, count(line_no, v)?).is_some() {
                        return Err(bad(line_no, format!("duplicate pair {a:?} {b:?}")));
                    }
                }
                _ => return Err(bad(line_no, format!("unrecognized record {line:?}"))),
            }
        }
        let n = n.ok_or_else(|| bad(1, "missing N record".into()))?;
        let m = m.ok_or_else(|| bad(2, "missing M record".into()))?;
        let table = Self { n, m, unigrams, pairs };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<(), NwdError> {
        if let Some((term, &count)) = self.unigrams.iter().max_by_key(|(_, c)| **c) {
            super::check_normalizer(term, count, self.n as f64)?;
        }
        if self.n == 0 {
            return Err(NwdError::InvalidNormalizer {
                term: String::new(),
                count: 0,
                n: 0.0,
            });
        }
        for ((a, b), &count) in &self.pairs {
            let fa = self.unigrams.get(a).copied().unwrap_or(0);
            let fb = self.unigrams.get(b).copied().unwrap_or(0);
            if count > fa.min(fb) {
                return Err(NwdError::IndexFormat {
                    line: 0,
                    message: format!("f({a}, {b}) = {count} exceeds a singleton count"),
                });
            }
        }
        Ok(())
    }
}

impl FrequencyProvider for CountTable {
    fn frequency(&self, term: &str) -> Result<u64, NwdError> {
        Ok(self.unigrams.get(&term_key(term)).copied().unwrap_or(0))
    }

    fn pair_frequency(&self, a: &str, b: &str) -> Result<u64, NwdError> {
        let (a, b) = (term_key(a), term_key(b));
        if a == b {
            return Ok(self.unigrams.get(&a).copied().unwrap_or(0));
        }
        let key = if a < b { (a, b) } else { (b, a) };
        Ok(self.pairs.get(&key).copied().unwrap_or(0))
    }

    fn normalizer(&self) -> f64 {
        self.n as f64
    }

    fn indexed_pages(&self) -> Option<u64> {
        Some(self.m)
    }
}
