//! Normalized Compression Distance.
//!
//! `NCD(x, y) = (Z(xy) - min(Z(x), Z(y))) / max(Z(x), Z(y))`, with `Z(xy)`
//! taken over the canonical concatenation so the distance is exactly
//! symmetric.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::compressor::{compress_len_joint, Compressor, CompressorError};
use crate::matrix::{validate_label, DistanceMatrix, MatrixError};

#[derive(Debug, Error)]
pub enum NcdError {
    #[error(transparent)]
    Compressor(#[from] CompressorError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("corpus needs at least 2 objects, got {0}")]
    TooFewObjects(usize),
    #[error("duplicate object label {0:?}")]
    DuplicateLabel(String),
}

/// A labeled byte string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataObject {
    label: String,
    bytes: Vec<u8>,
}

impl DataObject {
    pub fn new(label: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Result<Self, MatrixError> {
        let label = label.into();
        validate_label(&label)?;
        Ok(Self {
            label,
            bytes: bytes.into(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// NCD from the three compressed lengths. Two empty objects (both lengths
/// zero) are at distance 0. A compressor that shrinks the concatenation
/// below its smaller part would give a negative value; that clamps to 0.
pub fn ncd_from_lengths(zx: u64, zy: u64, zxy: u64) -> f64 {
    let (lo, hi) = (zx.min(zy), zx.max(zy));
    if hi == 0 {
        return 0.0;
    }
    (zxy as f64 - lo as f64).max(0.0) / hi as f64
}

pub fn ncd<C: Compressor + ?Sized>(c: &C, x: &[u8], y: &[u8]) -> Result<f64, CompressorError> {
    if x.is_empty() && y.is_empty() {
        return Ok(0.0);
    }
    let zx = c.compress_len(x)?;
    let zy = if x == y { zx } else { c.compress_len(y)? };
    let zxy = compress_len_joint(c, x, y)?;
    Ok(ncd_from_lengths(zx, zy, zxy))
}

fn check_corpus(corpus: &[DataObject]) -> Result<Vec<String>, NcdError> {
    if corpus.len() < 2 {
        return Err(NcdError::TooFewObjects(corpus.len()));
    }
    let mut seen = HashSet::new();
    for obj in corpus {
        if !seen.insert(obj.label()) {
            return Err(NcdError::DuplicateLabel(obj.label.clone()));
        }
    }
    Ok(corpus.iter().map(|o| o.label.clone()).collect())
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn assemble(
    labels: Vec<String>,
    singles: &[u64],
    pairs: &[(usize, usize)],
    joints: &[u64],
) -> Result<DistanceMatrix, NcdError> {
    let n = labels.len();
    let mut cells = vec![0.0; n * n];
    for (&(i, j), &zxy) in pairs.iter().zip(joints) {
        cells[i * n + j] = ncd_from_lengths(singles[i], singles[j], zxy);
    }
    Ok(DistanceMatrix::from_fn(labels, |i, j| cells[i * n + j])?)
}

/// Full NCD matrix, diagonal included. The `n(n+1)/2` joint compressions
/// run in parallel; the result does not depend on scheduling.
pub fn ncd_matrix<C: Compressor + ?Sized>(
    corpus: &[DataObject],
    c: &C,
) -> Result<DistanceMatrix, NcdError> {
    let labels = check_corpus(corpus)?;
    let singles = corpus
        .par_iter()
        .map(|o| c.compress_len(&o.bytes))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = upper_pairs(corpus.len());
    let joints = pairs
        .par_iter()
        .map(|&(i, j)| joint_len(c, &corpus[i], &corpus[j]))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(labels, &singles, &pairs, &joints)
}

/// Single-threaded [`ncd_matrix`].
pub fn ncd_matrix_sequential<C: Compressor + ?Sized>(
    corpus: &[DataObject],
    c: &C,
) -> Result<DistanceMatrix, NcdError> {
    let labels = check_corpus(corpus)?;
    let singles = corpus
        .iter()
        .map(|o| c.compress_len(&o.bytes))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = upper_pairs(corpus.len());
    let joints = pairs
        .iter()
        .map(|&(i, j)| joint_len(c, &corpus[i], &corpus[j]))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(labels, &singles, &pairs, &joints)
}

fn joint_len<C: Compressor + ?Sized>(
    c: &C,
    x: &DataObject,
    y: &DataObject,
) -> Result<u64, CompressorError> {
    if x.bytes.is_empty() && y.bytes.is_empty() {
        return Ok(0);
    }
    compress_len_joint(c, &x.bytes, &y.bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressor::{BuiltinLz, RunLength};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bytes(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
        (0..len).map(|_| rng.random()).collect()
    }

    #[test]
    fn run_length_hand_values() {
        assert_eq!(ncd(&RunLength, b"aaaa", b"bbbb").unwrap(), 1.0);
        assert_eq!(ncd(&RunLength, b"aaaa", b"aaaaaaaa").unwrap(), 0.0);
        assert_eq!(ncd(&RunLength, b"aaaaaaaa", b"aaaa").unwrap(), 0.0);
    }

    #[test]
    fn both_empty_is_zero() {
        assert_eq!(ncd(&BuiltinLz, b"", b"").unwrap(), 0.0);
        assert_eq!(ncd(&RunLength, b"", b"").unwrap(), 0.0);
    }

    #[test]
    fn identical_objects_under_run_length() {
        let corpus = vec![
            DataObject::new("one", b"aaaa".to_vec()).unwrap(),
            DataObject::new("two", b"aaaa".to_vec()).unwrap(),
        ];
        let m = ncd_matrix(&corpus, &RunLength).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn matrix_entries_match_pairwise_ncd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let corpus: Vec<_> = (0..5)
            .map(|k| {
                let len = rng.random_range(0..900);
                DataObject::new(format!("o{k}"), random_bytes(&mut rng, len)).unwrap()
            })
            .collect();
        let m = ncd_matrix(&corpus, &BuiltinLz).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let direct = ncd(&BuiltinLz, corpus[i].bytes(), corpus[j].bytes()).unwrap();
                assert_eq!(m.get(i, j), direct);
            }
        }
    }

    #[test]
    fn diagonal_is_computed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let corpus = vec![
            DataObject::new("r1", random_bytes(&mut rng, 2000)).unwrap(),
            DataObject::new("r2", random_bytes(&mut rng, 2000)).unwrap(),
        ];
        let m = ncd_matrix(&corpus, &BuiltinLz).unwrap();
        assert!(m.get(0, 0) > 0.0);
    }

    #[test]
    fn parallel_equals_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let corpus: Vec<_> = (0..8)
            .map(|k| DataObject::new(format!("d{k}"), random_bytes(&mut rng, 1500)).unwrap())
            .collect();
        assert_eq!(
            ncd_matrix(&corpus, &BuiltinLz).unwrap(),
            ncd_matrix_sequential(&corpus, &BuiltinLz).unwrap()
        );
    }

    #[test]
    fn self_distance_below_unrelated() {
        let x: Vec<u8> = b"It was the best of times, it was the worst of times. "
            .iter()
            .copied()
            .cycle()
            .take(100 * 1024)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_bytes(&mut rng, x.len());
        let same = ncd(&BuiltinLz, &x, &x).unwrap();
        let other = ncd(&BuiltinLz, &x, &r).unwrap();
        assert!(same < other - 0.2, "NCD(x,x)={same} NCD(x,r)={other}");
    }

    #[test]
    fn corpus_validation() {
        let a = DataObject::new("a", b"1".to_vec()).unwrap();
        assert!(matches!(
            ncd_matrix(std::slice::from_ref(&a), &BuiltinLz),
            Err(NcdError::TooFewObjects(1))
        ));
        assert!(matches!(
            ncd_matrix(&[a.clone(), a], &BuiltinLz),
            Err(NcdError::DuplicateLabel(_))
        ));
        assert!(DataObject::new("", b"".to_vec()).is_err());
        assert!(DataObject::new("a\nb", b"".to_vec()).is_err());
    }
}
