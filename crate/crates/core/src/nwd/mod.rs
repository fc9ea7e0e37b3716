//! Normalized Web Distance from page-count style frequencies.
//!
//! With `f(x)` the number of pages (documents) containing `x`, `f(x, y)` the
//! number containing both, and a normalizer `N` larger than every `f(x)`:
//!
//! ```text
//! NWD(x, y) = (max{log f(x), log f(y)} - log f(x, y)) / (log N - min{log f(x), log f(y)})
//! ```
//!
//! The same value arises from the compression form with code lengths
//! `G(x) = log N - log f(x)`. Logs are base 2 throughout; the value does
//! not depend on the base.

mod index;
mod live;

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::matrix::{validate_label, DistanceMatrix, MatrixError};

pub use index::{build_frequency_index, tokenize, CountTable, DocumentIndex};
pub use live::{LiveConfig, LiveHitCounter};

#[derive(Debug, Error)]
pub enum NwdError {
    #[error("NWD({a}, {b}) is undefined: neither term occurs")]
    Undefined { a: String, b: String },
    #[error("normalizer N = {n} must exceed every frequency, but f({term}) = {count}")]
    InvalidNormalizer { term: String, count: u64, n: f64 },
    #[error("{term:?} has frequency 0 and no code length")]
    NoCodeLength { term: String },
    #[error("cannot build a frequency index from an empty document list")]
    EmptyCorpus,
    #[error("need at least 2 distinct terms, got {0}")]
    TooFewTerms(usize),
    #[error("duplicate term {0:?}")]
    DuplicateTerm(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("frequency index line {line}: {message}")]
    IndexFormat { line: usize, message: String },
    #[error("query {query:?}: {detail}")]
    Transport { query: String, detail: String },
    #[error("hit-count cache: {0}")]
    Cache(#[from] std::io::Error),
}

/// Outcome of an NWD evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NwdValue {
    Finite(f64),
    /// Both terms occur but never together.
    Infinite,
    /// Neither term occurs.
    Undefined,
}

impl NwdValue {
    /// Distance as a real, with `+inf` for [`NwdValue::Infinite`].
    pub fn as_distance(self) -> Option<f64> {
        match self {
            NwdValue::Finite(v) => Some(v),
            NwdValue::Infinite => Some(f64::INFINITY),
            NwdValue::Undefined => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, NwdValue::Finite(_))
    }
}

impl fmt::Display for NwdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NwdValue::Finite(v) => write!(f, "{v:.6}"),
            NwdValue::Infinite => f.write_str("inf"),
            NwdValue::Undefined => f.write_str("undefined"),
        }
    }
}

/// Source of term frequencies, pair frequencies, and the normalizer `N`.
///
/// Implementations must make `pair_frequency(x, x) == frequency(x)` and
/// treat pairs as unordered.
pub trait FrequencyProvider: Sync {
    fn frequency(&self, term: &str) -> Result<u64, NwdError>;

    fn pair_frequency(&self, a: &str, b: &str) -> Result<u64, NwdError>;

    fn normalizer(&self) -> f64;

    /// Number of indexed pages (`M`), when known.
    fn indexed_pages(&self) -> Option<u64> {
        None
    }
}

impl<P: FrequencyProvider + ?Sized> FrequencyProvider for &P {
    fn frequency(&self, term: &str) -> Result<u64, NwdError> {
        (**self).frequency(term)
    }

    fn pair_frequency(&self, a: &str, b: &str) -> Result<u64, NwdError> {
        (**self).pair_frequency(a, b)
    }

    fn normalizer(&self) -> f64 {
        (**self).normalizer()
    }

    fn indexed_pages(&self) -> Option<u64> {
        (**self).indexed_pages()
    }
}

/// Wraps a provider, multiplying its normalizer by a constant factor.
#[derive(Debug, Clone)]
pub struct ScaledNormalizer<P> {
    inner: P,
    factor: f64,
}

impl<P: FrequencyProvider> ScaledNormalizer<P> {
    pub fn new(inner: P, factor: f64) -> Self {
        Self { inner, factor }
    }
}

impl<P: FrequencyProvider> FrequencyProvider for ScaledNormalizer<P> {
    fn frequency(&self, term: &str) -> Result<u64, NwdError> {
        self.inner.frequency(term)
    }

    fn pair_frequency(&self, a: &str, b: &str) -> Result<u64, NwdError> {
        self.inner.pair_frequency(a, b)
    }

    fn normalizer(&self) -> f64 {
        self.inner.normalizer() * self.factor
    }

    fn indexed_pages(&self) -> Option<u64> {
        self.inner.indexed_pages()
    }
}

fn check_normalizer(term: &str, count: u64, n: f64) -> Result<(), NwdError> {
    if !(n > count as f64) {
        return Err(NwdError::InvalidNormalizer {
            term: term.to_owned(),
            count,
            n,
        });
    }
    Ok(())
}

/// NWD from raw counts.
///
/// Zero patterns decide the tag before `N` is looked at. A pair count above
/// both singleton counts (possible with live hit estimates) would make the
/// numerator negative; it is clamped to 0.
pub fn nwd_from_counts(fx: u64, fy: u64, fxy: u64, n: f64) -> Result<NwdValue, NwdError> {
    if fx == 0 && fy == 0 {
        return Ok(NwdValue::Undefined);
    }
    if fxy == 0 || fx == 0 || fy == 0 {
        return Ok(NwdValue::Infinite);
    }
    check_normalizer("x", fx, n)?;
    check_normalizer("y", fy, n)?;
    let (lx, ly, lxy) = ((fx as f64).log2(), (fy as f64).log2(), (fxy as f64).log2());
    let numerator = (lx.max(ly) - lxy).max(0.0);
    let denominator = n.log2() - lx.min(ly);
    Ok(NwdValue::Finite(numerator / denominator))
}

pub fn nwd<P: FrequencyProvider + ?Sized>(x: &str, y: &str, p: &P) -> Result<NwdValue, NwdError> {
    let n = p.normalizer();
    let fx = p.frequency(x)?;
    let fy = p.frequency(y)?;
    check_normalizer(x, fx, n)?;
    check_normalizer(y, fy, n)?;
    if fx == 0 && fy == 0 {
        return Ok(NwdValue::Undefined);
    }
    let fxy = if fx == 0 || fy == 0 {
        0
    } else {
        p.pair_frequency(x, y)?
    };
    nwd_from_counts(fx, fy, fxy, n)
}

/// `G = log2 N - log2 f`, the code length in bits of an event with
/// frequency `f`.
pub fn code_length_from_count(count: u64, n: f64) -> Option<f64> {
    (count > 0).then(|| n.log2() - (count as f64).log2())
}

pub fn code_length<P: FrequencyProvider + ?Sized>(x: &str, p: &P) -> Result<f64, NwdError> {
    let f = p.frequency(x)?;
    check_normalizer(x, f, p.normalizer())?;
    code_length_from_count(f, p.normalizer()).ok_or_else(|| NwdError::NoCodeLength {
        term: x.to_owned(),
    })
}

pub fn pair_code_length<P: FrequencyProvider + ?Sized>(
    x: &str,
    y: &str,
    p: &P,
) -> Result<f64, NwdError> {
    let f = p.pair_frequency(x, y)?;
    check_normalizer(x, f, p.normalizer())?;
    code_length_from_count(f, p.normalizer()).ok_or_else(|| NwdError::NoCodeLength {
        term: format!("{x} {y}"),
    })
}

/// NWD in compression form. When both code lengths are 0 (both terms on
/// every page) the distance is 0.
pub fn nwd_from_codelengths(gx: f64, gy: f64, gxy: f64) -> f64 {
    let hi = gx.max(gy);
    if hi == 0.0 {
        return 0.0;
    }
    (gxy - gx.min(gy)) / hi
}

/// Pairwise NWD matrix over `terms`. Infinite distances are kept; an
/// undefined pair is an error naming the first such pair in row order.
pub fn nwd_matrix<P: FrequencyProvider + ?Sized>(
    terms: &[String],
    p: &P,
) -> Result<DistanceMatrix, NwdError> {
    let mut seen = HashSet::new();
    for t in terms {
        validate_label(t)?;
        if !seen.insert(t.as_str()) {
            return Err(NwdError::DuplicateTerm(t.clone()));
        }
    }
    if terms.len() < 2 {
        return Err(NwdError::TooFewTerms(terms.len()));
    }
    let n = terms.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| nwd(&terms[i], &terms[j], p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cells = vec![0.0; n * n];
    for (&(i, j), value) in pairs.iter().zip(values) {
        cells[i * n + j] = value.as_distance().ok_or_else(|| NwdError::Undefined {
            a: terms[i].clone(),
            b: terms[j].clone(),
        })?;
    }
    Ok(DistanceMatrix::from_fn(terms.to_vec(), |i, j| cells[i * n + j])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    /// Explicit counts for hand-built scenarios.
    struct Table {
        single: HashMap<&'static str, u64>,
        pair: HashMap<(&'static str, &'static str), u64>,
        n: f64,
    }

    impl FrequencyProvider for Table {
        fn frequency(&self, term: &str) -> Result<u64, NwdError> {
            Ok(self.single.get(term).copied().unwrap_or(0))
        }

        fn pair_frequency(&self, a: &str, b: &str) -> Result<u64, NwdError> {
            if a == b {
                return self.frequency(a);
            }
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            Ok(self
                .pair
                .iter()
                .find(|((x, y), _)| *x == a && *y == b)
                .map_or(0, |(_, &c)| c))
        }

        fn normalizer(&self) -> f64 {
            self.n
        }
    }

    // Count form evaluated with natural logs, independent of the base-2 path.
    fn frequency_form_ln(fx: u64, fy: u64, fxy: u64, n: f64) -> f64 {
        let (lx, ly, lxy) = ((fx as f64).ln(), (fy as f64).ln(), (fxy as f64).ln());
        (lx.max(ly) - lxy) / (n.ln() - lx.min(ly))
    }

    #[test]
    fn hand_value_half() {
        assert_eq!(nwd_from_counts(8, 4, 2, 64.0).unwrap(), NwdValue::Finite(0.5));
    }

    #[test]
    fn equal_counts_give_zero() {
        for k in [1u64, 3, 1000] {
            assert_eq!(
                nwd_from_counts(k, k, k, 5000.0).unwrap(),
                NwdValue::Finite(0.0)
            );
        }
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(nwd_from_counts(5, 0, 0, 64.0).unwrap(), NwdValue::Infinite);
        assert_eq!(nwd_from_counts(0, 5, 0, 64.0).unwrap(), NwdValue::Infinite);
        assert_eq!(nwd_from_counts(5, 7, 0, 64.0).unwrap(), NwdValue::Infinite);
        assert_eq!(nwd_from_counts(0, 0, 0, 64.0).unwrap(), NwdValue::Undefined);
    }

    #[test]
    fn normalizer_must_exceed_counts() {
        assert!(matches!(
            nwd_from_counts(64, 4, 2, 64.0),
            Err(NwdError::InvalidNormalizer { .. })
        ));
    }

    #[test]
    fn code_length_values() {
        assert_eq!(code_length_from_count(32, 64.0), Some(1.0));
        assert_eq!(code_length_from_count(8, 64.0), Some(3.0));
        assert_eq!(code_length_from_count(0, 64.0), None);
        let t = Table {
            single: HashMap::from([("x", 8)]),
            pair: HashMap::new(),
            n: 64.0,
        };
        assert_eq!(code_length("x", &t).unwrap(), 3.0);
        assert_eq!(pair_code_length("x", "x", &t).unwrap(), 3.0);
        assert!(matches!(
            code_length("missing", &t),
            Err(NwdError::NoCodeLength { .. })
        ));
    }

    #[test]
    fn code_length_decreases_with_frequency() {
        let lengths: Vec<f64> = (1..100).map(|f| code_length_from_count(f, 100.0).unwrap()).collect();
        assert!(lengths.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn compression_form_values() {
        assert_eq!(nwd_from_codelengths(3.0, 4.0, 5.0), 0.5);
        assert_eq!(nwd_from_codelengths(3.0, 4.0, 3.0), 0.0);
        assert_eq!(nwd_from_codelengths(0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn forms_agree_on_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let n: u64 = rng.random_range(3..1_000_000_000);
            let hi = rng.random_range(1..n);
            let lo = rng.random_range(1..=hi);
            let both = rng.random_range(1..=lo);
            let (fx, fy) = if rng.random() { (hi, lo) } else { (lo, hi) };
            let n = n as f64;
            let NwdValue::Finite(direct) = nwd_from_counts(fx, fy, both, n).unwrap() else {
                panic!("expected finite");
            };
            let g = |f| code_length_from_count(f, n).unwrap();
            let via_codes = nwd_from_codelengths(g(fx), g(fy), g(both));
            assert!((direct - via_codes).abs() <= 1e-12, "{direct} vs {via_codes}");
            let ln = frequency_form_ln(fx, fy, both, n);
            assert!((direct - ln).abs() <= 1e-12, "{direct} vs {ln}");
        }
    }

    #[test]
    fn provider_path_and_symmetry() {
        let t = Table {
            single: HashMap::from([("x", 8), ("y", 4), ("z", 3)]),
            pair: HashMap::from([(("x", "y"), 2)]),
            n: 64.0,
        };
        assert_eq!(nwd("x", "y", &t).unwrap(), NwdValue::Finite(0.5));
        assert_eq!(nwd("y", "x", &t).unwrap(), NwdValue::Finite(0.5));
        assert_eq!(nwd("x", "z", &t).unwrap(), NwdValue::Infinite);
        assert_eq!(nwd("x", "x", &t).unwrap(), NwdValue::Finite(0.0));
        assert_eq!(nwd("p", "q", &t).unwrap(), NwdValue::Undefined);
    }

    #[test]
    fn matrix_keeps_infinite_and_rejects_undefined() {
        let t = Table {
            single: HashMap::from([("x", 8), ("y", 4), ("z", 3)]),
            pair: HashMap::from([(("x", "y"), 2), (("y", "z"), 1)]),
            n: 64.0,
        };
        let terms: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
        let m = nwd_matrix(&terms, &t).unwrap();
        assert_eq!(m.get(0, 1), 0.5);
        assert!(m.get(0, 2).is_infinite());
        for i in 0..3 {
            assert_eq!(m.get(i, i), 0.0);
        }
        let with_absent: Vec<String> = ["x", "nothing"].map(String::from).to_vec();
        let err = nwd_matrix(&with_absent, &t).unwrap_err();
        assert!(
            matches!(&err, NwdError::Undefined { a, b } if a == "nothing" && b == "nothing"),
            "{err}"
        );
    }

    #[test]
    fn centaur_triple_breaks_triangle() {
        let t = Table {
            single: HashMap::from([("man", 1000), ("centaur", 100), ("horse", 1000)]),
            pair: HashMap::from([
                (("centaur", "man"), 90),
                (("centaur", "horse"), 90),
                (("horse", "man"), 1),
            ]),
            n: 1_000_000.0,
        };
        let d = |a, b| match nwd(a, b, &t).unwrap() {
            NwdValue::Finite(v) => v,
            other => panic!("{other:?}"),
        };
        let (mc, ch, mh) = (d("man", "centaur"), d("centaur", "horse"), d("man", "horse"));
        assert!(mh > mc + ch, "{mh} <= {mc} + {ch}");
    }

    #[test]
    fn scaled_normalizer_changes_values_not_tags() {
        let t = Table {
            single: HashMap::from([("x", 8), ("y", 4), ("z", 3)]),
            pair: HashMap::from([(("x", "y"), 2)]),
            n: 64.0,
        };
        let doubled = ScaledNormalizer::new(&t, 2.0);
        let a = nwd("x", "y", &t).unwrap();
        let b = nwd("x", "y", &doubled).unwrap();
        assert!(a.is_finite() && b.is_finite() && a != b);
        assert_eq!(nwd("x", "z", &doubled).unwrap(), NwdValue::Infinite);
    }

    fn tag(v: NwdValue) -> u8 {
        match v {
            NwdValue::Finite(_) => 0,
            NwdValue::Infinite => 1,
            NwdValue::Undefined => 2,
        }
    }

    proptest! {
        #[test]
        fn symmetric_and_total(fx in 0u64..500, fy in 0u64..500, frac in 0.0f64..=1.0) {
            let fxy = (fx.min(fy) as f64 * frac).floor() as u64;
            let n = 1000.0;
            let a = nwd_from_counts(fx, fy, fxy, n).unwrap();
            let b = nwd_from_counts(fy, fx, fxy, n).unwrap();
            prop_assert_eq!(tag(a), tag(b));
            prop_assert_eq!(a, b);
            if let NwdValue::Finite(v) = a {
                prop_assert!(v >= 0.0);
            }
        }
    }
}
